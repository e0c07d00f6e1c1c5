#include "yieldpaint/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace yieldpaint {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// strips a trailing comment that is not inside a string
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

nlohmann::json parse_scalar(const std::string& raw, std::size_t lineno) {
    const std::string v = trim(raw);
    if (v.empty()) throw std::runtime_error("toml: empty value at line " + std::to_string(lineno));
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw std::runtime_error("toml: unterminated string at line " +
                                     std::to_string(lineno));
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    try {
        std::size_t used = 0;
        if (v.find_first_of(".eE") == std::string::npos ||
            (v.size() > 1 && (v[0] == '0' && v[1] == 'x'))) {
            const long long i = std::stoll(v, &used);
            if (used == v.size()) return i;
        }
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("toml: bad value '" + v + "' at line " + std::to_string(lineno));
}

nlohmann::json parse_value(const std::string& raw, std::size_t lineno) {
    const std::string v = trim(raw);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']')
            throw std::runtime_error("toml: unterminated array at line " +
                                     std::to_string(lineno));
        nlohmann::json arr = nlohmann::json::array();
        std::string body = v.substr(1, v.size() - 2);
        std::string item;
        bool in_string = false;
        int depth = 0;
        for (char c : body) {
            if (c == '"') in_string = !in_string;
            if (!in_string && c == '[') ++depth;
            if (!in_string && c == ']') --depth;
            if (c == ',' && !in_string && depth == 0) {
                if (!trim(item).empty()) arr.push_back(parse_value(item, lineno));
                item.clear();
            } else {
                item += c;
            }
        }
        if (!trim(item).empty()) arr.push_back(parse_value(item, lineno));
        return arr;
    }
    return parse_scalar(v, lineno);
}

nlohmann::json* descend(nlohmann::json& root, const std::string& dotted, std::size_t lineno) {
    nlohmann::json* node = &root;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) {
        part = trim(part);
        if (part.empty())
            throw std::runtime_error("toml: bad section name at line " + std::to_string(lineno));
        node = &(*node)[part];
    }
    return node;
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* section = &root;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("toml: bad section header at line " +
                                         std::to_string(lineno));
            section = descend(root, line.substr(1, line.size() - 2), lineno);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("toml: expected key = value at line " +
                                     std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("toml: empty key at line " + std::to_string(lineno));
        (*section)[key] = parse_value(line.substr(eq + 1), lineno);
    }
    return root;
}

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return nlohmann::json::parse(buffer.str());
    return parse_toml(buffer.str());
}

std::string config_hash(const nlohmann::json& config) {
    const std::string dump = config.dump();  // nlohmann keeps object keys sorted
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace yieldpaint
