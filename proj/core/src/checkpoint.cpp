#include "yieldpaint/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace yieldpaint {

namespace {

std::string bin_path_for(const std::string& path) {
    const auto dot = path.rfind('.');
    const auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".bin";
    return path.substr(0, dot) + ".bin";
}

// every parameter and stat buffer of a layer, in declaration order
std::vector<std::vector<double>*> layer_buffers(Layer& layer) {
    std::vector<std::vector<double>*> buffers;
    for (auto& p : layer.params()) buffers.push_back(p.value);
    if (auto* bn = dynamic_cast<BatchNorm*>(&layer)) {
        buffers.push_back(&bn->running_mean);
        buffers.push_back(&bn->running_var);
    }
    return buffers;
}

void write_le(std::ofstream& out, const std::vector<double>& v) {
    static_assert(std::endian::native == std::endian::little,
                  "checkpoint writer assumes a little-endian host");
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

Network build_network(const nlohmann::json& architecture) {
    if (!architecture.is_array())
        throw std::invalid_argument("build_network: architecture must be an array");
    Network net;
    for (const auto& spec : architecture) {
        const std::string kind = spec.at("kind");
        if (kind == "dense") {
            net.add(std::make_unique<Dense>(spec.at("in").get<std::size_t>(),
                                            spec.at("out").get<std::size_t>()));
        } else if (kind == "conv2d") {
            net.add(std::make_unique<Conv2d>(spec.at("in").get<std::size_t>(),
                                             spec.at("out").get<std::size_t>()));
        } else if (kind == "max_pool") {
            net.add(std::make_unique<MaxPool2x2>());
        } else if (kind == "upsample") {
            net.add(std::make_unique<Upsample2x2>());
        } else if (kind == "batch_norm") {
            net.add(std::make_unique<BatchNorm>(spec.at("features").get<std::size_t>()));
        } else if (kind == "relu") {
            net.add(std::make_unique<Activation>(ActivationKind::ReLU));
        } else if (kind == "sigmoid") {
            net.add(std::make_unique<Activation>(ActivationKind::Sigmoid));
        } else {
            throw std::invalid_argument("build_network: unknown layer kind '" + kind + "'");
        }
    }
    return net;
}

nlohmann::json describe_network(const Network& net) {
    nlohmann::json arch = nlohmann::json::array();
    for (std::size_t i = 0; i < net.size(); ++i) {
        const Layer& layer = net.layer(i);
        nlohmann::json spec;
        if (const auto* d = dynamic_cast<const Dense*>(&layer)) {
            spec = {{"kind", "dense"}, {"in", d->in_dim()}, {"out", d->out_dim()}};
        } else if (const auto* c = dynamic_cast<const Conv2d*>(&layer)) {
            spec = {{"kind", "conv2d"}, {"in", c->in_channels()}, {"out", c->out_channels()}};
        } else if (dynamic_cast<const MaxPool2x2*>(&layer)) {
            spec = {{"kind", "max_pool"}};
        } else if (dynamic_cast<const Upsample2x2*>(&layer)) {
            spec = {{"kind", "upsample"}};
        } else if (const auto* bn = dynamic_cast<const BatchNorm*>(&layer)) {
            spec = {{"kind", "batch_norm"}, {"features", bn->features()}};
        } else if (const auto* a = dynamic_cast<const Activation*>(&layer)) {
            spec = {{"kind", a->kind() == ActivationKind::ReLU ? "relu" : "sigmoid"}};
        } else {
            throw std::logic_error("describe_network: unknown layer type");
        }
        arch.push_back(std::move(spec));
    }
    return arch;
}

void save_checkpoint(Network& net, const nlohmann::json& manifest_extra,
                     const std::string& path) {
    const std::string bin = bin_path_for(path);

    nlohmann::json manifest = manifest_extra;
    manifest["format"] = "yieldpaint-checkpoint-v1";
    manifest["architecture"] = describe_network(net);
    manifest["parameters_file"] = bin.substr(bin.rfind('/') + 1);

    std::size_t total = 0;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (auto* buf : layer_buffers(net.layer(i))) total += buf->size();
    manifest["parameter_count"] = total;

    std::ofstream mf(path);
    if (!mf) throw std::runtime_error("save_checkpoint: cannot open " + path);
    mf << manifest.dump(2) << '\n';

    std::ofstream bf(bin, std::ios::binary);
    if (!bf) throw std::runtime_error("save_checkpoint: cannot open " + bin);
    for (std::size_t i = 0; i < net.size(); ++i)
        for (auto* buf : layer_buffers(net.layer(i))) write_le(bf, *buf);
}

std::pair<Network, nlohmann::json> load_checkpoint(const std::string& path) {
    std::ifstream mf(path);
    if (!mf) throw std::runtime_error("load_checkpoint: cannot open " + path);
    nlohmann::json manifest = nlohmann::json::parse(mf);
    if (manifest.value("format", "") != "yieldpaint-checkpoint-v1")
        throw std::runtime_error("load_checkpoint: unrecognized format in " + path);

    Network net = build_network(manifest.at("architecture"));

    std::string bin = bin_path_for(path);
    std::ifstream bf(bin, std::ios::binary);
    if (!bf) throw std::runtime_error("load_checkpoint: cannot open " + bin);
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (auto* buf : layer_buffers(net.layer(i))) {
            bf.read(reinterpret_cast<char*>(buf->data()),
                    static_cast<std::streamsize>(buf->size() * sizeof(double)));
            if (!bf)
                throw std::runtime_error("load_checkpoint: truncated parameter file " + bin);
        }
    }
    return {std::move(net), std::move(manifest)};
}

}  // namespace yieldpaint
