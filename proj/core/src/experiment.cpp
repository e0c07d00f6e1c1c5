#include "yieldpaint/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "yieldpaint/config.hpp"
#include "yieldpaint/csv_io.hpp"
#include "yieldpaint/rng.hpp"
#include "yieldpaint/svg.hpp"
#include "yieldpaint/tps.hpp"

namespace yieldpaint {

namespace {

namespace fs = std::filesystem;

CorruptionSpec masking_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols) {
    CorruptionSpec spec;
    const std::string kind = j.value("kind", "uniform");
    if (kind == "uniform") {
        spec.kind = UniformMasking{j.value("nu", 0.75)};
    } else if (kind == "block") {
        BlockMasking block;
        block.keep_rows = j.value("keep_rows", (rows + 1) / 2);
        block.keep_cols = j.value("keep_cols", (cols + 1) / 2);
        block.nu_inside = j.value("nu_inside", 0.75);
        spec.kind = block;
    } else {
        throw std::runtime_error("config: unknown masking kind '" + kind + "'");
    }
    return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.raw = j;
    cfg.seed = j.value("seed", 0ULL);
    cfg.out_dir = j.value("out_dir", "out");

    if (j.contains("data")) {
        const auto& data = j["data"];
        cfg.csv_path = data.value("csv", "");
        cfg.synthetic_n = data.value("n", 500ULL);
    }
    if (j.contains("synthetic")) {
        const auto& s = j["synthetic"];
        auto range = [&](const char* key, SyntheticConfig::Range fallback) {
            if (!s.contains(key)) return fallback;
            return SyntheticConfig::Range{s[key][0].get<double>(), s[key][1].get<double>()};
        };
        cfg.synthetic = SyntheticConfig::defaults();
        cfg.synthetic.level = range("level", cfg.synthetic.level);
        cfg.synthetic.slope = range("slope", cfg.synthetic.slope);
        cfg.synthetic.curvature = range("curvature", cfg.synthetic.curvature);
        cfg.synthetic.tau = range("tau", cfg.synthetic.tau);
        cfg.synthetic.spread_scale = range("spread_scale", cfg.synthetic.spread_scale);
        cfg.synthetic.noise_scale = s.value("noise_scale", cfg.synthetic.noise_scale);
        cfg.synthetic.backfill_long_tenors = s.value("backfill_long_tenors", false);
        if (s.contains("spread_schedule"))
            cfg.synthetic.spread_schedule = s["spread_schedule"].get<std::vector<double>>();
    } else {
        cfg.synthetic = SyntheticConfig::defaults();
    }

    const std::size_t rows = default_rating_grid().size();
    const std::size_t cols = default_tenor_grid().size();
    if (j.contains("masking")) {
        for (const auto& [name, spec] : j["masking"].items())
            cfg.maskings.push_back({name, masking_from_json(spec, rows, cols)});
        std::sort(cfg.maskings.begin(), cfg.maskings.end(),
                  [](const auto& a, const auto& b) { return a.name < b.name; });
    } else {
        cfg.maskings.push_back({"uniform", CorruptionSpec{UniformMasking{0.75}, 0}});
        BlockMasking block{(rows + 1) / 2, (cols + 1) / 2, 0.75};
        cfg.maskings.push_back({"block", CorruptionSpec{block, 0}});
        std::sort(cfg.maskings.begin(), cfg.maskings.end(),
                  [](const auto& a, const auto& b) { return a.name < b.name; });
    }

    cfg.methods = j.value("methods", std::vector<std::string>{"tv", "tps", "fcnn", "cnn",
                                                              "cnn_pe"});
    if (cfg.methods.empty()) throw std::runtime_error("config: no methods configured");
    if (cfg.maskings.empty()) throw std::runtime_error("config: no masking specs configured");

    if (j.contains("tv")) {
        const auto& t = j["tv"];
        cfg.tv.lambda = t.value("lambda", cfg.tv.lambda);
        cfg.tv.rho = t.value("rho", cfg.tv.rho);
        cfg.tv.tol = t.value("tol", cfg.tv.tol);
        cfg.tv.max_iters = t.value("max_iters", cfg.tv.max_iters);
        cfg.tv.variant = t.value("variant", std::string("anisotropic")) == "isotropic"
                             ? TvVariant::Isotropic
                             : TvVariant::Anisotropic;
    }
    if (j.contains("tps")) {
        const auto& t = j["tps"];
        if (t.contains("lambda_grid"))
            cfg.tps_lambda_grid = t["lambda_grid"].get<std::vector<double>>();
        cfg.tps_folds = t.value("folds", cfg.tps_folds);
    }
    if (j.contains("dae")) {
        const auto& d = j["dae"];
        cfg.dae.lr = d.value("lr", cfg.dae.lr);
        cfg.dae.decay = d.value("decay", cfg.dae.decay);
        cfg.dae.batch_size = d.value("batch_size", cfg.dae.batch_size);
        cfg.dae.epochs = d.value("epochs", cfg.dae.epochs);
        cfg.dae.replication = d.value("replication", cfg.dae.replication);
        cfg.dae.holdout = d.value("holdout", cfg.dae.holdout);
        cfg.dae.patience = d.value("patience", cfg.dae.patience);
        if (d.contains("hidden_width"))
            cfg.fcnn_arch.hidden_width = d["hidden_width"].get<std::size_t>();
    }
    if (j.contains("report")) {
        cfg.eval_replication = j["report"].value("replication", cfg.eval_replication);
    }

    if (const char* env_seed = std::getenv("YIELDPAINT_SEED"))
        cfg.seed = std::strtoull(env_seed, nullptr, 10);
    return cfg;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t h = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    return h;
}

std::string hash_pairs(const std::vector<std::pair<MaskedSurface, YieldSurface>>& pairs) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](const void* p, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [masked, truth] : pairs) {
        feed(masked.values.data(), sizeof(double) * masked.values.size());
        for (Eigen::Index i = 0; i < masked.observed.size(); ++i) {
            const unsigned char b = masked.observed.data()[i] ? 1 : 0;
            feed(&b, 1);
        }
        feed(truth.values.data(), sizeof(double) * truth.values.size());
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// median of the per-pair CV-selected lambdas on a few masked train surfaces
double select_tps_lambda(const SurfaceDataset& train_decimal, const NamedMasking& masking,
                         const ExperimentConfig& cfg) {
    const std::size_t n_val = std::min<std::size_t>(3, train_decimal.surfaces.size());
    std::vector<double> lambdas;
    Rng rng(mix_seed(cfg.seed, 0x7f5));
    for (std::size_t i = 0; i < n_val; ++i) {
        CorruptionSpec spec = masking.spec;
        spec.seed = rng.next_u64();
        MaskedSurface masked = corrupt(train_decimal.surfaces[i], spec);
        try {
            lambdas.push_back(
                tps_cross_validate(masked, cfg.tps_lambda_grid, cfg.tps_folds, rng.next_u64()));
        } catch (const std::invalid_argument&) {
            // too few observed points for the folds; skip this pair
        }
    }
    if (lambdas.empty()) return cfg.tps_lambda_grid.front();
    std::sort(lambdas.begin(), lambdas.end());
    return lambdas[lambdas.size() / 2];
}

}  // namespace

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
    out << "method,masking,mae_bps,mae_pct,rmse_bps,rmse_pct,mono_violation_pct,n_surfaces,"
           "n_cells\n";
    for (const auto& row : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f,%.2f,%.2f,%.2f", row.metrics.mae_bps,
                      row.metrics.mae_pct, row.metrics.rmse_bps, row.metrics.rmse_pct,
                      row.metrics.mono_violation_pct);
        out << row.method << ',' << row.masking << ',' << buf << ',' << row.metrics.n_surfaces
            << ',' << row.metrics.n_cells << '\n';
    }
}

RunManifest run_experiment(const ExperimentConfig& config) {
    fs::create_directories(config.out_dir);
    fs::create_directories(config.out_dir + "/plots");
    fs::create_directories(config.out_dir + "/checkpoints");

    RunManifest manifest;
    manifest.seed = config.seed;
    manifest.config_hash = config_hash(config.raw);
    manifest.method_seconds = nlohmann::json::object();

    // data, in decimal units
    SurfaceDataset dataset;
    if (!config.csv_path.empty()) {
        dataset = load_csv(config.csv_path);
    } else {
        SyntheticConfig syn = config.synthetic;
        if (syn.seed == 0) syn.seed = mix_seed(config.seed, 0xda7a);
        dataset = generate_synthetic(syn, config.synthetic_n);
    }
    const SurfaceDataset scaled = scale_to_unit(dataset);

    // holdout split; matches the split build_dataset derives from the seed
    const std::size_t n = dataset.surfaces.size();
    const auto n_test = static_cast<std::size_t>(std::llround(config.dae.holdout * n));
    if (n_test == 0 || n_test >= n)
        throw std::runtime_error("run_experiment: dataset too small for the holdout fraction");
    Rng split_rng(config.seed);
    auto holdout = split_rng.sample_without_replacement(n, n_test);
    std::sort(holdout.begin(), holdout.end());
    std::vector<bool> is_test(n, false);
    for (auto idx : holdout) is_test[idx] = true;

    SurfaceDataset test_decimal{dataset.ratings, dataset.tenors, {}, 1.0};
    SurfaceDataset train_decimal{dataset.ratings, dataset.tenors, {}, 1.0};
    for (std::size_t i = 0; i < n; ++i)
        (is_test[i] ? test_decimal : train_decimal).surfaces.push_back(dataset.surfaces[i]);

    // identical masked test pairs for every method, per masking spec
    std::vector<std::vector<std::pair<MaskedSurface, YieldSurface>>> test_pairs;
    std::string pairs_hash_input;
    for (std::size_t m = 0; m < config.maskings.size(); ++m) {
        CorruptionSpec spec = config.maskings[m].spec;
        spec.seed = mix_seed(config.seed, 0xe7a1 + m);
        test_pairs.push_back(replicate_and_corrupt(test_decimal, spec, config.eval_replication));
        pairs_hash_input += hash_pairs(test_pairs.back());
    }
    manifest.test_pairs_hash = pairs_hash_input;

    for (const std::string& method : config.methods) {
        const auto t0 = std::chrono::steady_clock::now();
        const bool is_dae = method == "fcnn" || method == "cnn" || method == "cnn_pe";

        for (std::size_t m = 0; m < config.maskings.size(); ++m) {
            const auto& masking = config.maskings[m];
            std::vector<YieldSurface> truths, recons;
            truths.reserve(test_pairs[m].size());
            recons.reserve(test_pairs[m].size());

            DaeModel model;
            double tps_lambda = 0.0;
            if (is_dae) {
                // DAE training corrupts with the masking under evaluation
                SurfaceDataset scaled_for_masking = scaled;
                TrainConfig tc = config.dae;
                tc.corruption = masking.spec;
                tc.corruption.seed = mix_seed(config.seed, 0x5eed + m);
                tc.seed = config.seed;
                const DaeArchitecture& arch = method == "fcnn"  ? config.fcnn_arch
                                              : method == "cnn" ? config.cnn_arch
                                                                : config.cnn_pe_arch;
                try {
                    model = train(scaled_for_masking, arch, tc);
                } catch (const std::exception& e) {
                    throw std::runtime_error("method " + method + ", masking " + masking.name +
                                             ": " + e.what());
                }
                const std::string ckpt =
                    config.out_dir + "/checkpoints/" + method + "_" + masking.name + ".json";
                save_dae_model(model, ckpt);
                manifest.artifacts.push_back(ckpt);

                std::ofstream log(config.out_dir + "/checkpoints/" + method + "_" +
                                  masking.name + "_train_log.csv");
                log << "epoch,train_mse,val_mse\n";
                for (const auto& row : model.log)
                    log << row.epoch << ',' << row.train_mse << ',' << row.val_mse << '\n';
            } else if (method == "tps") {
                tps_lambda = select_tps_lambda(train_decimal, masking, config);
            }

            for (std::size_t p = 0; p < test_pairs[m].size(); ++p) {
                const auto& [masked, truth] = test_pairs[m][p];
                try {
                    if (method == "tv") {
                        TvResult r = tv_inpaint(masked, config.tv);
                        recons.emplace_back("", r.surface.cwiseMax(0.0));
                    } else if (method == "tps") {
                        recons.push_back(tps_inpaint(masked, tps_lambda));
                    } else if (is_dae) {
                        recons.push_back(reconstruct(model, masked));
                    } else {
                        throw std::runtime_error("unknown method '" + method + "'");
                    }
                } catch (const std::exception& e) {
                    throw std::runtime_error("method " + method + ", masking " + masking.name +
                                             ", test pair " + std::to_string(p) + ": " +
                                             e.what());
                }
                truths.push_back(truth);
            }

            ReportRow row{method, masking.name, error_metrics(truths, recons)};
            manifest.rows.push_back(std::move(row));

            const std::string plot = config.out_dir + "/plots/" + method + "_" + masking.name +
                                     ".svg";
            plot_reconstruction(truths.front(), test_pairs[m].front().first, recons.front(),
                                dataset.tenors, plot);
            manifest.artifacts.push_back(plot);
        }

        const auto t1 = std::chrono::steady_clock::now();
        manifest.method_seconds[method] =
            std::chrono::duration<double>(t1 - t0).count();
    }

    std::sort(manifest.rows.begin(), manifest.rows.end(), [](const auto& a, const auto& b) {
        return a.method != b.method ? a.method < b.method : a.masking < b.masking;
    });

    const std::string report = config.out_dir + "/report.csv";
    write_report_csv(manifest.rows, report);
    manifest.artifacts.push_back(report);

    nlohmann::json mj = {{"config_hash", manifest.config_hash},
                         {"seed", manifest.seed},
                         {"test_pairs_hash", manifest.test_pairs_hash},
                         {"method_seconds", manifest.method_seconds},
                         {"artifacts", manifest.artifacts}};
    std::ofstream mf(config.out_dir + "/manifest.json");
    mf << mj.dump(2) << '\n';
    return manifest;
}

}  // namespace yieldpaint
