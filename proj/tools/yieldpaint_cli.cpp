#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "yieldpaint/config.hpp"
#include "yieldpaint/csv_io.hpp"
#include "yieldpaint/experiment.hpp"
#include "yieldpaint/tps.hpp"
#include "yieldpaint/tv.hpp"

namespace fs = std::filesystem;
using namespace yieldpaint;

namespace {

nlohmann::json maybe_load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    return load_config(path);
}

ExperimentConfig experiment_config(const std::string& config_path, std::uint64_t seed,
                                   bool seed_set, const std::string& out_dir) {
    ExperimentConfig cfg = ExperimentConfig::from_json(maybe_load_config(config_path));
    if (seed_set && !std::getenv("YIELDPAINT_SEED")) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return cfg;
}

SurfaceDataset load_experiment_data(const ExperimentConfig& cfg) {
    if (!cfg.csv_path.empty()) return load_csv(cfg.csv_path);
    SyntheticConfig syn = cfg.synthetic;
    if (syn.seed == 0) syn.seed = cfg.seed + 0xda7a;
    return generate_synthetic(syn, cfg.synthetic_n);
}

void write_metrics_row(const ReportRow& row, const std::string& path) {
    std::vector<ReportRow> rows{row};
    write_report_csv(rows, path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"yield surface inpainting toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global --config/--out/--seed may follow the subcommand

    std::string config_path, out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "TOML or JSON config file")->capture_default_str();
    app.add_option("--out", out_path, "output path");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (YIELDPAINT_SEED overrides)");

    // generate: synthetic dataset -> CSV
    auto* generate = app.add_subcommand("generate", "generate a synthetic surface dataset");
    std::size_t gen_n = 500;
    generate->add_option("--n", gen_n, "number of surfaces")->capture_default_str();

    // mask: dataset CSV -> masked CSVs, one per date
    auto* mask = app.add_subcommand("mask", "corrupt a dataset and write masked CSVs");
    std::string mask_in, mask_kind = "uniform";
    double mask_nu = 0.75, mask_nu_inside = 0.75;
    std::size_t keep_rows = 7, keep_cols = 8;
    mask->add_option("--in", mask_in, "input dataset CSV")->required();
    mask->add_option("--kind", mask_kind, "uniform|block")->capture_default_str();
    mask->add_option("--nu", mask_nu, "masked fraction (uniform)")->capture_default_str();
    mask->add_option("--nu-inside", mask_nu_inside, "masked fraction inside the kept block")
        ->capture_default_str();
    mask->add_option("--keep-rows", keep_rows, "kept block rows")->capture_default_str();
    mask->add_option("--keep-cols", keep_cols, "kept block cols")->capture_default_str();

    // train: one DAE architecture -> checkpoint
    auto* train_cmd = app.add_subcommand("train", "train a DAE on the configured dataset");
    std::string train_arch = "fcnn";
    train_cmd->add_option("--arch", train_arch, "fcnn|cnn|cnn_pe")->capture_default_str();

    // evaluate: checkpoint + masking -> one metrics row
    auto* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint on masked test data");
    std::string eval_checkpoint, eval_masking = "uniform";
    evaluate->add_option("--checkpoint", eval_checkpoint, "model checkpoint (.json)")->required();
    evaluate->add_option("--masking", eval_masking, "masking spec name from the config");

    // report: merge metric rows into report.csv
    auto* report = app.add_subcommand("report", "merge per-method metric CSVs into a report");
    std::vector<std::string> report_inputs;
    report->add_option("inputs", report_inputs, "metric CSV files")->required();

    app.add_subcommand("run", "end-to-end experiment: prepare, fit, evaluate, report");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        if (app.got_subcommand("generate")) {
            ExperimentConfig cfg = experiment_config(config_path, seed, seed_set, "");
            SyntheticConfig syn = cfg.synthetic;
            if (syn.seed == 0) syn.seed = cfg.seed + 0xda7a;
            SurfaceDataset dataset = generate_synthetic(syn, gen_n);
            const std::string path = out_path.empty() ? "synthetic.csv" : out_path;
            save_csv(dataset, path);
            std::cout << "wrote " << dataset.surfaces.size() << " surfaces to " << path << "\n";
        } else if (app.got_subcommand("mask")) {
            ExperimentConfig cfg = experiment_config(config_path, seed, seed_set, "");
            SurfaceDataset dataset = load_csv(mask_in);
            CorruptionSpec spec;
            if (mask_kind == "uniform") {
                spec.kind = UniformMasking{mask_nu};
            } else if (mask_kind == "block") {
                spec.kind = BlockMasking{keep_rows, keep_cols, mask_nu_inside};
            } else {
                std::cerr << "error: unknown masking kind '" << mask_kind << "'\n";
                return 2;
            }
            const std::string dir = out_path.empty() ? "masked" : out_path;
            fs::create_directories(dir);
            Rng rng(cfg.seed);
            for (const auto& surface : dataset.surfaces) {
                spec.seed = rng.next_u64();
                MaskedSurface masked = corrupt(surface, spec);
                save_masked_csv(masked, dataset.ratings, dataset.tenors, surface.date,
                                dir + "/" + surface.date + ".csv");
            }
            std::cout << "wrote " << dataset.surfaces.size() << " masked surfaces to " << dir
                      << "\n";
        } else if (app.got_subcommand("train")) {
            ExperimentConfig cfg = experiment_config(config_path, seed, seed_set, "");
            SurfaceDataset dataset = scale_to_unit(load_experiment_data(cfg));
            const DaeArchitecture& arch = train_arch == "fcnn"  ? cfg.fcnn_arch
                                          : train_arch == "cnn" ? cfg.cnn_arch
                                                                : cfg.cnn_pe_arch;
            TrainConfig tc = cfg.dae;
            tc.seed = cfg.seed;
            tc.corruption = cfg.maskings.front().spec;
            tc.corruption.seed = cfg.seed + 1;
            DaeModel model = train(dataset, arch, tc);
            const std::string path =
                out_path.empty() ? (train_arch + "_checkpoint.json") : out_path;
            save_dae_model(model, path);
            std::cout << "trained " << train_arch << " ("
                      << model.net.parameter_count() << " parameters), checkpoint at " << path
                      << "\n";
        } else if (app.got_subcommand("evaluate")) {
            if (!fs::exists(eval_checkpoint)) {
                std::cerr << "error: checkpoint not found: " << eval_checkpoint << "\n";
                return 2;
            }
            ExperimentConfig cfg = experiment_config(config_path, seed, seed_set, "");
            DaeModel model = load_dae_model(eval_checkpoint);
            SurfaceDataset dataset = load_experiment_data(cfg);

            const auto it = std::find_if(cfg.maskings.begin(), cfg.maskings.end(),
                                         [&](const auto& m) { return m.name == eval_masking; });
            if (it == cfg.maskings.end()) {
                std::cerr << "error: no masking spec named '" << eval_masking << "'\n";
                return 2;
            }
            CorruptionSpec spec = it->spec;
            spec.seed = cfg.seed + 0xe7a1;
            auto pairs = replicate_and_corrupt(dataset, spec, cfg.eval_replication);
            std::vector<YieldSurface> truths, recons;
            for (auto& [masked, truth] : pairs) {
                recons.push_back(reconstruct(model, masked));
                truths.push_back(truth);
            }
            ReportRow row{dae_kind_name(model.arch.kind), it->name,
                          error_metrics(truths, recons)};
            const std::string path = out_path.empty() ? "metrics.csv" : out_path;
            write_metrics_row(row, path);
            std::cout << "mae_bps=" << row.metrics.mae_bps << " rmse_bps=" << row.metrics.rmse_bps
                      << " mono_pct=" << row.metrics.mono_violation_pct << " -> " << path << "\n";
        } else if (app.got_subcommand("report")) {
            std::vector<ReportRow> rows;
            for (const auto& input : report_inputs) {
                std::ifstream in(input);
                if (!in) {
                    std::cerr << "error: cannot open " << input << "\n";
                    return 2;
                }
                std::string line;
                std::getline(in, line);  // header
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    ReportRow row;
                    std::stringstream ss(line);
                    std::string field;
                    std::getline(ss, row.method, ',');
                    std::getline(ss, row.masking, ',');
                    auto next = [&] {
                        std::getline(ss, field, ',');
                        return std::stod(field);
                    };
                    row.metrics.mae_bps = next();
                    row.metrics.mae_pct = next();
                    row.metrics.rmse_bps = next();
                    row.metrics.rmse_pct = next();
                    row.metrics.mono_violation_pct = next();
                    row.metrics.n_surfaces = static_cast<std::size_t>(next());
                    row.metrics.n_cells = static_cast<std::size_t>(next());
                    rows.push_back(std::move(row));
                }
            }
            std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                return a.method != b.method ? a.method < b.method : a.masking < b.masking;
            });
            const std::string path = out_path.empty() ? "report.csv" : out_path;
            write_report_csv(rows, path);
            std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
        } else if (app.got_subcommand("run")) {
            ExperimentConfig cfg = experiment_config(config_path, seed, seed_set, out_path);
            RunManifest manifest = run_experiment(cfg);
            std::cout << "report: " << cfg.out_dir << "/report.csv ("
                      << manifest.rows.size() << " rows, config " << manifest.config_hash
                      << ")\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
