#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "yieldpaint/dae.hpp"
#include "yieldpaint/masking.hpp"
#include "yieldpaint/metrics.hpp"
#include "yieldpaint/surface.hpp"
#include "yieldpaint/synthetic.hpp"
#include "yieldpaint/tv.hpp"

namespace yieldpaint {

struct NamedMasking {
    std::string name;  // "uniform", "block", ...
    CorruptionSpec spec;
};

struct ExperimentConfig {
    // data source: CSV path, or the synthetic generator when empty
    std::string csv_path;
    SyntheticConfig synthetic;
    std::size_t synthetic_n = 500;

    std::vector<NamedMasking> maskings;
    std::vector<std::string> methods;  // tv, tps, fcnn, cnn, cnn_pe

    TvConfig tv;
    std::vector<double> tps_lambda_grid{1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1};
    std::size_t tps_folds = 5;

    TrainConfig dae;  // shared by the three architectures
    DaeArchitecture fcnn_arch = DaeArchitecture::fcnn();
    DaeArchitecture cnn_arch = DaeArchitecture::cnn();
    DaeArchitecture cnn_pe_arch = DaeArchitecture::cnn_pe();

    std::size_t eval_replication = 10;  // corrupted replicas per test surface
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    nlohmann::json raw;  // config file contents, for hashing

    // Sections: [data], [masking], [tps], [tv], [dae], [report].
    // YIELDPAINT_SEED in the environment overrides the config seed.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ReportRow {
    std::string method;
    std::string masking;
    MetricsReport metrics;
};

struct RunManifest {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string test_pairs_hash;  // fairness: all methods see these bytes
    nlohmann::json method_seconds;
    std::vector<std::string> artifacts;
    std::vector<ReportRow> rows;
};

// Prepare data, train/fit every configured method, evaluate all of them on
// identical masked test pairs per masking spec, and write report.csv,
// manifest.json, plots/ and checkpoints/ under out_dir.
RunManifest run_experiment(const ExperimentConfig& config);

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& path);

}  // namespace yieldpaint
