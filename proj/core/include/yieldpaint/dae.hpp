#pragma once

#include <json.hpp>

#include "yieldpaint/adam.hpp"
#include "yieldpaint/masking.hpp"
#include "yieldpaint/network.hpp"
#include "yieldpaint/surface.hpp"

namespace yieldpaint {

enum class DaeKind { Fcnn, Cnn, CnnPe };

const char* dae_kind_name(DaeKind kind);
DaeKind dae_kind_from_name(const std::string& name);

// Fcnn: flattened surface -> one overcomplete hidden layer -> sigmoid output.
// Cnn: padded 16x16 single channel through conv/pool then conv/upsample.
// CnnPe: same conv stack on a 3-channel input (surface, rating ramp, tenor ramp).
struct DaeArchitecture {
    DaeKind kind = DaeKind::Fcnn;

    std::size_t hidden_width = 256;  // Fcnn; must exceed the flattened input

    std::vector<std::size_t> encoder_filters = {16, 8};  // each followed by a pool
    std::size_t bottleneck_filters = 8;
    std::vector<std::size_t> decoder_filters = {16};  // between the upsamples
    std::size_t padded_rows = 16, padded_cols = 16;

    static DaeArchitecture fcnn(std::size_t hidden_width = 256);
    static DaeArchitecture cnn();
    static DaeArchitecture cnn_pe();
};

struct TrainConfig {
    double lr = 1e-3;
    double decay = 1.0;  // multiplicative lr decay per epoch
    std::size_t batch_size = 32;
    std::size_t epochs = 200;
    CorruptionSpec corruption;
    std::size_t replication = 10;        // corrupted copies per surface
    double holdout = 0.10;               // test fraction, split by surface
    double validation_fraction = 0.10;   // carved from the train pairs
    std::size_t patience = 20;           // early stopping on validation MSE
    std::uint64_t seed = 0;
};

struct TrainLogRow {
    std::size_t epoch;
    double train_mse;
    double val_mse;
};

struct DaeModel {
    DaeArchitecture arch;
    Network net;
    double scale_factor = 1.0;  // of the training dataset
    std::size_t rows = 0, cols = 0;
    std::vector<TrainLogRow> log;
};

// Coordinate ramp channels: channel 1 runs 0..1 along ratings (constant in
// tenor), channel 2 along tenors; padding continues the edge value.
std::pair<Matrix, Matrix> position_embedding(std::size_t rows, std::size_t cols,
                                             std::size_t padded_rows,
                                             std::size_t padded_cols);

// One formatted (input, clean target) pair; values must already be in scaled
// (unit-max) units.
struct DaePair {
    Tensor input;   // [1,D] or [1,C,H,W]
    Tensor target;  // [1,D] or [1,1,H,W]
    std::size_t surface_index;
};

struct DaeDataset {
    std::vector<DaePair> train, test;
    std::vector<std::size_t> holdout_indices;  // surfaces behind the test pairs
};

Tensor format_input(const Matrix& values, std::size_t rows, std::size_t cols,
                    const DaeArchitecture& arch);
Tensor format_target(const Matrix& values, const DaeArchitecture& arch);

// Random holdout by surface, then replication-many corrupted copies of each
// side. Requires the dataset to be scaled to unit max.
DaeDataset build_dataset(const SurfaceDataset& scaled, const TrainConfig& config,
                         const DaeArchitecture& arch);

Network build_dae_network(const DaeArchitecture& arch, std::size_t rows, std::size_t cols,
                          std::uint64_t seed);

// Adam mini-batch training of the reconstruction MSE against the clean
// targets. Aborts with diagnostics if the loss diverges to NaN.
DaeModel train(const SurfaceDataset& scaled, const DaeArchitecture& arch,
               const TrainConfig& config);

// Format, forward in infer mode, crop the padding, undo the scaling.
YieldSurface reconstruct(DaeModel& model, const MaskedSurface& masked);

struct SearchSpace {
    std::pair<double, double> lr_log10{-3.5, -2.0};
    std::pair<double, double> decay{0.97, 1.0};
    std::vector<std::size_t> batch_sizes{16, 32, 64};
    std::vector<std::size_t> hidden_widths{200, 256, 384};        // Fcnn
    std::vector<std::vector<std::size_t>> filter_stacks{{16, 8}, {32, 16}};  // Cnn*
    std::size_t trial_epochs = 30;
};

struct SearchResult {
    TrainConfig config;
    DaeArchitecture arch;
    nlohmann::json trials;  // full trial log
};

// Seeded random search; scores each sampled config by final validation MSE.
SearchResult hyperparameter_search(const SurfaceDataset& scaled, const DaeArchitecture& base,
                                   const SearchSpace& space, std::size_t budget,
                                   const TrainConfig& base_config);

void save_dae_model(DaeModel& model, const std::string& path);
DaeModel load_dae_model(const std::string& path);

}  // namespace yieldpaint
