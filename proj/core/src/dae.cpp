#include "yieldpaint/dae.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "yieldpaint/checkpoint.hpp"
#include "yieldpaint/rng.hpp"

namespace yieldpaint {

const char* dae_kind_name(DaeKind kind) {
    switch (kind) {
        case DaeKind::Fcnn: return "fcnn";
        case DaeKind::Cnn: return "cnn";
        case DaeKind::CnnPe: return "cnn_pe";
    }
    return "?";
}

DaeKind dae_kind_from_name(const std::string& name) {
    if (name == "fcnn") return DaeKind::Fcnn;
    if (name == "cnn") return DaeKind::Cnn;
    if (name == "cnn_pe") return DaeKind::CnnPe;
    throw std::invalid_argument("unknown DAE architecture '" + name + "'");
}

DaeArchitecture DaeArchitecture::fcnn(std::size_t hidden_width) {
    DaeArchitecture a;
    a.kind = DaeKind::Fcnn;
    a.hidden_width = hidden_width;
    return a;
}

DaeArchitecture DaeArchitecture::cnn() {
    DaeArchitecture a;
    a.kind = DaeKind::Cnn;
    return a;
}

DaeArchitecture DaeArchitecture::cnn_pe() {
    DaeArchitecture a;
    a.kind = DaeKind::CnnPe;
    return a;
}

std::pair<Matrix, Matrix> position_embedding(std::size_t rows, std::size_t cols,
                                             std::size_t padded_rows,
                                             std::size_t padded_cols) {
    if (padded_rows < rows || padded_cols < cols)
        throw std::invalid_argument("position_embedding: padded dims smaller than grid");
    Matrix rating(padded_rows, padded_cols), tenor(padded_rows, padded_cols);
    for (std::size_t i = 0; i < padded_rows; ++i) {
        const std::size_t si = std::min(i, rows - 1);
        const double rv = rows > 1 ? static_cast<double>(si) / (rows - 1) : 0.0;
        for (std::size_t j = 0; j < padded_cols; ++j) {
            const std::size_t sj = std::min(j, cols - 1);
            rating(i, j) = rv;
            tenor(i, j) = cols > 1 ? static_cast<double>(sj) / (cols - 1) : 0.0;
        }
    }
    return {std::move(rating), std::move(tenor)};
}

namespace {

std::size_t n_pools(const DaeArchitecture& arch) { return arch.encoder_filters.size(); }

void check_arch(const DaeArchitecture& arch, std::size_t rows, std::size_t cols) {
    if (arch.kind == DaeKind::Fcnn) {
        if (arch.hidden_width <= rows * cols)
            throw std::invalid_argument("DaeArchitecture: FCNN hidden layer must be overcomplete (" +
                                        std::to_string(arch.hidden_width) + " <= " +
                                        std::to_string(rows * cols) + ")");
        return;
    }
    if (arch.encoder_filters.empty())
        throw std::invalid_argument("DaeArchitecture: empty conv stack");
    if (arch.decoder_filters.size() + 1 != arch.encoder_filters.size())
        throw std::invalid_argument(
            "DaeArchitecture: decoder must have one conv fewer than the encoder");
    if (arch.padded_rows < rows || arch.padded_cols < cols)
        throw std::invalid_argument("DaeArchitecture: padded dims smaller than grid");
    const std::size_t factor = std::size_t{1} << n_pools(arch);
    if (arch.padded_rows % factor != 0 || arch.padded_cols % factor != 0)
        throw std::invalid_argument(
            "DaeArchitecture: padded dims must be divisible by 2^(pool count)");
}

void fill_matrix_channel(Tensor& t, std::size_t channel, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            t.at4(0, channel, i, j) = m(i, j);
}

}  // namespace

Tensor format_input(const Matrix& values, std::size_t rows, std::size_t cols,
                    const DaeArchitecture& arch) {
    if (arch.kind == DaeKind::Fcnn) {
        Tensor t({1, rows * cols});
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t.at2(0, i * cols + j) = values(i, j);
        return t;
    }
    const Matrix padded = pad_surface(values, arch.padded_rows, arch.padded_cols);
    if (arch.kind == DaeKind::Cnn) {
        Tensor t({1, 1, arch.padded_rows, arch.padded_cols});
        fill_matrix_channel(t, 0, padded);
        return t;
    }
    // channel order: surface, rating ramp, tenor ramp
    auto [rating, tenor] = position_embedding(rows, cols, arch.padded_rows, arch.padded_cols);
    Tensor t({1, 3, arch.padded_rows, arch.padded_cols});
    fill_matrix_channel(t, 0, padded);
    fill_matrix_channel(t, 1, rating);
    fill_matrix_channel(t, 2, tenor);
    return t;
}

Tensor format_target(const Matrix& values, const DaeArchitecture& arch) {
    if (arch.kind == DaeKind::Fcnn) {
        const auto rows = static_cast<std::size_t>(values.rows());
        const auto cols = static_cast<std::size_t>(values.cols());
        Tensor t({1, rows * cols});
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t.at2(0, i * cols + j) = values(i, j);
        return t;
    }
    const Matrix padded = pad_surface(values, arch.padded_rows, arch.padded_cols);
    Tensor t({1, 1, arch.padded_rows, arch.padded_cols});
    fill_matrix_channel(t, 0, padded);
    return t;
}

Network build_dae_network(const DaeArchitecture& arch, std::size_t rows, std::size_t cols,
                          std::uint64_t seed) {
    check_arch(arch, rows, cols);
    Rng rng(seed);
    Network net;

    if (arch.kind == DaeKind::Fcnn) {
        const std::size_t d = rows * cols;
        auto hidden = std::make_unique<Dense>(d, arch.hidden_width);
        init_he_uniform(hidden->weights, d, rng);
        net.add(std::move(hidden));
        net.add(std::make_unique<Activation>(ActivationKind::ReLU));
        net.add(std::make_unique<BatchNorm>(arch.hidden_width));
        auto out = std::make_unique<Dense>(arch.hidden_width, d);
        init_glorot_uniform(out->weights, arch.hidden_width, d, rng);
        net.add(std::move(out));
        net.add(std::make_unique<Activation>(ActivationKind::Sigmoid));
        return net;
    }

    std::size_t channels = arch.kind == DaeKind::CnnPe ? 3 : 1;
    for (std::size_t f : arch.encoder_filters) {
        auto conv = std::make_unique<Conv2d>(channels, f);
        init_he_uniform(conv->weights, channels * 9, rng);
        net.add(std::move(conv));
        net.add(std::make_unique<Activation>(ActivationKind::ReLU));
        net.add(std::make_unique<BatchNorm>(f));
        net.add(std::make_unique<MaxPool2x2>());
        channels = f;
    }
    auto bottleneck = std::make_unique<Conv2d>(channels, arch.bottleneck_filters);
    init_he_uniform(bottleneck->weights, channels * 9, rng);
    net.add(std::move(bottleneck));
    net.add(std::make_unique<Activation>(ActivationKind::ReLU));
    net.add(std::make_unique<BatchNorm>(arch.bottleneck_filters));
    channels = arch.bottleneck_filters;

    for (std::size_t i = 0; i < n_pools(arch); ++i) {
        net.add(std::make_unique<Upsample2x2>());
        if (i + 1 < n_pools(arch)) {
            const std::size_t f = arch.decoder_filters[i];
            auto conv = std::make_unique<Conv2d>(channels, f);
            init_he_uniform(conv->weights, channels * 9, rng);
            net.add(std::move(conv));
            net.add(std::make_unique<Activation>(ActivationKind::ReLU));
            net.add(std::make_unique<BatchNorm>(f));
            channels = f;
        } else {
            auto conv = std::make_unique<Conv2d>(channels, 1);
            init_glorot_uniform(conv->weights, channels * 9, 9, rng);
            net.add(std::move(conv));
            net.add(std::make_unique<Activation>(ActivationKind::Sigmoid));
        }
    }
    return net;
}

DaeDataset build_dataset(const SurfaceDataset& scaled, const TrainConfig& config,
                         const DaeArchitecture& arch) {
    if (scaled.surfaces.empty()) throw std::invalid_argument("build_dataset: empty dataset");
    double max_yield = 0.0;
    for (const auto& s : scaled.surfaces) max_yield = std::max(max_yield, s.values.maxCoeff());
    if (max_yield > 1.0 + 1e-9)
        throw std::invalid_argument("build_dataset: dataset must be scaled to unit max");
    if (config.holdout <= 0.0 || config.holdout >= 1.0)
        throw std::invalid_argument("build_dataset: holdout fraction outside (0,1)");
    if (config.replication < 1)
        throw std::invalid_argument("build_dataset: replication must be >= 1");

    const std::size_t n = scaled.surfaces.size();
    const auto n_test = static_cast<std::size_t>(std::llround(config.holdout * n));
    if (n_test == 0 || n_test >= n)
        throw std::invalid_argument("build_dataset: dataset too small for a non-empty holdout");

    const auto rows = static_cast<std::size_t>(scaled.surfaces[0].values.rows());
    const auto cols = static_cast<std::size_t>(scaled.surfaces[0].values.cols());
    check_arch(arch, rows, cols);

    Rng rng(config.seed);
    auto holdout = rng.sample_without_replacement(n, n_test);
    std::sort(holdout.begin(), holdout.end());
    std::vector<bool> is_test(n, false);
    for (auto idx : holdout) is_test[idx] = true;

    DaeDataset out;
    out.holdout_indices = holdout;
    for (std::size_t idx = 0; idx < n; ++idx) {
        for (std::size_t r = 0; r < config.replication; ++r) {
            CorruptionSpec spec = config.corruption;
            spec.seed = rng.next_u64();
            MaskedSurface masked = corrupt(scaled.surfaces[idx], spec);
            DaePair pair{format_input(masked.values, rows, cols, arch),
                         format_target(scaled.surfaces[idx].values, arch), idx};
            (is_test[idx] ? out.test : out.train).push_back(std::move(pair));
        }
    }
    return out;
}

namespace {

Tensor stack_pairs(const std::vector<DaePair>& pairs, const std::vector<std::size_t>& indices,
                   std::size_t begin, std::size_t end, bool inputs) {
    const Tensor& proto = inputs ? pairs[indices[begin]].input : pairs[indices[begin]].target;
    std::vector<std::size_t> shape = proto.shape;
    shape[0] = end - begin;
    Tensor batch(shape);
    const std::size_t stride = proto.numel();
    for (std::size_t k = begin; k < end; ++k) {
        const Tensor& src = inputs ? pairs[indices[k]].input : pairs[indices[k]].target;
        std::copy(src.data.begin(), src.data.end(),
                  batch.data.begin() + (k - begin) * stride);
    }
    return batch;
}

double evaluate_mse(Network& net, const std::vector<DaePair>& pairs,
                    const std::vector<std::size_t>& indices, std::size_t batch_size) {
    if (indices.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t begin = 0; begin < indices.size(); begin += batch_size) {
        const std::size_t end = std::min(begin + batch_size, indices.size());
        Tensor x = stack_pairs(pairs, indices, begin, end, true);
        Tensor t = stack_pairs(pairs, indices, begin, end, false);
        const auto [loss, grad] = mse_loss(net.forward(x, Mode::Infer), t);
        acc += loss * static_cast<double>(end - begin);
    }
    return acc / static_cast<double>(indices.size());
}

// snapshot/restore of every parameter and batch-norm statistic
std::vector<std::vector<double>> snapshot_weights(Network& net) {
    std::vector<std::vector<double>> snap;
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (auto& p : net.layer(i).params()) snap.push_back(*p.value);
        if (auto* bn = dynamic_cast<BatchNorm*>(&net.layer(i))) {
            snap.push_back(bn->running_mean);
            snap.push_back(bn->running_var);
        }
    }
    return snap;
}

void restore_weights(Network& net, const std::vector<std::vector<double>>& snap) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (auto& p : net.layer(i).params()) *p.value = snap[k++];
        if (auto* bn = dynamic_cast<BatchNorm*>(&net.layer(i))) {
            bn->running_mean = snap[k++];
            bn->running_var = snap[k++];
        }
    }
}

}  // namespace

DaeModel train(const SurfaceDataset& scaled, const DaeArchitecture& arch,
               const TrainConfig& config) {
    if (config.batch_size < 1 || config.epochs < 1)
        throw std::invalid_argument("train: batch_size and epochs must be >= 1");

    DaeDataset ds = build_dataset(scaled, config, arch);
    const auto rows = static_cast<std::size_t>(scaled.surfaces[0].values.rows());
    const auto cols = static_cast<std::size_t>(scaled.surfaces[0].values.cols());

    Rng rng(config.seed ^ 0x5eedbeefULL);
    std::vector<std::size_t> order(ds.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const auto n_val = std::min(
        ds.train.size() - 1,
        static_cast<std::size_t>(std::llround(config.validation_fraction * ds.train.size())));
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + n_val);
    std::vector<std::size_t> fit_idx(order.begin() + n_val, order.end());

    DaeModel model;
    model.arch = arch;
    model.net = build_dae_network(arch, rows, cols, config.seed);
    model.scale_factor = scaled.scale_factor;
    model.rows = rows;
    model.cols = cols;

    Adam optimizer(model.net, {config.lr, 0.9, 0.999, 1e-8, config.decay});

    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    std::vector<std::vector<double>> best_weights;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(fit_idx);
        double train_acc = 0.0;
        for (std::size_t begin = 0; begin < fit_idx.size(); begin += config.batch_size) {
            const std::size_t end = std::min(begin + config.batch_size, fit_idx.size());
            Tensor x = stack_pairs(ds.train, fit_idx, begin, end, true);
            Tensor t = stack_pairs(ds.train, fit_idx, begin, end, false);
            model.net.zero_grads();
            Tensor y = model.net.forward(x, Mode::Train);
            auto [loss, grad] = mse_loss(y, t);
            if (!std::isfinite(loss))
                throw std::runtime_error("train: loss diverged to NaN at epoch " +
                                         std::to_string(epoch) + " (lr " +
                                         std::to_string(optimizer.current_lr()) + ")");
            model.net.backward(grad);
            optimizer.step();
            train_acc += loss * static_cast<double>(end - begin);
        }
        optimizer.end_epoch();

        const double train_mse = train_acc / static_cast<double>(fit_idx.size());
        const double val_mse = val_idx.empty()
                                   ? train_mse
                                   : evaluate_mse(model.net, ds.train, val_idx, config.batch_size);
        model.log.push_back({epoch, train_mse, val_mse});

        if (val_mse < best_val - 1e-12) {
            best_val = val_mse;
            since_best = 0;
            best_weights = snapshot_weights(model.net);
        } else if (++since_best >= config.patience) {
            break;
        }
    }
    if (!best_weights.empty()) restore_weights(model.net, best_weights);
    return model;
}

YieldSurface reconstruct(DaeModel& model, const MaskedSurface& masked) {
    if (masked.rows() != model.rows || masked.cols() != model.cols)
        throw std::invalid_argument("reconstruct: grid dims do not match the model");
    const Matrix scaled = masked.values * model.scale_factor;
    Tensor x = format_input(scaled, model.rows, model.cols, model.arch);
    Tensor y = model.net.forward(x, Mode::Infer);

    Matrix out(model.rows, model.cols);
    if (model.arch.kind == DaeKind::Fcnn) {
        for (std::size_t i = 0; i < model.rows; ++i)
            for (std::size_t j = 0; j < model.cols; ++j)
                out(i, j) = y.at2(0, i * model.cols + j);
    } else {
        for (std::size_t i = 0; i < model.rows; ++i)
            for (std::size_t j = 0; j < model.cols; ++j) out(i, j) = y.at4(0, 0, i, j);
    }
    out /= model.scale_factor;
    return YieldSurface("", std::move(out));
}

SearchResult hyperparameter_search(const SurfaceDataset& scaled, const DaeArchitecture& base,
                                   const SearchSpace& space, std::size_t budget,
                                   const TrainConfig& base_config) {
    if (budget < 1) throw std::invalid_argument("hyperparameter_search: budget must be >= 1");
    if (space.batch_sizes.empty() ||
        (base.kind == DaeKind::Fcnn ? space.hidden_widths.empty()
                                    : space.filter_stacks.empty()))
        throw std::invalid_argument("hyperparameter_search: empty search space");

    Rng rng(base_config.seed ^ 0x7253a3ULL);
    SearchResult result;
    result.trials = nlohmann::json::array();
    double best_val = std::numeric_limits<double>::infinity();

    for (std::size_t trial = 0; trial < budget; ++trial) {
        TrainConfig cfg = base_config;
        cfg.lr = std::pow(10.0, rng.uniform(space.lr_log10.first, space.lr_log10.second));
        cfg.decay = rng.uniform(space.decay.first, space.decay.second);
        cfg.batch_size = space.batch_sizes[rng.below(space.batch_sizes.size())];
        cfg.epochs = space.trial_epochs;
        cfg.seed = base_config.seed + trial;

        DaeArchitecture arch = base;
        if (base.kind == DaeKind::Fcnn) {
            arch.hidden_width = space.hidden_widths[rng.below(space.hidden_widths.size())];
        } else {
            arch.encoder_filters = space.filter_stacks[rng.below(space.filter_stacks.size())];
            arch.decoder_filters.assign(arch.encoder_filters.begin(),
                                        arch.encoder_filters.end() - 1);
            std::reverse(arch.decoder_filters.begin(), arch.decoder_filters.end());
            arch.bottleneck_filters = arch.encoder_filters.back();
        }

        DaeModel model = train(scaled, arch, cfg);
        double val = std::numeric_limits<double>::infinity();
        for (const auto& row : model.log) val = std::min(val, row.val_mse);

        nlohmann::json entry = {{"trial", trial},
                                {"lr", cfg.lr},
                                {"decay", cfg.decay},
                                {"batch_size", cfg.batch_size},
                                {"val_mse", val}};
        if (base.kind == DaeKind::Fcnn)
            entry["hidden_width"] = arch.hidden_width;
        else
            entry["encoder_filters"] = arch.encoder_filters;
        result.trials.push_back(std::move(entry));

        if (val < best_val) {
            best_val = val;
            result.config = cfg;
            result.config.epochs = base_config.epochs;
            result.arch = arch;
        }
    }
    return result;
}

void save_dae_model(DaeModel& model, const std::string& path) {
    nlohmann::json extra = {
        {"model", "dae"},
        {"dae_kind", dae_kind_name(model.arch.kind)},
        {"hidden_width", model.arch.hidden_width},
        {"encoder_filters", model.arch.encoder_filters},
        {"decoder_filters", model.arch.decoder_filters},
        {"bottleneck_filters", model.arch.bottleneck_filters},
        {"padded_rows", model.arch.padded_rows},
        {"padded_cols", model.arch.padded_cols},
        {"scale_factor", model.scale_factor},
        {"rows", model.rows},
        {"cols", model.cols},
    };
    save_checkpoint(model.net, extra, path);
}

DaeModel load_dae_model(const std::string& path) {
    auto [net, manifest] = load_checkpoint(path);
    DaeModel model;
    model.arch.kind = dae_kind_from_name(manifest.at("dae_kind"));
    model.arch.hidden_width = manifest.at("hidden_width");
    model.arch.encoder_filters = manifest.at("encoder_filters").get<std::vector<std::size_t>>();
    model.arch.decoder_filters = manifest.at("decoder_filters").get<std::vector<std::size_t>>();
    model.arch.bottleneck_filters = manifest.at("bottleneck_filters");
    model.arch.padded_rows = manifest.at("padded_rows");
    model.arch.padded_cols = manifest.at("padded_cols");
    model.scale_factor = manifest.at("scale_factor");
    model.rows = manifest.at("rows");
    model.cols = manifest.at("cols");
    model.net = std::move(net);
    return model;
}

}  // namespace yieldpaint
