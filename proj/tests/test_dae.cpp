#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "yieldpaint/dae.hpp"
#include "yieldpaint/rng.hpp"
#include "yieldpaint/synthetic.hpp"

using namespace yieldpaint;

namespace {

SurfaceDataset scaled_synthetic(std::size_t n, std::uint64_t seed) {
    SyntheticConfig cfg = SyntheticConfig::defaults();
    cfg.seed = seed;
    return scale_to_unit(generate_synthetic(cfg, n));
}

TrainConfig quick_config(std::uint64_t seed) {
    TrainConfig tc;
    tc.seed = seed;
    tc.corruption = CorruptionSpec{UniformMasking{0.75}, 0};
    tc.replication = 2;
    tc.epochs = 4;
    tc.batch_size = 8;
    tc.patience = 50;
    return tc;
}

}  // namespace

TEST_CASE("position embedding ramps with the 97.5 sum oracle") {
    auto [rating, tenor] = position_embedding(13, 15, 16, 16);
    REQUIRE(rating.rows() == 16);
    REQUIRE(tenor.cols() == 16);

    // over the unpadded 13x15 area each channel sums to 97.5
    CHECK(rating.topLeftCorner(13, 15).sum() == doctest::Approx(97.5));
    CHECK(tenor.topLeftCorner(13, 15).sum() == doctest::Approx(97.5));

    CHECK(rating(0, 0) == 0.0);
    CHECK(rating(12, 7) == 1.0);
    CHECK(rating(6, 3) == doctest::Approx(6.0 / 12.0));
    CHECK(tenor(3, 14) == 1.0);
    CHECK(tenor(3, 7) == doctest::Approx(7.0 / 14.0));
    // padding continues the edge value
    CHECK(rating(15, 4) == 1.0);
    CHECK(tenor(4, 15) == 1.0);
    // each channel is constant along the other axis
    for (int j = 0; j < 16; ++j) CHECK(rating(5, j) == rating(5, 0));
    for (int i = 0; i < 16; ++i) CHECK(tenor(i, 5) == tenor(0, 5));

    CHECK_THROWS(position_embedding(13, 15, 12, 16));
}

TEST_CASE("input formatting per architecture") {
    Matrix m(13, 15);
    for (int i = 0; i < 13; ++i)
        for (int j = 0; j < 15; ++j) m(i, j) = 0.001 * (i * 15 + j);

    auto fc = format_input(m, 13, 15, DaeArchitecture::fcnn());
    CHECK(fc.shape == std::vector<std::size_t>{1, 195});
    CHECK(fc.at2(0, 2 * 15 + 3) == doctest::Approx(m(2, 3)));

    auto cnn = format_input(m, 13, 15, DaeArchitecture::cnn());
    CHECK(cnn.shape == std::vector<std::size_t>{1, 1, 16, 16});
    CHECK(cnn.at4(0, 0, 2, 3) == doctest::Approx(m(2, 3)));
    CHECK(cnn.at4(0, 0, 15, 15) == doctest::Approx(m(12, 14)));  // edge padding

    auto pe = format_input(m, 13, 15, DaeArchitecture::cnn_pe());
    CHECK(pe.shape == std::vector<std::size_t>{1, 3, 16, 16});
    CHECK(pe.at4(0, 0, 2, 3) == doctest::Approx(m(2, 3)));        // surface channel
    CHECK(pe.at4(0, 1, 6, 0) == doctest::Approx(6.0 / 12.0));     // rating ramp
    CHECK(pe.at4(0, 2, 0, 7) == doctest::Approx(7.0 / 14.0));     // tenor ramp

    auto target = format_target(m, DaeArchitecture::cnn_pe());
    CHECK(target.shape == std::vector<std::size_t>{1, 1, 16, 16});  // always one channel
}

TEST_CASE("architecture validation") {
    // FCNN must be overcomplete relative to the 195-cell grid
    CHECK_THROWS(build_dae_network(DaeArchitecture::fcnn(195), 13, 15, 1));
    CHECK_THROWS(build_dae_network(DaeArchitecture::fcnn(100), 13, 15, 1));
    CHECK_NOTHROW(build_dae_network(DaeArchitecture::fcnn(196), 13, 15, 1));

    DaeArchitecture bad = DaeArchitecture::cnn();
    bad.decoder_filters = {16, 8};  // must be one fewer than the encoder
    CHECK_THROWS(build_dae_network(bad, 13, 15, 1));

    DaeArchitecture odd = DaeArchitecture::cnn();
    odd.padded_rows = 18;  // not divisible by 2^2
    CHECK_THROWS(build_dae_network(odd, 13, 15, 1));
}

TEST_CASE("the convolutional nets use far fewer parameters than the fcnn") {
    Network fc = build_dae_network(DaeArchitecture::fcnn(), 13, 15, 1);
    Network cnn = build_dae_network(DaeArchitecture::cnn(), 13, 15, 1);
    Network pe = build_dae_network(DaeArchitecture::cnn_pe(), 13, 15, 1);
    // fcnn: 195*256 + 256 + bn(512) + 256*195 + 195
    CHECK(fc.parameter_count() == 195 * 256 + 256 + 512 + 256 * 195 + 195);
    CHECK(cnn.parameter_count() < fc.parameter_count() / 10);
    // the pe variant only adds the first conv's two extra input channels
    CHECK(pe.parameter_count() == cnn.parameter_count() + 2 * 9 * 16);
}

TEST_CASE("network shapes: each architecture maps its input to its target shape") {
    Rng rng(3);
    for (auto arch : {DaeArchitecture::fcnn(), DaeArchitecture::cnn(),
                      DaeArchitecture::cnn_pe()}) {
        Network net = build_dae_network(arch, 13, 15, 7);
        Matrix m = Matrix::Constant(13, 15, 0.4);
        Tensor x = format_input(m, 13, 15, arch);
        Tensor y = net.forward(x, Mode::Infer);
        CHECK(y.shape == format_target(m, arch).shape);
        // sigmoid output lives in (0, 1)
        for (double v : y.data) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("build_dataset splits 63 surfaces into 570 train and 60 test pairs") {
    auto ds = scaled_synthetic(63, 5);
    TrainConfig tc = quick_config(11);
    tc.replication = 10;
    auto built = build_dataset(ds, tc, DaeArchitecture::fcnn());
    CHECK(built.holdout_indices.size() == 6);  // round(0.10 * 63)
    CHECK(built.test.size() == 60);
    CHECK(built.train.size() == 570);

    // holdout isolation: no train pair comes from a holdout surface
    std::vector<bool> held(63, false);
    for (auto idx : built.holdout_indices) held[idx] = true;
    for (const auto& p : built.train) CHECK_FALSE(held[p.surface_index]);
    for (const auto& p : built.test) CHECK(held[p.surface_index]);
}

TEST_CASE("build_dataset pairs corrupted inputs with clean targets") {
    auto ds = scaled_synthetic(10, 7);
    TrainConfig tc = quick_config(13);
    auto built = build_dataset(ds, tc, DaeArchitecture::fcnn());
    REQUIRE(!built.train.empty());
    std::size_t masked_seen = 0;
    for (const auto& p : built.train) {
        const auto& clean = ds.surfaces[p.surface_index].values;
        for (int i = 0; i < 13; ++i)
            for (int j = 0; j < 15; ++j) {
                const double in = p.input.at2(0, i * 15 + j);
                const double tg = p.target.at2(0, i * 15 + j);
                CHECK(tg == doctest::Approx(clean(i, j)));  // target is the clean surface
                if (in == 0.0)
                    ++masked_seen;  // corrupted entries are zeroed
                else
                    CHECK(in == doctest::Approx(clean(i, j)));
            }
    }
    // nu = 0.75: three quarters of the input cells are zeroed
    CHECK(masked_seen == built.train.size() * 146);
}

TEST_CASE("build_dataset is deterministic and validates its inputs") {
    auto ds = scaled_synthetic(12, 9);
    TrainConfig tc = quick_config(17);
    auto a = build_dataset(ds, tc, DaeArchitecture::fcnn());
    auto b = build_dataset(ds, tc, DaeArchitecture::fcnn());
    CHECK(a.holdout_indices == b.holdout_indices);
    REQUIRE(a.train.size() == b.train.size());
    for (std::size_t i = 0; i < a.train.size(); ++i)
        CHECK(a.train[i].input.data == b.train[i].input.data);

    // unscaled (decimal) data must be rejected
    SyntheticConfig cfg = SyntheticConfig::defaults();
    cfg.seed = 9;
    auto unscaled = generate_synthetic(cfg, 12);
    CHECK_NOTHROW(build_dataset(ds, tc, DaeArchitecture::fcnn()));
    auto too_small = scaled_synthetic(3, 9);
    CHECK_THROWS(build_dataset(too_small, tc, DaeArchitecture::fcnn()));
    TrainConfig bad = tc;
    bad.replication = 0;
    CHECK_THROWS(build_dataset(ds, bad, DaeArchitecture::fcnn()));
    bad = tc;
    bad.holdout = 0.0;
    CHECK_THROWS(build_dataset(ds, bad, DaeArchitecture::fcnn()));
}

TEST_CASE("training lowers the reconstruction loss and is seed-deterministic") {
    auto ds = scaled_synthetic(12, 21);
    TrainConfig tc = quick_config(23);
    tc.epochs = 8;
    DaeModel model = train(ds, DaeArchitecture::fcnn(), tc);
    REQUIRE(model.log.size() >= 2);
    CHECK(model.log.back().train_mse < model.log.front().train_mse);

    DaeModel again = train(ds, DaeArchitecture::fcnn(), tc);
    REQUIRE(again.log.size() == model.log.size());
    for (std::size_t e = 0; e < model.log.size(); ++e)
        CHECK(model.log[e].train_mse == again.log[e].train_mse);
}

TEST_CASE("early stopping halts when validation stops improving") {
    auto ds = scaled_synthetic(12, 25);
    TrainConfig tc = quick_config(27);
    tc.lr = 0.0;  // no progress possible
    tc.epochs = 50;
    tc.patience = 3;
    DaeModel model = train(ds, DaeArchitecture::fcnn(), tc);
    CHECK(model.log.size() == 4);  // initial epoch + patience stalled ones
}

TEST_CASE("reconstruct undoes the scaling and matches the grid") {
    auto ds = scaled_synthetic(12, 29);
    TrainConfig tc = quick_config(31);
    DaeModel model = train(ds, DaeArchitecture::cnn(), tc);

    // decimal-unit masked input, decimal-unit output
    SyntheticConfig cfg = SyntheticConfig::defaults();
    cfg.seed = 33;
    auto decimal = generate_synthetic(cfg, 1);
    auto masked = corrupt(decimal.surfaces[0], CorruptionSpec{UniformMasking{0.75}, 3});
    YieldSurface recon = reconstruct(model, masked);
    CHECK(recon.values.rows() == 13);
    CHECK(recon.values.cols() == 15);
    CHECK(recon.values.minCoeff() >= 0.0);
    // sigmoid output in scaled units means < 1/scale_factor in decimal units
    CHECK(recon.values.maxCoeff() < 1.0 / model.scale_factor);

    Matrix wrong = Matrix::Constant(5, 5, 0.0);
    MaskArray obs = MaskArray::Constant(5, 5, true);
    CHECK_THROWS(reconstruct(model, MaskedSurface(wrong, obs)));
}

TEST_CASE("dae model save/load round-trip preserves reconstructions") {
    auto ds = scaled_synthetic(12, 35);
    TrainConfig tc = quick_config(37);
    DaeModel model = train(ds, DaeArchitecture::cnn_pe(), tc);

    const std::string path =
        (std::filesystem::temp_directory_path() / "yieldpaint_dae.json").string();
    save_dae_model(model, path);
    DaeModel loaded = load_dae_model(path);
    CHECK(loaded.arch.kind == DaeKind::CnnPe);
    CHECK(loaded.scale_factor == model.scale_factor);

    SyntheticConfig cfg = SyntheticConfig::defaults();
    cfg.seed = 39;
    auto decimal = generate_synthetic(cfg, 1);
    auto masked = corrupt(decimal.surfaces[0], CorruptionSpec{UniformMasking{0.75}, 5});
    CHECK(reconstruct(model, masked).values == reconstruct(loaded, masked).values);

    std::filesystem::remove(path);
    std::filesystem::remove(path.substr(0, path.size() - 5) + ".bin");
}

TEST_CASE("hyperparameter search samples inside the space and logs each trial") {
    auto ds = scaled_synthetic(12, 41);
    TrainConfig base = quick_config(43);
    SearchSpace space;
    space.trial_epochs = 2;
    space.batch_sizes = {8, 16};
    space.hidden_widths = {200, 256};

    auto result = hyperparameter_search(ds, DaeArchitecture::fcnn(), space, 3, base);
    CHECK(result.trials.size() == 3);
    CHECK(result.config.lr >= std::pow(10.0, space.lr_log10.first));
    CHECK(result.config.lr <= std::pow(10.0, space.lr_log10.second));
    CHECK(result.config.decay >= space.decay.first);
    CHECK(result.config.decay <= space.decay.second);
    CHECK((result.arch.hidden_width == 200 || result.arch.hidden_width == 256));
    CHECK(result.config.epochs == base.epochs);  // trial epochs do not leak out

    // the winner attains the minimum validation mse over the trial log
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : result.trials) best = std::min(best, t.at("val_mse").get<double>());
    bool found = false;
    for (const auto& t : result.trials)
        if (t.at("val_mse").get<double>() == best) found = true;
    CHECK(found);

    auto again = hyperparameter_search(ds, DaeArchitecture::fcnn(), space, 3, base);
    CHECK(result.trials == again.trials);

    CHECK_THROWS(hyperparameter_search(ds, DaeArchitecture::fcnn(), space, 0, base));
}

TEST_CASE("hyperparameter search adjusts conv stacks consistently") {
    auto ds = scaled_synthetic(12, 45);
    TrainConfig base = quick_config(47);
    SearchSpace space;
    space.trial_epochs = 2;
    space.filter_stacks = {{8, 4}, {16, 8}};
    auto result = hyperparameter_search(ds, DaeArchitecture::cnn(), space, 2, base);
    CHECK(result.arch.decoder_filters.size() + 1 == result.arch.encoder_filters.size());
    CHECK(result.arch.decoder_filters[0] == result.arch.encoder_filters[0]);
    CHECK(result.arch.bottleneck_filters == result.arch.encoder_filters.back());
}
