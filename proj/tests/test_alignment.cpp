#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mtp/alignment.hpp"
#include "mtp/synth.hpp"

#include <limits>
#include <random>
#include <sstream>

using namespace mtp;

namespace {

MotionSequence seq_1d(std::initializer_list<double> values, double rate = 120.0) {
    MotionSequence seq;
    seq.frame_rate = rate;
    seq.frames.resize(static_cast<Eigen::Index>(values.size()), 1);
    Eigen::Index t = 0;
    for (double v : values) seq.frames(t++, 0) = v;
    seq.labels = {"f0"};
    return seq;
}

// Oracle: minimum path cost by exhaustive recursion over all monotone
// paths with step set {(1,0),(0,1),(1,1)}. Exponential, lengths <= 6 only.
double brute_force_dtw(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       Eigen::Index i, Eigen::Index j) {
    const double d = (x.row(i) - y.row(j)).squaredNorm();
    if (i == 0 && j == 0) return d;
    double best = std::numeric_limits<double>::infinity();
    if (i > 0 && j > 0) best = std::min(best, brute_force_dtw(x, y, i - 1, j - 1));
    if (i > 0) best = std::min(best, brute_force_dtw(x, y, i - 1, j));
    if (j > 0) best = std::min(best, brute_force_dtw(x, y, i, j - 1));
    return d + best;
}

double brute_force_dtw(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return brute_force_dtw(x, y, x.rows() - 1, y.rows() - 1);
}

}  // namespace

TEST_CASE("identical sequences give the diagonal path at zero cost") {
    GaussianRng rng(3);
    MotionSequence x;
    x.frame_rate = 120.0;
    x.frames.resize(30, 2);
    for (Eigen::Index t = 0; t < 30; ++t)
        for (Eigen::Index j = 0; j < 2; ++j) x.frames(t, j) = rng.next();
    x.labels = {"a", "b"};

    const auto path = dtw_align(x, x);
    path.validate();
    CHECK(path.pairs.size() == 30);
    for (Eigen::Index t = 0; t < 30; ++t)
        CHECK(path.pairs[static_cast<std::size_t>(t)] == std::pair<Eigen::Index, Eigen::Index>{t, t});
    CHECK(path_cost(path, x.frames, x.frames) == 0.0);
}

TEST_CASE("known optimal path for a small pair") {
    const auto x = seq_1d({0.0, 0.0, 1.0});
    const auto y = seq_1d({0.0, 1.0, 1.0});
    const auto path = dtw_align(x, y);
    path.validate();
    const std::vector<std::pair<Eigen::Index, Eigen::Index>> expected{
        {0, 0}, {1, 0}, {2, 1}, {2, 2}};
    CHECK(path.pairs == expected);
    CHECK(path_cost(path, x.frames, y.frames) == 0.0);
}

TEST_CASE("single-frame degenerate alignment") {
    const auto x = seq_1d({0.0});
    const auto y = seq_1d({0.0, 1.0, 2.0});
    const auto path = dtw_align(x, y);
    path.validate();
    const std::vector<std::pair<Eigen::Index, Eigen::Index>> expected{
        {0, 0}, {0, 1}, {0, 2}};
    CHECK(path.pairs == expected);
    CHECK(path.x_duplicate_mask == std::vector<bool>{false, true, true});
}

TEST_CASE("dimension mismatch rejected") {
    MotionSequence x = seq_1d({0.0, 1.0, 2.0});
    MotionSequence y;
    y.frame_rate = 120.0;
    y.frames.resize(3, 2);
    y.frames.setZero();
    CHECK_THROWS_AS(dtw_align(x, y), std::invalid_argument);
}

TEST_CASE("DTW equals brute force on random short pairs") {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> len(1, 6);
    std::uniform_int_distribution<int> dim(1, 3);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 200; ++trial) {
        const int p = dim(gen);
        Eigen::MatrixXd x(len(gen), p), y(len(gen), p);
        for (Eigen::Index t = 0; t < x.rows(); ++t)
            for (Eigen::Index j = 0; j < p; ++j) x(t, j) = normal(gen);
        for (Eigen::Index t = 0; t < y.rows(); ++t)
            for (Eigen::Index j = 0; j < p; ++j) y(t, j) = normal(gen);
        const auto path = dtw_align(x, y);
        path.validate();
        CHECK(path_cost(path, x, y) ==
              doctest::Approx(brute_force_dtw(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("DTW cost is symmetric") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(12, 2), y(17, 2);
    for (Eigen::Index t = 0; t < x.rows(); ++t)
        for (Eigen::Index j = 0; j < 2; ++j) x(t, j) = normal(gen);
    for (Eigen::Index t = 0; t < y.rows(); ++t)
        for (Eigen::Index j = 0; j < 2; ++j) y(t, j) = normal(gen);
    const auto fwd = dtw_align(x, y);
    const auto rev = dtw_align(y, x);
    CHECK(path_cost(fwd, x, y) == doctest::Approx(path_cost(rev, y, x)).epsilon(1e-12));
}

TEST_CASE("CCA of a matrix with itself has unit correlations") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd X(200, 3);
    for (Eigen::Index t = 0; t < 200; ++t)
        for (Eigen::Index j = 0; j < 3; ++j) X(t, j) = normal(gen);
    const auto proj = cca(X, X, 3, 1e-8);
    REQUIRE(proj.correlations.size() == 3);
    for (Eigen::Index k = 0; k < 3; ++k)
        CHECK(proj.correlations(k) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("CCA correlations stay small for independent noise") {
    int ok = 0;
    for (int seed = 0; seed < 100; ++seed) {
        std::mt19937_64 gen(1000 + seed);
        std::normal_distribution<double> normal;
        Eigen::MatrixXd X(1000, 2), Y(1000, 2);
        for (Eigen::Index t = 0; t < 1000; ++t)
            for (Eigen::Index j = 0; j < 2; ++j) {
                X(t, j) = normal(gen);
                Y(t, j) = normal(gen);
            }
        const auto proj = cca(X, Y, 2, 1e-6);
        if (proj.correlations.maxCoeff() < 0.2) ++ok;
    }
    CHECK(ok >= 95);
}

TEST_CASE("CCA survives a constant column via ridge") {
    Eigen::MatrixXd X(50, 2), Y(50, 2);
    std::mt19937_64 gen(8);
    std::normal_distribution<double> normal;
    for (Eigen::Index t = 0; t < 50; ++t) {
        X(t, 0) = 1.0;  // constant
        X(t, 1) = normal(gen);
        Y(t, 0) = normal(gen);
        Y(t, 1) = normal(gen);
    }
    const auto proj = cca(X, Y, 2, 1e-4);
    CHECK(proj.proj_x.allFinite());
    CHECK(proj.proj_y.allFinite());
    CHECK(proj.correlations.allFinite());
}

TEST_CASE("CCA correlations are non-increasing and in [0,1]") {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd X(300, 4), Y(300, 4);
    for (Eigen::Index t = 0; t < 300; ++t)
        for (Eigen::Index j = 0; j < 4; ++j) {
            X(t, j) = normal(gen);
            Y(t, j) = 0.5 * X(t, j) + normal(gen);
        }
    const auto proj = cca(X, Y, 4, 1e-6);
    for (Eigen::Index k = 0; k < proj.correlations.size(); ++k) {
        CHECK(proj.correlations(k) >= 0.0);
        CHECK(proj.correlations(k) <= 1.0);
        if (k > 0) CHECK(proj.correlations(k) <= proj.correlations(k - 1) + 1e-12);
    }
    CHECK_THROWS_AS(cca(X.topRows(1), Y.topRows(1), 1), std::invalid_argument);
}

TEST_CASE("CTW on identical sequences converges immediately") {
    SynthSpec spec;
    spec.beta1 = 1.2;
    spec.beta2 = -0.5;
    spec.rho = 0.0;
    spec.frames = 60;
    spec.components = 2;
    spec.seed = 4;
    const auto [x, y] = generate_pair(spec);
    (void)y;
    const auto result = ctw_align_detail(x, x);
    CHECK(result.iterations == 1);
    CHECK(result.path.pairs.size() == 60);
    CHECK(path_cost(result.path, x.frames, x.frames) == 0.0);
}

TEST_CASE("CTW recovers an exact half-speed replay") {
    SynthSpec spec;
    spec.beta1 = 1.0;
    spec.beta2 = -0.3;
    spec.frames = 40;
    spec.components = 2;
    spec.seed = 12;
    const auto [x, unused] = generate_pair(spec);
    (void)unused;
    MotionSequence y;
    y.frame_rate = x.frame_rate;
    y.labels = x.labels;
    y.frames.resize(2 * x.num_frames(), x.num_features());
    for (Eigen::Index t = 0; t < x.num_frames(); ++t) {
        y.frames.row(2 * t) = x.frames.row(t);
        y.frames.row(2 * t + 1) = x.frames.row(t);
    }
    const auto path = ctw_align(x, y);
    path.validate();
    CHECK(path_cost(path, x.frames, y.frames) == doctest::Approx(0.0));
    // Every x frame must appear against both of its copies.
    std::vector<int> hits(static_cast<std::size_t>(x.num_frames()), 0);
    for (const auto& [tx, ty] : path.pairs) {
        CHECK(ty / 2 == tx);
        ++hits[static_cast<std::size_t>(tx)];
    }
    for (int h : hits) CHECK(h == 2);
}

TEST_CASE("CTW projected cost never increases within an iteration") {
    SynthSpec spec;
    spec.beta1 = 1.3;
    spec.beta2 = -0.6;
    spec.rho = 0.9;
    spec.frames = 120;
    spec.components = 3;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        spec.seed = seed;
        GaussianRng warp_rng(seed + 77);
        SynthSpec warped = spec;
        warped.warp = make_random_warp(warp_rng, spec.frames, 140, 3);
        const auto [x, y] = generate_pair(warped);
        const auto result = ctw_align_detail(x, y);
        result.path.validate();
        REQUIRE(result.costs_before.size() == result.costs_after.size());
        for (std::size_t i = 0; i < result.costs_after.size(); ++i)
            CHECK(result.costs_after[i] <= result.costs_before[i] + 1e-9);
    }
}

TEST_CASE("warp path debug dump format") {
    WarpPath path;
    path.x_len = 2;
    path.y_len = 3;
    path.pairs = {{0, 0}, {0, 1}, {1, 2}};
    path.x_duplicate_mask = {false, true, false};
    std::ostringstream out;
    dump_warp_path(path, out);
    CHECK(out.str() == "0,0,0\n0,1,1\n1,2,0\n");
}

TEST_CASE("pair_indices honors burn-in and duplicate mask") {
    WarpPath diag;
    diag.x_len = diag.y_len = 10;
    for (Eigen::Index t = 0; t < 10; ++t) diag.pairs.emplace_back(t, t);
    diag.x_duplicate_mask.assign(10, false);
    const auto pairs = pair_indices(diag, 2);
    REQUIRE(pairs.size() == 8);
    CHECK(pairs.front() == std::pair<Eigen::Index, Eigen::Index>{2, 2});
    CHECK(pairs.back() == std::pair<Eigen::Index, Eigen::Index>{9, 9});

    WarpPath dup;
    dup.x_len = 2;
    dup.y_len = 3;
    dup.pairs = {{0, 0}, {0, 1}, {1, 2}};
    dup.x_duplicate_mask = {false, true, false};
    const auto skipped = pair_indices(dup, 0);
    const std::vector<std::pair<Eigen::Index, Eigen::Index>> expected{{0, 0}, {1, 2}};
    CHECK(skipped == expected);
}
