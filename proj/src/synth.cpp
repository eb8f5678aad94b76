#include "mtp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mtp {

double GaussianRng::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 53-bit uniforms; u1 kept strictly positive for the log.
    double u1 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

namespace {

double interp_monotone(const std::vector<double>& from,
                       const std::vector<double>& to, double q) {
    if (q <= from.front()) return to.front();
    if (q >= from.back()) return to.back();
    const auto it = std::upper_bound(from.begin(), from.end(), q);
    const auto i = static_cast<std::size_t>(it - from.begin());
    const double f = (q - from[i - 1]) / (from[i] - from[i - 1]);
    return to[i - 1] + f * (to[i] - to[i - 1]);
}

}  // namespace

double PiecewiseLinearWarp::source_index(double out_index) const {
    return interp_monotone(out_pos, src_pos, out_index);
}

double PiecewiseLinearWarp::output_index(double src_index) const {
    return interp_monotone(src_pos, out_pos, src_index);
}

Eigen::Index PiecewiseLinearWarp::out_len() const {
    return static_cast<Eigen::Index>(std::llround(out_pos.back())) + 1;
}

PiecewiseLinearWarp make_random_warp(GaussianRng& rng, Eigen::Index src_len,
                                     Eigen::Index out_len, int segments) {
    if (segments < 1 || src_len < 2 || out_len < 2)
        throw std::invalid_argument("make_random_warp: bad arguments");
    PiecewiseLinearWarp warp;
    std::vector<double> increments(static_cast<std::size_t>(segments));
    double total = 0.0;
    for (auto& inc : increments) {
        // Positive slope factors roughly in [0.3, 3]; Gaussian folded away
        // from zero keeps the map strictly monotone.
        inc = 1.0 + 0.5 * std::abs(rng.next());
        if (rng.next() < 0.0) inc = 1.0 / inc;
        total += inc;
    }
    warp.out_pos.push_back(0.0);
    warp.src_pos.push_back(0.0);
    double cum = 0.0;
    for (int k = 0; k < segments; ++k) {
        cum += increments[static_cast<std::size_t>(k)];
        warp.out_pos.push_back(static_cast<double>(out_len - 1) *
                               static_cast<double>(k + 1) / segments);
        warp.src_pos.push_back(static_cast<double>(src_len - 1) * cum / total);
    }
    warp.src_pos.back() = static_cast<double>(src_len - 1);
    return warp;
}

double ar2_stationary_variance(double beta1, double beta2) {
    const double denom = (1.0 + beta2) * ((1.0 - beta2) * (1.0 - beta2) - beta1 * beta1);
    if (!(denom > 0.0))
        throw std::invalid_argument("ar2_stationary_variance: unstable coefficients");
    return (1.0 - beta2) / denom;
}

void SynthSpec::validate() const {
    if (!(std::abs(beta2) < 1.0 && beta2 + beta1 < 1.0 && beta2 - beta1 < 1.0))
        throw std::invalid_argument("SynthSpec: unstable AR(2) coefficients");
    if (!(std::abs(rho) < 1.0))
        throw std::invalid_argument("SynthSpec: |rho| must be < 1");
    if (frames < 3)
        throw std::invalid_argument("SynthSpec: need at least 3 frames");
    if (components < 1)
        throw std::invalid_argument("SynthSpec: need at least 1 component");
    if (!(frame_rate > 0.0))
        throw std::invalid_argument("SynthSpec: frame_rate must be positive");
}

std::pair<MotionSequence, MotionSequence> generate_pair(const SynthSpec& spec) {
    spec.validate();
    constexpr Eigen::Index kBurnIn = 100;
    const Eigen::Index total = spec.frames + kBurnIn;
    const double stat_sd = std::sqrt(ar2_stationary_variance(spec.beta1, spec.beta2));
    const double cross = spec.rho;
    const double resid = std::sqrt(1.0 - spec.rho * spec.rho);

    GaussianRng rng(spec.seed);

    MotionSequence x, y_base;
    x.frame_rate = spec.frame_rate;
    y_base.frame_rate = spec.frame_rate;
    x.frames.resize(spec.frames, spec.components);
    y_base.frames.resize(total, spec.components);
    Eigen::MatrixXd xa(total, spec.components);

    for (int c = 0; c < spec.components; ++c) {
        // Fixed draw order per component: x warm start, y warm start, then
        // one innovation pair per frame.
        double x1 = stat_sd * rng.next(), x2 = stat_sd * rng.next();
        double y1 = stat_sd * rng.next(), y2 = stat_sd * rng.next();
        for (Eigen::Index t = 0; t < total; ++t) {
            const double e1 = rng.next();
            const double e2 = rng.next();
            const double ex = e1;
            const double ey = cross * e1 + resid * e2;
            const double xv = spec.beta0 + spec.beta1 * x1 + spec.beta2 * x2 + ex;
            const double yv = spec.beta0 + spec.beta1 * y1 + spec.beta2 * y2 + ey;
            xa(t, c) = xv;
            y_base.frames(t, c) = yv;
            x2 = x1;
            x1 = xv;
            y2 = y1;
            y1 = yv;
        }
        x.labels.push_back("c" + std::to_string(c));
        y_base.labels.push_back("c" + std::to_string(c));
    }
    x.frames = xa.bottomRows(spec.frames);
    y_base.frames = Eigen::MatrixXd(y_base.frames.bottomRows(spec.frames));

    MotionSequence y;
    if (spec.warp) {
        const auto& warp = *spec.warp;
        if (warp.src_pos.back() != static_cast<double>(spec.frames - 1))
            throw std::invalid_argument("generate_pair: warp source length mismatch");
        y.frame_rate = spec.frame_rate;
        y.labels = y_base.labels;
        const Eigen::Index out_len = warp.out_len();
        y.frames.resize(out_len, spec.components);
        for (Eigen::Index s = 0; s < out_len; ++s) {
            const double u = warp.source_index(static_cast<double>(s));
            const auto lo = static_cast<Eigen::Index>(std::floor(u));
            const auto hi = std::min<Eigen::Index>(lo + 1, spec.frames - 1);
            const double f = u - static_cast<double>(lo);
            y.frames.row(s) =
                (1.0 - f) * y_base.frames.row(lo) + f * y_base.frames.row(hi);
        }
    } else {
        y = std::move(y_base);
    }
    return {std::move(x), std::move(y)};
}

double analytic_tp(double rho, double frame_rate, std::int64_t n) {
    if (!(std::abs(rho) < 1.0))
        throw std::invalid_argument("analytic_tp: |rho| must be < 1");
    if (n < 1)
        throw std::invalid_argument("analytic_tp: n must be >= 1");
    const double nn = static_cast<double>(n);
    return -(frame_rate / 2.0) * std::log2(1.0 - rho * rho) -
           (frame_rate / (2.0 * nn)) * std::log2(nn);
}

}  // namespace mtp
