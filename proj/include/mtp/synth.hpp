#ifndef MTP_SYNTH_HPP
#define MTP_SYNTH_HPP

#include "mtp/motion.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace mtp {

/// Seedable stream-stable Gaussian source: mt19937_64 driving a Box-Muller
/// transform. The draw order is fixed, so output for a given seed is
/// bit-identical across platforms with a conforming mt19937_64.
class GaussianRng {
  public:
    explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}
    double next();

  private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Monotone piecewise-linear map between an output (warped) time axis and a
/// source time axis. Knot positions are fractional frame indices.
struct PiecewiseLinearWarp {
    std::vector<double> out_pos;  // strictly increasing, [0, out_len-1]
    std::vector<double> src_pos;  // strictly increasing, [0, src_len-1]

    double source_index(double out_index) const;  // out axis -> src axis
    double output_index(double src_index) const;  // src axis -> out axis
    Eigen::Index out_len() const;
};

/// Random warp with `segments` linear pieces whose slopes vary in
/// [min_slope, min_slope + slope_span] before renormalization.
PiecewiseLinearWarp make_random_warp(GaussianRng& rng, Eigen::Index src_len,
                                     Eigen::Index out_len, int segments);

struct SynthSpec {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double rho = 0.0;         // innovation correlation, |rho| < 1
    Eigen::Index frames = 0;  // T
    int components = 1;       // p
    double frame_rate = 120.0;
    std::uint64_t seed = 0;
    std::optional<PiecewiseLinearWarp> warp;  // applied to y only

    void validate() const;
};

/// Sample a pair of sequences whose components follow the spec's AR(2)
/// dynamics with bivariate Gaussian innovations of unit marginal variance
/// and correlation rho. Warm-started from the stationary variance with 100
/// burn-in frames discarded. Deterministic for a fixed seed.
std::pair<MotionSequence, MotionSequence> generate_pair(const SynthSpec& spec);

/// Throughput formula evaluated at the true correlation:
///   -(R/2) * log2(1 - rho^2) - (R / 2n) * log2(n).
/// Oracle expectation for estimator tests.
double analytic_tp(double rho, double frame_rate, std::int64_t n);

/// Stationary variance of the AR(2) process with unit innovation variance.
double ar2_stationary_variance(double beta1, double beta2);

}  // namespace mtp

#endif
