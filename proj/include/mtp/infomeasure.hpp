#ifndef MTP_INFOMEASURE_HPP
#define MTP_INFOMEASURE_HPP

#include "mtp/alignment.hpp"
#include "mtp/motion.hpp"
#include "mtp/report.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mtp {

/// Raised when a channel carries no usable signal (too few pairs or zero
/// residual variance on either side).
struct DegenerateChannel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AnalyzeConfig {
    double retention = 0.90;
    AlignmentMethod alignment = AlignmentMethod::ctw;
    double clamp = 1e-6;           // |rho_hat| <= 1 - clamp
    double variance_floor = 1e-12;
    CtwConfig ctw;
};

/// Fitts-paradigm task description: MT = a + b * log2(1 + D/W).
struct FittsTask {
    double a = 0.0;  // seconds
    double b = 0.0;  // seconds per bit
    double distance = 0.0;
    double width = 0.0;
};

/// Pearson correlation of residual values gathered through alignment index
/// pairs. Frame index pairs refer to the source sequences; residual index
/// is frame index minus 2. Result clamped to +-(1 - clamp).
double residual_correlation(
    const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs,
    double clamp = 1e-6);

/// MDL-penalized mutual information estimate in bits:
///   -(n_eff/2) * log2(1 - rho_hat^2) - (1/2) * log2(n_eff).
/// Negative outputs are valid and returned as-is.
double mutual_information(double rho_hat, std::int64_t n_eff);

/// Estimated mutual information per second: R * mutual_information / n_eff.
double throughput(double rho_hat, std::int64_t n_eff, double frame_rate);

/// Full pipeline: normalize both sequences (dropping features degenerate in
/// either), fit PCA on x and project both unaligned sequences, align the
/// normalized full-feature sequences, then estimate each component's
/// residual correlation over the aligned non-duplicate post-burn-in pairs
/// and sum the per-component throughputs.
ThroughputReport analyze_pair(const MotionSequence& x, const MotionSequence& y,
                              const AnalyzeConfig& cfg = {});

double fitts_mt(const FittsTask& task);
double fitts_ip(double b);

}  // namespace mtp

#endif
