#ifndef MTP_ALIGNMENT_HPP
#define MTP_ALIGNMENT_HPP

#include "mtp/motion.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace mtp {

/// Monotone alignment between two sequences. Indices are 0-based into the
/// unaligned sequences; x_duplicate_mask[i] marks pairs where t_x repeats
/// the previous pair's t_x (the warp "slowed down" x there).
struct WarpPath {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    Eigen::Index x_len = 0;
    Eigen::Index y_len = 0;
    std::vector<bool> x_duplicate_mask;

    /// Structural invariants: endpoints (0,0) and (x_len-1, y_len-1),
    /// unit monotone steps, mask consistency. Throws std::logic_error.
    void validate() const;
};

/// Ridge-regularized CCA projections of two equally-row-counted matrices.
struct CcaProjection {
    Eigen::MatrixXd proj_x;           // p x d
    Eigen::MatrixXd proj_y;           // p x d
    Eigen::VectorXd correlations;     // d, non-increasing, in [0, 1]
};

struct CtwConfig {
    int d = 0;            // projection dimension; 0 = auto (90% variance, max 10)
    double ridge = 1e-6;
    int max_iters = 20;
    double tol = 1e-4;    // relative cost-decrease stopping threshold
};

struct CtwResult {
    WarpPath path;
    // Per accepted iteration, the previous and refined path costs measured
    // in that iteration's projected space; after <= before always holds.
    std::vector<double> costs_before;
    std::vector<double> costs_after;
    int iterations = 0;
};

/// Optimal monotone alignment minimizing total squared Euclidean frame
/// distance, step set {(1,0),(0,1),(1,1)}. Tie-break prefers the diagonal
/// step, then advance-x, then advance-y. Throws on feature-count mismatch.
WarpPath dtw_align(const MotionSequence& x, const MotionSequence& y);
WarpPath dtw_align(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Total squared-distance cost of an existing path between two frame
/// matrices (used for CTW stopping decisions and tests).
double path_cost(const WarpPath& path, const Eigen::MatrixXd& x,
                 const Eigen::MatrixXd& y);

/// Canonical correlation analysis with ridge regularization on both
/// covariance blocks. Projected features have unit variance under the
/// regularized metric. d is clamped to the feasible rank.
CcaProjection cca(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int d,
                  double ridge = 1e-6);

/// Canonical Time Warping: starting from the plain DTW path, alternate CCA
/// on the currently-aligned frame pairs (duplicates included) with DTW in
/// the projected space. Stops when the path is unchanged, the projected
/// cost decrease falls below cfg.tol relative, or cfg.max_iters is reached.
WarpPath ctw_align(const MotionSequence& x, const MotionSequence& y,
                   const CtwConfig& cfg = {});
CtwResult ctw_align_detail(const MotionSequence& x, const MotionSequence& y,
                           const CtwConfig& cfg = {});

/// Pairs entering the information measure: x-duplicates skipped and both
/// indices at or past burn_in (2 for AR(2)). The result's length is n_eff.
std::vector<std::pair<Eigen::Index, Eigen::Index>> pair_indices(
    const WarpPath& path, Eigen::Index burn_in);

/// Debug dump as CSV rows `t_x,t_y,duplicate`.
void dump_warp_path(const WarpPath& path, std::ostream& out);

}  // namespace mtp

#endif
