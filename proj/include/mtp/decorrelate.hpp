#ifndef MTP_DECORRELATE_HPP
#define MTP_DECORRELATE_HPP

#include "mtp/motion.hpp"

#include <Eigen/Dense>

namespace mtp {

/// PCA basis fitted on one sequence and applied to both.
struct PcaBasis {
    Eigen::VectorXd mean;        // p
    Eigen::MatrixXd components;  // p x m, orthonormal columns
    Eigen::VectorXd explained;   // m variance shares, non-increasing
    int retained = 0;            // m

    Eigen::Index dim() const { return mean.size(); }
};

/// Fit PCA on a normalized sequence, retaining the smallest number of
/// components whose cumulative explained variance reaches `retention`.
/// Computed by SVD of the centered data matrix. Each component's sign is
/// fixed so its largest-magnitude entry is positive. Throws on zero total
/// variance.
PcaBasis fit_pca(const MotionSequence& x, double retention = 0.90);

/// Project a sequence through the basis: (frame - basis.mean) * components.
/// Always uses the basis's own mean, never the projected sequence's.
MotionSequence project(const MotionSequence& seq, const PcaBasis& basis);

}  // namespace mtp

#endif
