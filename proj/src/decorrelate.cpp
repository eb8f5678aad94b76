#include "mtp/decorrelate.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace mtp {

PcaBasis fit_pca(const MotionSequence& x, double retention) {
    x.validate();
    if (!(retention > 0.0 && retention <= 1.0))
        throw std::invalid_argument("fit_pca: retention must be in (0, 1]");
    if (x.num_frames() <= x.num_features())
        std::cerr << "fit_pca: warning: T=" << x.num_frames()
                  << " <= p=" << x.num_features()
                  << ", covariance estimate is rank deficient\n";

    const Eigen::Index T = x.num_frames();
    const Eigen::Index p = x.num_features();

    PcaBasis basis;
    basis.mean = x.frames.colwise().mean();
    Eigen::MatrixXd centered = x.frames.rowwise() - basis.mean.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    Eigen::VectorXd shares = svd.singularValues().array().square();
    const double total = shares.sum();
    if (!(total > 0.0))
        throw std::invalid_argument("fit_pca: zero total variance");
    shares /= total;

    Eigen::Index m = 0;
    double cum = 0.0;
    // Guard against rounding keeping cum fractionally below retention=1.
    while (m < std::min(p, T) && cum < retention - 1e-12) {
        cum += shares(m);
        ++m;
    }
    m = std::max<Eigen::Index>(m, 1);

    basis.components = svd.matrixV().leftCols(m);
    basis.explained = shares.head(m);
    basis.retained = static_cast<int>(m);

    // Deterministic sign: largest-magnitude entry of each column positive.
    for (Eigen::Index k = 0; k < m; ++k) {
        Eigen::Index argmax = 0;
        basis.components.col(k).cwiseAbs().maxCoeff(&argmax);
        if (basis.components(argmax, k) < 0.0)
            basis.components.col(k) = -basis.components.col(k);
    }
    return basis;
}

MotionSequence project(const MotionSequence& seq, const PcaBasis& basis) {
    if (seq.num_features() != basis.dim())
        throw std::invalid_argument(
            "project: sequence has " + std::to_string(seq.num_features()) +
            " features but basis expects " + std::to_string(basis.dim()));
    MotionSequence out;
    out.frame_rate = seq.frame_rate;
    out.normalized = seq.normalized;
    out.frames =
        (seq.frames.rowwise() - basis.mean.transpose()) * basis.components;
    out.labels.reserve(static_cast<std::size_t>(basis.retained));
    for (int k = 0; k < basis.retained; ++k)
        out.labels.push_back("pc" + std::to_string(k));
    return out;
}

}  // namespace mtp
