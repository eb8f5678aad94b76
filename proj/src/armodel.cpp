#include "mtp/armodel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mtp {

Ar2Fit fit_ar2(const Eigen::VectorXd& series, double variance_floor) {
    const Eigen::Index T = series.size();
    if (T < 3)
        throw std::invalid_argument("fit_ar2: need at least 3 samples, got " +
                                    std::to_string(T));
    if (!series.allFinite())
        throw std::invalid_argument("fit_ar2: non-finite input");

    const Eigen::Index n = T - 2;
    Eigen::MatrixXd design(n, 3);
    design.col(0).setOnes();
    design.col(1) = series.segment(1, n);  // lag 1
    design.col(2) = series.segment(0, n);  // lag 2
    Eigen::VectorXd target = series.segment(2, n);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(design,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    Eigen::Vector3d coef = svd.solve(target);

    Ar2Fit fit;
    fit.beta0 = coef(0);
    fit.beta1 = coef(1);
    fit.beta2 = coef(2);
    fit.residuals = target - design * coef;
    fit.sigma2 = fit.residuals.squaredNorm() / static_cast<double>(n);
    fit.degenerate = fit.sigma2 < variance_floor;
    return fit;
}

double gaussian_entropy_rate(double sigma2, double variance_floor) {
    if (sigma2 < variance_floor)
        throw std::domain_error("gaussian_entropy_rate: degenerate variance");
    return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * sigma2);
}

}  // namespace mtp
