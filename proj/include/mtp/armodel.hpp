#ifndef MTP_ARMODEL_HPP
#define MTP_ARMODEL_HPP

#include <Eigen/Dense>

namespace mtp {

/// Least-squares fit of x_t = b0 + b1*x_{t-1} + b2*x_{t-2} + e_t.
///
/// Targets start at the third frame, so a series of length T yields T-2
/// residuals. sigma2 is the population residual variance (mean squared
/// residual). `degenerate` is set when sigma2 falls below the variance
/// floor, which happens exactly for series the model predicts perfectly
/// (constant and affine series included).
struct Ar2Fit {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    Eigen::VectorXd residuals;  // length T - 2
    double sigma2 = 0.0;
    bool degenerate = false;
};

/// Fit the AR(2) model by least squares. Rank-deficient normal equations
/// (collinear regressors) are resolved by the minimum-norm pseudoinverse
/// with a relative singular-value cut of 1e-10; the residuals are unique
/// either way. Throws std::invalid_argument for length < 3 or non-finite
/// input.
Ar2Fit fit_ar2(const Eigen::VectorXd& series, double variance_floor = 1e-12);

/// Differential entropy rate of a Gaussian innovation with the given
/// variance: (1/2) * log2(2*pi*e*sigma2) bits per frame. Throws
/// std::domain_error below the floor; callers exclude degenerate fits.
double gaussian_entropy_rate(double sigma2, double variance_floor = 1e-12);

}  // namespace mtp

#endif
