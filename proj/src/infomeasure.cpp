#include "mtp/infomeasure.hpp"

#include "mtp/armodel.hpp"
#include "mtp/decorrelate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mtp {

double residual_correlation(
    const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs,
    double clamp) {
    if (pairs.size() < 3)
        throw DegenerateChannel("residual_correlation: need at least 3 pairs, got " +
                                std::to_string(pairs.size()));
    const auto n = static_cast<Eigen::Index>(pairs.size());
    Eigen::VectorXd a(n), b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto [tx, ty] = pairs[static_cast<std::size_t>(i)];
        const Eigen::Index ix = tx - 2;  // residual index = frame index - 2
        const Eigen::Index iy = ty - 2;
        if (ix < 0 || ix >= rx.size() || iy < 0 || iy >= ry.size())
            throw std::invalid_argument("residual_correlation: pair index out of range");
        a(i) = rx(ix);
        b(i) = ry(iy);
    }
    a.array() -= a.mean();
    b.array() -= b.mean();
    const double va = a.squaredNorm();
    const double vb = b.squaredNorm();
    if (va <= 0.0 || vb <= 0.0)
        throw DegenerateChannel("residual_correlation: degenerate channel");
    const double rho = a.dot(b) / std::sqrt(va * vb);
    const double limit = 1.0 - clamp;
    return std::clamp(rho, -limit, limit);
}

double mutual_information(double rho_hat, std::int64_t n_eff) {
    if (!(std::abs(rho_hat) < 1.0))
        throw std::invalid_argument("mutual_information: |rho_hat| must be < 1");
    if (n_eff < 1)
        throw std::invalid_argument("mutual_information: n_eff must be >= 1");
    const double n = static_cast<double>(n_eff);
    return -(n / 2.0) * std::log2(1.0 - rho_hat * rho_hat) - 0.5 * std::log2(n);
}

double throughput(double rho_hat, std::int64_t n_eff, double frame_rate) {
    if (!(frame_rate > 0.0))
        throw std::invalid_argument("throughput: frame_rate must be positive");
    return frame_rate * mutual_information(rho_hat, n_eff) /
           static_cast<double>(n_eff);
}

namespace {

WarpPath diagonal_path(Eigen::Index len) {
    WarpPath path;
    path.x_len = len;
    path.y_len = len;
    path.pairs.reserve(static_cast<std::size_t>(len));
    for (Eigen::Index t = 0; t < len; ++t) path.pairs.emplace_back(t, t);
    path.x_duplicate_mask.assign(static_cast<std::size_t>(len), false);
    return path;
}

// Standardize the columns of both sequences, dropping any feature whose
// population variance is below the floor in EITHER sequence so that both
// project through the same basis.
struct JointNormalized {
    MotionSequence x;
    MotionSequence y;
};

JointNormalized joint_normalize(const MotionSequence& x, const MotionSequence& y,
                                double variance_floor) {
    auto column_variance = [](const MotionSequence& s) {
        Eigen::MatrixXd c = s.frames.rowwise() - s.frames.colwise().mean();
        return Eigen::VectorXd(c.array().square().colwise().sum() /
                               static_cast<double>(s.num_frames()));
    };
    const Eigen::VectorXd vx = column_variance(x);
    const Eigen::VectorXd vy = column_variance(y);

    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < x.num_features(); ++j)
        if (vx(j) >= variance_floor && vy(j) >= variance_floor) keep.push_back(j);
    if (keep.empty())
        throw std::invalid_argument("analyze_pair: no informative features");

    auto standardize = [&](const MotionSequence& s) {
        MotionSequence out;
        out.frame_rate = s.frame_rate;
        out.normalized = true;
        out.frames.resize(s.num_frames(), static_cast<Eigen::Index>(keep.size()));
        const Eigen::VectorXd mean = s.frames.colwise().mean();
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const Eigen::Index j = keep[k];
            Eigen::VectorXd col = s.frames.col(j).array() - mean(j);
            out.frames.col(static_cast<Eigen::Index>(k)) =
                col / std::sqrt(col.squaredNorm() / static_cast<double>(s.num_frames()));
            if (j < static_cast<Eigen::Index>(s.labels.size()))
                out.labels.push_back(s.labels[static_cast<std::size_t>(j)]);
        }
        return out;
    };
    return {standardize(x), standardize(y)};
}

}  // namespace

ThroughputReport analyze_pair(const MotionSequence& x, const MotionSequence& y,
                              const AnalyzeConfig& cfg) {
    x.validate();
    y.validate();
    if (x.num_features() != y.num_features())
        throw std::invalid_argument("analyze_pair: feature-count mismatch");

    const auto norm = joint_normalize(x, y, cfg.variance_floor);

    PcaBasis basis = fit_pca(norm.x, cfg.retention);
    MotionSequence xp = project(norm.x, basis);
    MotionSequence yp = project(norm.y, basis);

    WarpPath path;
    switch (cfg.alignment) {
        case AlignmentMethod::none:
            if (norm.x.num_frames() != norm.y.num_frames())
                throw std::invalid_argument(
                    "analyze_pair: alignment=none requires equal lengths");
            path = diagonal_path(norm.x.num_frames());
            break;
        case AlignmentMethod::dtw:
            path = dtw_align(norm.x, norm.y);
            break;
        case AlignmentMethod::ctw:
            path = ctw_align(norm.x, norm.y, cfg.ctw);
            break;
    }

    const auto pairs = pair_indices(path, 2);
    const auto n_eff = static_cast<std::int64_t>(pairs.size());
    if (n_eff < 3)
        throw std::invalid_argument("analyze_pair: n_eff < 3 after alignment");

    ThroughputReport report;
    report.frame_rate = x.frame_rate;
    report.n_eff = n_eff;
    report.alignment_method = cfg.alignment;
    report.retained_components = basis.retained;
    report.variance_covered = basis.explained.sum();

    for (int j = 0; j < basis.retained; ++j) {
        Ar2Fit fx = fit_ar2(xp.frames.col(j), cfg.variance_floor);
        Ar2Fit fy = fit_ar2(yp.frames.col(j), cfg.variance_floor);
        if (fx.degenerate || fy.degenerate) {
            report.degenerate_components.push_back(j);
            continue;
        }
        ChannelEstimate est;
        est.component_index = j;
        est.n_eff = n_eff;
        try {
            est.rho_hat =
                residual_correlation(fx.residuals, fy.residuals, pairs, cfg.clamp);
        } catch (const DegenerateChannel&) {
            report.degenerate_components.push_back(j);
            continue;
        }
        est.mi_bits = mutual_information(est.rho_hat, n_eff);
        est.tp_bps = throughput(est.rho_hat, n_eff, report.frame_rate);
        report.total_tp += est.tp_bps;
        report.components.push_back(est);
    }
    report.validate();
    return report;
}

double fitts_mt(const FittsTask& task) {
    if (!(task.width > 0.0))
        throw std::invalid_argument("fitts_mt: width must be positive");
    if (task.distance < 0.0)
        throw std::invalid_argument("fitts_mt: distance must be non-negative");
    if (!(task.b > 0.0))
        throw std::invalid_argument("fitts_mt: b must be positive");
    return task.a + task.b * std::log2(1.0 + task.distance / task.width);
}

double fitts_ip(double b) {
    if (!(b > 0.0))
        throw std::invalid_argument("fitts_ip: b must be positive");
    return 1.0 / b;
}

}  // namespace mtp
