#include "mtp/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mtp {

void WarpPath::validate() const {
    if (pairs.empty())
        throw std::logic_error("WarpPath: empty path");
    if (pairs.size() != x_duplicate_mask.size())
        throw std::logic_error("WarpPath: mask length mismatch");
    if (pairs.front() != std::pair<Eigen::Index, Eigen::Index>{0, 0})
        throw std::logic_error("WarpPath: path must start at (0,0)");
    if (pairs.back() != std::pair<Eigen::Index, Eigen::Index>{x_len - 1, y_len - 1})
        throw std::logic_error("WarpPath: path must end at (x_len-1, y_len-1)");
    if (x_duplicate_mask.front())
        throw std::logic_error("WarpPath: first pair cannot be a duplicate");
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        const auto dx = pairs[i].first - pairs[i - 1].first;
        const auto dy = pairs[i].second - pairs[i - 1].second;
        const bool step_ok = (dx == 1 && dy == 0) || (dx == 0 && dy == 1) ||
                             (dx == 1 && dy == 1);
        if (!step_ok)
            throw std::logic_error("WarpPath: invalid step at pair " +
                                   std::to_string(i));
        if (x_duplicate_mask[i] != (dx == 0))
            throw std::logic_error("WarpPath: duplicate mask wrong at pair " +
                                   std::to_string(i));
    }
}

namespace {

void fill_duplicate_mask(WarpPath& path) {
    path.x_duplicate_mask.assign(path.pairs.size(), false);
    for (std::size_t i = 1; i < path.pairs.size(); ++i)
        path.x_duplicate_mask[i] = path.pairs[i].first == path.pairs[i - 1].first;
}

}  // namespace

WarpPath dtw_align(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.cols() != y.cols())
        throw std::invalid_argument("dtw_align: feature-count mismatch (" +
                                    std::to_string(x.cols()) + " vs " +
                                    std::to_string(y.cols()) + ")");
    const Eigen::Index n = x.rows();
    const Eigen::Index m = y.rows();
    if (n == 0 || m == 0)
        throw std::invalid_argument("dtw_align: empty sequence");

    auto dist = [&](Eigen::Index i, Eigen::Index j) {
        return (x.row(i) - y.row(j)).squaredNorm();
    };

    Eigen::MatrixXd acc(n, m);
    acc(0, 0) = dist(0, 0);
    for (Eigen::Index i = 1; i < n; ++i) acc(i, 0) = acc(i - 1, 0) + dist(i, 0);
    for (Eigen::Index j = 1; j < m; ++j) acc(0, j) = acc(0, j - 1) + dist(0, j);
    for (Eigen::Index i = 1; i < n; ++i)
        for (Eigen::Index j = 1; j < m; ++j)
            acc(i, j) = dist(i, j) + std::min({acc(i - 1, j - 1), acc(i - 1, j),
                                               acc(i, j - 1)});

    WarpPath path;
    path.x_len = n;
    path.y_len = m;
    Eigen::Index i = n - 1;
    Eigen::Index j = m - 1;
    path.pairs.emplace_back(i, j);
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            // Tie-break: diagonal, then advance-x, then advance-y.
            const double diag = acc(i - 1, j - 1);
            const double up = acc(i - 1, j);
            const double left = acc(i, j - 1);
            const double best = std::min({diag, up, left});
            if (diag == best) {
                --i;
                --j;
            } else if (up == best) {
                --i;
            } else {
                --j;
            }
        }
        path.pairs.emplace_back(i, j);
    }
    std::reverse(path.pairs.begin(), path.pairs.end());
    fill_duplicate_mask(path);
    return path;
}

WarpPath dtw_align(const MotionSequence& x, const MotionSequence& y) {
    return dtw_align(x.frames, y.frames);
}

double path_cost(const WarpPath& path, const Eigen::MatrixXd& x,
                 const Eigen::MatrixXd& y) {
    double cost = 0.0;
    for (const auto& [tx, ty] : path.pairs)
        cost += (x.row(tx) - y.row(ty)).squaredNorm();
    return cost;
}

namespace {

// Inverse square root of a symmetric PSD matrix, eigenvalues below the
// cut treated as zero (pseudo-inverse branch, only reachable at ridge=0).
Eigen::MatrixXd inv_sqrt_psd(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double cut = std::max(ev.cwiseAbs().maxCoeff(), 0.0) * 1e-12;
    Eigen::VectorXd inv = ev;
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        inv(k) = ev(k) > cut ? 1.0 / std::sqrt(ev(k)) : 0.0;
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

CcaProjection cca(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int d,
                  double ridge) {
    if (X.rows() != Y.rows())
        throw std::invalid_argument("cca: row-count mismatch");
    const Eigen::Index rows = X.rows();
    if (rows < 2)
        throw std::invalid_argument("cca: need at least 2 rows");
    if (d < 1)
        throw std::invalid_argument("cca: d must be at least 1");
    if (ridge < 0.0)
        throw std::invalid_argument("cca: ridge must be non-negative");

    const double n = static_cast<double>(rows);
    Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
    Eigen::MatrixXd Yc = Y.rowwise() - Y.colwise().mean();

    const Eigen::Index px = X.cols();
    const Eigen::Index py = Y.cols();
    Eigen::MatrixXd Sxx = Xc.transpose() * Xc / n +
                          ridge * Eigen::MatrixXd::Identity(px, px);
    Eigen::MatrixXd Syy = Yc.transpose() * Yc / n +
                          ridge * Eigen::MatrixXd::Identity(py, py);
    Eigen::MatrixXd Sxy = Xc.transpose() * Yc / n;

    Eigen::MatrixXd Wx = inv_sqrt_psd(Sxx);
    Eigen::MatrixXd Wy = inv_sqrt_psd(Syy);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(Wx * Sxy * Wy,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index feasible =
        std::min({static_cast<Eigen::Index>(d), px, py, rows - 1});
    const Eigen::Index dd = std::max<Eigen::Index>(feasible, 1);

    CcaProjection result;
    result.proj_x = Wx * svd.matrixU().leftCols(dd);
    result.proj_y = Wy * svd.matrixV().leftCols(dd);
    result.correlations =
        svd.singularValues().head(dd).cwiseMin(1.0).cwiseMax(0.0);
    return result;
}

namespace {

// Smallest number of principal components covering `retention` of the
// matrix's variance; used for CTW's automatic projection dimension.
int components_for_retention(const Eigen::MatrixXd& frames, double retention) {
    Eigen::MatrixXd centered = frames.rowwise() - frames.colwise().mean();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered);
    Eigen::VectorXd shares = svd.singularValues().array().square();
    const double total = shares.sum();
    if (total <= 0.0) return 1;
    double cum = 0.0;
    for (Eigen::Index k = 0; k < shares.size(); ++k) {
        cum += shares(k) / total;
        if (cum >= retention) return static_cast<int>(k + 1);
    }
    return static_cast<int>(shares.size());
}

}  // namespace

CtwResult ctw_align_detail(const MotionSequence& x, const MotionSequence& y,
                           const CtwConfig& cfg) {
    if (x.num_features() != y.num_features())
        throw std::invalid_argument("ctw_align: feature-count mismatch");

    int d = cfg.d;
    if (d <= 0) {
        d = std::max(components_for_retention(x.frames, 0.90),
                     components_for_retention(y.frames, 0.90));
        d = std::min(d, 10);
    }

    CtwResult result;
    result.path = dtw_align(x, y);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const auto count = static_cast<Eigen::Index>(result.path.pairs.size());
        Eigen::MatrixXd Xa(count, x.num_features());
        Eigen::MatrixXd Ya(count, y.num_features());
        for (Eigen::Index i = 0; i < count; ++i) {
            Xa.row(i) = x.frames.row(result.path.pairs[static_cast<std::size_t>(i)].first);
            Ya.row(i) = y.frames.row(result.path.pairs[static_cast<std::size_t>(i)].second);
        }
        CcaProjection proj = cca(Xa, Ya, d, cfg.ridge);

        Eigen::MatrixXd Px =
            (x.frames.rowwise() - Xa.colwise().mean()) * proj.proj_x;
        Eigen::MatrixXd Py =
            (y.frames.rowwise() - Ya.colwise().mean()) * proj.proj_y;

        WarpPath refined = dtw_align(Px, Py);
        ++result.iterations;

        if (refined.pairs == result.path.pairs)
            break;

        const double old_cost = path_cost(result.path, Px, Py);
        const double new_cost = path_cost(refined, Px, Py);
        result.path = std::move(refined);
        result.costs_before.push_back(old_cost);
        result.costs_after.push_back(new_cost);
        if (old_cost - new_cost < cfg.tol * std::max(old_cost, 1e-300))
            break;
    }
    result.path.validate();
    return result;
}

WarpPath ctw_align(const MotionSequence& x, const MotionSequence& y,
                   const CtwConfig& cfg) {
    return ctw_align_detail(x, y, cfg).path;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> pair_indices(
    const WarpPath& path, Eigen::Index burn_in) {
    if (burn_in < 0)
        throw std::invalid_argument("pair_indices: burn_in must be non-negative");
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    for (std::size_t i = 0; i < path.pairs.size(); ++i) {
        if (path.x_duplicate_mask[i]) continue;
        const auto& [tx, ty] = path.pairs[i];
        if (tx >= burn_in && ty >= burn_in) out.emplace_back(tx, ty);
    }
    return out;
}

void dump_warp_path(const WarpPath& path, std::ostream& out) {
    for (std::size_t i = 0; i < path.pairs.size(); ++i)
        out << path.pairs[i].first << ',' << path.pairs[i].second << ','
            << (path.x_duplicate_mask[i] ? 1 : 0) << '\n';
}

}  // namespace mtp
