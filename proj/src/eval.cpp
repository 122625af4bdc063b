#include "wtpm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wtpm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Angle between directions, equal to acos of the clamped cosine but computed
// from the normalized difference and sum so it stays accurate near 0 and pi.
double column_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw InvalidInput("column angle: zero column");
    const Eigen::VectorXd uh = u / nu;
    const Eigen::VectorXd vh = v / nv;
    return 2.0 * std::atan2((uh - vh).norm(), (uh + vh).norm());
}

// Exact min-cost assignment via shortest augmenting paths with potentials,
// O(n^3). Returns row assigned to each column.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_of_col(n);
    for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
    return row_of_col;
}

}  // namespace

std::vector<int> match_columns(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true) {
    if (a_hat.rows() != a_true.rows() || a_hat.cols() != a_true.cols())
        throw ShapeError("match_columns: shape mismatch");
    const int k = static_cast<int>(a_hat.cols());
    if (k == 0) throw InvalidInput("match_columns: no columns");
    Eigen::MatrixXd cost(k, k);  // rows: truth columns, cols: recovered columns
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) cost(r, c) = column_angle(a_true.col(r), a_hat.col(c));
    const std::vector<int> truth_of_hat = solve_assignment(cost);
    std::vector<int> perm(k);
    for (int c = 0; c < k; ++c) perm[truth_of_hat[c]] = c;
    return perm;
}

MatchResult match_and_score(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true) {
    MatchResult out;
    out.permutation = match_columns(a_hat, a_true);
    const int k = static_cast<int>(a_true.cols());
    out.angles.resize(k);
    out.total = 0.0;
    for (int j = 0; j < k; ++j) {
        out.angles[j] = column_angle(a_hat.col(out.permutation[j]), a_true.col(j));
        out.total += out.angles[j];
    }
    return out;
}

double epsilon_c(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true,
                 const std::vector<int>& complete_dims) {
    if (a_hat.cols() != a_true.cols()) throw ShapeError("epsilon_c: column count mismatch");
    if (complete_dims.empty()) throw InvalidInput("epsilon_c: no complete dimensions");
    const int dc = static_cast<int>(complete_dims.size());
    const int k = static_cast<int>(a_true.cols());
    Eigen::MatrixXd hat_c(dc, k), true_c(dc, k);
    for (int i = 0; i < dc; ++i) {
        const int row = complete_dims[i];
        if (row < 0 || row >= a_hat.rows() || row >= a_true.rows())
            throw InvalidInput("epsilon_c: complete dimension out of range");
        hat_c.row(i) = a_hat.row(row);
        true_c.row(i) = a_true.row(row);
    }
    return match_and_score(hat_c, true_c).total;
}

double gm_holdout_loglik(const GMParams& params, const MaskedDataset& ds) {
    if (!(params.sigma2 > 0.0)) throw InvalidInput("gm_holdout_loglik: sigma2 must be positive");
    if (params.dim() != ds.dim()) throw ShapeError("gm_holdout_loglik: dimension mismatch");
    if (!ds.mask.all()) throw InvalidInput("gm_holdout_loglik: data must be fully observed");
    const int d = ds.dim();
    const int k = params.components();
    const double log_norm = -0.5 * d * std::log(2.0 * kPi * params.sigma2);
    Eigen::VectorXd log_pi = params.pi.array().log();

    double total = 0.0;
    Eigen::VectorXd terms(k);
    for (int n = 0; n < ds.samples(); ++n) {
        for (int j = 0; j < k; ++j) {
            const double sq = (ds.values.col(n) - params.a.col(j)).squaredNorm();
            terms(j) = log_pi(j) + log_norm - sq / (2.0 * params.sigma2);
        }
        const double m = terms.maxCoeff();
        total += m + std::log((terms.array() - m).exp().sum());
    }
    return total;
}

}  // namespace wtpm
