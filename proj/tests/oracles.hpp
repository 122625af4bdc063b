// Test-only analytic oracles, kept independent of the implementation paths
// they check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "wtpm/rng.hpp"
#include "wtpm/tensors.hpp"

namespace oracle {

// Population quantities for a spherical (or, with a vector sigma2,
// per-dimension diagonal) Gaussian mixture.
struct GmPopulation {
    Eigen::VectorXd mean;      // A pi
    wtpm::SymMatrix raw2;      // E[x x^T]
    wtpm::SymTensor3 raw3;     // E[x ⊗ x ⊗ x]
    wtpm::SymMatrix s;         // sum_k pi_k a_k a_k^T
    wtpm::SymTensor3 t;        // sum_k pi_k a_k^{⊗3}
};

inline GmPopulation gm_population(const Eigen::MatrixXd& a, const Eigen::VectorXd& pi,
                                  const Eigen::VectorXd& sigma2) {
    const int d = static_cast<int>(a.rows());
    const int k = static_cast<int>(a.cols());
    Eigen::VectorXd mean = a * pi;
    Eigen::MatrixXd s_mat = Eigen::MatrixXd::Zero(d, d);
    for (int c = 0; c < k; ++c) s_mat += pi(c) * a.col(c) * a.col(c).transpose();
    wtpm::SymMatrix s(s_mat);
    wtpm::SymMatrix raw2(s_mat + Eigen::MatrixXd(sigma2.asDiagonal()));
    wtpm::SymTensor3 t = wtpm::SymTensor3::from_unique(d, [&](int i, int j, int l) {
        double v = 0.0;
        for (int c = 0; c < k; ++c) v += pi(c) * a(i, c) * a(j, c) * a(l, c);
        return v;
    });
    wtpm::SymTensor3 raw3 = wtpm::SymTensor3::from_unique(d, [&](int i, int j, int l) {
        double v = t(i, j, l);
        if (j == l) v += mean(i) * sigma2(j);
        if (i == l) v += mean(j) * sigma2(i);
        if (i == j) v += mean(l) * sigma2(i);
        return v;
    });
    return GmPopulation{std::move(mean), std::move(raw2), std::move(raw3), std::move(s),
                        std::move(t)};
}

inline GmPopulation gm_population(const Eigen::MatrixXd& a, const Eigen::VectorXd& pi,
                                  double sigma2) {
    return gm_population(a, pi, Eigen::VectorXd::Constant(a.rows(), sigma2));
}

// Population quantities for the Gamma-Poisson model.
struct GpPopulation {
    Eigen::VectorXd mean;   // A c / b
    wtpm::SymMatrix cov;    // diag(mean) + S
    wtpm::SymTensor3 cum3;  // third joint cumulant of the counts
    wtpm::SymMatrix s;      // sum_k (c_k/b^2) a_k a_k^T
    wtpm::SymTensor3 t;     // sum_k (2 c_k/b^3) a_k^{⊗3}
};

inline GpPopulation gp_population(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double b) {
    const int d = static_cast<int>(a.rows());
    const int k = static_cast<int>(a.cols());
    Eigen::VectorXd mean = a * c / b;
    Eigen::MatrixXd s_mat = Eigen::MatrixXd::Zero(d, d);
    for (int col = 0; col < k; ++col)
        s_mat += (c(col) / (b * b)) * a.col(col) * a.col(col).transpose();
    wtpm::SymMatrix s(s_mat);
    wtpm::SymMatrix cov(s_mat + Eigen::MatrixXd(mean.asDiagonal()));
    wtpm::SymTensor3 t = wtpm::SymTensor3::from_unique(d, [&](int i, int j, int l) {
        double v = 0.0;
        for (int col = 0; col < k; ++col)
            v += (2.0 * c(col) / (b * b * b)) * a(i, col) * a(j, col) * a(l, col);
        return v;
    });
    // Law of total cumulance for conditionally independent Poisson counts.
    wtpm::SymTensor3 cum3 = wtpm::SymTensor3::from_unique(d, [&](int i, int j, int l) {
        double v = t(i, j, l);
        if (i == j && j == l) v += mean(i);
        if (j == l) v += s_mat(i, j);
        if (i == l) v += s_mat(i, j);
        if (i == j) v += s_mat(i, l);
        return v;
    });
    return GpPopulation{std::move(mean), std::move(cov), std::move(cum3), std::move(s),
                        std::move(t)};
}

// Brute-force six-loop contraction.
inline wtpm::Tensor3 contract_oracle(const wtpm::SymTensor3& t, const Eigen::MatrixXd& m1,
                                     const Eigen::MatrixXd& m2, const Eigen::MatrixXd& m3) {
    const int d = t.dim();
    const int k = static_cast<int>(m1.cols());
    wtpm::Tensor3 out(k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c) {
                double acc = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        for (int l = 0; l < d; ++l)
                            acc += t(i, j, l) * m1(i, a) * m2(j, b) * m3(l, c);
                out(a, b, c) = acc;
            }
    return out;
}

inline double angle_between(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const double c = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
    return std::acos(c);
}

// Exhaustive assignment: permutation[j] = column of a_hat matched to truth
// column j, minimizing the total angle.
inline std::vector<int> brute_force_match(const Eigen::MatrixXd& a_hat,
                                          const Eigen::MatrixXd& a_true, double* best_total) {
    const int k = static_cast<int>(a_true.cols());
    std::vector<int> perm(k), best(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (int j = 0; j < k; ++j) cost += angle_between(a_hat.col(perm[j]), a_true.col(j));
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best_total) *best_total = best_cost;
    return best;
}

// Direct mixture density evaluation, no log-space tricks.
inline double direct_gm_loglik(const Eigen::MatrixXd& a, const Eigen::VectorXd& pi, double sigma2,
                               const Eigen::MatrixXd& x) {
    const int d = static_cast<int>(x.rows());
    const int k = static_cast<int>(a.cols());
    const double norm = std::pow(2.0 * 3.14159265358979323846 * sigma2, -0.5 * d);
    double total = 0.0;
    for (int n = 0; n < x.cols(); ++n) {
        double density = 0.0;
        for (int j = 0; j < k; ++j) {
            const double sq = (x.col(n) - a.col(j)).squaredNorm();
            density += pi(j) * norm * std::exp(-sq / (2.0 * sigma2));
        }
        total += std::log(density);
    }
    return total;
}

inline Eigen::MatrixXd random_gaussian_matrix(int rows, int cols, double stddev, wtpm::Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = stddev * rng.normal();
    return m;
}

inline Eigen::MatrixXd random_orthonormal(int dim, int k, wtpm::Rng& rng) {
    const Eigen::MatrixXd g = random_gaussian_matrix(dim, k, 1.0, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, k);
    return q;
}

inline Eigen::VectorXd random_simplex(int k, wtpm::Rng& rng) {
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) v(i) = rng.exponential();
    return v / v.sum();
}

inline Eigen::MatrixXd random_dirichlet_columns(int d, int k, wtpm::Rng& rng) {
    Eigen::MatrixXd a(d, k);
    for (int j = 0; j < k; ++j) a.col(j) = random_simplex(d, rng);
    return a;
}

inline double rel_frobenius_diff(const wtpm::SymMatrix& a, const wtpm::SymMatrix& b) {
    return (a.mat() - b.mat()).norm() / std::max(1.0, b.mat().norm());
}

inline double rel_frobenius_diff(const wtpm::SymTensor3& a, const wtpm::SymTensor3& b) {
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.tensor().data().size(); ++i) {
        const double d = a.tensor().data()[i] - b.tensor().data()[i];
        diff += d * d;
        ref += b.tensor().data()[i] * b.tensor().data()[i];
    }
    return std::sqrt(diff) / std::max(1.0, std::sqrt(ref));
}

}  // namespace oracle
