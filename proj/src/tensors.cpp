#include "wtpm/tensors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace wtpm {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m, double asym_tol) {
    if (m.rows() != m.cols()) throw ShapeError("SymMatrix: input is not square");
    if (m.size() == 0) throw InvalidInput("SymMatrix: empty input");
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > asym_tol * scale) {
        throw InvalidInput("SymMatrix: asymmetry " + std::to_string(asym) +
                           " exceeds tolerance for scale " + std::to_string(scale));
    }
    m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zero(int dim) {
    if (dim <= 0) throw InvalidInput("SymMatrix::zero: dimension must be positive");
    return SymMatrix(Eigen::MatrixXd::Zero(dim, dim), exact_tag{});
}

SymMatrix SymMatrix::from_upper(int dim, const std::function<double(int, int)>& f) {
    if (dim <= 0) throw InvalidInput("SymMatrix::from_upper: dimension must be positive");
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const double v = f(i, j);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return SymMatrix(std::move(m), exact_tag{});
}

SymTensor3::SymTensor3(const Tensor3& t, double asym_tol) {
    const int d = t.dim();
    if (d <= 0) throw InvalidInput("SymTensor3: empty input");
    double scale = 0.0;
    for (double v : t.data()) scale = std::max(scale, std::abs(v));
    Tensor3 out(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            for (int k = j; k < d; ++k) {
                const double v0 = t(i, j, k);
                const double perms[6] = {v0,           t(i, k, j), t(j, i, k),
                                         t(j, k, i),   t(k, i, j), t(k, j, i)};
                double lo = v0, hi = v0, sum = 0.0;
                for (double p : perms) {
                    lo = std::min(lo, p);
                    hi = std::max(hi, p);
                    sum += p;
                }
                if (hi - lo > asym_tol * scale) {
                    throw InvalidInput("SymTensor3: asymmetry " + std::to_string(hi - lo) +
                                       " exceeds tolerance for scale " + std::to_string(scale));
                }
                const double v = (lo == hi) ? v0 : sum / 6.0;
                out(i, j, k) = v;
                out(i, k, j) = v;
                out(j, i, k) = v;
                out(j, k, i) = v;
                out(k, i, j) = v;
                out(k, j, i) = v;
            }
        }
    }
    t_ = std::move(out);
}

SymTensor3 SymTensor3::zero(int dim) {
    if (dim <= 0) throw InvalidInput("SymTensor3::zero: dimension must be positive");
    return SymTensor3(Tensor3(dim), exact_tag{});
}

SymTensor3 SymTensor3::from_unique(int dim, const std::function<double(int, int, int)>& f) {
    if (dim <= 0) throw InvalidInput("SymTensor3::from_unique: dimension must be positive");
    Tensor3 t(dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            for (int k = j; k < dim; ++k) {
                const double v = f(i, j, k);
                t(i, j, k) = v;
                t(i, k, j) = v;
                t(j, i, k) = v;
                t(j, k, i) = v;
                t(k, i, j) = v;
                t(k, j, i) = v;
            }
        }
    }
    return SymTensor3(std::move(t), exact_tag{});
}

double SymTensor3::frobenius_norm() const { return wtpm::frobenius_norm(t_); }

double frobenius_norm(const Tensor3& t) {
    double s = 0.0;
    for (double v : t.data()) s += v * v;
    return std::sqrt(s);
}

EigenDecomposition sym_eig(const SymMatrix& m) {
    if (!m.mat().allFinite()) throw InvalidInput("sym_eig: non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
    if (solver.info() != Eigen::Success) throw InvalidInput("sym_eig: eigensolver failed");
    const int d = m.dim();
    EigenDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors.resize(d, d);
    for (int i = 0; i < d; ++i) out.eigenvectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    return out;
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw InvalidInput("pseudoinverse: non-finite entries");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = 1e-12 * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Tensor3 tensor_contract(const SymTensor3& t, const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2,
                        const Eigen::MatrixXd& m3) {
    const int d = t.dim();
    if (m1.rows() != d || m2.rows() != d || m3.rows() != d)
        throw ShapeError("tensor_contract: matrices must have D rows");
    if (m1.cols() != m2.cols() || m2.cols() != m3.cols())
        throw ShapeError("tensor_contract: matrices must have the same column count");
    const int k = static_cast<int>(m1.cols());
    if (k <= 0) throw ShapeError("tensor_contract: matrices must have at least one column");

    // Three successive mode products: O(D^3 K + D^2 K^2 + D K^3).
    std::vector<double> u1(static_cast<std::size_t>(d) * d * k, 0.0);  // [i][j][c]
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double* row = &u1[(static_cast<std::size_t>(i) * d + j) * k];
            for (int kk = 0; kk < d; ++kk) {
                const double tv = t(i, j, kk);
                if (tv == 0.0) continue;
                for (int c = 0; c < k; ++c) row[c] += tv * m3(kk, c);
            }
        }
    }
    std::vector<double> u2(static_cast<std::size_t>(d) * k * k, 0.0);  // [i][b][c]
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double* row = &u1[(static_cast<std::size_t>(i) * d + j) * k];
            for (int b = 0; b < k; ++b) {
                const double w = m2(j, b);
                if (w == 0.0) continue;
                double* out = &u2[(static_cast<std::size_t>(i) * k + b) * k];
                for (int c = 0; c < k; ++c) out[c] += w * row[c];
            }
        }
    }
    Tensor3 result(k);
    for (int i = 0; i < d; ++i) {
        for (int a = 0; a < k; ++a) {
            const double w = m1(i, a);
            if (w == 0.0) continue;
            for (int b = 0; b < k; ++b) {
                const double* src = &u2[(static_cast<std::size_t>(i) * k + b) * k];
                for (int c = 0; c < k; ++c) result(a, b, c) += w * src[c];
            }
        }
    }
    return result;
}

SymTensor3 outer3(const Eigen::VectorXd& v) {
    const int d = static_cast<int>(v.size());
    return SymTensor3::from_unique(
        d, [&](int i, int j, int k) { return v(i) * v(j) * v(k); });
}

}  // namespace wtpm
