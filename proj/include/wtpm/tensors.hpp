#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wtpm/errors.hpp"

namespace wtpm {

// Dense order-3 cube with no symmetry requirement.
template <typename T>
class Dense3 {
public:
    Dense3() = default;
    explicit Dense3(int dim, T fill = T{})
        : dim_(dim), v_(static_cast<std::size_t>(dim) * dim * dim, fill) {
        if (dim < 0) throw InvalidInput("Dense3: negative dimension");
    }

    int dim() const { return dim_; }
    T operator()(int i, int j, int k) const { return v_[index(i, j, k)]; }
    T& operator()(int i, int j, int k) { return v_[index(i, j, k)]; }
    const std::vector<T>& data() const { return v_; }
    std::vector<T>& data() { return v_; }

private:
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
    }

    int dim_ = 0;
    std::vector<T> v_;
};

using Tensor3 = Dense3<double>;

// Symmetric D×D matrix. Construction symmetrizes by averaging and rejects
// inputs whose asymmetry exceeds `asym_tol` relative to the largest entry.
// Immutable after construction.
class SymMatrix {
public:
    explicit SymMatrix(const Eigen::MatrixXd& m, double asym_tol = 1e-8);

    static SymMatrix zero(int dim);
    // f is evaluated once per i <= j and mirrored, so the result is exactly
    // symmetric with no tolerance check.
    static SymMatrix from_upper(int dim, const std::function<double(int, int)>& f);

    int dim() const { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Eigen::MatrixXd& mat() const { return m_; }

private:
    struct exact_tag {};
    SymMatrix(Eigen::MatrixXd m, exact_tag) : m_(std::move(m)) {}

    Eigen::MatrixXd m_;
};

// Symmetric order-3 tensor, same construction contract as SymMatrix but over
// all six index permutations.
class SymTensor3 {
public:
    explicit SymTensor3(const Tensor3& t, double asym_tol = 1e-8);

    static SymTensor3 zero(int dim);
    // f is evaluated once per i <= j <= k and mirrored to all permutations.
    static SymTensor3 from_unique(int dim, const std::function<double(int, int, int)>& f);

    int dim() const { return t_.dim(); }
    double operator()(int i, int j, int k) const { return t_(i, j, k); }
    const Tensor3& tensor() const { return t_; }
    double frobenius_norm() const;

private:
    struct exact_tag {};
    SymTensor3(Tensor3 t, exact_tag) : t_(std::move(t)) {}

    Tensor3 t_;
};

struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;   // sorted descending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns, order matching eigenvalues
};

// Full spectral decomposition of a symmetric matrix.
EigenDecomposition sym_eig(const SymMatrix& m);

// Moore-Penrose pseudoinverse; singular values below 1e-12 * sigma_max are
// treated as zero.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m);

// result[a][b][c] = sum_{i,j,k} t[i][j][k] * m1[i][a] * m2[j][b] * m3[k][c].
// All three matrices must be D×K with D = t.dim().
Tensor3 tensor_contract(const SymTensor3& t, const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2,
                        const Eigen::MatrixXd& m3);

// v ⊗ v ⊗ v
SymTensor3 outer3(const Eigen::VectorXd& v);

double frobenius_norm(const Tensor3& t);

}  // namespace wtpm
