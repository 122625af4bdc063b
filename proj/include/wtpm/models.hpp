#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wtpm/missingness.hpp"
#include "wtpm/spectral.hpp"
#include "wtpm/weighting.hpp"

namespace wtpm {

// Spherical Gaussian mixture: component means A (columns), mixing weights pi,
// shared per-dimension variance sigma2.
struct GMParams {
    Eigen::MatrixXd a;
    Eigen::VectorXd pi;
    double sigma2;

    GMParams(Eigen::MatrixXd a_, Eigen::VectorXd pi_, double sigma2_);

    int dim() const { return static_cast<int>(a.rows()); }
    int components() const { return static_cast<int>(a.cols()); }
};

// Gamma-Poisson: topics A (columns sum to one), per-topic Gamma shape c,
// shared Gamma rate b. s, t and the mean document length l are derived.
struct GPParams {
    Eigen::MatrixXd a;
    Eigen::VectorXd c;
    double b;
    Eigen::VectorXd s;  // s_k = c_k / b^2
    Eigen::VectorXd t;  // t_k = 2 c_k / b^3
    double l;           // sum_k c_k / b

    GPParams(Eigen::MatrixXd a_, Eigen::VectorXd c_, double b_);

    int dim() const { return static_cast<int>(a.rows()); }
    int components() const { return static_cast<int>(a.cols()); }
};

// n columns, each drawn by picking a component from pi and adding spherical
// noise. Per-column substreams; the mask is all-true.
MaskedDataset sample_gm(const GMParams& params, int n, std::uint64_t rng_seed);

// n columns of counts: alpha_k ~ Gamma(c_k, b), x_d ~ Poisson([A alpha]_d).
MaskedDataset sample_gp(const GPParams& params, int n, std::uint64_t rng_seed);

// Mean of the (dim - k) smallest eigenvalues of a covariance matrix.
double sigma2_from_cov(const SymMatrix& cov, int k);

// Noise-variance estimate from the complete-dimension submatrix only.
double estimate_sigma2_complete(const MaskedDataset& ds, int k);

struct GmRecovery {
    GMParams params;
    std::vector<bool> row_present;         // false where the partial strategy dropped the row
    std::vector<bool> row_low_confidence;  // present rows rescaled by w_d < 1
};

struct GpRecovery {
    GPParams params;
    std::vector<bool> row_present;
    std::vector<bool> row_low_confidence;
    std::vector<bool> column_had_negatives;  // negatives beyond round-off were left in place
};

// pi_k = 1/lambda_k^2 renormalized onto the simplex; means are the unweighted
// recovered columns; sigma2 is passed through.
GmRecovery recover_gm(const SpectralResult& sr, const WeightVector& w, double sigma2);

// Unweights rows, clamps round-off negatives, normalizes columns to sum one,
// then inverts the Gamma cumulants: b = mean_k(2 s_k / t_k), c_k = s_k b^2.
GpRecovery recover_gp(const SpectralResult& sr, const WeightVector& w);

}  // namespace wtpm
