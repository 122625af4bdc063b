#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wtpm/moments.hpp"
#include "wtpm/tensors.hpp"

namespace wtpm {

struct WhiteningMap {
    Eigen::MatrixXd w;                    // D×K, Wᵀ S W = I_K
    Eigen::VectorXd retained_eigenvalues; // top-K eigenvalues of S, descending
};

struct EigenPair {
    double lambda;           // positive; sign fixed by flipping the vector
    Eigen::VectorXd vector;  // unit K-vector
};

struct TpmDiagnostics {
    int restarts_used = 0;               // total restarts attempted across deflation rounds
    std::vector<int> iterations;         // per extracted eigenpair, for the winning restart
    std::vector<double> residual_norms;  // ‖Tc(I,v,v) − λv‖ against the deflated tensor
};

struct SpectralResult {
    WhiteningMap whitening;
    std::vector<EigenPair> eigenpairs;
    Eigen::MatrixXd a_hat;  // D×K unwhitened parameter matrix
    TpmDiagnostics diagnostics;
};

struct TpmOptions {
    int restarts = 25;
    int max_iters = 200;
    double tol = 1e-9;
    std::uint64_t rng_seed = 0;
};

// W = U_K diag(λ_K)^{-1/2} from the top-K eigenpairs of S. Eigenvalues at or
// below eps_rel * λ_max are unusable; if fewer than K remain the error
// reports the achievable rank.
WhiteningMap whiten(const SymMatrix& s, int k, double eps_rel = 1e-10);

// Robust tensor power method with deflation: K rounds of multi-restart
// fixed-point iteration θ ← Tc(I,θ,θ)/‖·‖, keeping the restart with the
// largest eigenvalue and deflating it out.
std::vector<EigenPair> tpm(const SymTensor3& tc, int k, const TpmOptions& opts,
                           TpmDiagnostics* diag = nullptr);

// Column k = λ_k · pinv(Wᵀ) · v_k.
Eigen::MatrixXd unwhiten(const std::vector<EigenPair>& pairs, const WhiteningMap& wm);

// Two-stage pipeline: whiten S, contract T down to K×K×K, run the power
// method, and map the eigenvectors back to the ambient dimension.
SpectralResult decompose(const MomentPair& m, int k, const TpmOptions& opts = {});

}  // namespace wtpm
