#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "wtpm/missingness.hpp"
#include "wtpm/tensors.hpp"

namespace wtpm {

using PairCounts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using TripleCounts = Dense3<std::int64_t>;

inline constexpr std::int64_t kDefaultMinCount = 3;

// Empirical second and third moment tensors together with how many samples
// contributed to each entry.
struct MomentPair {
    SymMatrix s;
    SymTensor3 t;
    PairCounts pair_counts;
    TripleCounts triple_counts;
    Eigen::VectorXd mean;

    // Wraps analytically constructed tensors; counts and mean are zeroed.
    static MomentPair from_st(SymMatrix s_, SymTensor3 t_);

    int dim() const { return s.dim(); }
};

// Per-dimension average over observed entries only.
Eigen::VectorXd masked_mean(const MaskedDataset& ds);

// Entry (i, j) averages x_i * x_j over samples where both are observed.
std::pair<SymMatrix, PairCounts> masked_raw_moment2(const MaskedDataset& ds,
                                                    std::int64_t min_count = kDefaultMinCount);

// Triple analog of masked_raw_moment2.
std::pair<SymTensor3, TripleCounts> masked_raw_moment3(const MaskedDataset& ds,
                                                       std::int64_t min_count = kDefaultMinCount);

// Plug-in (1/N) covariance over pairwise-complete samples; each entry uses
// means computed on its own jointly-observed subset.
std::pair<SymMatrix, PairCounts> masked_cov(const MaskedDataset& ds,
                                            std::int64_t min_count = kDefaultMinCount);

// Plug-in third central cross-cumulant over triplewise-complete samples with
// triplewise means.
std::pair<SymTensor3, TripleCounts> masked_cum3(const MaskedDataset& ds,
                                                std::int64_t min_count = kDefaultMinCount);

// Gaussian-mixture assembly: S = raw2 - diag(sigma2), and raw3 minus the
// noise-mean correction on diagonal slices. sigma2 is per-dimension so the
// same code path serves rescaled (elliptical) inputs; spherical callers pass
// a constant vector.
std::pair<SymMatrix, SymTensor3> gm_assemble(const Eigen::VectorXd& mean, const SymMatrix& raw2,
                                             const SymTensor3& raw3,
                                             const Eigen::VectorXd& sigma2);

// Gamma-Poisson assembly: S = cov - diag(mean), and cum3 with the
// Kronecker-delta correction terms.
std::pair<SymMatrix, SymTensor3> gp_assemble(const Eigen::VectorXd& mean, const SymMatrix& cov,
                                             const SymTensor3& cum3);

MomentPair gm_moments(const MaskedDataset& ds, int k, double sigma2,
                      std::int64_t min_count = kDefaultMinCount);

MomentPair gp_moments(const MaskedDataset& ds, std::int64_t min_count = kDefaultMinCount);

}  // namespace wtpm
