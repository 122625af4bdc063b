#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wtpm/errors.hpp"

namespace wtpm {

// D×N observation indicator; true = observed.
using ObservationMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Per-dimension probability of an entry being observed.
class PresenceProbabilities {
public:
    explicit PresenceProbabilities(Eigen::VectorXd p);

    int dim() const { return static_cast<int>(p_.size()); }
    double operator[](int d) const { return p_(d); }
    const Eigen::VectorXd& vec() const { return p_; }

private:
    Eigen::VectorXd p_;
};

// Data matrix plus observation mask. Unobserved entries are stored as zero
// and must be ignored by every consumer.
struct MaskedDataset {
    Eigen::MatrixXd values;         // D×N
    ObservationMask mask;           // D×N
    std::vector<int> complete_dims; // rows observed in every sample

    static MaskedDataset make(Eigen::MatrixXd values, ObservationMask mask);

    int dim() const { return static_cast<int>(values.rows()); }
    int samples() const { return static_cast<int>(values.cols()); }
};

// MCAR mask: entry (d, n) observed independently with probability p_d.
// Each column draws from its own substream, so the mask is independent of
// generation order and bit-reproducible for a given seed.
ObservationMask mcar_mask(const PresenceProbabilities& p, int n, std::uint64_t rng_seed);

// The first n_full columns are fully observed; the remaining n_partial
// columns are unobserved exactly on missing_dims.
ObservationMask block_mask(int n_full, int n_partial, const std::vector<int>& missing_dims, int d);

// Empirical presence rates: observed count per row divided by N.
PresenceProbabilities estimate_rates(const ObservationMask& mask);

}  // namespace wtpm
