#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wtpm/missingness.hpp"
#include "wtpm/moments.hpp"

namespace wtpm {

enum class WeightStrategy {
    full,          // w_d = 1 everywhere: the unweighted pipeline
    partial,       // keep only dimensions with p_d == 1, drop the rest
    proportional,  // w_d = p_d
    sqrt           // w_d = sqrt(p_d)
};

// Library-level names.
const char* to_string(WeightStrategy s);
// CLI-level names: full, partial, wtpm-p, wtpm-sqrtp.
std::optional<WeightStrategy> strategy_from_cli(std::string_view name);
const char* cli_name(WeightStrategy s);

struct WeightVector {
    Eigen::VectorXd w;
    WeightStrategy strategy;

    int dim() const { return static_cast<int>(w.size()); }
};

WeightVector compute_weights(const PresenceProbabilities& p, WeightStrategy strategy);

// S*_{ij} = w_i w_j S_{ij}, T*_{ijk} = w_i w_j w_k T_{ijk}; counts carried
// through unchanged, the mean rescaled entry-wise. Under the partial strategy
// the moments are instead restricted to the kept (w_d == 1) dimensions so the
// decomposition runs at reduced dimensionality.
MomentPair weight_moments(const MomentPair& m, const WeightVector& w);

struct UnweightedTopics {
    Eigen::MatrixXd a;              // D×K in the ambient dimension; absent rows are zero
    std::vector<bool> row_present;  // false exactly where w_d == 0
};

// Divides row d by w_d. Rows with w_d == 0 (dropped by the partial strategy)
// come back zeroed and flagged absent rather than as infinities; for the
// partial strategy the input rows are re-expanded to the ambient dimension.
UnweightedTopics unweight_topics(const Eigen::MatrixXd& a_star, const WeightVector& w);

}  // namespace wtpm
