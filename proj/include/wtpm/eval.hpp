#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wtpm/models.hpp"

namespace wtpm {

struct MatchResult {
    std::vector<int> permutation;  // permutation[j] = column of a_hat matched to truth column j
    std::vector<double> angles;    // per matched pair, in [0, pi]
    double total;                  // sum of angles
};

// Bijection minimizing the total angle between matched columns, solved as an
// exact assignment problem on the K×K angle-cost matrix.
std::vector<int> match_columns(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true);

MatchResult match_and_score(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true);

// Reconstruction error on the complete dimensions: restrict both matrices to
// complete_dims rows, match columns, and sum the angles between matched pairs.
double epsilon_c(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true,
                 const std::vector<int>& complete_dims);

// Sum over samples of log sum_k pi_k N(x; a_k, sigma2 I), evaluated in
// log-space. ds must be fully observed on its dimensions.
double gm_holdout_loglik(const GMParams& params, const MaskedDataset& ds);

}  // namespace wtpm
