#include "wtpm/models.hpp"

#include <cmath>

#include "wtpm/rng.hpp"

namespace wtpm {

GMParams::GMParams(Eigen::MatrixXd a_, Eigen::VectorXd pi_, double sigma2_)
    : a(std::move(a_)), pi(std::move(pi_)), sigma2(sigma2_) {
    if (a.size() == 0) throw InvalidInput("GMParams: empty means matrix");
    if (pi.size() != a.cols()) throw ShapeError("GMParams: pi length must match column count");
    double sum = 0.0;
    for (int k = 0; k < pi.size(); ++k) {
        if (!(pi(k) > 0.0)) throw InvalidInput("GMParams: pi entries must be positive");
        sum += pi(k);
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidInput("GMParams: pi must sum to one");
    if (!(sigma2 > 0.0)) throw InvalidInput("GMParams: sigma2 must be positive");
}

GPParams::GPParams(Eigen::MatrixXd a_, Eigen::VectorXd c_, double b_)
    : a(std::move(a_)), c(std::move(c_)), b(b_) {
    if (a.size() == 0) throw InvalidInput("GPParams: empty topics matrix");
    if (c.size() != a.cols()) throw ShapeError("GPParams: c length must match column count");
    for (int k = 0; k < c.size(); ++k)
        if (!(c(k) > 0.0)) throw InvalidInput("GPParams: c entries must be positive");
    if (!(b > 0.0)) throw InvalidInput("GPParams: b must be positive");
    for (int k = 0; k < a.cols(); ++k) {
        if (std::abs(a.col(k).sum() - 1.0) > 1e-12)
            throw InvalidInput("GPParams: column " + std::to_string(k) + " does not sum to one");
    }
    s = c / (b * b);
    t = 2.0 * c / (b * b * b);
    l = c.sum() / b;
}

MaskedDataset sample_gm(const GMParams& params, int n, std::uint64_t rng_seed) {
    if (n < 1) throw InvalidInput("sample_gm: need at least one sample");
    const int d = params.dim();
    const double sigma = std::sqrt(params.sigma2);
    Eigen::MatrixXd values(d, n);
    for (int j = 0; j < n; ++j) {
        Rng rng = Rng::substream(rng_seed, static_cast<std::uint64_t>(j));
        const int h = rng.categorical(params.pi.data(), params.components());
        for (int i = 0; i < d; ++i) values(i, j) = params.a(i, h) + sigma * rng.normal();
    }
    return MaskedDataset::make(std::move(values), ObservationMask::Constant(d, n, true));
}

MaskedDataset sample_gp(const GPParams& params, int n, std::uint64_t rng_seed) {
    if (n < 1) throw InvalidInput("sample_gp: need at least one sample");
    if ((params.a.array() < 0.0).any())
        throw InvalidInput("sample_gp: topics must be non-negative");
    const int d = params.dim();
    const int k = params.components();
    Eigen::MatrixXd values(d, n);
    Eigen::VectorXd alpha(k);
    for (int j = 0; j < n; ++j) {
        Rng rng = Rng::substream(rng_seed, static_cast<std::uint64_t>(j));
        for (int kk = 0; kk < k; ++kk) alpha(kk) = rng.gamma(params.c(kk), params.b);
        const Eigen::VectorXd rate = params.a * alpha;
        for (int i = 0; i < d; ++i) values(i, j) = static_cast<double>(rng.poisson(rate(i)));
    }
    return MaskedDataset::make(std::move(values), ObservationMask::Constant(d, n, true));
}

double sigma2_from_cov(const SymMatrix& cov, int k) {
    const int d = cov.dim();
    if (k < 0 || k >= d)
        throw NotIdentifiable("sigma2_from_cov: need more dimensions than components");
    const EigenDecomposition eig = sym_eig(cov);
    return eig.eigenvalues.tail(d - k).mean();
}

double estimate_sigma2_complete(const MaskedDataset& ds, int k) {
    const int dc = static_cast<int>(ds.complete_dims.size());
    if (dc <= k)
        throw NotIdentifiable("estimate_sigma2_complete: " + std::to_string(dc) +
                              " complete dimensions cannot identify sigma2 with K = " +
                              std::to_string(k));
    const int n = ds.samples();
    if (n < 2) throw InvalidInput("estimate_sigma2_complete: need at least two samples");
    Eigen::MatrixXd xc(dc, n);
    for (int i = 0; i < dc; ++i) xc.row(i) = ds.values.row(ds.complete_dims[i]);
    const Eigen::VectorXd mu = xc.rowwise().mean();
    xc.colwise() -= mu;
    const Eigen::MatrixXd cov = (xc * xc.transpose()) / static_cast<double>(n);
    return sigma2_from_cov(SymMatrix(cov), k);
}

GmRecovery recover_gm(const SpectralResult& sr, const WeightVector& w, double sigma2) {
    const int k = static_cast<int>(sr.eigenpairs.size());
    if (k == 0) throw InvalidInput("recover_gm: empty spectral result");
    Eigen::VectorXd pi(k);
    for (int i = 0; i < k; ++i) {
        const double lambda = sr.eigenpairs[i].lambda;
        if (!(lambda > 0.0))
            throw RecoveryError(i, "non-positive eigenvalue " + std::to_string(lambda));
        pi(i) = 1.0 / (lambda * lambda);
    }
    pi /= pi.sum();
    UnweightedTopics ut = unweight_topics(sr.a_hat, w);
    std::vector<bool> low_conf(w.dim(), false);
    for (int i = 0; i < w.dim(); ++i) low_conf[i] = ut.row_present[i] && w.w(i) < 1.0;
    return GmRecovery{GMParams(std::move(ut.a), std::move(pi), sigma2),
                      std::move(ut.row_present), std::move(low_conf)};
}

GpRecovery recover_gp(const SpectralResult& sr, const WeightVector& w) {
    const int k = static_cast<int>(sr.eigenpairs.size());
    if (k == 0) throw InvalidInput("recover_gp: empty spectral result");
    UnweightedTopics ut = unweight_topics(sr.a_hat, w);
    const int d = static_cast<int>(ut.a.rows());

    std::vector<bool> had_negatives(k, false);
    Eigen::VectorXd s(k), t(k);
    for (int col = 0; col < k; ++col) {
        const double colmax = ut.a.col(col).maxCoeff();
        for (int i = 0; i < d; ++i) {
            const double v = ut.a(i, col);
            if (v < 0.0) {
                if (v > -1e-8 * colmax) {
                    ut.a(i, col) = 0.0;  // round-off only
                } else {
                    had_negatives[col] = true;
                }
            }
        }
        const double colsum = ut.a.col(col).sum();
        if (!(colsum > 0.0)) throw RecoveryError(col, "non-positive column sum");
        const double lambda = sr.eigenpairs[col].lambda;
        if (!(lambda > 0.0))
            throw RecoveryError(col, "non-positive eigenvalue " + std::to_string(lambda));
        // Column scale is t_k/s_k and the tensor eigenvalue is t_k/s_k^{3/2}.
        const double root_s = colsum / lambda;
        s(col) = root_s * root_s;
        t(col) = lambda * s(col) * root_s;
        ut.a.col(col) /= colsum;
    }

    double b = 0.0;
    for (int col = 0; col < k; ++col) b += 2.0 * s(col) / t(col);
    b /= static_cast<double>(k);
    Eigen::VectorXd c = s * (b * b);

    std::vector<bool> low_conf(w.dim(), false);
    for (int i = 0; i < w.dim(); ++i) low_conf[i] = ut.row_present[i] && w.w(i) < 1.0;
    return GpRecovery{GPParams(std::move(ut.a), std::move(c), b), std::move(ut.row_present),
                      std::move(low_conf), std::move(had_negatives)};
}

}  // namespace wtpm
