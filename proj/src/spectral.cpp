#include "wtpm/spectral.hpp"

#include <cmath>
#include <limits>

#include "wtpm/rng.hpp"

namespace wtpm {

namespace {

// u_i = sum_{j,k} t[i][j][k] θ_j θ_k over a mutable K×K×K buffer.
Eigen::VectorXd apply_two(const Tensor3& t, const Eigen::VectorXd& theta) {
    const int k = t.dim();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < k; ++i) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) {
            const double tj = theta(j);
            if (tj == 0.0) continue;
            double inner = 0.0;
            for (int l = 0; l < k; ++l) inner += t(i, j, l) * theta(l);
            acc += tj * inner;
        }
        u(i) = acc;
    }
    return u;
}

Eigen::VectorXd random_unit(Rng& rng, int k) {
    Eigen::VectorXd v(k);
    for (;;) {
        for (int i = 0; i < k; ++i) v(i) = rng.normal();
        const double n = v.norm();
        if (n > 0.0) return v / n;
    }
}

}  // namespace

WhiteningMap whiten(const SymMatrix& s, int k, double eps_rel) {
    if (k < 1) throw InvalidInput("whiten: K must be positive");
    const EigenDecomposition eig = sym_eig(s);
    const double lambda_max = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
    const double eps = eps_rel * std::max(lambda_max, 0.0);
    int achievable = 0;
    while (achievable < s.dim() && eig.eigenvalues(achievable) > eps) ++achievable;
    if (achievable < k) throw RankDeficient(k, achievable);

    WhiteningMap wm;
    wm.retained_eigenvalues = eig.eigenvalues.head(k);
    wm.w.resize(s.dim(), k);
    for (int i = 0; i < k; ++i)
        wm.w.col(i) = eig.eigenvectors.col(i) / std::sqrt(eig.eigenvalues(i));
    return wm;
}

std::vector<EigenPair> tpm(const SymTensor3& tc, int k, const TpmOptions& opts,
                           TpmDiagnostics* diag) {
    const int dim = tc.dim();
    if (k < 1) throw InvalidInput("tpm: K must be positive");
    if (opts.restarts < 1 || opts.max_iters < 1 || !(opts.tol > 0.0))
        throw InvalidInput("tpm: bad options");

    Tensor3 work = tc.tensor();
    std::vector<EigenPair> pairs;
    TpmDiagnostics local;

    for (int round = 0; round < k; ++round) {
        bool have_best = false;
        Eigen::VectorXd best_theta;
        double best_lambda = -std::numeric_limits<double>::infinity();
        int best_iters = 0;
        double best_residual = std::numeric_limits<double>::infinity();  // over all restarts

        for (int restart = 0; restart < opts.restarts; ++restart) {
            Rng rng = Rng::substream(substream_seed(opts.rng_seed, round), restart);
            Eigen::VectorXd theta = random_unit(rng, dim);
            bool converged = false;
            int iters = 0;
            for (; iters < opts.max_iters; ++iters) {
                Eigen::VectorXd next = apply_two(work, theta);
                const double n = next.norm();
                if (n == 0.0) break;  // dead direction, e.g. fully deflated tensor
                next /= n;
                if ((next - theta).norm() < opts.tol) {
                    theta = next;
                    converged = true;
                    break;
                }
                theta = next;
            }
            local.restarts_used += 1;
            Eigen::VectorXd image = apply_two(work, theta);
            double lambda = theta.dot(image);
            if (lambda < 0.0) {
                theta = -theta;
                image = apply_two(work, theta);
                lambda = -lambda;
            }
            const double residual = (image - lambda * theta).norm();
            best_residual = std::min(best_residual, residual);
            if (!converged) continue;
            if (!have_best || lambda > best_lambda) {
                have_best = true;
                best_lambda = lambda;
                best_theta = theta;
                best_iters = iters;
            }
        }
        if (!have_best) throw ConvergenceFailure(best_residual);

        const Eigen::VectorXd image = apply_two(work, best_theta);
        local.iterations.push_back(best_iters);
        local.residual_norms.push_back((image - best_lambda * best_theta).norm());
        pairs.push_back(EigenPair{best_lambda, best_theta});

        // Deflate by the recovered rank-1 term, keeping the buffer exactly
        // symmetric by updating unique entries and mirroring.
        for (int i = 0; i < dim; ++i) {
            for (int j = i; j < dim; ++j) {
                for (int l = j; l < dim; ++l) {
                    const double v =
                        work(i, j, l) - best_lambda * best_theta(i) * best_theta(j) * best_theta(l);
                    work(i, j, l) = v;
                    work(i, l, j) = v;
                    work(j, i, l) = v;
                    work(j, l, i) = v;
                    work(l, i, j) = v;
                    work(l, j, i) = v;
                }
            }
        }
    }
    if (diag) *diag = std::move(local);
    return pairs;
}

Eigen::MatrixXd unwhiten(const std::vector<EigenPair>& pairs, const WhiteningMap& wm) {
    const int k = static_cast<int>(pairs.size());
    if (k == 0) throw ShapeError("unwhiten: no eigenpairs");
    if (wm.w.cols() != k) throw ShapeError("unwhiten: eigenpair count does not match W");
    const Eigen::MatrixXd back = pseudoinverse(wm.w.transpose());  // D×K
    Eigen::MatrixXd a_hat(wm.w.rows(), k);
    for (int i = 0; i < k; ++i) {
        if (pairs[i].vector.size() != k) throw ShapeError("unwhiten: eigenvector length mismatch");
        a_hat.col(i) = pairs[i].lambda * (back * pairs[i].vector);
    }
    return a_hat;
}

SpectralResult decompose(const MomentPair& m, int k, const TpmOptions& opts) {
    SpectralResult out;
    out.whitening = whiten(m.s, k);
    const SymTensor3 tc(tensor_contract(m.t, out.whitening.w, out.whitening.w, out.whitening.w));
    out.eigenpairs = tpm(tc, k, opts, &out.diagnostics);
    out.a_hat = unwhiten(out.eigenpairs, out.whitening);
    return out;
}

}  // namespace wtpm
