#include "wtpm/moments.hpp"

#include <cmath>
#include <vector>

namespace wtpm {

namespace {

// Packed index over i <= j <= k triples.
class TripleIndexer {
public:
    explicit TripleIndexer(int d) : d_(d), pair_base_(static_cast<std::size_t>(d) * d, 0) {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                pair_base_[static_cast<std::size_t>(i) * d + j] = idx;
                idx += static_cast<std::size_t>(d - j);
            }
        }
        count_ = idx;
    }

    std::size_t operator()(int i, int j, int k) const {
        return pair_base_[static_cast<std::size_t>(i) * d_ + j] + static_cast<std::size_t>(k - j);
    }
    std::size_t count() const { return count_; }

private:
    int d_;
    std::size_t count_ = 0;
    std::vector<std::size_t> pair_base_;
};

std::vector<int> observed_dims(const MaskedDataset& ds, int col) {
    std::vector<int> obs;
    obs.reserve(ds.dim());
    for (int i = 0; i < ds.dim(); ++i)
        if (ds.mask(i, col)) obs.push_back(i);
    return obs;
}

void check_non_empty(const MaskedDataset& ds) {
    if (ds.dim() == 0 || ds.samples() == 0) throw InvalidInput("empty dataset");
}

}  // namespace

MomentPair MomentPair::from_st(SymMatrix s_, SymTensor3 t_) {
    if (s_.dim() != t_.dim()) throw ShapeError("MomentPair: S and T dimensions differ");
    const int d = s_.dim();
    return MomentPair{std::move(s_), std::move(t_), PairCounts::Zero(d, d), TripleCounts(d),
                      Eigen::VectorXd::Zero(d)};
}

Eigen::VectorXd masked_mean(const MaskedDataset& ds) {
    check_non_empty(ds);
    const int d = ds.dim();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd count = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < ds.samples(); ++j) {
        for (int i = 0; i < d; ++i) {
            if (ds.mask(i, j)) {
                sum(i) += ds.values(i, j);
                count(i) += 1.0;
            }
        }
    }
    for (int i = 0; i < d; ++i)
        if (count(i) == 0.0) throw DegenerateDimension(i);
    return sum.cwiseQuotient(count);
}

std::pair<SymMatrix, PairCounts> masked_raw_moment2(const MaskedDataset& ds,
                                                    std::int64_t min_count) {
    check_non_empty(ds);
    const int d = ds.dim();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    PairCounts counts = PairCounts::Zero(d, d);
    for (int n = 0; n < ds.samples(); ++n) {
        const std::vector<int> obs = observed_dims(ds, n);
        for (std::size_t a = 0; a < obs.size(); ++a) {
            const int i = obs[a];
            const double xi = ds.values(i, n);
            for (std::size_t b = a; b < obs.size(); ++b) {
                const int j = obs[b];
                acc(i, j) += xi * ds.values(j, n);
                counts(i, j) += 1;
            }
        }
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            if (counts(i, j) < min_count) throw InsufficientPairData(i, j, counts(i, j), min_count);
            counts(j, i) = counts(i, j);
        }
    }
    SymMatrix m = SymMatrix::from_upper(
        d, [&](int i, int j) { return acc(i, j) / static_cast<double>(counts(i, j)); });
    return {std::move(m), std::move(counts)};
}

std::pair<SymTensor3, TripleCounts> masked_raw_moment3(const MaskedDataset& ds,
                                                       std::int64_t min_count) {
    check_non_empty(ds);
    const int d = ds.dim();
    const TripleIndexer tix(d);
    std::vector<double> acc(tix.count(), 0.0);
    std::vector<std::int64_t> cnt(tix.count(), 0);
    for (int n = 0; n < ds.samples(); ++n) {
        const std::vector<int> obs = observed_dims(ds, n);
        for (std::size_t a = 0; a < obs.size(); ++a) {
            const int i = obs[a];
            const double xi = ds.values(i, n);
            for (std::size_t b = a; b < obs.size(); ++b) {
                const int j = obs[b];
                const double xij = xi * ds.values(j, n);
                const std::size_t base = tix(i, j, j);
                for (std::size_t c = b; c < obs.size(); ++c) {
                    const int k = obs[c];
                    const std::size_t idx = base + static_cast<std::size_t>(k - j);
                    acc[idx] += xij * ds.values(k, n);
                    cnt[idx] += 1;
                }
            }
        }
    }
    TripleCounts counts(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            for (int k = j; k < d; ++k) {
                const std::int64_t c = cnt[tix(i, j, k)];
                if (c < min_count) throw InsufficientTripleData(i, j, k, c, min_count);
                counts(i, j, k) = c;
                counts(i, k, j) = c;
                counts(j, i, k) = c;
                counts(j, k, i) = c;
                counts(k, i, j) = c;
                counts(k, j, i) = c;
            }
        }
    }
    SymTensor3 t = SymTensor3::from_unique(d, [&](int i, int j, int k) {
        const std::size_t idx = tix(i, j, k);
        return acc[idx] / static_cast<double>(cnt[idx]);
    });
    return {std::move(t), std::move(counts)};
}

std::pair<SymMatrix, PairCounts> masked_cov(const MaskedDataset& ds, std::int64_t min_count) {
    check_non_empty(ds);
    const int d = ds.dim();
    Eigen::MatrixXd sxy = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd sx = Eigen::MatrixXd::Zero(d, d);  // sum of x_i over the (i, j) subset
    Eigen::MatrixXd sy = Eigen::MatrixXd::Zero(d, d);  // sum of x_j over the (i, j) subset
    PairCounts counts = PairCounts::Zero(d, d);
    for (int n = 0; n < ds.samples(); ++n) {
        const std::vector<int> obs = observed_dims(ds, n);
        for (std::size_t a = 0; a < obs.size(); ++a) {
            const int i = obs[a];
            const double xi = ds.values(i, n);
            for (std::size_t b = a; b < obs.size(); ++b) {
                const int j = obs[b];
                const double xj = ds.values(j, n);
                sxy(i, j) += xi * xj;
                sx(i, j) += xi;
                sy(i, j) += xj;
                counts(i, j) += 1;
            }
        }
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            if (counts(i, j) < min_count) throw InsufficientPairData(i, j, counts(i, j), min_count);
            counts(j, i) = counts(i, j);
        }
    }
    SymMatrix m = SymMatrix::from_upper(d, [&](int i, int j) {
        const double n = static_cast<double>(counts(i, j));
        return sxy(i, j) / n - (sx(i, j) / n) * (sy(i, j) / n);
    });
    return {std::move(m), std::move(counts)};
}

std::pair<SymTensor3, TripleCounts> masked_cum3(const MaskedDataset& ds, std::int64_t min_count) {
    check_non_empty(ds);
    const int d = ds.dim();
    const TripleIndexer tix(d);
    const std::size_t m = tix.count();
    // Raw sums over each triple's jointly-observed subset; the centered
    // cumulant is recovered from these at the end.
    std::vector<double> sxyz(m, 0.0), sxy(m, 0.0), sxz(m, 0.0), syz(m, 0.0);
    std::vector<double> sx(m, 0.0), sy(m, 0.0), sz(m, 0.0);
    std::vector<std::int64_t> cnt(m, 0);
    for (int n = 0; n < ds.samples(); ++n) {
        const std::vector<int> obs = observed_dims(ds, n);
        for (std::size_t a = 0; a < obs.size(); ++a) {
            const int i = obs[a];
            const double xi = ds.values(i, n);
            for (std::size_t b = a; b < obs.size(); ++b) {
                const int j = obs[b];
                const double xj = ds.values(j, n);
                const double xij = xi * xj;
                const std::size_t base = tix(i, j, j);
                for (std::size_t c = b; c < obs.size(); ++c) {
                    const int k = obs[c];
                    const double xk = ds.values(k, n);
                    const std::size_t idx = base + static_cast<std::size_t>(k - j);
                    sxyz[idx] += xij * xk;
                    sxy[idx] += xij;
                    sxz[idx] += xi * xk;
                    syz[idx] += xj * xk;
                    sx[idx] += xi;
                    sy[idx] += xj;
                    sz[idx] += xk;
                    cnt[idx] += 1;
                }
            }
        }
    }
    TripleCounts counts(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            for (int k = j; k < d; ++k) {
                const std::int64_t c = cnt[tix(i, j, k)];
                if (c < min_count) throw InsufficientTripleData(i, j, k, c, min_count);
                counts(i, j, k) = c;
                counts(i, k, j) = c;
                counts(j, i, k) = c;
                counts(j, k, i) = c;
                counts(k, i, j) = c;
                counts(k, j, i) = c;
            }
        }
    }
    SymTensor3 t = SymTensor3::from_unique(d, [&](int i, int j, int k) {
        const std::size_t idx = tix(i, j, k);
        const double n = static_cast<double>(cnt[idx]);
        const double exyz = sxyz[idx] / n;
        const double exy = sxy[idx] / n;
        const double exz = sxz[idx] / n;
        const double eyz = syz[idx] / n;
        const double ex = sx[idx] / n;
        const double ey = sy[idx] / n;
        const double ez = sz[idx] / n;
        return exyz - ex * eyz - ey * exz - ez * exy + 2.0 * ex * ey * ez;
    });
    return {std::move(t), std::move(counts)};
}

std::pair<SymMatrix, SymTensor3> gm_assemble(const Eigen::VectorXd& mean, const SymMatrix& raw2,
                                             const SymTensor3& raw3,
                                             const Eigen::VectorXd& sigma2) {
    const int d = raw2.dim();
    if (mean.size() != d || raw3.dim() != d || sigma2.size() != d)
        throw ShapeError("gm_assemble: dimension mismatch");
    for (int i = 0; i < d; ++i)
        if (!(sigma2(i) >= 0.0)) throw InvalidInput("gm_assemble: sigma2 must be non-negative");

    SymMatrix s = SymMatrix::from_upper(
        d, [&](int i, int j) { return i == j ? raw2(i, j) - sigma2(i) : raw2(i, j); });
    SymTensor3 t = SymTensor3::from_unique(d, [&](int i, int j, int k) {
        double corr = 0.0;
        if (j == k) corr += mean(i) * sigma2(j);
        if (i == k) corr += mean(j) * sigma2(i);
        if (i == j) corr += mean(k) * sigma2(i);
        return raw3(i, j, k) - corr;
    });
    return {std::move(s), std::move(t)};
}

std::pair<SymMatrix, SymTensor3> gp_assemble(const Eigen::VectorXd& mean, const SymMatrix& cov,
                                             const SymTensor3& cum3) {
    const int d = cov.dim();
    if (mean.size() != d || cum3.dim() != d) throw ShapeError("gp_assemble: dimension mismatch");

    SymMatrix s = SymMatrix::from_upper(
        d, [&](int i, int j) { return i == j ? cov(i, j) - mean(i) : cov(i, j); });
    SymTensor3 t = SymTensor3::from_unique(d, [&](int i, int j, int k) {
        double v = cum3(i, j, k);
        if (i == j && j == k) v += 2.0 * mean(i);
        if (j == k) v -= cov(i, j);
        if (i == k) v -= cov(i, j);
        if (i == j) v -= cov(i, k);
        return v;
    });
    return {std::move(s), std::move(t)};
}

MomentPair gm_moments(const MaskedDataset& ds, int k, double sigma2, std::int64_t min_count) {
    if (k < 1 || k > ds.dim()) throw InvalidInput("gm_moments: K must lie in [1, D]");
    if (!(sigma2 >= 0.0)) throw InvalidInput("gm_moments: sigma2 must be non-negative");
    Eigen::VectorXd mean = masked_mean(ds);
    auto [raw2, pair_counts] = masked_raw_moment2(ds, min_count);
    auto [raw3, triple_counts] = masked_raw_moment3(ds, min_count);
    const Eigen::VectorXd sig = Eigen::VectorXd::Constant(ds.dim(), sigma2);
    auto [s, t] = gm_assemble(mean, raw2, raw3, sig);
    return MomentPair{std::move(s), std::move(t), std::move(pair_counts), std::move(triple_counts),
                      std::move(mean)};
}

MomentPair gp_moments(const MaskedDataset& ds, std::int64_t min_count) {
    check_non_empty(ds);
    for (int n = 0; n < ds.samples(); ++n) {
        for (int i = 0; i < ds.dim(); ++i) {
            if (!ds.mask(i, n)) continue;
            const double v = ds.values(i, n);
            if (!(v >= 0.0) || v != std::floor(v))
                throw InvalidInput("gp_moments: entry (" + std::to_string(i) + "," +
                                   std::to_string(n) + ") is not a non-negative integer");
        }
    }
    Eigen::VectorXd mean = masked_mean(ds);
    auto [cov, pair_counts] = masked_cov(ds, min_count);
    auto [cum3, triple_counts] = masked_cum3(ds, min_count);
    auto [s, t] = gp_assemble(mean, cov, cum3);
    return MomentPair{std::move(s), std::move(t), std::move(pair_counts), std::move(triple_counts),
                      std::move(mean)};
}

}  // namespace wtpm
