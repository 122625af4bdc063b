#include "wtpm/weighting.hpp"

#include <cmath>

namespace wtpm {

const char* to_string(WeightStrategy s) {
    switch (s) {
        case WeightStrategy::full: return "full";
        case WeightStrategy::partial: return "partial";
        case WeightStrategy::proportional: return "proportional";
        case WeightStrategy::sqrt: return "sqrt";
    }
    return "?";
}

std::optional<WeightStrategy> strategy_from_cli(std::string_view name) {
    if (name == "full") return WeightStrategy::full;
    if (name == "partial") return WeightStrategy::partial;
    if (name == "wtpm-p") return WeightStrategy::proportional;
    if (name == "wtpm-sqrtp") return WeightStrategy::sqrt;
    return std::nullopt;
}

const char* cli_name(WeightStrategy s) {
    switch (s) {
        case WeightStrategy::full: return "full";
        case WeightStrategy::partial: return "partial";
        case WeightStrategy::proportional: return "wtpm-p";
        case WeightStrategy::sqrt: return "wtpm-sqrtp";
    }
    return "?";
}

WeightVector compute_weights(const PresenceProbabilities& p, WeightStrategy strategy) {
    const int d = p.dim();
    Eigen::VectorXd w(d);
    for (int i = 0; i < d; ++i) {
        switch (strategy) {
            case WeightStrategy::full: w(i) = 1.0; break;
            case WeightStrategy::partial: w(i) = p[i] == 1.0 ? 1.0 : 0.0; break;
            case WeightStrategy::proportional: w(i) = p[i]; break;
            case WeightStrategy::sqrt: w(i) = std::sqrt(p[i]); break;
        }
    }
    return WeightVector{std::move(w), strategy};
}

namespace {

MomentPair restrict_to(const MomentPair& m, const std::vector<int>& keep) {
    const int dc = static_cast<int>(keep.size());
    if (dc == 0) throw InvalidInput("weight_moments: partial strategy keeps no dimensions");
    SymMatrix s = SymMatrix::from_upper(dc, [&](int i, int j) { return m.s(keep[i], keep[j]); });
    SymTensor3 t = SymTensor3::from_unique(
        dc, [&](int i, int j, int k) { return m.t(keep[i], keep[j], keep[k]); });
    PairCounts pc(dc, dc);
    for (int i = 0; i < dc; ++i)
        for (int j = 0; j < dc; ++j) pc(i, j) = m.pair_counts(keep[i], keep[j]);
    TripleCounts tc(dc);
    for (int i = 0; i < dc; ++i)
        for (int j = 0; j < dc; ++j)
            for (int k = 0; k < dc; ++k) tc(i, j, k) = m.triple_counts(keep[i], keep[j], keep[k]);
    Eigen::VectorXd mean(dc);
    for (int i = 0; i < dc; ++i) mean(i) = m.mean(keep[i]);
    return MomentPair{std::move(s), std::move(t), std::move(pc), std::move(tc), std::move(mean)};
}

}  // namespace

MomentPair weight_moments(const MomentPair& m, const WeightVector& w) {
    if (w.dim() != m.dim()) throw ShapeError("weight_moments: weight dimension mismatch");
    if (w.strategy == WeightStrategy::partial) {
        std::vector<int> keep;
        for (int i = 0; i < w.dim(); ++i)
            if (w.w(i) == 1.0) keep.push_back(i);
        return restrict_to(m, keep);
    }
    const Eigen::VectorXd& wv = w.w;
    const int d = m.dim();
    SymMatrix s = SymMatrix::from_upper(d, [&](int i, int j) { return wv(i) * wv(j) * m.s(i, j); });
    SymTensor3 t = SymTensor3::from_unique(
        d, [&](int i, int j, int k) { return wv(i) * wv(j) * wv(k) * m.t(i, j, k); });
    return MomentPair{std::move(s), std::move(t), m.pair_counts, m.triple_counts,
                      wv.cwiseProduct(m.mean)};
}

UnweightedTopics unweight_topics(const Eigen::MatrixXd& a_star, const WeightVector& w) {
    const int d = w.dim();
    const int k = static_cast<int>(a_star.cols());
    int present = 0;
    for (int i = 0; i < d; ++i)
        if (w.w(i) > 0.0) ++present;
    if (static_cast<int>(a_star.rows()) != present)
        throw ShapeError("unweight_topics: row count does not match positive-weight count");

    UnweightedTopics out;
    out.a = Eigen::MatrixXd::Zero(d, k);
    out.row_present.assign(d, false);
    int r = 0;
    for (int i = 0; i < d; ++i) {
        if (w.w(i) > 0.0) {
            out.a.row(i) = a_star.row(r) / w.w(i);
            out.row_present[i] = true;
            ++r;
        }
    }
    return out;
}

}  // namespace wtpm
