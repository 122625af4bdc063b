#include "wtpm/missingness.hpp"

#include "wtpm/rng.hpp"

namespace wtpm {

PresenceProbabilities::PresenceProbabilities(Eigen::VectorXd p) : p_(std::move(p)) {
    if (p_.size() == 0) throw InvalidInput("PresenceProbabilities: empty vector");
    for (int d = 0; d < p_.size(); ++d) {
        if (!(p_(d) > 0.0) || p_(d) > 1.0)
            throw InvalidInput("PresenceProbabilities: p[" + std::to_string(d) +
                               "] must lie in (0, 1]");
    }
}

MaskedDataset MaskedDataset::make(Eigen::MatrixXd values, ObservationMask mask) {
    if (values.rows() != mask.rows() || values.cols() != mask.cols())
        throw ShapeError("MaskedDataset: values and mask dimensions differ");
    MaskedDataset ds;
    for (int j = 0; j < values.cols(); ++j)
        for (int i = 0; i < values.rows(); ++i)
            if (!mask(i, j)) values(i, j) = 0.0;
    ds.values = std::move(values);
    ds.mask = std::move(mask);
    for (int i = 0; i < ds.mask.rows(); ++i)
        if (ds.mask.row(i).all()) ds.complete_dims.push_back(i);
    return ds;
}

ObservationMask mcar_mask(const PresenceProbabilities& p, int n, std::uint64_t rng_seed) {
    if (n < 1) throw InvalidInput("mcar_mask: need at least one sample");
    const int d = p.dim();
    ObservationMask mask(d, n);
    for (int j = 0; j < n; ++j) {
        Rng rng = Rng::substream(rng_seed, static_cast<std::uint64_t>(j));
        for (int i = 0; i < d; ++i) mask(i, j) = rng.uniform() < p[i];
    }
    return mask;
}

ObservationMask block_mask(int n_full, int n_partial, const std::vector<int>& missing_dims, int d) {
    if (d <= 0) throw InvalidInput("block_mask: dimension must be positive");
    if (n_full < 0 || n_partial < 0 || n_full + n_partial < 1)
        throw InvalidInput("block_mask: need at least one sample");
    for (int m : missing_dims)
        if (m < 0 || m >= d)
            throw InvalidInput("block_mask: missing dimension " + std::to_string(m) +
                               " out of range");
    ObservationMask mask = ObservationMask::Constant(d, n_full + n_partial, true);
    for (int j = n_full; j < n_full + n_partial; ++j)
        for (int m : missing_dims) mask(m, j) = false;
    return mask;
}

PresenceProbabilities estimate_rates(const ObservationMask& mask) {
    const int d = static_cast<int>(mask.rows());
    const int n = static_cast<int>(mask.cols());
    if (d == 0 || n == 0) throw InvalidInput("estimate_rates: empty mask");
    Eigen::VectorXd p(d);
    for (int i = 0; i < d; ++i) {
        const long long count = mask.row(i).count();
        if (count == 0) throw DegenerateDimension(i);
        p(i) = static_cast<double>(count) / static_cast<double>(n);
    }
    return PresenceProbabilities(std::move(p));
}

}  // namespace wtpm
