#include "linksim/preproc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linksim::preproc {

void ClipperProfile::validate() const {
    if (betas.size() != levels.size() + 1)
        throw std::invalid_argument("ClipperProfile: betas must have levels.size()+1 entries");
    if (betas.front() <= 0.0)
        throw std::invalid_argument("ClipperProfile: base threshold must be positive");
    for (std::size_t i = 1; i < betas.size(); ++i)
        if (!(betas[i] > betas[i - 1]))
            throw std::invalid_argument("ClipperProfile: thresholds must be strictly increasing");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 0.0)
            throw std::invalid_argument("ClipperProfile: levels must be nonnegative");
        if (levels[i] > betas.front())
            throw std::invalid_argument("ClipperProfile: levels must not exceed the base threshold");
        if (i > 0 && levels[i] > levels[i - 1])
            throw std::invalid_argument("ClipperProfile: levels must be non-increasing");
    }
}

int unit_box(double amplitude, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("unit_box: need lo < hi");
    return amplitude >= lo && amplitude < hi ? 1 : 0;
}

namespace {

// Shared by clipping and the multi-threshold clipper so the single-interval
// special cases reproduce the classic preprocessors bit for bit.
inline cplx rescale(const cplx& sample, double magnitude, double target) {
    if (target == 0.0) return {0.0, 0.0};
    return sample * (target / magnitude);
}

}  // namespace

cvec apply_blanking(std::span<const cplx> r, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("apply_blanking: threshold must be positive");
    cvec out(r.begin(), r.end());
    for (auto& v : out)
        if (std::abs(v) >= threshold) v = {0.0, 0.0};
    return out;
}

cvec apply_clipping(std::span<const cplx> r, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("apply_clipping: threshold must be positive");
    cvec out(r.begin(), r.end());
    for (auto& v : out) {
        const double mag = std::abs(v);
        if (mag >= threshold) v = rescale(v, mag, threshold);
    }
    return out;
}

cvec apply_multithreshold(std::span<const cplx> r, const ClipperProfile& profile) {
    profile.validate();
    cvec out(r.begin(), r.end());
    if (profile.levels.empty()) return out;  // identity profile

    const std::size_t m_last = profile.levels.size() - 1;
    for (auto& v : out) {
        const double mag = std::abs(v);
        if (mag < profile.betas.front()) continue;
        if (mag >= profile.betas.back()) {
            v = rescale(v, mag, profile.levels[m_last]);
            continue;
        }
        for (std::size_t m = 0; m <= m_last; ++m) {
            if (unit_box(mag, profile.betas[m], profile.betas[m + 1])) {
                v = rescale(v, mag, profile.levels[m]);
                break;
            }
        }
    }
    return out;
}

double base_threshold(double sigma, double p_fa) {
    if (sigma < 0.0) throw std::invalid_argument("base_threshold: sigma must be nonnegative");
    if (!(p_fa > 0.0 && p_fa < 1.0))
        throw std::invalid_argument("base_threshold: p_fa must lie in (0,1)");
    return sigma * std::sqrt(-2.0 * std::log(p_fa));
}

double estimate_noise_sigma(std::span<const cplx> r) {
    if (r.empty()) throw std::invalid_argument("estimate_noise_sigma: empty frame");
    std::vector<double> mags(r.size());
    std::transform(r.begin(), r.end(), mags.begin(), [](const cplx& v) { return std::abs(v); });
    const std::size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
    double median = mags[mid];
    if (mags.size() % 2 == 0) {
        const double lower = *std::max_element(mags.begin(), mags.begin() + mid);
        median = 0.5 * (median + lower);
    }
    return median / std::sqrt(std::log(4.0));
}

}  // namespace linksim::preproc
