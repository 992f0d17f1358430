#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

// Time-domain amplitude preprocessors applied ahead of OFDM demodulation:
// blanking, clipping, and the piecewise multi-threshold clipper. All of them
// preserve sample phase and only reshape magnitude.

namespace linksim::preproc {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Clipper transfer curve. Samples with |r| < betas[0] pass unchanged,
// |r| in [betas[m], betas[m+1]) is rescaled to magnitude levels[m], and
// |r| >= betas.back() is rescaled to levels.back(). betas has levels.size()+1
// entries. Empty levels means an identity pass-through.
struct ClipperProfile {
    std::vector<double> betas;
    std::vector<double> levels;

    void validate() const;  // throws std::invalid_argument
    std::size_t intervals() const { return levels.size(); }
};

// 1 if amplitude lies in [lo, hi), else 0. Requires lo < hi.
int unit_box(double amplitude, double lo, double hi);

cvec apply_blanking(std::span<const cplx> r, double threshold);
cvec apply_clipping(std::span<const cplx> r, double threshold);
cvec apply_multithreshold(std::span<const cplx> r, const ClipperProfile& profile);

// Neyman-Pearson style base threshold: sigma * sqrt(-2 ln p_fa) for a
// Rayleigh envelope with per-dimension noise deviation sigma.
double base_threshold(double sigma, double p_fa);

// Robust per-dimension deviation estimate from a received frame:
// median(|r|) / sqrt(ln 4).
double estimate_noise_sigma(std::span<const cplx> r);

}  // namespace linksim::preproc
