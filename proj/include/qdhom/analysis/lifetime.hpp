#pragma once

#include "qdhom/analysis/histogram.hpp"
#include "qdhom/hom/irf.hpp"

#include <string_view>

namespace qdhom::analysis {

enum class LifetimeModel { single_exponential, exp_convolved_irf };
std::string_view to_string(LifetimeModel m);

struct LifetimeFit {
    LifetimeModel model = LifetimeModel::single_exponential;
    double t1 = 0.0;           // ps
    double uncertainty = 0.0;  // ps, from the fit covariance with Poisson weights
    double amplitude = 0.0;    // counts
    double background = 0.0;   // counts per bin
    double t0 = 0.0;           // ps: first fitted bin (delta IRF) or fitted onset (Gaussian IRF)
    double reduced_chi2 = 0.0;
    std::size_t bins_used = 0;
    int evaluations = 0;
};

// Weighted least squares with a flat background.
//   delta IRF:    A exp(-(t - t0)/T1) + B over the bins after the maximum;
//   Gaussian IRF: exponential onset at a free t0 convolved with the IRF (closed
//                 form), from 5 sigma before the maximum.
// Weights are 1/max(y, 1e-3 max y), i.e. Poisson with a floor tied to the peak
// so that rescaling the counts does not move the fit.
LifetimeFit lifetime_fit(const Histogram& h, const hom::Irf& irf);

}  // namespace qdhom::analysis
