#ifndef DYADREG_CORE_INFERENCE_HPP_
#define DYADREG_CORE_INFERENCE_HPP_

#include <utility>

#include "core/estimator.hpp"
#include "core/graph.hpp"

namespace dyadreg {

struct InferenceResult {
    int coef_index = 0;
    double beta_hat_k = 0.0;
    double se_k = 0.0;       // sqrt of the kk entry of v_used
    double t_stat = 0.0;     // at the hypothesized beta0
    double kappa = 0.0;      // graph-only degrees of freedom
    double crit_normal = 0.0;
    double crit_tkappa = 0.0;
    std::pair<double, double> ci_normal;
    std::pair<double, double> ci_tkappa;
    double level = 0.0;
    double beta0 = 0.0;
};

// (beta_k - beta0) / sqrt(V_kk), with V taken from v_used. A non-positive
// diagonal signals a degenerate or clamped-to-zero variance; switch to the
// clamp_eps policy in that case.
double t_stat(const OlsFit& fit, const RobustVariance& v, int k, double beta0);

// Both intervals are centered at beta_hat_k with half-width crit * se_k;
// the normal and t_kappa versions are always populated for reporting.
// kappa < 1 is legitimate (extreme hub graphs) and passed through to the
// real-df t quantile.
InferenceResult infer(const OlsFit& fit, const RobustVariance& v,
                      const GraphDiagnostics& diag, int k, double level,
                      double beta0 = 0.0);

} // namespace dyadreg

#endif
