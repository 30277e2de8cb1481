#include "core/inference.hpp"

#include <cmath>
#include <string>

#include "core/numerics.hpp"

namespace dyadreg {

double t_stat(const OlsFit& fit, const RobustVariance& v, int k, double beta0) {
    if (k < 0 || k >= static_cast<int>(fit.beta.size()))
        fail(ErrorCode::index_out_of_range, "t_stat: coefficient index out of range");
    double vkk = v.v_used(k, k);
    if (!(vkk > 0.0))
        fail(ErrorCode::non_positive_variance,
             "t_stat: V_kk = " + std::to_string(vkk) +
                 " is not positive; use the clamp_eps policy");
    return (fit.beta[static_cast<std::size_t>(k)] - beta0) / std::sqrt(vkk);
}

InferenceResult infer(const OlsFit& fit, const RobustVariance& v,
                      const GraphDiagnostics& diag, int k, double level,
                      double beta0) {
    if (!(level > 0.0 && level < 1.0))
        fail(ErrorCode::out_of_domain, "infer: level must lie in (0,1)");

    InferenceResult r;
    r.coef_index = k;
    r.t_stat = t_stat(fit, v, k, beta0);  // validates k and V_kk
    r.beta_hat_k = fit.beta[static_cast<std::size_t>(k)];
    r.se_k = std::sqrt(v.v_used(k, k));
    r.kappa = diag.kappa;
    r.level = level;
    r.beta0 = beta0;

    double p = 0.5 * (1.0 + level);
    r.crit_normal = normal_quantile(p);
    r.crit_tkappa = t_quantile(p, diag.kappa);
    r.ci_normal = {r.beta_hat_k - r.crit_normal * r.se_k,
                   r.beta_hat_k + r.crit_normal * r.se_k};
    r.ci_tkappa = {r.beta_hat_k - r.crit_tkappa * r.se_k,
                   r.beta_hat_k + r.crit_tkappa * r.se_k};
    return r;
}

} // namespace dyadreg
