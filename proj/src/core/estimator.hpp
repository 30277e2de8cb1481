#ifndef DYADREG_CORE_ESTIMATOR_HPP_
#define DYADREG_CORE_ESTIMATOR_HPP_

#include <memory>
#include <vector>

#include "core/graph.hpp"
#include "core/numerics.hpp"

namespace dyadreg {

// Outcome vector and N x K regressor matrix aligned row-for-row with the
// graph's dyads. Column 0 is an intercept of ones when the caller adds one.
struct DyadDataset {
    std::shared_ptr<const DyadGraph> graph;
    std::vector<double> y;  // length N
    std::vector<double> x;  // row-major N x K
    int num_regressors = 0;

    DyadIndex num_rows() const { return graph ? graph->num_dyads() : 0; }
    double xij(DyadIndex n, int k) const {
        return x[static_cast<std::size_t>(n) * num_regressors + k];
    }
};

// Validates row counts and finiteness.
DyadDataset make_dataset(std::shared_ptr<const DyadGraph> graph,
                         std::vector<double> y, std::vector<double> x,
                         int num_regressors);

struct OlsFit {
    std::vector<double> beta;       // K
    std::vector<double> residuals;  // N
    SymMatrix xtx;                  // sum_n x_n x_n'
};

enum class PsdPolicyKind { none, clamp_zero, clamp_eps };

struct PsdPolicy {
    PsdPolicyKind kind = PsdPolicyKind::none;
    double eps = 1e-7;

    static PsdPolicy none() { return {PsdPolicyKind::none, 0.0}; }
    static PsdPolicy clamp_zero() { return {PsdPolicyKind::clamp_zero, 0.0}; }
    static PsdPolicy clamp_eps(double eps = 1e-7) { return {PsdPolicyKind::clamp_eps, eps}; }
};

struct RobustVariance {
    SymMatrix v_raw;                      // sandwich before any correction
    SymMatrix v_used;                     // after the selected policy
    std::vector<double> eigenvalues_raw;  // of v_raw, descending
    PsdPolicy policy;
    int clamped = 0;                      // eigenvalues floored by the policy
};

struct SandwichResult {
    OlsFit fit;
    RobustVariance variance;
};

// Requires N >= K and min eigenvalue of X'X > 1e-10 * max eigenvalue.
OlsFit ols_fit(const DyadDataset& data);

// Meat of the sandwich: sum over all dyad pairs sharing a unit of
// u_n u_m x_n x_m'. Iterates unit incidence lists, so each overlapping
// pair is visited through its single shared unit: O(sum_g M_g^2 K^2)
// instead of O(N^2 K^2). The diagonal n = m terms are added once at the
// end. Accumulation is over symmetrized pair terms, so the result is
// exactly symmetric.
SymMatrix meat(const DyadDataset& data, const OlsFit& fit);

// Eigenvalue flooring. clamp_zero floors at 0, clamp_eps at policy.eps;
// none passes through. When nothing is floored the input is returned
// unchanged, which also makes the operation exactly idempotent.
std::pair<SymMatrix, int> psd_correct(const SymMatrix& v, PsdPolicy policy);

// (X'X)^-1 Omega (X'X)^-1 with the chosen PSD policy applied to produce
// v_used; v_raw is kept for diagnostics. The estimator is defined without
// a small-sample multiplier; the hook defaults to 1.
SandwichResult sandwich(const DyadDataset& data, PsdPolicy policy,
                        double multiplier = 1.0);

} // namespace dyadreg

#endif
