#include "core/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dyadreg {

DyadDataset make_dataset(std::shared_ptr<const DyadGraph> graph,
                         std::vector<double> y, std::vector<double> x,
                         int num_regressors) {
    if (!graph) fail(ErrorCode::invalid_argument, "make_dataset: null graph");
    if (num_regressors < 1)
        fail(ErrorCode::invalid_argument, "make_dataset: need at least one regressor");
    std::size_t n = static_cast<std::size_t>(graph->num_dyads());
    if (y.size() != n)
        fail(ErrorCode::dimension_mismatch,
             "make_dataset: outcome length " + std::to_string(y.size()) +
                 " does not match " + std::to_string(n) + " dyads");
    if (x.size() != n * static_cast<std::size_t>(num_regressors))
        fail(ErrorCode::dimension_mismatch, "make_dataset: regressor matrix shape mismatch");
    for (double v : y)
        if (!std::isfinite(v)) fail(ErrorCode::non_finite, "make_dataset: non-finite outcome");
    for (double v : x)
        if (!std::isfinite(v)) fail(ErrorCode::non_finite, "make_dataset: non-finite regressor");
    return DyadDataset{std::move(graph), std::move(y), std::move(x), num_regressors};
}

OlsFit ols_fit(const DyadDataset& data) {
    const DyadIndex n = data.num_rows();
    const int k = data.num_regressors;
    if (n < k)
        fail(ErrorCode::too_few_observations,
             "ols_fit: " + std::to_string(n) + " rows for " + std::to_string(k) +
                 " regressors");

    SymMatrix xtx(k);
    std::vector<double> xty(static_cast<std::size_t>(k), 0.0);
    for (DyadIndex row = 0; row < n; ++row) {
        for (int i = 0; i < k; ++i) {
            double xi = data.xij(row, i);
            xty[static_cast<std::size_t>(i)] += xi * data.y[static_cast<std::size_t>(row)];
            for (int j = 0; j <= i; ++j)
                xtx.add(i, j, xi * data.xij(row, j));
        }
    }

    EigenDecomposition eig = sym_eigen(xtx);
    double max_eig = std::abs(eig.eigenvalues.front());
    double min_eig = std::abs(eig.eigenvalues.back());
    for (double ev : eig.eigenvalues) {
        max_eig = std::max(max_eig, std::abs(ev));
        min_eig = std::min(min_eig, std::abs(ev));
    }
    if (!(min_eig > 1e-10 * max_eig))
        fail(ErrorCode::rank_deficient, "ols_fit: X'X numerically singular");

    OlsFit fit;
    fit.beta = solve_linear(xtx, xty);
    fit.xtx = std::move(xtx);
    fit.residuals.resize(static_cast<std::size_t>(n));
    for (DyadIndex row = 0; row < n; ++row) {
        double pred = 0.0;
        for (int j = 0; j < k; ++j) pred += fit.beta[static_cast<std::size_t>(j)] * data.xij(row, j);
        fit.residuals[static_cast<std::size_t>(row)] = data.y[static_cast<std::size_t>(row)] - pred;
    }
    return fit;
}

SymMatrix meat(const DyadDataset& data, const OlsFit& fit) {
    const DyadIndex n = data.num_rows();
    const int k = data.num_regressors;
    if (fit.residuals.size() != static_cast<std::size_t>(n) ||
        fit.beta.size() != static_cast<std::size_t>(k))
        fail(ErrorCode::dimension_mismatch, "meat: fit does not belong to this dataset");

    // Scores a_n = u_n * x_n, row-major.
    std::vector<double> score(static_cast<std::size_t>(n) * k);
    for (DyadIndex row = 0; row < n; ++row)
        for (int j = 0; j < k; ++j)
            score[static_cast<std::size_t>(row) * k + j] =
                fit.residuals[static_cast<std::size_t>(row)] * data.xij(row, j);

    const DyadGraph& graph = *data.graph;
    SymMatrix omega(k);

    // Cross terms. Two distinct overlapping dyads share exactly one unit,
    // so the pair (n, m) is visited under exactly one g; adding
    // a_n a_m' + a_m a_n' there accounts for both orientations of the
    // double sum.
    for (UnitId g = 1; g <= graph.num_units(); ++g) {
        auto inc = graph.incidence(g);
        for (std::size_t p = 0; p < inc.size(); ++p) {
            const double* an = &score[static_cast<std::size_t>(inc[p]) * k];
            for (std::size_t q = p + 1; q < inc.size(); ++q) {
                const double* am = &score[static_cast<std::size_t>(inc[q]) * k];
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j <= i; ++j)
                        omega.add(i, j, an[i] * am[j] + am[i] * an[j]);
            }
        }
    }
    // Diagonal n = m terms, once.
    for (DyadIndex row = 0; row < n; ++row) {
        const double* a = &score[static_cast<std::size_t>(row) * k];
        for (int i = 0; i < k; ++i)
            for (int j = 0; j <= i; ++j)
                omega.add(i, j, a[i] * a[j]);
    }
    return omega;
}

std::pair<SymMatrix, int> psd_correct(const SymMatrix& v, PsdPolicy policy) {
    if (!v.all_finite()) fail(ErrorCode::non_finite, "psd_correct: non-finite entry");
    if (policy.kind == PsdPolicyKind::none) return {v, 0};

    const double floor_at = policy.kind == PsdPolicyKind::clamp_zero ? 0.0 : policy.eps;
    EigenDecomposition eig = sym_eigen(v);
    double scale = 0.0;
    for (double ev : eig.eigenvalues) scale = std::max(scale, std::abs(ev));
    // Sub-roundoff shortfalls (an already-clamped matrix re-decomposed) are
    // not corrections; without the slack the operation would not be idempotent.
    const double slack = 1e-14 * (1.0 + scale);
    int clamped = 0;
    for (double& ev : eig.eigenvalues)
        if (ev < floor_at - slack) {
            ev = floor_at;
            ++clamped;
        }
    if (clamped == 0) return {v, 0};

    const int k = v.dim();
    std::vector<double> full(static_cast<std::size_t>(k) * k, 0.0);
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                full[static_cast<std::size_t>(i) * k + j] +=
                    eig.eigenvalues[c] * eig.vector_component(c, i) * eig.vector_component(c, j);
    return {SymMatrix::from_full(full, k), clamped};
}

SandwichResult sandwich(const DyadDataset& data, PsdPolicy policy, double multiplier) {
    SandwichResult out;
    out.fit = ols_fit(data);
    SymMatrix omega = meat(data, out.fit);
    SymMatrix bread = inverse_sym(out.fit.xtx);

    const int k = data.num_regressors;
    std::vector<double> tmp(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int l = 0; l < k; ++l) s += bread(i, l) * omega(l, j);
            tmp[static_cast<std::size_t>(i) * k + j] = s;
        }
    std::vector<double> full(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int l = 0; l < k; ++l) s += tmp[static_cast<std::size_t>(i) * k + l] * bread(l, j);
            full[static_cast<std::size_t>(i) * k + j] = s * multiplier;
        }

    out.variance.v_raw = SymMatrix::from_full(full, k);
    out.variance.eigenvalues_raw = sym_eigen(out.variance.v_raw).eigenvalues;
    auto [used, clamped] = psd_correct(out.variance.v_raw, policy);
    out.variance.v_used = std::move(used);
    out.variance.policy = policy;
    out.variance.clamped = clamped;
    return out;
}

} // namespace dyadreg
