#include "core/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace dyadreg {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

using EdgeSet = std::set<std::pair<UnitId, UnitId>>;

void insert_edge(EdgeSet& edges, int a, int b) {
    if (a == b) return;
    edges.emplace(std::min(a, b), std::max(a, b));
}

DyadGraph from_edge_set(const EdgeSet& edges, int num_units) {
    std::vector<std::pair<UnitId, UnitId>> list(edges.begin(), edges.end());
    return DyadGraph::build(list, static_cast<UnitId>(num_units));
}

DyadGraph model_b_impl(int g_count, bool band2_at_100) {
    if (g_count < 6) fail(ErrorCode::g_too_small, "Model B needs at least 6 units");
    const int G = g_count;
    EdgeSet edges;
    for (int g = 1; g + 1 < G - 1; ++g) insert_edge(edges, g, g + 1);
    insert_edge(edges, 1, G - 2);
    const bool band2 = (G == 250 || G == 800) || (band2_at_100 && G == 100);
    if (band2) {
        for (int g = 1; g + 2 < G - 1; ++g) insert_edge(edges, g, g + 2);
        insert_edge(edges, 1, G - 3);
        insert_edge(edges, 2, G - 2);
    }
    if (G == 800) {
        for (int d = 3; d <= 4; ++d)
            for (int g = 1; g + d < G - 1; ++g) insert_edge(edges, g, g + d);
        insert_edge(edges, 1, G - 4);
        insert_edge(edges, 1, G - 5);
        insert_edge(edges, 2, G - 3);
        insert_edge(edges, 2, G - 4);
    }
    const int half = G / 2;
    for (int g = 1; g <= G; ++g) {
        if (g <= half)
            insert_edge(edges, g, G - 1);
        else
            insert_edge(edges, g, G);
    }
    return from_edge_set(edges, G);
}

} // namespace

void DesignSpec::validate() const {
    switch (model) {
        case Model::D:
            if (num_units < 2) fail(ErrorCode::g_too_small, "Model D needs at least 2 units");
            break;
        case Model::S:
            if (num_units < 4) fail(ErrorCode::g_too_small, "Model S needs at least 4 units");
            break;
        case Model::B:
            if (num_units < 6) fail(ErrorCode::g_too_small, "Model B needs at least 6 units");
            break;
    }
    if (error == ErrorSpec::two_group) {
        if (!(r >= 0.0 && r <= 1.0))
            fail(ErrorCode::config_invalid, "two_group rate r must lie in [0,1]");
        if (model == Model::B)
            fail(ErrorCode::config_invalid, "two_group errors are defined for Models D and S");
    }
}

DyadGraph gen_model_d(int g_count) {
    if (g_count < 2) fail(ErrorCode::g_too_small, "Model D needs at least 2 units");
    std::vector<std::pair<UnitId, UnitId>> edges;
    edges.reserve(static_cast<std::size_t>(g_count) * (g_count - 1) / 2);
    for (int g = 1; g <= g_count; ++g)
        for (int h = g + 1; h <= g_count; ++h)
            edges.emplace_back(g, h);
    return DyadGraph::build(edges, static_cast<UnitId>(g_count));
}

DyadGraph gen_model_s(int g_count) {
    if (g_count < 4) fail(ErrorCode::g_too_small, "Model S needs at least 4 units");
    const int G = g_count;
    EdgeSet edges;
    for (int g = 1; g < G; ++g) insert_edge(edges, g, g + 1);
    insert_edge(edges, 1, G);
    for (int g = 1; g <= G / 2; ++g) insert_edge(edges, g, 2 * g);
    for (int g = 1; g <= G / 3; ++g) insert_edge(edges, g, 3 * g);
    return from_edge_set(edges, G);
}

DyadGraph gen_model_b(int g_count) { return model_b_impl(g_count, false); }
DyadGraph gen_model_b_appendix(int g_count) { return model_b_impl(g_count, true); }

DyadGraph make_design_graph(const DesignSpec& design) {
    design.validate();
    switch (design.model) {
        case Model::D: return gen_model_d(design.num_units);
        case Model::S: return gen_model_s(design.num_units);
        case Model::B: return gen_model_b(design.num_units);
    }
    fail(ErrorCode::invalid_argument, "unknown model");
}

std::vector<double> covariates_from_positions(const DyadGraph& graph,
                                              std::span<const double> z) {
    if (z.size() != static_cast<std::size_t>(graph.num_units()))
        fail(ErrorCode::dimension_mismatch, "covariates_from_positions: one position per unit");
    std::vector<double> x(static_cast<std::size_t>(graph.num_dyads()));
    for (DyadIndex n = 0; n < graph.num_dyads(); ++n) {
        const Dyad& d = graph.dyad(n);
        x[static_cast<std::size_t>(n)] =
            std::abs(z[static_cast<std::size_t>(d.g - 1)] - z[static_cast<std::size_t>(d.h - 1)]);
    }
    return x;
}

std::vector<double> gen_covariates(const DyadGraph& graph, CovariateSpec spec,
                                   RngStream& stream) {
    if (spec == CovariateSpec::iid_uniform) {
        std::vector<double> x(static_cast<std::size_t>(graph.num_dyads()));
        for (double& v : x) v = stream.next_double();
        return x;
    }
    std::vector<double> z(static_cast<std::size_t>(graph.num_units()));
    for (double& v : z) v = stream.next_double();
    return covariates_from_positions(graph, z);
}

int two_group_split(int num_units, double r) {
    double s = 0.5 * (1.0 + r);
    return static_cast<int>(std::floor((num_units - std::pow(num_units, s)) / 2.0));
}

std::vector<double> gen_errors(const DyadGraph& graph, ErrorSpec spec, double r,
                               RngStream& stream) {
    const DyadIndex n = graph.num_dyads();
    std::vector<double> u(static_cast<std::size_t>(n));
    if (spec == ErrorSpec::iid) {
        for (double& v : u) v = stream.uniform(-kSqrt3, kSqrt3);
        return u;
    }

    std::vector<double> alpha(static_cast<std::size_t>(graph.num_units()));
    for (double& a : alpha) a = stream.uniform(-kSqrt3, kSqrt3);

    const int split = spec == ErrorSpec::two_group ? two_group_split(graph.num_units(), r)
                                                   : 0;
    for (DyadIndex i = 0; i < n; ++i) {
        const Dyad& d = graph.dyad(i);
        double shocks = alpha[static_cast<std::size_t>(d.g - 1)] +
                        alpha[static_cast<std::size_t>(d.h - 1)];
        if (spec == ErrorSpec::two_group) {
            bool same_group = (d.g <= split) == (d.h <= split);
            if (!same_group) shocks = -shocks;
        }
        u[static_cast<std::size_t>(i)] = shocks + stream.uniform(-kSqrt3, kSqrt3);
    }
    return u;
}

DyadDataset simulate_onto(std::shared_ptr<const DyadGraph> graph,
                          const DesignSpec& design, RngStream& stream) {
    design.validate();
    const DyadIndex n = graph->num_dyads();
    std::vector<double> xcol = gen_covariates(*graph, design.covariates(), stream);
    std::vector<double> u = gen_errors(*graph, design.error, design.r, stream);

    std::vector<double> x(static_cast<std::size_t>(n) * 2);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (DyadIndex i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i) * 2] = 1.0;
        x[static_cast<std::size_t>(i) * 2 + 1] = xcol[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(i)] = 1.0 + u[static_cast<std::size_t>(i)];  // beta = 0
    }
    return make_dataset(std::move(graph), std::move(y), std::move(x), 2);
}

DyadDataset simulate_dataset(const DesignSpec& design, RngStream& stream) {
    auto graph = std::make_shared<const DyadGraph>(make_design_graph(design));
    return simulate_onto(std::move(graph), design, stream);
}

} // namespace dyadreg
