#include "core/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>

namespace dyadreg {

DyadGraph DyadGraph::build(std::span<const std::pair<UnitId, UnitId>> edges,
                           UnitId num_units) {
    if (num_units < 1)
        fail(ErrorCode::invalid_argument, "num_units must be positive");
    if (edges.empty())
        fail(ErrorCode::empty_graph, "graph has no dyads");

    DyadGraph graph;
    graph.num_units_ = num_units;
    graph.dyads_.reserve(edges.size());
    graph.incidence_.resize(static_cast<std::size_t>(num_units));
    graph.degrees_.assign(static_cast<std::size_t>(num_units), 0);

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2);
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        auto [a, b] = edges[idx];
        if (a < 1 || a > num_units || b < 1 || b > num_units)
            fail(ErrorCode::unit_out_of_range,
                 "dyad " + std::to_string(idx + 1) + ": unit outside [1, " +
                     std::to_string(num_units) + "]");
        if (a == b)
            fail(ErrorCode::self_pair,
                 "dyad " + std::to_string(idx + 1) + ": self-pair (" +
                     std::to_string(a) + "," + std::to_string(b) + ")");
        Dyad d{std::min(a, b), std::max(a, b)};
        std::uint64_t key = (static_cast<std::uint64_t>(d.g) << 32) |
                            static_cast<std::uint32_t>(d.h);
        if (!seen.insert(key).second)
            fail(ErrorCode::duplicate_dyad,
                 "dyad " + std::to_string(idx + 1) + ": duplicate pair {" +
                     std::to_string(d.g) + "," + std::to_string(d.h) + "}");
        DyadIndex n = static_cast<DyadIndex>(graph.dyads_.size());
        graph.dyads_.push_back(d);
        graph.incidence_[static_cast<std::size_t>(d.g - 1)].push_back(n);
        graph.incidence_[static_cast<std::size_t>(d.h - 1)].push_back(n);
        ++graph.degrees_[static_cast<std::size_t>(d.g - 1)];
        ++graph.degrees_[static_cast<std::size_t>(d.h - 1)];
    }
    for (UnitId g = 1; g <= num_units; ++g)
        if (graph.degrees_[static_cast<std::size_t>(g - 1)] == 0)
            fail(ErrorCode::isolated_unit,
                 "unit " + std::to_string(g) +
                     " appears in no dyad; renumber units contiguously");
    // Incidence lists are already sorted: dyads are appended in index order.
    return graph;
}

bool DyadGraph::overlaps(DyadIndex n, DyadIndex m) const {
    check_dyad(n);
    check_dyad(m);
    return dyads_[static_cast<std::size_t>(n)].shares_unit(
        dyads_[static_cast<std::size_t>(m)]);
}

std::vector<DyadIndex> DyadGraph::neighbor_dyads(DyadIndex n) const {
    check_dyad(n);
    const Dyad& d = dyads_[static_cast<std::size_t>(n)];
    const auto& a = incidence_[static_cast<std::size_t>(d.g - 1)];
    const auto& b = incidence_[static_cast<std::size_t>(d.h - 1)];
    std::vector<DyadIndex> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

GraphDiagnostics DyadGraph::diagnostics() const {
    GraphDiagnostics d;
    d.m_high = *std::max_element(degrees_.begin(), degrees_.end());
    d.m_low = *std::min_element(degrees_.begin(), degrees_.end());

    std::vector<int> sorted = degrees_;
    std::sort(sorted.begin(), sorted.end());
    std::size_t g = sorted.size();
    d.med_degree = (g % 2 == 1)
                       ? sorted[g / 2]
                       : 0.5 * (sorted[g / 2 - 1] + sorted[g / 2]);

    // The overlap graph has an edge iff some unit sits in two dyads.
    d.dependency_degree = (d.m_high <= 1) ? 1 : 2 * (d.m_high - 1);
    d.kappa = static_cast<double>(num_units_) * d.med_degree / d.m_high;
    return d;
}

double janson_ratio(const DyadGraph& graph, double sigma_n, double bound_a, int ell) {
    if (ell < 3)
        fail(ErrorCode::invalid_ell, "janson_ratio: ell must be at least 3");
    if (!(sigma_n > 0.0) || !(bound_a > 0.0))
        fail(ErrorCode::non_positive_scale, "janson_ratio: sigma and bound must be positive");
    GraphDiagnostics d = graph.diagnostics();
    double n = static_cast<double>(graph.num_dyads());
    double dn = static_cast<double>(d.dependency_degree);
    return std::pow(n / dn, 1.0 / ell) * dn * bound_a / sigma_n;
}

DyadGraph read_edge_list(std::istream& in, UnitId num_units) {
    std::vector<std::pair<UnitId, UnitId>> edges;
    UnitId max_unit = 0;
    std::string line;
    std::size_t line_no = 0;
    bool allow_header = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;

        std::string body = line.substr(start);
        for (char& c : body)
            if (c == ',' || c == '\t' || c == ';') c = ' ';
        std::istringstream fields(body);
        long long a = 0, b = 0;
        if (!(fields >> a >> b)) {
            if (allow_header) { allow_header = false; continue; }
            fail(ErrorCode::parse_error,
                 "edge list line " + std::to_string(line_no) + ": expected two unit ids");
        }
        allow_header = false;
        if (a < 1 || b < 1 || a > INT32_MAX || b > INT32_MAX)
            fail(ErrorCode::parse_error,
                 "edge list line " + std::to_string(line_no) + ": unit ids must be positive");
        edges.emplace_back(static_cast<UnitId>(a), static_cast<UnitId>(b));
        max_unit = std::max({max_unit, static_cast<UnitId>(a), static_cast<UnitId>(b)});
    }
    if (edges.empty())
        fail(ErrorCode::empty_graph, "edge list contains no dyads");
    return DyadGraph::build(edges, num_units > 0 ? num_units : max_unit);
}

void write_edge_list(const DyadGraph& graph, std::ostream& out) {
    out << "unit_g,unit_h\n";
    for (const Dyad& d : graph.dyads())
        out << d.g << ',' << d.h << '\n';
}

void write_dot(const DyadGraph& graph, std::ostream& out, std::string_view name) {
    out << "graph " << name << " {\n";
    for (const Dyad& d : graph.dyads())
        out << "  " << d.g << " -- " << d.h << ";\n";
    out << "}\n";
}

} // namespace dyadreg
