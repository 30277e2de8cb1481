#ifndef DYADREG_CORE_GRAPH_HPP_
#define DYADREG_CORE_GRAPH_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "core/error.hpp"

namespace dyadreg {

using UnitId = std::int32_t;    // 1-based
using DyadIndex = std::int64_t; // 0-based position in input order

// An unordered pair of distinct units; stored with g < h.
struct Dyad {
    UnitId g;
    UnitId h;
    bool contains(UnitId u) const { return g == u || h == u; }
    bool shares_unit(const Dyad& o) const {
        return g == o.g || g == o.h || h == o.g || h == o.h;
    }
};

struct GraphDiagnostics {
    int m_high = 0;               // max_g M_g
    int m_low = 0;                // min_g M_g
    double med_degree = 0.0;      // sample median of {M_g} (even count: mean of middles)
    int dependency_degree = 1;    // 2(M^H - 1), or 1 when no two dyads overlap
    double kappa = 0.0;           // G * med / M^H, real-valued degrees of freedom
};

// Immutable dyadic configuration: units 1..G and the observed dyads in
// input order, with per-unit incidence lists. Dyad indices align
// positionally with the outcome/regressor rows of a dataset, so no
// canonical re-sorting is done. Safe to share across threads.
class DyadGraph {
public:
    // Validates range, self-pairs, duplicates (under unordered equality),
    // a non-empty edge set, and that every unit appears in at least one
    // dyad (callers with isolated units must renumber).
    static DyadGraph build(std::span<const std::pair<UnitId, UnitId>> edges,
                           UnitId num_units);

    UnitId num_units() const { return num_units_; }
    DyadIndex num_dyads() const { return static_cast<DyadIndex>(dyads_.size()); }

    const Dyad& dyad(DyadIndex n) const {
        check_dyad(n);
        return dyads_[static_cast<std::size_t>(n)];
    }
    const std::vector<Dyad>& dyads() const { return dyads_; }

    // Sorted list of dyad indices containing unit g.
    std::span<const DyadIndex> incidence(UnitId g) const {
        check_unit(g);
        return incidence_[static_cast<std::size_t>(g - 1)];
    }
    int degree(UnitId g) const {
        check_unit(g);
        return degrees_[static_cast<std::size_t>(g - 1)];
    }
    const std::vector<int>& degrees() const { return degrees_; }

    // True iff psi(n) and psi(m) share a unit; overlaps(n, n) is true.
    bool overlaps(DyadIndex n, DyadIndex m) const;

    // All m with overlaps(n, m), sorted ascending, n included. A neighbor
    // reachable through both endpoints of n appears once.
    std::vector<DyadIndex> neighbor_dyads(DyadIndex n) const;

    GraphDiagnostics diagnostics() const;

private:
    void check_unit(UnitId g) const {
        if (g < 1 || g > num_units_)
            fail(ErrorCode::index_out_of_range, "unit id out of range");
    }
    void check_dyad(DyadIndex n) const {
        if (n < 0 || n >= num_dyads())
            fail(ErrorCode::index_out_of_range, "dyad index out of range");
    }

    UnitId num_units_ = 0;
    std::vector<Dyad> dyads_;
    std::vector<std::vector<DyadIndex>> incidence_;
    std::vector<int> degrees_;
};

// Finite-sample diagnostic (N/D_N)^(1/ell) * D_N * bound_a / sigma_n for
// the dependency-graph CLT condition; not a limit statement.
double janson_ratio(const DyadGraph& graph, double sigma_n, double bound_a, int ell);

// Edge-list text format: one "g,h" pair per line, 1-based; an optional
// header line, blank lines and '#' comments are skipped. Whitespace
// separators are accepted on input. num_units 0 means "infer from the
// largest unit seen".
DyadGraph read_edge_list(std::istream& in, UnitId num_units = 0);
void write_edge_list(const DyadGraph& graph, std::ostream& out);

// Undirected DOT document (units as nodes, dyads as edges).
void write_dot(const DyadGraph& graph, std::ostream& out,
               std::string_view name = "dyads");

} // namespace dyadreg

#endif
