#ifndef DYADREG_CORE_HARNESS_HPP_
#define DYADREG_CORE_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/estimator.hpp"
#include "core/simulation.hpp"

namespace dyadreg {

struct SimConfig {
    DesignSpec design;
    int replications = 2000;
    double level = 0.95;
    PsdPolicy psd = PsdPolicy::clamp_eps(1e-7);
    bool crit_normal = true;
    bool crit_tkappa = false;
    std::uint64_t master_seed = 0;
    int workers = 1;  // scheduling hint; results do not depend on it

    void validate() const;
};

// Coverage of the slope coefficient (k = 1) at beta0 = 0, plus replication
// diagnostics and full design provenance. mc_se = 100 * sqrt(p(1-p)/n)
// with n the effective (non-failed) replication count.
struct CoverageReport {
    SimConfig config;                       // echo, including the seed
    std::string table_id = "custom";
    DyadIndex num_dyads = 0;
    GraphDiagnostics graph_diag;
    std::optional<double> coverage_normal;  // percent
    std::optional<double> mc_se_normal;
    std::optional<double> coverage_tkappa;
    std::optional<double> mc_se_tkappa;
    int clamped_reps = 0;  // replications where the PSD policy floored an eigenvalue
    int failed_reps = 0;   // replications whose fit failed (excluded from coverage)
};

// Runs R replications: simulate, fit, sandwich, then coverage via the
// |T_k| <= crit equivalence with CI containment. Replication i uses
// RngStream(master_seed, i), so the report is a pure function of the
// config and identical for any worker count.
CoverageReport run_coverage(const SimConfig& config);

enum class TableId { T1, T2, T3 };

struct TableOverrides {
    std::vector<int> g_list = {10, 25, 50, 100};
    int replications = 2000;
    double level = 0.95;
    PsdPolicy psd = PsdPolicy::clamp_eps(1e-7);
    std::uint64_t master_seed = 0;
    int workers = 1;
    // When set, each cell also runs the other critical-value column, so a
    // T1 run carries the matching T3 numbers on the same seeds.
    bool both_criticals = false;
};

using ProgressFn = std::function<void(const CoverageReport&, std::size_t index,
                                      std::size_t total)>;

// T1: {D,S,B} x {iid, unit_shock} x g_list, normal criticals.
// T2: {D,S} x r in {0,.25,.5,.75,1} x g_list, two_group errors, normal.
// T3: the T1 grid with t_kappa criticals.
std::vector<CoverageReport> run_table(TableId table, const TableOverrides& overrides,
                                      const ProgressFn& progress = nullptr);

// An explicit list of cells (custom designs share one seed / level / psd).
std::vector<CoverageReport> run_cells(std::span<const DesignSpec> designs,
                                      const TableOverrides& overrides,
                                      bool crit_normal, bool crit_tkappa,
                                      const ProgressFn& progress = nullptr);

// CSV: fixed, versioned schema, one row per cell, numbers at 17
// significant digits so re-parsing reproduces them exactly. The worker
// count is deliberately not recorded: it cannot affect results.
std::string emit_csv(std::span<const CoverageReport> reports);

// Aligned text grid in the reference layout: one row per design, one
// column per G, the simulation SE parenthesized beneath each coverage.
std::string emit_text(std::span<const CoverageReport> reports);

// Flat key-value config (key = value, '#' comments). Keys: model, error,
// r, g (comma list), reps, level, psd, eps, criticals, seed, workers.
// Returns one config per G in the list.
std::vector<SimConfig> parse_sim_config(const std::string& text);

const char* model_name(Model m);
const char* error_name(ErrorSpec e);
std::string psd_name(PsdPolicy p);

} // namespace dyadreg

#endif
