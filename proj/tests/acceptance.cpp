// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion (with indented
// detail lines). Exit status is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "core/harness.hpp"
#include "core/inference.hpp"
#include "core/numerics.hpp"

using namespace dyadreg;

namespace {

int g_failures = 0;
int g_expected_failures = 0;
std::vector<std::string> g_details;

void detail(const std::string& line) { g_details.push_back(line); }

enum class Outcome { pass, fail, expected_fail };

void finish(int number, const std::string& title, Outcome outcome) {
    const char* tag = outcome == Outcome::pass ? "PASS"
                      : outcome == Outcome::fail ? "FAIL"
                                                 : "FAIL (expected)";
    std::printf("%s  criterion %d: %s\n", tag, number, title.c_str());
    for (const auto& line : g_details) std::printf("      %s\n", line.c_str());
    g_details.clear();
    if (outcome == Outcome::fail) ++g_failures;
    if (outcome == Outcome::expected_fail) ++g_expected_failures;
    std::fflush(stdout);
}

void finish(int number, const std::string& title, bool pass) {
    finish(number, title, pass ? Outcome::pass : Outcome::fail);
}

int workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : static_cast<int>(hw);
}

constexpr std::uint64_t kSeed = 20260809;
constexpr int kReps = 2000;

double tolerance_3se(double paper_percent, int reps) {
    double p = paper_percent / 100.0;
    return 3.0 * 100.0 * std::sqrt(p * (1.0 - p) / reps);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// ---------------------------------------------------------------- 1

void criterion_1() {
    bool pass = true;

    DyadGraph d50 = gen_model_d(50);
    bool ok = d50.num_dyads() == 1225;
    detail(std::string(ok ? "ok  " : "BAD ") + "model D, G=50: N=" +
           std::to_string(d50.num_dyads()) + " (expect 1225)");
    pass = pass && ok;

    // Known discrepancy: the published count (86) contradicts the
    // published construction rules, which enumerate to 90 (verified by an
    // independent oracle in the unit tests). The check stays as stated and
    // is an expected failure; if it ever passes, the construction changed.
    DyadGraph s50 = gen_model_s(50);
    bool s_matches_published = s50.num_dyads() == 86;
    detail(std::string(s_matches_published ? "ok  " : "XFAIL ") + "model S, G=50: N=" +
           std::to_string(s50.num_dyads()) +
           " (expect 86; the rule union yields 90 -- documented discrepancy)");

    DyadGraph d25 = gen_model_d(25);
    ok = d25.num_dyads() == 300;
    detail(std::string(ok ? "ok  " : "BAD ") + "complete graph G=25: N=" +
           std::to_string(d25.num_dyads()) + " (expect 300)");
    pass = pass && ok;

    bool overlaps_ok = true;
    for (DyadIndex n = 0; n < d25.num_dyads(); ++n) {
        int count = static_cast<int>(d25.neighbor_dyads(n).size()) - 1;
        if (count != 46) {
            overlaps_ok = false;
            break;
        }
    }
    detail(std::string(overlaps_ok ? "ok  " : "BAD ") +
           "complete graph G=25: every dyad overlaps 46 others");
    pass = pass && overlaps_ok;

    if (!pass || s_matches_published)
        finish(1, "structural constants (model sizes, overlap counts)", Outcome::fail);
    else
        finish(1, "structural constants (model sizes, overlap counts)",
               Outcome::expected_fail);
}

// ---------------------------------------------------------------- 2-4

struct PaperCell {
    Model model;
    ErrorSpec error;
    int g;
    double coverage;
};

const std::vector<PaperCell> kTable1 = {
    {Model::D, ErrorSpec::iid, 25, 85.1},        {Model::D, ErrorSpec::iid, 50, 91.3},
    {Model::D, ErrorSpec::iid, 100, 93.2},       {Model::D, ErrorSpec::unit_shock, 25, 86.2},
    {Model::D, ErrorSpec::unit_shock, 50, 92.1}, {Model::D, ErrorSpec::unit_shock, 100, 93.6},
    {Model::S, ErrorSpec::iid, 25, 84.8},        {Model::S, ErrorSpec::iid, 50, 90.1},
    {Model::S, ErrorSpec::iid, 100, 92.8},       {Model::S, ErrorSpec::unit_shock, 25, 82.8},
    {Model::S, ErrorSpec::unit_shock, 50, 90.2}, {Model::S, ErrorSpec::unit_shock, 100, 92.9},
    {Model::B, ErrorSpec::iid, 25, 82.4},        {Model::B, ErrorSpec::iid, 50, 86.9},
    {Model::B, ErrorSpec::iid, 100, 89.3},       {Model::B, ErrorSpec::unit_shock, 25, 81.0},
    {Model::B, ErrorSpec::unit_shock, 50, 84.5}, {Model::B, ErrorSpec::unit_shock, 100, 86.1},
};

// Reference Table 3 values for context in the criterion-4 detail lines.
double table3_reference(Model m, ErrorSpec e) {
    if (m == Model::B && e == ErrorSpec::unit_shock) return 93.6;
    if (m == Model::B) return 94.5;
    if (m == Model::D && e == ErrorSpec::unit_shock) return 93.9;
    if (m == Model::D) return 93.5;
    if (e == ErrorSpec::unit_shock) return 93.6;
    return 93.4;
}

std::vector<CoverageReport> run_table1_cells() {
    std::vector<DesignSpec> designs;
    for (const PaperCell& cell : kTable1)
        designs.push_back({cell.model, cell.g, cell.error, 1.0});
    TableOverrides o;
    o.replications = kReps;
    o.master_seed = kSeed;
    o.workers = workers();
    o.both_criticals = true;  // carries the matching t_kappa column, same seeds
    return run_cells(designs, o, true, true);
}

void criterion_2(const std::vector<CoverageReport>& reports) {
    bool pass = true;
    double worst_excess = -1e9;
    for (std::size_t i = 0; i < kTable1.size(); ++i) {
        const PaperCell& cell = kTable1[i];
        double got = *reports[i].coverage_normal;
        double tol = tolerance_3se(cell.coverage, kReps);
        double excess = std::abs(got - cell.coverage) - tol;
        worst_excess = std::max(worst_excess, excess);
        bool ok = excess <= 0.0;
        pass = pass && ok;
        detail(std::string(ok ? "ok  " : "BAD ") + "model " + model_name(cell.model) +
               " / " + error_name(cell.error) + " / G=" + std::to_string(cell.g) +
               ": coverage " + fmt(got) + " vs " + fmt(cell.coverage) + " (tol " +
               fmt(tol) + ")");
    }
    detail("worst margin over tolerance: " + fmt(worst_excess) + " pp");
    finish(2, "Table 1 replication at desk scale (18 cells, 3*mc_se)", pass);
}

void criterion_3(const std::vector<CoverageReport>& t1) {
    bool pass = true;

    auto find_cell = [&](Model m, ErrorSpec e, int g) -> const CoverageReport& {
        for (std::size_t i = 0; i < kTable1.size(); ++i)
            if (kTable1[i].model == m && kTable1[i].error == e && kTable1[i].g == g)
                return t1[i];
        std::abort();
    };

    // The ordering clauses assert strict inequalities on true coverage, so
    // the cheap sparse/hub cells run at 100k replications (mc_se under
    // 0.1pp); the dense cell keeps its T1 value, whose margin over the 92
    // threshold is over twenty standard errors.
    auto high_r_cell = [&](Model m) {
        SimConfig c;
        c.design = {m, 100, ErrorSpec::unit_shock, 1.0};
        c.replications = 100000;
        c.master_seed = kSeed;
        c.workers = workers();
        return *run_coverage(c).coverage_normal;
    };
    double b100 = high_r_cell(Model::B);
    double d100 = *find_cell(Model::D, ErrorSpec::unit_shock, 100).coverage_normal;
    double s100 = high_r_cell(Model::S);
    bool ok = b100 < 90.0;
    detail(std::string(ok ? "ok  " : "BAD ") + "model B unit-shock G=100 under 90: " +
           fmt(b100) + " (R=100000)");
    pass = pass && ok;
    ok = d100 > 92.0 && s100 > 92.0;
    detail(std::string(ok ? "ok  " : "BAD ") + "models D and S unit-shock G=100 over 92: " +
           fmt(d100) + " (R=2000), " + fmt(s100) + " (R=100000)");
    pass = pass && ok;

    // Table 2, model D, G = 100: coverage rises in r with anchored endpoints.
    const std::vector<double> rates = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<DesignSpec> designs;
    for (double r : rates) designs.push_back({Model::D, 100, ErrorSpec::two_group, r});
    TableOverrides o;
    o.replications = kReps;
    o.master_seed = kSeed;
    o.workers = workers();
    auto t2 = run_cells(designs, o, true, false);

    std::vector<double> cov;
    for (const auto& rep : t2) cov.push_back(*rep.coverage_normal);
    for (std::size_t i = 0; i < rates.size(); ++i)
        detail("model D two-group r=" + fmt(rates[i]) + " G=100: " + fmt(cov[i]));

    ok = std::abs(cov.front() - 83.6) <= 1.7;
    detail(std::string(ok ? "ok  " : "BAD ") + "r=0 anchor 83.6 within 1.7: " +
           fmt(cov.front()));
    pass = pass && ok;
    ok = std::abs(cov.back() - 93.6) <= 1.7;
    detail(std::string(ok ? "ok  " : "BAD ") + "r=1 anchor 93.6 within 1.7: " +
           fmt(cov.back()));
    pass = pass && ok;

    // Increasing in r: adjacent cells get a 2.0pp Monte Carlo allowance and
    // the sweep must climb by at least 6pp overall.
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < cov.size(); ++i)
        monotone = monotone && cov[i + 1] >= cov[i] - 2.0;
    ok = monotone && cov.back() - cov.front() >= 6.0;
    detail(std::string(ok ? "ok  " : "BAD ") + "coverage increases in r (total rise " +
           fmt(cov.back() - cov.front()) + " pp)");
    pass = pass && ok;

    finish(3, "qualitative orderings (model B under-coverage, rate sweep)", pass);
}

void criterion_4(const std::vector<CoverageReport>& t1) {
    bool pass = true;
    for (std::size_t i = 0; i < kTable1.size(); ++i) {
        const PaperCell& cell = kTable1[i];
        if (cell.g != 100) continue;
        double normal = *t1[i].coverage_normal;
        double tk = *t1[i].coverage_tkappa;
        double rise = tk - normal;
        char ref[192];
        std::snprintf(ref, sizeof ref,
                      "model %s / %s: %s -> %s (rise %+.2f; reference %.1f -> %.1f)",
                      model_name(cell.model), error_name(cell.error), fmt(normal).c_str(),
                      fmt(tk).c_str(), rise, cell.coverage,
                      table3_reference(cell.model, cell.error));
        bool ok;
        if (cell.model == Model::B && cell.error == ErrorSpec::unit_shock)
            ok = rise >= 4.0;
        else if (cell.model == Model::B)
            ok = true;  // only the unit-shock row carries a threshold
        else
            ok = std::abs(rise) < 1.5;
        detail(std::string(ok ? "ok  " : "BAD ") + ref);
        pass = pass && ok;
    }
    finish(4, "t_kappa criticals lift model B by 4pp+, move D/S under 1.5pp", pass);
}

// ---------------------------------------------------------------- 5

std::vector<double> meat_brute(const DyadDataset& data, const OlsFit& fit) {
    const int k = data.num_regressors;
    const DyadIndex n = data.num_rows();
    std::vector<double> omega(static_cast<std::size_t>(k) * k, 0.0);
    for (DyadIndex a = 0; a < n; ++a)
        for (DyadIndex b = 0; b < n; ++b) {
            if (!data.graph->dyad(a).shares_unit(data.graph->dyad(b))) continue;
            double w = fit.residuals[static_cast<std::size_t>(a)] *
                       fit.residuals[static_cast<std::size_t>(b)];
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    omega[static_cast<std::size_t>(i) * k + j] +=
                        w * data.xij(a, i) * data.xij(b, j);
        }
    return omega;
}

void criterion_5() {
    bool pass = true;
    RngStream rng(kSeed, 1);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        int g_count = 4 + static_cast<int>(rng.next_u64() % 12);
        std::vector<std::pair<UnitId, UnitId>> edges;
        for (UnitId g = 1; g <= g_count; ++g) {
            UnitId h = g == g_count ? 1 : g + 1;
            edges.emplace_back(std::min(g, h), std::max(g, h));
        }
        for (UnitId g = 1; g <= g_count; ++g)
            for (UnitId h = g + 2; h <= g_count; ++h) {
                if (g == 1 && h == g_count) continue;
                if (rng.next_double() < 0.35) edges.emplace_back(g, h);
            }
        auto graph = std::make_shared<const DyadGraph>(DyadGraph::build(edges, g_count));
        const DyadIndex n = graph->num_dyads();
        std::vector<double> y(static_cast<std::size_t>(n)), x(static_cast<std::size_t>(n) * 2);
        for (DyadIndex i = 0; i < n; ++i) {
            y[static_cast<std::size_t>(i)] = rng.uniform(-2, 2);
            x[static_cast<std::size_t>(i) * 2] = 1.0;
            x[static_cast<std::size_t>(i) * 2 + 1] = rng.uniform(-1, 1);
        }
        auto data = make_dataset(graph, y, x, 2);
        auto fit = ols_fit(data);
        SymMatrix omega = meat(data, fit);
        auto brute = meat_brute(data, fit);
        double scale = 0.0;
        for (double v : brute) scale = std::max(scale, std::abs(v));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                worst = std::max(worst,
                                 std::abs(omega(i, j) - brute[static_cast<std::size_t>(i) * 2 + j]) /
                                     (scale > 0 ? scale : 1.0));
    }
    bool ok = worst <= 1e-10;
    detail(std::string(ok ? "ok  " : "BAD ") +
           "incidence meat vs O(N^2) double sum, 200 instances, worst rel err " +
           std::to_string(worst));
    pass = pass && ok;

    // Matching graph vs an independent HC0 computation.
    std::vector<std::pair<UnitId, UnitId>> match = {{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}};
    auto graph = std::make_shared<const DyadGraph>(DyadGraph::build(match, 10));
    std::vector<double> y(5), x(10);
    RngStream rng2(kSeed, 2);
    for (int i = 0; i < 5; ++i) {
        y[static_cast<std::size_t>(i)] = rng2.uniform(-1, 1);
        x[static_cast<std::size_t>(i) * 2] = 1.0;
        x[static_cast<std::size_t>(i) * 2 + 1] = rng2.uniform(-1, 1);
    }
    auto data = make_dataset(graph, y, x, 2);
    auto res = sandwich(data, PsdPolicy::none());
    double sxx[2][2] = {{0, 0}, {0, 0}};
    for (int r = 0; r < 5; ++r)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) sxx[i][j] += data.xij(r, i) * data.xij(r, j);
    double det = sxx[0][0] * sxx[1][1] - sxx[0][1] * sxx[1][0];
    double inv[2][2] = {{sxx[1][1] / det, -sxx[0][1] / det},
                        {-sxx[1][0] / det, sxx[0][0] / det}};
    double mid[2][2] = {{0, 0}, {0, 0}};
    for (int r = 0; r < 5; ++r) {
        double u = res.fit.residuals[static_cast<std::size_t>(r)];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) mid[i][j] += u * u * data.xij(r, i) * data.xij(r, j);
    }
    double worst_hc0 = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) s += inv[i][a] * mid[a][b] * inv[b][j];
            double scale = std::abs(mid[0][0] * inv[0][0] * inv[0][0]) + std::abs(s) + 1e-300;
            worst_hc0 = std::max(worst_hc0, std::abs(res.variance.v_raw(i, j) - s) /
                                                std::max(std::abs(s), 1e-30));
        }
    ok = worst_hc0 <= 1e-10;
    detail(std::string(ok ? "ok  " : "BAD ") +
           "matching-graph sandwich vs independent HC0, worst rel err " +
           std::to_string(worst_hc0));
    pass = pass && ok;

    finish(5, "estimator oracle equivalence (brute force, HC0)", pass);
}

// ---------------------------------------------------------------- 6

void criterion_6() {
    bool pass = true;
    const double eps = 1e-7;

    RngStream rng(kSeed, 3);
    double min_eig = 1e300;
    int clamped_total = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int dim = 2 + static_cast<int>(rng.next_u64() % 3);
        SymMatrix a(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j <= i; ++j) a.set(i, j, rng.uniform(-2, 2));
        for (int i = 0; i < dim; ++i) a.add(i, i, -1.0);  // push toward indefiniteness
        auto [fixed, clamped] = psd_correct(a, PsdPolicy::clamp_eps(eps));
        clamped_total += clamped;
        auto eig = sym_eigen(fixed);
        min_eig = std::min(min_eig, eig.eigenvalues.back());
    }
    bool ok = min_eig >= eps - 1e-12 && clamped_total > 0;
    detail(std::string(ok ? "ok  " : "BAD ") + "clamp_eps floor on indefinite inputs: " +
           "min eigenvalue " + std::to_string(min_eig) + " across 50 matrices (" +
           std::to_string(clamped_total) + " eigenvalues clamped)");
    pass = pass && ok;

    // Already-PD input passes through unchanged.
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        int dim = 2 + static_cast<int>(rng.next_u64() % 3);
        SymMatrix a(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j <= i; ++j) a.set(i, j, rng.uniform(-1, 1));
        for (int i = 0; i < dim; ++i) a.add(i, i, 3.0);
        auto [fixed, clamped] = psd_correct(a, PsdPolicy::clamp_eps(eps));
        if (clamped != 0) worst = 1e9;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                worst = std::max(worst, std::abs(fixed(i, j) - a(i, j)));
    }
    ok = worst <= 1e-10;
    detail(std::string(ok ? "ok  " : "BAD ") +
           "positive-definite inputs unchanged, worst abs diff " + std::to_string(worst));
    pass = pass && ok;

    finish(6, "PSD corrections (eigenvalue floor, identity on PD input)", pass);
}

// ---------------------------------------------------------------- 7

void criterion_7() {
    bool pass = true;
    const std::vector<int> gs = {20, 40, 80};
    const int reps = 5000;
    for (double r : {0.0, 0.5, 1.0}) {
        std::vector<double> log_g, log_var;
        for (int g_count : gs) {
            DesignSpec design{Model::D, g_count, ErrorSpec::two_group, r};
            auto graph = std::make_shared<const DyadGraph>(make_design_graph(design));
            std::vector<double> sums(static_cast<std::size_t>(reps));
            for (int rep = 0; rep < reps; ++rep) {
                RngStream stream(kSeed + 9, static_cast<std::uint64_t>(rep) +
                                                1000003ull * static_cast<std::uint64_t>(g_count));
                auto x = gen_covariates(*graph, CovariateSpec::unit_distance, stream);
                auto u = gen_errors(*graph, ErrorSpec::two_group, r, stream);
                double s = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * u[i];
                sums[static_cast<std::size_t>(rep)] = s;
            }
            double mean = 0.0;
            for (double s : sums) mean += s;
            mean /= reps;
            double var = 0.0;
            for (double s : sums) var += (s - mean) * (s - mean);
            var /= reps - 1;
            log_g.push_back(std::log(g_count));
            log_var.push_back(std::log(var));
        }
        double n = static_cast<double>(gs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < log_g.size(); ++i) {
            sx += log_g[i];
            sy += log_var[i];
            sxx += log_g[i] * log_g[i];
            sxy += log_g[i] * log_var[i];
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        bool ok = std::abs(slope - (2.0 + r)) <= 0.25;
        detail(std::string(ok ? "ok  " : "BAD ") + "r=" + fmt(r) + ": log-log slope " +
               fmt(slope) + " vs " + fmt(2.0 + r) + " +/- 0.25");
        pass = pass && ok;
    }
    finish(7, "variance growth law Var(sum x_n u_n) ~ N G^r", pass);
}

// ---------------------------------------------------------------- 8

void criterion_8() {
    bool pass = true;

    double t1 = t_quantile(0.975, 1.0);
    bool ok = std::abs(t1 - 12.70620) <= 1e-4;
    detail(std::string(ok ? "ok  " : "BAD ") + "t_quantile(0.975, 1) = " +
           std::to_string(t1) + " vs 12.70620 +/- 1e-4");
    pass = pass && ok;

    double t10 = t_quantile(0.975, 10.0);
    ok = std::abs(t10 - 2.228139) <= 1e-5;
    detail(std::string(ok ? "ok  " : "BAD ") + "t_quantile(0.975, 10) = " +
           std::to_string(t10) + " vs 2.228139 +/- 1e-5");
    pass = pass && ok;

    double z = normal_quantile(0.975);
    ok = std::abs(z - 1.959964) <= 1e-7;
    detail(std::string(ok ? "ok  " : "BAD ") + "normal_quantile(0.975) = " +
           std::to_string(z) + " vs 1.959964 +/- 1e-7");
    pass = pass && ok;

    RngStream rng(kSeed, 4);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        SymMatrix a(5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j <= i; ++j) a.set(i, j, rng.uniform(-1, 1));
        auto eig = sym_eigen(a);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                double s = 0.0;
                for (int k = 0; k < 5; ++k)
                    s += eig.eigenvalues[k] * eig.vector_component(k, i) *
                         eig.vector_component(k, j);
                worst = std::max(worst, std::abs(s - a(i, j)));
            }
    }
    ok = worst <= 1e-10;
    detail(std::string(ok ? "ok  " : "BAD ") +
           "eigendecomposition reconstruction on random 5x5, worst residual " +
           std::to_string(worst));
    pass = pass && ok;

    finish(8, "numerics accuracy (t and normal quantiles, eigensolver)", pass);
}

// ---------------------------------------------------------------- 9

void criterion_9() {
    bool pass = true;

    TableOverrides o;
    o.g_list = {10, 25};
    o.replications = 200;
    o.master_seed = kSeed;
    o.workers = 1;
    std::string csv1 = emit_csv(run_table(TableId::T1, o));
    o.workers = 8;
    std::string csv8 = emit_csv(run_table(TableId::T1, o));
    bool ok = csv1 == csv8;
    detail(std::string(ok ? "ok  " : "BAD ") +
           "library CSV identical for 1 and 8 workers");
    pass = pass && ok;

    if (const char* cli = std::getenv("DYADREG_CLI")) {
        std::string base = std::string(cli) +
                           " simulate --table 1 --g 10,25 --reps 100 --seed 17 --quiet";
        std::string f1 = "/tmp/dyadreg_acceptance_w1.csv";
        std::string f8 = "/tmp/dyadreg_acceptance_w8.csv";
        int rc1 = std::system((base + " --workers 1 --out " + f1).c_str());
        int rc8 = std::system((base + " --workers 8 --out " + f8).c_str());
        auto read = [](const std::string& p) {
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        std::string a = read(f1), b = read(f8);
        ok = rc1 == 0 && rc8 == 0 && !a.empty() && a == b;
        detail(std::string(ok ? "ok  " : "BAD ") +
               "CLI simulate emits byte-identical CSV at workers 1 and 8");
        pass = pass && ok;
        std::remove(f1.c_str());
        std::remove(f8.c_str());
    } else {
        detail("note: DYADREG_CLI not set; CLI byte-identity checked at library level only");
    }

    finish(9, "determinism across worker counts", pass);
}

} // namespace

int main() {
    std::printf("dyadreg acceptance suite (seed %llu, %d replications per cell)\n",
                static_cast<unsigned long long>(kSeed), kReps);

    criterion_1();

    auto t1 = run_table1_cells();
    criterion_2(t1);
    criterion_3(t1);
    criterion_4(t1);

    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();

    std::printf("%d of 9 criteria passed, %d expected failure(s), %d unexpected\n",
                9 - g_failures - g_expected_failures, g_expected_failures, g_failures);
    return g_failures;
}
