#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "core/inference.hpp"
#include "core/numerics.hpp"

namespace dyadreg {

void SimConfig::validate() const {
    design.validate();
    if (replications < 1) fail(ErrorCode::config_invalid, "replications must be >= 1");
    if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::config_invalid, "level must lie in (0,1)");
    if (workers < 1) fail(ErrorCode::config_invalid, "workers must be >= 1");
    if (!crit_normal && !crit_tkappa)
        fail(ErrorCode::config_invalid, "at least one critical-value family is required");
}

namespace {

struct RepOutcome {
    std::uint8_t covered_normal = 0;
    std::uint8_t covered_tkappa = 0;
    std::uint8_t clamped = 0;
    std::uint8_t failed = 0;
};

double mc_se_percent(double coverage_percent, int n_eff) {
    if (n_eff <= 0) return 0.0;
    double p = coverage_percent / 100.0;
    return 100.0 * std::sqrt(p * (1.0 - p) / n_eff);
}

} // namespace

CoverageReport run_coverage(const SimConfig& config) {
    config.validate();

    auto graph = std::make_shared<const DyadGraph>(make_design_graph(config.design));
    const GraphDiagnostics diag = graph->diagnostics();
    const double p = 0.5 * (1.0 + config.level);
    const double crit_normal = normal_quantile(p);
    const double crit_tkappa = t_quantile(p, diag.kappa);

    const int reps = config.replications;
    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

    auto run_rep = [&](int rep) {
        RngStream stream(config.master_seed, static_cast<std::uint64_t>(rep));
        RepOutcome& out = outcomes[static_cast<std::size_t>(rep)];
        try {
            DyadDataset data = simulate_onto(graph, config.design, stream);
            SandwichResult res = sandwich(data, config.psd);
            double t = t_stat(res.fit, res.variance, 1, 0.0);
            out.covered_normal = std::abs(t) <= crit_normal;
            out.covered_tkappa = std::abs(t) <= crit_tkappa;
            out.clamped = res.variance.clamped > 0;
        } catch (const Error&) {
            out.failed = 1;
        }
    };

    int workers = std::min(config.workers, reps);
    if (workers <= 1) {
        for (int rep = 0; rep < reps; ++rep) run_rep(rep);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int rep = next.fetch_add(1); rep < reps; rep = next.fetch_add(1))
                run_rep(rep);
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    CoverageReport report;
    report.config = config;
    report.num_dyads = graph->num_dyads();
    report.graph_diag = diag;
    int covered_n = 0, covered_t = 0;
    for (const RepOutcome& o : outcomes) {
        report.failed_reps += o.failed;
        report.clamped_reps += o.clamped;
        covered_n += o.covered_normal;
        covered_t += o.covered_tkappa;
    }
    const int n_eff = reps - report.failed_reps;
    if (config.crit_normal) {
        double cov = n_eff > 0 ? 100.0 * covered_n / n_eff : 0.0;
        report.coverage_normal = cov;
        report.mc_se_normal = mc_se_percent(cov, n_eff);
    }
    if (config.crit_tkappa) {
        double cov = n_eff > 0 ? 100.0 * covered_t / n_eff : 0.0;
        report.coverage_tkappa = cov;
        report.mc_se_tkappa = mc_se_percent(cov, n_eff);
    }
    return report;
}

std::vector<CoverageReport> run_cells(std::span<const DesignSpec> designs,
                                      const TableOverrides& overrides,
                                      bool crit_normal, bool crit_tkappa,
                                      const ProgressFn& progress) {
    std::vector<CoverageReport> reports;
    reports.reserve(designs.size());
    for (std::size_t i = 0; i < designs.size(); ++i) {
        SimConfig config;
        config.design = designs[i];
        config.replications = overrides.replications;
        config.level = overrides.level;
        config.psd = overrides.psd;
        config.crit_normal = crit_normal || overrides.both_criticals;
        config.crit_tkappa = crit_tkappa || overrides.both_criticals;
        config.master_seed = overrides.master_seed;
        config.workers = overrides.workers;
        reports.push_back(run_coverage(config));
        if (progress) progress(reports.back(), i, designs.size());
    }
    return reports;
}

std::vector<CoverageReport> run_table(TableId table, const TableOverrides& overrides,
                                      const ProgressFn& progress) {
    if (overrides.g_list.empty())
        fail(ErrorCode::config_invalid, "table run needs a non-empty G list");

    std::vector<DesignSpec> designs;
    const char* id = nullptr;
    if (table == TableId::T1 || table == TableId::T3) {
        id = table == TableId::T1 ? "T1" : "T3";
        for (Model m : {Model::D, Model::S, Model::B})
            for (ErrorSpec e : {ErrorSpec::iid, ErrorSpec::unit_shock})
                for (int g : overrides.g_list)
                    designs.push_back({m, g, e, 1.0});
    } else {
        id = "T2";
        for (Model m : {Model::D, Model::S})
            for (double r : {0.0, 0.25, 0.5, 0.75, 1.0})
                for (int g : overrides.g_list)
                    designs.push_back({m, g, ErrorSpec::two_group, r});
    }
    bool tkappa = table == TableId::T3;
    auto reports = run_cells(designs, overrides, !tkappa, tkappa, progress);
    for (auto& rep : reports) rep.table_id = id;
    return reports;
}

const char* model_name(Model m) {
    switch (m) {
        case Model::D: return "D";
        case Model::S: return "S";
        case Model::B: return "B";
    }
    return "?";
}

const char* error_name(ErrorSpec e) {
    switch (e) {
        case ErrorSpec::iid: return "iid";
        case ErrorSpec::unit_shock: return "unit-shock";
        case ErrorSpec::two_group: return "two-group";
    }
    return "?";
}

std::string psd_name(PsdPolicy p) {
    switch (p.kind) {
        case PsdPolicyKind::none: return "none";
        case PsdPolicyKind::clamp_zero: return "clamp-zero";
        case PsdPolicyKind::clamp_eps: return "clamp-eps";
    }
    return "?";
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt17(*v) : std::string();
}

std::string criticals_name(const SimConfig& c) {
    if (c.crit_normal && c.crit_tkappa) return "both";
    return c.crit_normal ? "normal" : "tkappa";
}

} // namespace

std::string emit_csv(std::span<const CoverageReport> reports) {
    if (reports.empty()) fail(ErrorCode::empty_input, "emit_csv: no reports");
    std::ostringstream out;
    out << "schema_version,table,model,error,r,G,N,reps,level,psd_policy,eps,"
           "criticals,kappa,coverage_normal,mc_se_normal,coverage_tkappa,"
           "mc_se_tkappa,clamped_reps,failed_reps,seed\n";
    for (const CoverageReport& rep : reports) {
        const SimConfig& c = rep.config;
        out << 1 << ',' << rep.table_id << ',' << model_name(c.design.model) << ','
            << error_name(c.design.error) << ','
            << (c.design.error == ErrorSpec::two_group ? fmt17(c.design.r) : std::string())
            << ',' << c.design.num_units << ',' << rep.num_dyads << ','
            << c.replications << ',' << fmt17(c.level) << ',' << psd_name(c.psd) << ','
            << (c.psd.kind == PsdPolicyKind::clamp_eps ? fmt17(c.psd.eps) : std::string())
            << ',' << criticals_name(c) << ',' << fmt17(rep.graph_diag.kappa) << ','
            << fmt_opt(rep.coverage_normal) << ',' << fmt_opt(rep.mc_se_normal) << ','
            << fmt_opt(rep.coverage_tkappa) << ',' << fmt_opt(rep.mc_se_tkappa) << ','
            << rep.clamped_reps << ',' << rep.failed_reps << ',' << c.master_seed << '\n';
    }
    return out.str();
}

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void emit_text_block(std::ostringstream& out,
                     std::span<const CoverageReport> reports, bool tkappa) {
    // Rows keyed by design family, columns by G.
    std::vector<int> gs;
    for (const auto& r : reports)
        if (std::find(gs.begin(), gs.end(), r.config.design.num_units) == gs.end())
            gs.push_back(r.config.design.num_units);
    std::sort(gs.begin(), gs.end());

    struct Key {
        Model m;
        ErrorSpec e;
        double r;
        bool operator<(const Key& o) const {
            if (m != o.m) return m < o.m;
            if (e != o.e) return e < o.e;
            return r < o.r;
        }
    };
    std::map<Key, std::map<int, const CoverageReport*>> rows;
    for (const auto& rep : reports)
        rows[{rep.config.design.model, rep.config.design.error, rep.config.design.r}]
            [rep.config.design.num_units] = &rep;

    out << (tkappa ? "t_kappa critical values\n" : "normal critical values\n");
    const int label_w = 26, col_w = 10;
    out << std::string(label_w, ' ');
    for (int g : gs) {
        std::string head = "G=" + std::to_string(g);
        out << head << std::string(col_w - head.size(), ' ');
    }
    out << '\n';
    for (const auto& [key, cells] : rows) {
        std::string label = std::string("Model ") + model_name(key.m) + "  " + error_name(key.e);
        if (key.e == ErrorSpec::two_group) {
            label += " r=";
            label += fixed2(key.r);
        }
        label.resize(label_w, ' ');
        std::string cov_line = label, se_line = std::string(label_w, ' ');
        for (int g : gs) {
            auto it = cells.find(g);
            std::string cov = "-", se = "";
            if (it != cells.end()) {
                const CoverageReport& rep = *it->second;
                auto c = tkappa ? rep.coverage_tkappa : rep.coverage_normal;
                auto s = tkappa ? rep.mc_se_tkappa : rep.mc_se_normal;
                if (c) cov = fixed2(*c);
                if (s) se = "(" + fixed2(*s) + ")";
            }
            cov.resize(col_w, ' ');
            se.resize(col_w, ' ');
            cov_line += cov;
            se_line += se;
        }
        while (!cov_line.empty() && cov_line.back() == ' ') cov_line.pop_back();
        while (!se_line.empty() && se_line.back() == ' ') se_line.pop_back();
        out << cov_line << '\n' << se_line << '\n';
    }
}

} // namespace

std::string emit_text(std::span<const CoverageReport> reports) {
    if (reports.empty()) fail(ErrorCode::empty_input, "emit_text: no reports");
    const SimConfig& first = reports.front().config;
    std::ostringstream out;
    out << "Coverage percentages of " << fixed2(100.0 * first.level)
        << "% CIs for the slope, beta0 = 0 (simulation SEs in parentheses)\n"
        << "replications = " << first.replications << ", seed = " << first.master_seed
        << ", psd = " << psd_name(first.psd) << "\n\n";
    bool any_normal = false, any_tkappa = false;
    for (const auto& r : reports) {
        any_normal |= r.coverage_normal.has_value();
        any_tkappa |= r.coverage_tkappa.has_value();
    }
    if (any_normal) emit_text_block(out, reports, false);
    if (any_normal && any_tkappa) out << '\n';
    if (any_tkappa) emit_text_block(out, reports, true);
    return out.str();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

} // namespace

std::vector<SimConfig> parse_sim_config(const std::string& text) {
    SimConfig base;
    std::vector<int> g_list;
    bool have_model = false;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t sep = s.find_first_of("=:");
        if (sep == std::string::npos)
            fail(ErrorCode::config_invalid,
                 "config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(s.substr(0, sep));
        std::string value = trim(s.substr(sep + 1));
        try {
            if (key == "model") {
                if (value == "D" || value == "d") base.design.model = Model::D;
                else if (value == "S" || value == "s") base.design.model = Model::S;
                else if (value == "B" || value == "b") base.design.model = Model::B;
                else fail(ErrorCode::config_invalid, "unknown model '" + value + "'");
                have_model = true;
            } else if (key == "error") {
                if (value == "iid") base.design.error = ErrorSpec::iid;
                else if (value == "unit-shock" || value == "unit_shock")
                    base.design.error = ErrorSpec::unit_shock;
                else if (value == "two-group" || value == "two_group")
                    base.design.error = ErrorSpec::two_group;
                else fail(ErrorCode::config_invalid, "unknown error spec '" + value + "'");
            } else if (key == "r") {
                base.design.r = std::stod(value);
            } else if (key == "g" || key == "G") {
                std::istringstream gl(value);
                std::string tok;
                while (std::getline(gl, tok, ','))
                    g_list.push_back(std::stoi(trim(tok)));
            } else if (key == "reps" || key == "replications") {
                base.replications = std::stoi(value);
            } else if (key == "level") {
                base.level = std::stod(value);
            } else if (key == "psd" || key == "psd_policy") {
                if (value == "none") base.psd = PsdPolicy::none();
                else if (value == "clamp-zero" || value == "clamp_zero")
                    base.psd = PsdPolicy::clamp_zero();
                else if (value == "clamp-eps" || value == "clamp_eps")
                    base.psd = PsdPolicy::clamp_eps(base.psd.eps);
                else fail(ErrorCode::config_invalid, "unknown psd policy '" + value + "'");
            } else if (key == "eps") {
                base.psd.eps = std::stod(value);
            } else if (key == "criticals" || key == "critical") {
                if (value == "normal") { base.crit_normal = true; base.crit_tkappa = false; }
                else if (value == "tkappa" || value == "t_kappa") {
                    base.crit_normal = false;
                    base.crit_tkappa = true;
                } else if (value == "both") { base.crit_normal = true; base.crit_tkappa = true; }
                else fail(ErrorCode::config_invalid, "unknown criticals '" + value + "'");
            } else if (key == "seed") {
                base.master_seed = std::stoull(value);
            } else if (key == "workers") {
                base.workers = std::stoi(value);
            } else {
                fail(ErrorCode::config_invalid, "unknown key '" + key + "'");
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(ErrorCode::config_invalid,
                 "config line " + std::to_string(line_no) + ": bad value '" + value + "'");
        }
    }
    if (!have_model) fail(ErrorCode::config_invalid, "config is missing 'model'");
    if (g_list.empty()) fail(ErrorCode::config_invalid, "config is missing 'g'");

    std::vector<SimConfig> configs;
    for (int g : g_list) {
        SimConfig c = base;
        c.design.num_units = g;
        c.validate();
        configs.push_back(c);
    }
    return configs;
}

} // namespace dyadreg
