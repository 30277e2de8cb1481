// dyadreg command-line front end. Links the C API only.
//
// Subcommands:
//   analyze   fit a dyadic CSV and report dyadic-robust inference
//   simulate  Monte Carlo coverage tables (reference grids or custom cells)
//   diagnose  dependency-graph diagnostics for a dataset or design
//   export    write a design's graph (edge list / DOT) or a simulated dataset
//
// Exit codes: 0 ok, 2 bad input or flags, 3 rank-deficient regression,
// 4 non-positive variance under psd=none.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dyadreg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRank = 3;
constexpr int kExitVariance = 4;

[[noreturn]] void die(int code, const std::string& message) {
    std::cerr << "dyadreg: " << message << "\n";
    std::exit(code);
}

int exit_code_for(dyadreg_status status) {
    switch (status) {
        case DYADREG_ERR_RANK_DEFICIENT: return kExitRank;
        case DYADREG_ERR_NON_POSITIVE_VARIANCE: return kExitVariance;
        default: return kExitInput;
    }
}

[[noreturn]] void die_status(dyadreg_status status) {
    die(exit_code_for(status), dyadreg_last_error());
}

void check(dyadreg_status status) {
    if (status != DYADREG_OK) die_status(status);
}

// ---------------------------------------------------------------------
// Dyadic CSV: header row, then unit_g, unit_h, y, and K regressor
// columns per line. Unit fields may be 1-based integer ids or string
// labels; labels are mapped to 1..G in first-appearance order.

struct CsvData {
    std::vector<int32_t> unit_g, unit_h;
    std::vector<double> y;
    std::vector<double> x;  // row-major, num_x columns
    int32_t num_x = 0;
    int32_t num_units = 0;
    std::vector<std::string> x_names;
    std::vector<std::string> label_map;  // label for unit id i+1 (label mode only)
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    for (std::string& f : fields) {
        std::size_t b = f.find_first_not_of(" \t");
        std::size_t e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_int(const std::string& s, long long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtoll(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

CsvData read_dyad_csv(const std::string& path, bool verbose) {
    std::ifstream in(path);
    if (!in) die(kExitInput, "cannot open '" + path + "'");

    CsvData data;
    std::map<std::string, int32_t> labels;
    bool label_mode = false;
    bool saw_header = false;
    std::string line;
    std::size_t line_no = 0;

    auto unit_id = [&](const std::string& field, std::size_t row) -> int32_t {
        long long v;
        if (!label_mode && parse_int(field, v)) {
            if (v < 1 || v > INT32_MAX)
                die(kExitInput, "line " + std::to_string(row) + ": unit id '" + field +
                                    "' must be a positive integer");
            data.num_units = std::max(data.num_units, static_cast<int32_t>(v));
            return static_cast<int32_t>(v);
        }
        if (!label_mode) {
            if (!data.unit_g.empty())
                die(kExitInput, "line " + std::to_string(row) +
                                    ": mixing integer unit ids and labels");
            label_mode = true;
        }
        auto [it, inserted] = labels.emplace(field, static_cast<int32_t>(labels.size() + 1));
        if (inserted) data.label_map.push_back(field);
        data.num_units = static_cast<int32_t>(labels.size());
        return it->second;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < 3)
            die(kExitInput, "line " + std::to_string(line_no) +
                                ": expected unit_g, unit_h, y and regressor columns");

        if (!saw_header) {
            saw_header = true;
            double tmp;
            if (!parse_double(fields[2], tmp)) {  // header row
                data.num_x = static_cast<int32_t>(fields.size()) - 3;
                for (std::size_t i = 3; i < fields.size(); ++i)
                    data.x_names.push_back(fields[i]);
                continue;
            }
            data.num_x = static_cast<int32_t>(fields.size()) - 3;  // headerless
            for (int32_t i = 0; i < data.num_x; ++i)
                data.x_names.push_back("x" + std::to_string(i + 1));
        }
        if (static_cast<int32_t>(fields.size()) - 3 != data.num_x)
            die(kExitInput, "line " + std::to_string(line_no) + ": expected " +
                                std::to_string(data.num_x + 3) + " columns, found " +
                                std::to_string(fields.size()));

        int32_t g = unit_id(fields[0], line_no);
        int32_t h = unit_id(fields[1], line_no);
        if (g == h)
            die(kExitInput, "line " + std::to_string(line_no) + ": self-pair (" +
                                fields[0] + "," + fields[1] + ")");
        double yv;
        if (!parse_double(fields[2], yv))
            die(kExitInput, "line " + std::to_string(line_no) + ": bad outcome '" +
                                fields[2] + "'");
        std::vector<double> row(static_cast<std::size_t>(data.num_x));
        for (int32_t i = 0; i < data.num_x; ++i)
            if (!parse_double(fields[static_cast<std::size_t>(i) + 3], row[static_cast<std::size_t>(i)]))
                die(kExitInput, "line " + std::to_string(line_no) + ": bad value '" +
                                    fields[static_cast<std::size_t>(i) + 3] + "' in column " +
                                    data.x_names[static_cast<std::size_t>(i)]);
        data.unit_g.push_back(g);
        data.unit_h.push_back(h);
        data.y.push_back(yv);
        data.x.insert(data.x.end(), row.begin(), row.end());
    }
    if (data.y.empty()) die(kExitInput, "'" + path + "' contains no data rows");

    // Duplicate unordered pairs get row-numbered messages here; other graph
    // problems surface from the library build below.
    std::map<std::pair<int32_t, int32_t>, std::size_t> seen;
    std::size_t row = 0;
    for (std::size_t i = 0; i < data.y.size(); ++i) {
        auto key = std::minmax(data.unit_g[i], data.unit_h[i]);
        auto [it, inserted] = seen.emplace(key, i);
        if (!inserted)
            die(kExitInput, "data row " + std::to_string(i + 1) + ": duplicate dyad {" +
                                std::to_string(key.first) + "," + std::to_string(key.second) +
                                "} (first at data row " + std::to_string(it->second + 1) + ")");
        ++row;
    }

    if (verbose && label_mode) {
        std::cerr << "# unit label mapping (first appearance order):\n";
        for (std::size_t i = 0; i < data.label_map.size(); ++i)
            std::cerr << "#   " << (i + 1) << " = " << data.label_map[i] << "\n";
    }
    return data;
}

struct GraphHandle {
    dyadreg_graph* ptr = nullptr;
    ~GraphHandle() { dyadreg_graph_free(ptr); }
};
struct DatasetHandle {
    dyadreg_dataset* ptr = nullptr;
    ~DatasetHandle() { dyadreg_dataset_free(ptr); }
};
struct AnalysisHandle {
    dyadreg_analysis* ptr = nullptr;
    ~AnalysisHandle() { dyadreg_analysis_free(ptr); }
};
struct TableHandle {
    dyadreg_table* ptr = nullptr;
    ~TableHandle() { dyadreg_table_free(ptr); }
};

void write_document(const std::string& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) die(kExitInput, "cannot write '" + out_path + "'");
    out << doc;
}

std::string timestamp_comment() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("# generated ") + buf + "\n";
}

dyadreg_psd_policy psd_from_name(const std::string& name) {
    if (name == "none") return DYADREG_PSD_NONE;
    if (name == "clamp-zero") return DYADREG_PSD_CLAMP_ZERO;
    if (name == "clamp-eps") return DYADREG_PSD_CLAMP_EPS;
    die(kExitInput, "unknown psd policy '" + name + "'");
}

int32_t error_spec_from_name(const std::string& name) {
    if (name == "iid") return 0;
    if (name == "unit-shock") return 1;
    if (name == "two-group") return 2;
    die(kExitInput, "unknown error spec '" + name + "'");
}

// ---------------------------------------------------------------------
// analyze

int cmd_analyze(const std::string& data_path, const std::string& coef,
                double level, const std::string& critical, const std::string& psd,
                double eps, double beta0, bool add_intercept,
                const std::string& out_path, bool verbose) {
    CsvData csv = read_dyad_csv(data_path, verbose);
    const int64_t n = static_cast<int64_t>(csv.y.size());

    GraphHandle graph;
    check(dyadreg_graph_build(csv.unit_g.data(), csv.unit_h.data(), n, csv.num_units,
                              &graph.ptr));

    int32_t k_cols = csv.num_x + (add_intercept ? 1 : 0);
    if (k_cols < 1) die(kExitInput, "no regressors (need a column or --add-intercept)");
    std::vector<double> x(static_cast<std::size_t>(n) * k_cols);
    for (int64_t i = 0; i < n; ++i) {
        double* row = &x[static_cast<std::size_t>(i) * k_cols];
        if (add_intercept) row[0] = 1.0;
        for (int32_t j = 0; j < csv.num_x; ++j)
            row[j + (add_intercept ? 1 : 0)] = csv.x[static_cast<std::size_t>(i) * csv.num_x + j];
    }

    std::vector<std::string> names;
    if (add_intercept) names.push_back("(intercept)");
    names.insert(names.end(), csv.x_names.begin(), csv.x_names.end());

    int32_t coef_index = add_intercept ? 1 : 0;  // default: the first data regressor
    if (!coef.empty()) {
        long long idx;
        if (parse_int(coef, idx)) {
            coef_index = static_cast<int32_t>(idx);
        } else {
            auto it = std::find(names.begin(), names.end(), coef);
            if (it == names.end()) die(kExitInput, "unknown coefficient '" + coef + "'");
            coef_index = static_cast<int32_t>(it - names.begin());
        }
    }
    if (coef_index < 0 || coef_index >= k_cols)
        die(kExitInput, "coefficient index " + std::to_string(coef_index) +
                            " outside 0.." + std::to_string(k_cols - 1));

    DatasetHandle dataset;
    check(dyadreg_dataset_create(graph.ptr, csv.y.data(), x.data(), k_cols, &dataset.ptr));

    AnalysisHandle analysis;
    check(dyadreg_analyze(dataset.ptr, psd_from_name(psd), eps, &analysis.ptr));

    dyadreg_graph_diag diag;
    check(dyadreg_graph_diagnostics(graph.ptr, &diag));

    double beta, se, tstat;
    check(dyadreg_analysis_coef(analysis.ptr, coef_index, &beta, &se));
    check(dyadreg_analysis_tstat(analysis.ptr, coef_index, beta0, &tstat));
    double nlo, nhi, tlo, thi;
    check(dyadreg_analysis_ci(analysis.ptr, coef_index, level, 0, beta0, &nlo, &nhi));
    check(dyadreg_analysis_ci(analysis.ptr, coef_index, level, 1, beta0, &tlo, &thi));
    int32_t clamped = dyadreg_analysis_clamped(analysis.ptr);

    std::printf("dyadic regression  N=%" PRId64 " dyads  G=%d units  K=%d regressors\n",
                n, diag.num_units, k_cols);
    std::printf("graph  M^H=%d  M^L=%d  med=%.4g  D_N=%d  kappa=%.4g\n", diag.m_high,
                diag.m_low, diag.med_degree, diag.dependency_degree, diag.kappa);
    std::printf("coefficient %s (index %d), psd=%s, clamped eigenvalues: %d\n",
                names[static_cast<std::size_t>(coef_index)].c_str(), coef_index,
                psd.c_str(), clamped);
    std::printf("  beta_hat          = %.4g\n", beta);
    std::printf("  se (dyadic-robust)= %.4g\n", se);
    std::printf("  T (beta0=%.4g)    = %.4g\n", beta0, tstat);
    bool want_normal = critical == "normal" || critical == "both";
    bool want_tkappa = critical == "tkappa" || critical == "both";
    if (want_normal)
        std::printf("  %.4g%% CI normal   = [%.4g, %.4g]\n", level * 100, nlo, nhi);
    if (want_tkappa)
        std::printf("  %.4g%% CI t_kappa  = [%.4g, %.4g]  (kappa=%.4g)\n", level * 100,
                    tlo, thi, diag.kappa);

    if (!out_path.empty()) {
        std::ostringstream os;
        os << "coef_index,name,beta_hat,se,t_stat,ci_normal_lo,ci_normal_hi,"
              "ci_tkappa_lo,ci_tkappa_hi,kappa,level,beta0,clamped\n";
        char buf[512];
        for (int32_t k = 0; k < k_cols; ++k) {
            double b, s, t, lo0, hi0, lo1, hi1;
            check(dyadreg_analysis_coef(analysis.ptr, k, &b, &s));
            check(dyadreg_analysis_tstat(analysis.ptr, k, beta0, &t));
            check(dyadreg_analysis_ci(analysis.ptr, k, level, 0, beta0, &lo0, &hi0));
            check(dyadreg_analysis_ci(analysis.ptr, k, level, 1, beta0, &lo1, &hi1));
            std::snprintf(buf, sizeof buf,
                          "%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                          "%.17g,%d\n",
                          k, names[static_cast<std::size_t>(k)].c_str(), b, s, t, lo0,
                          hi0, lo1, hi1, diag.kappa, level, beta0, clamped);
            os << buf;
        }
        write_document(os.str(), out_path);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------
// simulate

struct ProgressPrinter {
    std::size_t total = 0;
    static void callback(const dyadreg_cell_result* cell, size_t index, size_t total,
                         void*) {
        std::ostringstream line;
        line << "[" << (index + 1) << "/" << total << "] model=" << cell->spec.model
             << " error=" << (cell->spec.error_spec == 0   ? "iid"
                              : cell->spec.error_spec == 1 ? "unit-shock"
                                                           : "two-group");
        if (cell->spec.error_spec == 2) line << " r=" << cell->spec.r;
        line << " G=" << cell->spec.num_units;
        char buf[128];
        if (cell->coverage_normal >= 0.0) {
            std::snprintf(buf, sizeof buf, " normal=%.2f(%.2f)", cell->coverage_normal,
                          cell->mc_se_normal);
            line << buf;
        }
        if (cell->coverage_tkappa >= 0.0) {
            std::snprintf(buf, sizeof buf, " tkappa=%.2f(%.2f)", cell->coverage_tkappa,
                          cell->mc_se_tkappa);
            line << buf;
        }
        std::cerr << line.str() << "\n";
    }
};

int cmd_simulate(int table, const std::string& model, const std::string& error_spec,
                 double r, std::vector<int> g_list, int reps, double level,
                 const std::string& critical, const std::string& psd, double eps,
                 uint64_t seed, int workers, const std::string& config_path,
                 const std::string& out_path, const std::string& format,
                 bool timestamp, bool quiet) {
    dyadreg_run_params params{};
    params.replications = reps;
    params.level = level;
    params.psd = psd_from_name(psd);
    params.eps = eps;
    params.criticals = critical == "normal" ? 0 : critical == "tkappa" ? 1 : 2;
    params.master_seed = seed;
    params.workers = workers;

    dyadreg_progress_fn progress = quiet ? nullptr : &ProgressPrinter::callback;

    TableHandle result;
    if (!config_path.empty()) {
        if (table != 0 || !model.empty())
            die(kExitInput, "--config is exclusive with --table/--model");
        std::ifstream in(config_path);
        if (!in) die(kExitInput, "cannot open '" + config_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        check(dyadreg_run_config(ss.str().c_str(), progress, nullptr, &result.ptr));
    } else if (table != 0) {
        if (!model.empty()) die(kExitInput, "--table is exclusive with --model");
        check(dyadreg_run_table(table, g_list.data(), static_cast<int32_t>(g_list.size()),
                                &params, progress, nullptr, &result.ptr));
    } else if (!model.empty()) {
        if (model.size() != 1) die(kExitInput, "--model must be one of D, S, B");
        if (error_spec.empty()) die(kExitInput, "--error is required with --model");
        std::vector<dyadreg_cell_spec> specs;
        for (int g : g_list)
            specs.push_back({model[0], g, error_spec_from_name(error_spec), r});
        check(dyadreg_run_cells(specs.data(), static_cast<int32_t>(specs.size()), &params,
                                progress, nullptr, &result.ptr));
    } else {
        die(kExitInput, "one of --table, --model or --config is required");
    }

    char* doc = nullptr;
    check(dyadreg_table_render(result.ptr, format.c_str(), &doc));
    std::string body = timestamp ? timestamp_comment() + doc : std::string(doc);
    dyadreg_string_free(doc);
    write_document(body, out_path);
    return kExitOk;
}

// ---------------------------------------------------------------------
// diagnose

int cmd_diagnose(const std::string& data_path, const std::string& model, int g,
                 int ell, double sigma, double bound_a) {
    GraphHandle graph;
    if (!data_path.empty()) {
        std::ifstream probe(data_path);
        if (!probe) die(kExitInput, "cannot open '" + data_path + "'");
        std::string first_line;
        std::getline(probe, first_line);
        bool two_cols = split_csv_line(first_line).size() == 2;
        if (two_cols) {
            std::ifstream in(data_path);
            std::stringstream ss;
            ss << in.rdbuf();
            check(dyadreg_graph_import_edgelist(ss.str().c_str(), 0, &graph.ptr));
        } else {
            CsvData csv = read_dyad_csv(data_path, false);
            check(dyadreg_graph_build(csv.unit_g.data(), csv.unit_h.data(),
                                      static_cast<int64_t>(csv.y.size()), csv.num_units,
                                      &graph.ptr));
        }
    } else if (!model.empty() && g > 0) {
        check(dyadreg_graph_model(model[0], g, &graph.ptr));
    } else {
        die(kExitInput, "either --data or --model/--g is required");
    }

    dyadreg_graph_diag diag;
    check(dyadreg_graph_diagnostics(graph.ptr, &diag));
    std::vector<int32_t> degrees(static_cast<std::size_t>(diag.num_units));
    check(dyadreg_graph_degrees(graph.ptr, degrees.data()));
    std::sort(degrees.begin(), degrees.end());
    auto quantile = [&](double q) {
        double pos = q * (degrees.size() - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        std::size_t hi = std::min(lo + 1, degrees.size() - 1);
        return degrees[lo] + (pos - lo) * (degrees[hi] - degrees[lo]);
    };

    std::printf("units (G)            = %d\n", diag.num_units);
    std::printf("dyads (N)            = %" PRId64 "\n", diag.num_dyads);
    std::printf("degree min/q1/med/q3/max = %d / %.4g / %.4g / %.4g / %d\n", diag.m_low,
                quantile(0.25), diag.med_degree, quantile(0.75), diag.m_high);
    std::printf("M^H                  = %d\n", diag.m_high);
    std::printf("M^L                  = %d\n", diag.m_low);
    std::printf("dependency degree D_N= %d\n", diag.dependency_degree);
    std::printf("kappa                = %.6g\n", diag.kappa);
    if (sigma > 0.0) {
        double ratio;
        check(dyadreg_janson_ratio(graph.ptr, sigma, bound_a, ell, &ratio));
        std::printf("janson ratio (ell=%d, sigma=%.4g, A=%.4g) = %.6g\n", ell, sigma,
                    bound_a, ratio);
    }
    // Hub heuristic: a handful of units carry most of the overlap when the
    // median degree is small next to the maximum.
    double hub_ratio = diag.med_degree / diag.m_high;
    if (hub_ratio < 0.25)
        std::printf("warning: hub-dominated configuration (med/M^H = %.4g < 0.1); "
                    "normal critical values may undercover, consider t_kappa\n",
                    hub_ratio);
    return kExitOk;
}

// ---------------------------------------------------------------------
// export

int cmd_export(const std::string& model, int g, const std::string& format,
               const std::string& error_spec, double r, uint64_t seed, uint64_t rep,
               const std::string& out_path) {
    if (model.empty() || g <= 0) die(kExitInput, "--model and --g are required");

    if (format == "edgelist" || format == "dot") {
        GraphHandle graph;
        check(dyadreg_graph_model(model[0], g, &graph.ptr));
        char* doc = nullptr;
        check(dyadreg_graph_export(graph.ptr, format.c_str(), &doc));
        std::string body(doc);
        dyadreg_string_free(doc);
        write_document(body, out_path);
        return kExitOk;
    }
    if (format == "dataset") {
        if (error_spec.empty()) die(kExitInput, "--error is required for dataset export");
        DatasetHandle data;
        check(dyadreg_simulate_dataset(model[0], g, error_spec_from_name(error_spec), r,
                                       seed, rep, &data.ptr));
        std::ostringstream os;
        os << "unit_g,unit_h,y,x\n";
        char buf[128];
        int64_t n = dyadreg_dataset_num_rows(data.ptr);
        for (int64_t i = 0; i < n; ++i) {
            int32_t a, b;
            double y, row[2];
            check(dyadreg_dataset_row(data.ptr, i, &a, &b, &y, row));
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", a, b, y, row[1]);
            os << buf;
        }
        write_document(os.str(), out_path);
        return kExitOk;
    }
    die(kExitInput, "unknown format '" + format + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inference for linear regression with dyadic data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", dyadreg_version());

    // analyze
    std::string an_data, an_coef, an_critical = "both", an_psd = "clamp-eps";
    std::string an_out;
    double an_level = 0.95, an_eps = 1e-7, an_beta0 = 0.0;
    bool an_no_intercept = false, an_verbose = false;
    auto* analyze = app.add_subcommand("analyze", "Fit a dyadic CSV dataset");
    analyze->add_option("--data", an_data, "CSV: unit_g,unit_h,y,regressors...")->required();
    analyze->add_option("--coef", an_coef, "Coefficient index or column name (default: first regressor)");
    analyze->add_option("--level", an_level, "Confidence level (default 0.95)");
    analyze->add_option("--critical", an_critical, "normal | tkappa | both")
        ->check(CLI::IsMember({"normal", "tkappa", "both"}));
    analyze->add_option("--psd", an_psd, "none | clamp-zero | clamp-eps")
        ->check(CLI::IsMember({"none", "clamp-zero", "clamp-eps"}));
    analyze->add_option("--eps", an_eps, "Eigenvalue floor for clamp-eps (default 1e-7)");
    analyze->add_option("--beta0", an_beta0, "Hypothesized coefficient value (default 0)");
    analyze->add_flag("--no-intercept", an_no_intercept, "Do not prepend an intercept column");
    analyze->add_option("--out", an_out, "Write per-coefficient CSV here");
    analyze->add_flag("--verbose", an_verbose, "Echo unit label mapping");

    // simulate
    int si_table = 0;
    std::string si_model, si_error, si_critical = "normal", si_psd = "clamp-eps";
    std::string si_config, si_out, si_format = "csv";
    std::vector<int> si_g = {10, 25, 50, 100};
    int si_reps = 2000, si_workers = static_cast<int>(std::thread::hardware_concurrency());
    double si_r = 1.0, si_level = 0.95, si_eps = 1e-7;
    std::uint64_t si_seed = 0;
    bool si_timestamp = false, si_quiet = false;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage tables");
    simulate->add_option("--table", si_table, "Reference table grid: 1, 2 or 3")
        ->check(CLI::Range(1, 3));
    simulate->add_option("--model", si_model, "D | S | B (custom cells)")
        ->check(CLI::IsMember({"D", "S", "B"}));
    simulate->add_option("--error", si_error, "iid | unit-shock | two-group")
        ->check(CLI::IsMember({"iid", "unit-shock", "two-group"}));
    simulate->add_option("--r", si_r, "two-group variance growth rate in [0,1]");
    simulate->add_option("--g", si_g, "Unit counts (default 10,25,50,100)")->delimiter(',');
    simulate->add_option("--reps", si_reps, "Replications per cell (default 2000)");
    simulate->add_option("--level", si_level, "Confidence level (default 0.95)");
    simulate->add_option("--critical", si_critical, "normal | tkappa | both")
        ->check(CLI::IsMember({"normal", "tkappa", "both"}));
    simulate->add_option("--psd", si_psd, "none | clamp-zero | clamp-eps")
        ->check(CLI::IsMember({"none", "clamp-zero", "clamp-eps"}));
    simulate->add_option("--eps", si_eps, "Eigenvalue floor (default 1e-7)");
    simulate->add_option("--seed", si_seed, "Master seed (default 0)");
    simulate->add_option("--workers", si_workers, "Thread budget per cell");
    simulate->add_option("--config", si_config, "Flat key=value config file");
    simulate->add_option("--out", si_out, "Output path (default stdout)");
    simulate->add_option("--format", si_format, "csv | text")
        ->check(CLI::IsMember({"csv", "text"}));
    simulate->add_flag("--timestamp", si_timestamp, "Prepend a generation timestamp comment");
    simulate->add_flag("--quiet", si_quiet, "Suppress per-cell progress on stderr");

    // diagnose
    std::string di_data, di_model;
    int di_g = 0, di_ell = 3;
    double di_sigma = 0.0, di_a = 1.0;
    auto* diagnose = app.add_subcommand("diagnose", "Dependency-graph diagnostics");
    diagnose->add_option("--data", di_data, "Dyadic CSV or two-column edge list");
    diagnose->add_option("--model", di_model, "D | S | B")
        ->check(CLI::IsMember({"D", "S", "B"}));
    diagnose->add_option("--g", di_g, "Unit count for --model");
    diagnose->add_option("--ell", di_ell, "Cumulant order for the Janson ratio (>= 3)");
    diagnose->add_option("--sigma", di_sigma, "sigma_N for the Janson ratio");
    diagnose->add_option("--bound", di_a, "Envelope bound A (default 1)");

    // export
    std::string ex_model, ex_format = "edgelist", ex_error, ex_out;
    int ex_g = 0;
    double ex_r = 1.0;
    std::uint64_t ex_seed = 0, ex_rep = 0;
    auto* exp = app.add_subcommand("export", "Write a design graph or simulated dataset");
    exp->add_option("--model", ex_model, "D | S | B")->required()
        ->check(CLI::IsMember({"D", "S", "B"}));
    exp->add_option("--g", ex_g, "Unit count")->required();
    exp->add_option("--format", ex_format, "edgelist | dot | dataset")
        ->check(CLI::IsMember({"edgelist", "dot", "dataset"}));
    exp->add_option("--error", ex_error, "Dataset export: iid | unit-shock | two-group")
        ->check(CLI::IsMember({"iid", "unit-shock", "two-group"}));
    exp->add_option("--r", ex_r, "two-group rate");
    exp->add_option("--seed", ex_seed, "Dataset export master seed");
    exp->add_option("--rep", ex_rep, "Dataset export stream id (default 0)");
    exp->add_option("--out", ex_out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    if (analyze->parsed())
        return cmd_analyze(an_data, an_coef, an_level, an_critical, an_psd, an_eps,
                           an_beta0, !an_no_intercept, an_out, an_verbose);
    if (simulate->parsed())
        return cmd_simulate(si_table, si_model, si_error, si_r, si_g, si_reps, si_level,
                            si_critical, si_psd, si_eps, si_seed, si_workers, si_config,
                            si_out, si_format, si_timestamp, si_quiet);
    if (diagnose->parsed())
        return cmd_diagnose(di_data, di_model, di_g, di_ell, di_sigma, di_a);
    if (exp->parsed())
        return cmd_export(ex_model, ex_g, ex_format, ex_error, ex_r, ex_seed, ex_rep,
                          ex_out);
    return kExitInput;
}
