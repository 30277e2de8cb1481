#include "dyadreg.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "core/harness.hpp"
#include "core/inference.hpp"

using namespace dyadreg;

namespace {

thread_local std::string g_last_error;

dyadreg_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return DYADREG_ERR_INVALID_ARGUMENT;
        case ErrorCode::self_pair: return DYADREG_ERR_SELF_PAIR;
        case ErrorCode::duplicate_dyad: return DYADREG_ERR_DUPLICATE_DYAD;
        case ErrorCode::unit_out_of_range: return DYADREG_ERR_UNIT_OUT_OF_RANGE;
        case ErrorCode::empty_graph: return DYADREG_ERR_EMPTY_GRAPH;
        case ErrorCode::isolated_unit: return DYADREG_ERR_ISOLATED_UNIT;
        case ErrorCode::index_out_of_range: return DYADREG_ERR_INDEX_OUT_OF_RANGE;
        case ErrorCode::invalid_ell: return DYADREG_ERR_INVALID_ELL;
        case ErrorCode::non_positive_scale: return DYADREG_ERR_NON_POSITIVE_SCALE;
        case ErrorCode::non_finite: return DYADREG_ERR_NON_FINITE;
        case ErrorCode::no_convergence: return DYADREG_ERR_NO_CONVERGENCE;
        case ErrorCode::out_of_domain: return DYADREG_ERR_OUT_OF_DOMAIN;
        case ErrorCode::non_positive_df: return DYADREG_ERR_NON_POSITIVE_DF;
        case ErrorCode::rank_deficient: return DYADREG_ERR_RANK_DEFICIENT;
        case ErrorCode::too_few_observations: return DYADREG_ERR_TOO_FEW_OBSERVATIONS;
        case ErrorCode::dimension_mismatch: return DYADREG_ERR_DIMENSION_MISMATCH;
        case ErrorCode::non_positive_variance: return DYADREG_ERR_NON_POSITIVE_VARIANCE;
        case ErrorCode::g_too_small: return DYADREG_ERR_G_TOO_SMALL;
        case ErrorCode::config_invalid: return DYADREG_ERR_CONFIG_INVALID;
        case ErrorCode::empty_input: return DYADREG_ERR_EMPTY_INPUT;
        case ErrorCode::parse_error: return DYADREG_ERR_PARSE;
        case ErrorCode::io_error: return DYADREG_ERR_IO;
    }
    return DYADREG_ERR_UNKNOWN;
}

template <typename Fn>
dyadreg_status guarded(Fn&& fn) {
    try {
        fn();
        return DYADREG_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return DYADREG_ERR_UNKNOWN;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DYADREG_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown error";
        return DYADREG_ERR_UNKNOWN;
    }
}

dyadreg_status require(bool ok, const char* message) {
    if (ok) return DYADREG_OK;
    g_last_error = message;
    return DYADREG_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Model model_from_char(char model) {
    switch (model) {
        case 'D': case 'd': return Model::D;
        case 'S': case 's': return Model::S;
        case 'B': case 'b': return Model::B;
    }
    fail(ErrorCode::invalid_argument, std::string("unknown model '") + model + "'");
}

ErrorSpec error_from_int(int32_t spec) {
    switch (spec) {
        case 0: return ErrorSpec::iid;
        case 1: return ErrorSpec::unit_shock;
        case 2: return ErrorSpec::two_group;
    }
    fail(ErrorCode::invalid_argument, "error_spec must be 0, 1 or 2");
}

PsdPolicy policy_from(dyadreg_psd_policy policy, double eps) {
    switch (policy) {
        case DYADREG_PSD_NONE: return PsdPolicy::none();
        case DYADREG_PSD_CLAMP_ZERO: return PsdPolicy::clamp_zero();
        case DYADREG_PSD_CLAMP_EPS: return PsdPolicy::clamp_eps(eps);
    }
    fail(ErrorCode::invalid_argument, "unknown psd policy");
}

dyadreg_graph_diag diag_from(const DyadGraph& graph) {
    GraphDiagnostics d = graph.diagnostics();
    return {graph.num_units(), graph.num_dyads(), d.m_high, d.m_low,
            d.med_degree, d.dependency_degree, d.kappa};
}

} // namespace

struct dyadreg_graph {
    std::shared_ptr<const DyadGraph> graph;
};

struct dyadreg_dataset {
    DyadDataset data;
};

struct dyadreg_analysis {
    SandwichResult result;
    GraphDiagnostics diag;
    DyadIndex num_rows;
    UnitId num_units;
};

struct dyadreg_table {
    std::vector<CoverageReport> reports;
};

extern "C" {

const char* dyadreg_version(void) { return DYADREG_VERSION; }

const char* dyadreg_strerror(dyadreg_status status) {
    switch (status) {
        case DYADREG_OK: return "ok";
        case DYADREG_ERR_INVALID_ARGUMENT: return "invalid argument";
        case DYADREG_ERR_SELF_PAIR: return "self-pair dyad";
        case DYADREG_ERR_DUPLICATE_DYAD: return "duplicate dyad";
        case DYADREG_ERR_UNIT_OUT_OF_RANGE: return "unit id out of range";
        case DYADREG_ERR_EMPTY_GRAPH: return "graph has no dyads";
        case DYADREG_ERR_ISOLATED_UNIT: return "isolated unit";
        case DYADREG_ERR_INDEX_OUT_OF_RANGE: return "index out of range";
        case DYADREG_ERR_INVALID_ELL: return "ell must be at least 3";
        case DYADREG_ERR_NON_POSITIVE_SCALE: return "scale must be positive";
        case DYADREG_ERR_NON_FINITE: return "non-finite value";
        case DYADREG_ERR_NO_CONVERGENCE: return "iteration did not converge";
        case DYADREG_ERR_OUT_OF_DOMAIN: return "argument out of domain";
        case DYADREG_ERR_NON_POSITIVE_DF: return "degrees of freedom must be positive";
        case DYADREG_ERR_RANK_DEFICIENT: return "rank-deficient design matrix";
        case DYADREG_ERR_TOO_FEW_OBSERVATIONS: return "too few observations";
        case DYADREG_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
        case DYADREG_ERR_NON_POSITIVE_VARIANCE: return "non-positive variance";
        case DYADREG_ERR_G_TOO_SMALL: return "too few units for this design";
        case DYADREG_ERR_CONFIG_INVALID: return "invalid configuration";
        case DYADREG_ERR_EMPTY_INPUT: return "empty input";
        case DYADREG_ERR_PARSE: return "parse error";
        case DYADREG_ERR_IO: return "i/o error";
        case DYADREG_ERR_UNKNOWN: break;
    }
    return "unknown error";
}

const char* dyadreg_last_error(void) { return g_last_error.c_str(); }

void dyadreg_string_free(char* s) { delete[] s; }

dyadreg_status dyadreg_graph_build(const int32_t* unit_g, const int32_t* unit_h,
                                   int64_t num_dyads, int32_t num_units,
                                   dyadreg_graph** out) {
    if (auto st = require(unit_g && unit_h && out, "null argument")) return st;
    return guarded([&] {
        if (num_dyads < 0) fail(ErrorCode::invalid_argument, "negative dyad count");
        std::vector<std::pair<UnitId, UnitId>> edges;
        edges.reserve(static_cast<std::size_t>(num_dyads));
        for (int64_t i = 0; i < num_dyads; ++i)
            edges.emplace_back(unit_g[i], unit_h[i]);
        *out = new dyadreg_graph{
            std::make_shared<const DyadGraph>(DyadGraph::build(edges, num_units))};
    });
}

dyadreg_status dyadreg_graph_model(char model, int32_t num_units, dyadreg_graph** out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    return guarded([&] {
        DesignSpec design{model_from_char(model), num_units, ErrorSpec::iid, 1.0};
        *out = new dyadreg_graph{
            std::make_shared<const DyadGraph>(make_design_graph(design))};
    });
}

void dyadreg_graph_free(dyadreg_graph* graph) { delete graph; }

int64_t dyadreg_graph_num_dyads(const dyadreg_graph* graph) {
    return graph ? graph->graph->num_dyads() : 0;
}

int32_t dyadreg_graph_num_units(const dyadreg_graph* graph) {
    return graph ? graph->graph->num_units() : 0;
}

dyadreg_status dyadreg_graph_dyad(const dyadreg_graph* graph, int64_t n,
                                  int32_t* unit_g, int32_t* unit_h) {
    if (auto st = require(graph && unit_g && unit_h, "null argument")) return st;
    return guarded([&] {
        const Dyad& d = graph->graph->dyad(n);
        *unit_g = d.g;
        *unit_h = d.h;
    });
}

dyadreg_status dyadreg_graph_degrees(const dyadreg_graph* graph, int32_t* degrees) {
    if (auto st = require(graph && degrees, "null argument")) return st;
    return guarded([&] {
        const auto& d = graph->graph->degrees();
        for (std::size_t i = 0; i < d.size(); ++i) degrees[i] = d[i];
    });
}

dyadreg_status dyadreg_graph_overlaps(const dyadreg_graph* graph, int64_t n,
                                      int64_t m, int32_t* out) {
    if (auto st = require(graph && out, "null argument")) return st;
    return guarded([&] { *out = graph->graph->overlaps(n, m) ? 1 : 0; });
}

dyadreg_status dyadreg_graph_diagnostics(const dyadreg_graph* graph,
                                         dyadreg_graph_diag* out) {
    if (auto st = require(graph && out, "null argument")) return st;
    return guarded([&] { *out = diag_from(*graph->graph); });
}

dyadreg_status dyadreg_janson_ratio(const dyadreg_graph* graph, double sigma_n,
                                    double bound_a, int32_t ell, double* out) {
    if (auto st = require(graph && out, "null argument")) return st;
    return guarded([&] { *out = janson_ratio(*graph->graph, sigma_n, bound_a, ell); });
}

dyadreg_status dyadreg_graph_export(const dyadreg_graph* graph, const char* format,
                                    char** out) {
    if (auto st = require(graph && format && out, "null argument")) return st;
    return guarded([&] {
        std::ostringstream os;
        std::string fmt(format);
        if (fmt == "edgelist") write_edge_list(*graph->graph, os);
        else if (fmt == "dot") write_dot(*graph->graph, os);
        else fail(ErrorCode::invalid_argument, "format must be 'edgelist' or 'dot'");
        *out = copy_string(os.str());
    });
}

dyadreg_status dyadreg_graph_import_edgelist(const char* text, int32_t num_units,
                                             dyadreg_graph** out) {
    if (auto st = require(text && out, "null argument")) return st;
    return guarded([&] {
        std::istringstream is{std::string(text)};
        *out = new dyadreg_graph{
            std::make_shared<const DyadGraph>(read_edge_list(is, num_units))};
    });
}

dyadreg_status dyadreg_dataset_create(const dyadreg_graph* graph, const double* y,
                                      const double* x, int32_t num_regressors,
                                      dyadreg_dataset** out) {
    if (auto st = require(graph && y && x && out, "null argument")) return st;
    return guarded([&] {
        std::size_t n = static_cast<std::size_t>(graph->graph->num_dyads());
        std::vector<double> yv(y, y + n);
        std::vector<double> xv(x, x + n * static_cast<std::size_t>(num_regressors));
        *out = new dyadreg_dataset{
            make_dataset(graph->graph, std::move(yv), std::move(xv), num_regressors)};
    });
}

void dyadreg_dataset_free(dyadreg_dataset* data) { delete data; }

int64_t dyadreg_dataset_num_rows(const dyadreg_dataset* data) {
    return data ? data->data.num_rows() : 0;
}

int32_t dyadreg_dataset_num_regressors(const dyadreg_dataset* data) {
    return data ? data->data.num_regressors : 0;
}

dyadreg_status dyadreg_dataset_row(const dyadreg_dataset* data, int64_t n,
                                   int32_t* unit_g, int32_t* unit_h, double* y,
                                   double* x) {
    if (auto st = require(data && unit_g && unit_h && y && x, "null argument")) return st;
    return guarded([&] {
        const Dyad& d = data->data.graph->dyad(n);
        *unit_g = d.g;
        *unit_h = d.h;
        *y = data->data.y[static_cast<std::size_t>(n)];
        for (int k = 0; k < data->data.num_regressors; ++k) x[k] = data->data.xij(n, k);
    });
}

dyadreg_status dyadreg_simulate_dataset(char model, int32_t num_units,
                                        int32_t error_spec, double r,
                                        uint64_t master_seed, uint64_t stream_id,
                                        dyadreg_dataset** out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    return guarded([&] {
        DesignSpec design{model_from_char(model), num_units, error_from_int(error_spec), r};
        RngStream stream(master_seed, stream_id);
        *out = new dyadreg_dataset{simulate_dataset(design, stream)};
    });
}

dyadreg_status dyadreg_analyze(const dyadreg_dataset* data, dyadreg_psd_policy policy,
                               double eps, dyadreg_analysis** out) {
    if (auto st = require(data && out, "null argument")) return st;
    return guarded([&] {
        SandwichResult res = sandwich(data->data, policy_from(policy, eps));
        *out = new dyadreg_analysis{std::move(res), data->data.graph->diagnostics(),
                                    data->data.num_rows(), data->data.graph->num_units()};
    });
}

void dyadreg_analysis_free(dyadreg_analysis* analysis) { delete analysis; }

int32_t dyadreg_analysis_num_regressors(const dyadreg_analysis* analysis) {
    return analysis ? static_cast<int32_t>(analysis->result.fit.beta.size()) : 0;
}

dyadreg_status dyadreg_analysis_coef(const dyadreg_analysis* analysis, int32_t k,
                                     double* beta, double* se) {
    if (auto st = require(analysis && beta && se, "null argument")) return st;
    return guarded([&] {
        if (k < 0 || k >= static_cast<int32_t>(analysis->result.fit.beta.size()))
            fail(ErrorCode::index_out_of_range, "coefficient index out of range");
        *beta = analysis->result.fit.beta[static_cast<std::size_t>(k)];
        double vkk = analysis->result.variance.v_used(k, k);
        *se = vkk > 0.0 ? std::sqrt(vkk) : 0.0;
    });
}

dyadreg_status dyadreg_analysis_tstat(const dyadreg_analysis* analysis, int32_t k,
                                      double beta0, double* out) {
    if (auto st = require(analysis && out, "null argument")) return st;
    return guarded([&] {
        *out = t_stat(analysis->result.fit, analysis->result.variance, k, beta0);
    });
}

dyadreg_status dyadreg_analysis_ci(const dyadreg_analysis* analysis, int32_t k,
                                   double level, int32_t critical, double beta0,
                                   double* lo, double* hi) {
    if (auto st = require(analysis && lo && hi, "null argument")) return st;
    return guarded([&] {
        InferenceResult r = infer(analysis->result.fit, analysis->result.variance,
                                  analysis->diag, k, level, beta0);
        auto ci = critical == 0 ? r.ci_normal : r.ci_tkappa;
        *lo = ci.first;
        *hi = ci.second;
    });
}

dyadreg_status dyadreg_analysis_vhat(const dyadreg_analysis* analysis, int32_t which,
                                     double* out) {
    if (auto st = require(analysis && out, "null argument")) return st;
    return guarded([&] {
        const SymMatrix& v = which == 1 ? analysis->result.variance.v_raw
                                        : analysis->result.variance.v_used;
        std::vector<double> full = v.to_full();
        std::memcpy(out, full.data(), full.size() * sizeof(double));
    });
}

int32_t dyadreg_analysis_clamped(const dyadreg_analysis* analysis) {
    return analysis ? analysis->result.variance.clamped : 0;
}

dyadreg_status dyadreg_analysis_graph_diag(const dyadreg_analysis* analysis,
                                           dyadreg_graph_diag* out) {
    if (auto st = require(analysis && out, "null argument")) return st;
    const GraphDiagnostics& d = analysis->diag;
    out->num_units = analysis->num_units;
    out->num_dyads = analysis->num_rows;
    out->m_high = d.m_high;
    out->m_low = d.m_low;
    out->med_degree = d.med_degree;
    out->dependency_degree = d.dependency_degree;
    out->kappa = d.kappa;
    return DYADREG_OK;
}

dyadreg_status dyadreg_analysis_residual(const dyadreg_analysis* analysis, int64_t n,
                                         double* out) {
    if (auto st = require(analysis && out, "null argument")) return st;
    return guarded([&] {
        if (n < 0 || n >= static_cast<int64_t>(analysis->result.fit.residuals.size()))
            fail(ErrorCode::index_out_of_range, "residual index out of range");
        *out = analysis->result.fit.residuals[static_cast<std::size_t>(n)];
    });
}

dyadreg_status dyadreg_normal_quantile(double p, double* out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    return guarded([&] { *out = normal_quantile(p); });
}

dyadreg_status dyadreg_t_quantile(double p, double df, double* out) {
    if (auto st = require(out != nullptr, "null argument")) return st;
    return guarded([&] { *out = t_quantile(p, df); });
}

namespace {

DesignSpec design_from_spec(const dyadreg_cell_spec& spec) {
    return DesignSpec{model_from_char(spec.model), spec.num_units,
                      error_from_int(spec.error_spec), spec.r};
}

TableOverrides overrides_from(const dyadreg_run_params& params) {
    TableOverrides o;
    o.replications = params.replications;
    o.level = params.level;
    o.psd = policy_from(params.psd, params.eps);
    o.master_seed = params.master_seed;
    o.workers = params.workers > 0 ? params.workers : 1;
    o.both_criticals = params.criticals == 2;
    return o;
}

dyadreg_cell_result cell_from(const CoverageReport& rep) {
    dyadreg_cell_result c{};
    c.spec.model = model_name(rep.config.design.model)[0];
    c.spec.num_units = rep.config.design.num_units;
    c.spec.error_spec = static_cast<int32_t>(rep.config.design.error);
    c.spec.r = rep.config.design.r;
    c.num_dyads = rep.num_dyads;
    c.kappa = rep.graph_diag.kappa;
    c.coverage_normal = rep.coverage_normal.value_or(-1.0);
    c.mc_se_normal = rep.mc_se_normal.value_or(-1.0);
    c.coverage_tkappa = rep.coverage_tkappa.value_or(-1.0);
    c.mc_se_tkappa = rep.mc_se_tkappa.value_or(-1.0);
    c.clamped_reps = rep.clamped_reps;
    c.failed_reps = rep.failed_reps;
    return c;
}

ProgressFn wrap_progress(dyadreg_progress_fn progress, void* user) {
    if (!progress) return nullptr;
    return [progress, user](const CoverageReport& rep, std::size_t i, std::size_t total) {
        dyadreg_cell_result cell = cell_from(rep);
        progress(&cell, i, total, user);
    };
}

} // namespace

dyadreg_status dyadreg_run_cell(const dyadreg_cell_spec* spec,
                                const dyadreg_run_params* params,
                                dyadreg_cell_result* out) {
    if (auto st = require(spec && params && out, "null argument")) return st;
    return guarded([&] {
        SimConfig config;
        config.design = design_from_spec(*spec);
        config.replications = params->replications;
        config.level = params->level;
        config.psd = policy_from(params->psd, params->eps);
        config.crit_normal = params->criticals == 0 || params->criticals == 2;
        config.crit_tkappa = params->criticals == 1 || params->criticals == 2;
        config.master_seed = params->master_seed;
        config.workers = params->workers > 0 ? params->workers : 1;
        *out = cell_from(run_coverage(config));
    });
}

dyadreg_status dyadreg_run_table(int32_t table_id, const int32_t* g_list,
                                 int32_t num_g, const dyadreg_run_params* params,
                                 dyadreg_progress_fn progress, void* user,
                                 dyadreg_table** out) {
    if (auto st = require(g_list && params && out && num_g > 0, "null or empty argument"))
        return st;
    return guarded([&] {
        if (table_id < 1 || table_id > 3)
            fail(ErrorCode::config_invalid, "table_id must be 1, 2 or 3");
        TableOverrides o = overrides_from(*params);
        o.g_list.assign(g_list, g_list + num_g);
        TableId id = table_id == 1 ? TableId::T1
                   : table_id == 2 ? TableId::T2
                                   : TableId::T3;
        *out = new dyadreg_table{run_table(id, o, wrap_progress(progress, user))};
    });
}

dyadreg_status dyadreg_run_cells(const dyadreg_cell_spec* specs, int32_t num_specs,
                                 const dyadreg_run_params* params,
                                 dyadreg_progress_fn progress, void* user,
                                 dyadreg_table** out) {
    if (auto st = require(specs && params && out && num_specs > 0, "null or empty argument"))
        return st;
    return guarded([&] {
        std::vector<DesignSpec> designs;
        designs.reserve(static_cast<std::size_t>(num_specs));
        for (int32_t i = 0; i < num_specs; ++i) designs.push_back(design_from_spec(specs[i]));
        TableOverrides o = overrides_from(*params);
        bool normal = params->criticals == 0 || params->criticals == 2;
        bool tkappa = params->criticals == 1 || params->criticals == 2;
        *out = new dyadreg_table{
            run_cells(designs, o, normal, tkappa, wrap_progress(progress, user))};
    });
}

dyadreg_status dyadreg_run_config(const char* config_text,
                                  dyadreg_progress_fn progress, void* user,
                                  dyadreg_table** out) {
    if (auto st = require(config_text && out, "null argument")) return st;
    return guarded([&] {
        std::vector<SimConfig> configs = parse_sim_config(config_text);
        auto wrapped = wrap_progress(progress, user);
        std::vector<CoverageReport> reports;
        reports.reserve(configs.size());
        for (std::size_t i = 0; i < configs.size(); ++i) {
            reports.push_back(run_coverage(configs[i]));
            if (wrapped) wrapped(reports.back(), i, configs.size());
        }
        *out = new dyadreg_table{std::move(reports)};
    });
}

void dyadreg_table_free(dyadreg_table* table) { delete table; }

int64_t dyadreg_table_num_cells(const dyadreg_table* table) {
    return table ? static_cast<int64_t>(table->reports.size()) : 0;
}

dyadreg_status dyadreg_table_cell(const dyadreg_table* table, int64_t index,
                                  dyadreg_cell_result* out) {
    if (auto st = require(table && out, "null argument")) return st;
    return guarded([&] {
        if (index < 0 || index >= static_cast<int64_t>(table->reports.size()))
            fail(ErrorCode::index_out_of_range, "cell index out of range");
        *out = cell_from(table->reports[static_cast<std::size_t>(index)]);
    });
}

dyadreg_status dyadreg_table_render(const dyadreg_table* table, const char* format,
                                    char** out) {
    if (auto st = require(table && format && out, "null argument")) return st;
    return guarded([&] {
        std::string fmt(format);
        std::string doc;
        if (fmt == "csv") doc = emit_csv(table->reports);
        else if (fmt == "text") doc = emit_text(table->reports);
        else fail(ErrorCode::invalid_argument, "format must be 'csv' or 'text'");
        *out = copy_string(doc);
    });
}

} // extern "C"
