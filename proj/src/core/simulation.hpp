#ifndef DYADREG_CORE_SIMULATION_HPP_
#define DYADREG_CORE_SIMULATION_HPP_

#include <memory>
#include <vector>

#include "core/estimator.hpp"
#include "core/graph.hpp"
#include "core/rng.hpp"

namespace dyadreg {

enum class Model { D, S, B };
enum class ErrorSpec { iid, unit_shock, two_group };
enum class CovariateSpec { iid_uniform, unit_distance };

struct DesignSpec {
    Model model = Model::D;
    int num_units = 0;
    ErrorSpec error = ErrorSpec::iid;
    double r = 1.0;  // variance growth rate, two_group only

    // x_n ~ U[0,1] goes with i.i.d. errors; the unit-distance covariate
    // |z_g - z_h| goes with every dependent error spec.
    CovariateSpec covariates() const {
        return error == ErrorSpec::iid ? CovariateSpec::iid_uniform
                                       : CovariateSpec::unit_distance;
    }

    void validate() const;
};

// Model D: every possible dyad. G >= 2.
DyadGraph gen_model_d(int num_units);

// Model S: union of the rule families
//   {g,h} with |g-h| = 1;  {1,G};  {g,2g} for g <= floor(G/2);
//   {g,3g} for g <= floor(G/3);
// deduplicated under unordered equality. G >= 4 so all families are
// non-vacuous. Degrees are bounded in G (M^H = 6, M^L = 2 for G >= 18).
DyadGraph gen_model_s(int num_units);

// Model B: a bounded-degree band plus two hub units that sit in ~G/2
// dyads each. Base rules for all G:
//   {g,h} with |g-h| = 1 and g,h < G-1;  {1,G-2};
//   {g,G-1} for g <= floor(G/2);  {g,G} for g > floor(G/2).
// For G in {250, 800} an |g-h| = 2 band plus {1,G-3},{2,G-2} is added,
// and for G = 800 bands up to |g-h| = 4 plus the matching wrap pairs.
// This is the construction that reproduces the reference coverage tables;
// gen_model_b_appendix applies the |g-h| = 2 clauses at G = 100 as well.
// G >= 6.
DyadGraph gen_model_b(int num_units);
DyadGraph gen_model_b_appendix(int num_units);

DyadGraph make_design_graph(const DesignSpec& design);

// One x value per dyad. iid_uniform draws x_n ~ U[0,1] in dyad order;
// unit_distance draws z_1..z_G ~ U[0,1] and maps x_{n(g,h)} = |z_g - z_h|.
std::vector<double> gen_covariates(const DyadGraph& graph, CovariateSpec spec,
                                   RngStream& stream);

// The unit_distance mapping on given positions (exposed so degenerate
// configurations can be constructed directly).
std::vector<double> covariates_from_positions(const DyadGraph& graph,
                                              std::span<const double> z);

// Error draws, in documented order alpha_1..alpha_G then eps_1..eps_N:
//   iid:        u_n ~ U[-sqrt(3), sqrt(3)]           (variance 1)
//   unit_shock: u_{n(g,h)} = alpha_g + alpha_h + eps_n (variance 3)
//   two_group:  the unit shocks enter with a minus sign when g and h lie
//               in different groups; group A is {g <= floor((G - G^s)/2)}
//               with s = (1+r)/2, so r = 1 collapses to unit_shock.
std::vector<double> gen_errors(const DyadGraph& graph, ErrorSpec spec, double r,
                               RngStream& stream);

// Units 1..t are group A under the two-group split for rate r.
int two_group_split(int num_units, double r);

// y_n = 1 + beta x_n + u_n with beta = 0; X = [intercept, x]. Covariates
// are drawn before errors from the same stream.
DyadDataset simulate_dataset(const DesignSpec& design, RngStream& stream);
DyadDataset simulate_onto(std::shared_ptr<const DyadGraph> graph,
                          const DesignSpec& design, RngStream& stream);

} // namespace dyadreg

#endif
