#ifndef DYADREG_CORE_ERROR_HPP_
#define DYADREG_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dyadreg {

enum class ErrorCode {
    invalid_argument,
    self_pair,
    duplicate_dyad,
    unit_out_of_range,
    empty_graph,
    isolated_unit,
    index_out_of_range,
    invalid_ell,
    non_positive_scale,
    non_finite,
    no_convergence,
    out_of_domain,
    non_positive_df,
    rank_deficient,
    too_few_observations,
    dimension_mismatch,
    non_positive_variance,
    g_too_small,
    config_invalid,
    empty_input,
    parse_error,
    io_error,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace dyadreg

#endif
