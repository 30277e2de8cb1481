#ifndef DYADREG_CORE_NUMERICS_HPP_
#define DYADREG_CORE_NUMERICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "core/error.hpp"

namespace dyadreg {

// Dense symmetric matrix. Only the lower triangle is stored, so the
// symmetry invariant holds by construction.
class SymMatrix {
public:
    SymMatrix() : dim_(0) {}
    explicit SymMatrix(int dim) : dim_(dim), packed_(packed_size(dim), 0.0) {
        if (dim <= 0) fail(ErrorCode::invalid_argument, "SymMatrix dimension must be positive");
    }

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
        return m;
    }

    // Builds from a full row-major dim x dim buffer, averaging a[i][j] and
    // a[j][i] so that roundoff asymmetry in the input is discarded.
    static SymMatrix from_full(std::span<const double> full, int dim);

    int dim() const { return dim_; }

    double operator()(int i, int j) const {
        check_index(i); check_index(j);
        return packed_[pos(i, j)];
    }

    void set(int i, int j, double v) {
        check_index(i); check_index(j);
        packed_[pos(i, j)] = v;
    }

    void add(int i, int j, double v) {
        check_index(i); check_index(j);
        packed_[pos(i, j)] += v;
    }

    std::vector<double> to_full() const;

    double max_abs() const;
    bool all_finite() const;

private:
    static std::size_t packed_size(int dim) {
        return static_cast<std::size_t>(dim) * (dim + 1) / 2;
    }
    std::size_t pos(int i, int j) const {
        if (i < j) std::swap(i, j);
        return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
    }
    void check_index(int i) const {
        if (i < 0 || i >= dim_) fail(ErrorCode::index_out_of_range, "SymMatrix index out of range");
    }

    int dim_;
    std::vector<double> packed_;
};

struct EigenDecomposition {
    // Sorted descending; eigenvectors[k*dim + i] is component i of the
    // (orthonormal) eigenvector for eigenvalues[k].
    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;
    int dim = 0;

    double vector_component(int k, int i) const {
        return eigenvectors[static_cast<std::size_t>(k) * dim + i];
    }
};

// Cyclic Jacobi rotations. Unconditionally stable for symmetric input and
// has no external dependency; the matrices here are K x K with K equal to
// the regressor count, so cost is irrelevant. Off-diagonal Frobenius
// tolerance 1e-12 (relative to the input scale), capped at 100 sweeps.
EigenDecomposition sym_eigen(const SymMatrix& a);

// Solves A x = b by Gaussian elimination with partial pivoting.
std::vector<double> solve_linear(const SymMatrix& a, std::span<const double> b);

// Inverse via Gauss-Jordan with partial pivoting, re-symmetrized.
SymMatrix inverse_sym(const SymMatrix& a);

// Standard normal CDF (erfc based) and quantile (Wichura's PPND16
// rational approximations, |error| well below the 1e-8 contract).
double normal_cdf(double x);
double normal_quantile(double p);

// Regularized incomplete beta function I_x(a,b), evaluated with the
// continued fraction of Lentz's method.
double incomplete_beta(double x, double a, double b);

// Student-t distribution with real degrees of freedom. The quantile is a
// bracketed bisection/Newton hybrid on the incomplete-beta CDF, which
// supports the real-valued df produced by the kappa correction. Quantiles
// for df in (0,1] are well-defined and returned, not an error.
double t_cdf(double x, double df);
double t_pdf(double x, double df);
double t_quantile(double p, double df);

} // namespace dyadreg

#endif
