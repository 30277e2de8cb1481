#include "core/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dyadreg {

SymMatrix SymMatrix::from_full(std::span<const double> full, int dim) {
    if (dim <= 0 || full.size() != static_cast<std::size_t>(dim) * dim)
        fail(ErrorCode::dimension_mismatch, "from_full: buffer does not match dimension");
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j)
            m.set(i, j, 0.5 * (full[static_cast<std::size_t>(i) * dim + j] +
                               full[static_cast<std::size_t>(j) * dim + i]));
    return m;
}

std::vector<double> SymMatrix::to_full() const {
    std::vector<double> full(static_cast<std::size_t>(dim_) * dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            full[static_cast<std::size_t>(i) * dim_ + j] = (*this)(i, j);
    return full;
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : packed_) m = std::max(m, std::abs(v));
    return m;
}

bool SymMatrix::all_finite() const {
    return std::all_of(packed_.begin(), packed_.end(),
                       [](double v) { return std::isfinite(v); });
}

namespace {

double off_diagonal_frobenius(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            double v = a[static_cast<std::size_t>(p) * n + q];
            s += 2.0 * v * v;
        }
    return std::sqrt(s);
}

double frobenius(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

} // namespace

EigenDecomposition sym_eigen(const SymMatrix& sym) {
    if (!sym.all_finite()) fail(ErrorCode::non_finite, "sym_eigen: non-finite entry");
    const int n = sym.dim();
    std::vector<double> a = sym.to_full();
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    const double tol = 1e-12 * (1.0 + frobenius(a));
    const int max_sweeps = 100;
    auto at = [&](std::vector<double>& m, int i, int j) -> double& {
        return m[static_cast<std::size_t>(i) * n + j];
    };

    int sweep = 0;
    while (off_diagonal_frobenius(a, n) > tol) {
        if (++sweep > max_sweeps)
            fail(ErrorCode::no_convergence, "sym_eigen: sweep cap exceeded");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(a, p, q);
                if (apq == 0.0) continue;
                double app = at(a, p, p), aqq = at(a, q, q);
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (int i = 0; i < n; ++i) {
                    double aip = at(a, i, p), aiq = at(a, i, q);
                    at(a, i, p) = c * aip - s * aiq;
                    at(a, i, q) = s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    double apj = at(a, p, j), aqj = at(a, q, j);
                    at(a, p, j) = c * apj - s * aqj;
                    at(a, q, j) = s * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = at(v, i, p), viq = at(v, i, q);
                    at(v, i, p) = c * vip - s * viq;
                    at(v, i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return at(a, i, i) > at(a, j, j);
    });

    EigenDecomposition out;
    out.dim = n;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        int col = order[k];
        out.eigenvalues[k] = at(a, col, col);
        for (int i = 0; i < n; ++i)
            out.eigenvectors[static_cast<std::size_t>(k) * n + i] = at(v, i, col);
    }
    return out;
}

std::vector<double> solve_linear(const SymMatrix& sym, std::span<const double> b) {
    const int n = sym.dim();
    if (b.size() != static_cast<std::size_t>(n))
        fail(ErrorCode::dimension_mismatch, "solve_linear: rhs size mismatch");
    std::vector<double> a = sym.to_full();
    std::vector<double> x(b.begin(), b.end());
    auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * n + j];
    };

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
        if (at(piv, col) == 0.0)
            fail(ErrorCode::rank_deficient, "solve_linear: zero pivot");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(col, j));
            std::swap(x[piv], x[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = at(r, col) / at(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) at(r, j) -= f * at(col, j);
            x[r] -= f * x[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = x[r];
        for (int j = r + 1; j < n; ++j) s -= at(r, j) * x[j];
        x[r] = s / at(r, r);
    }
    return x;
}

SymMatrix inverse_sym(const SymMatrix& sym) {
    const int n = sym.dim();
    std::vector<double> a = sym.to_full();
    std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto I = [&](int i, int j) -> double& { return inv[static_cast<std::size_t>(i) * n + j]; };

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
        if (A(piv, col) == 0.0)
            fail(ErrorCode::rank_deficient, "inverse_sym: zero pivot");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(A(piv, j), A(col, j));
                std::swap(I(piv, j), I(col, j));
            }
        double d = A(col, col);
        for (int j = 0; j < n; ++j) { A(col, j) /= d; I(col, j) /= d; }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = A(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                A(r, j) -= f * A(col, j);
                I(r, j) -= f * I(col, j);
            }
        }
    }
    return SymMatrix::from_full(inv, n);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// PPND16 (Wichura, Applied Statistics AS 241).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        fail(ErrorCode::out_of_domain, "normal_quantile: p must lie in (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r + 6.7265770927008700853e4) * r +
                 4.5921953931549871457e4) * r + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
               1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r + 3.9307895800092710610e4) * r +
                 2.1213794301586595867e4) * r + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
               4.2313330701600911252e1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
                   1.27045825245236838258e0) * r + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                 4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
                   1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                 2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
                   2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                 5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
                   7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                 5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

double incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0))
        fail(ErrorCode::out_of_domain, "incomplete_beta: shape parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x > (a + 1.0) / (a + b + 2.0))
        return 1.0 - incomplete_beta(1.0 - x, b, a);

    const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - ln_beta) / a;

    // Lentz's continued fraction.
    const double tiny = 1e-300;
    double f = 1.0, c = 1.0, d = 0.0;
    const int max_iter = 1000;
    for (int i = 0; i <= max_iter; ++i) {
        int m = i / 2;
        double numerator;
        if (i == 0)
            numerator = 1.0;
        else if (i % 2 == 0)
            numerator = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        else
            numerator = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));

        d = 1.0 + numerator * d;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = 1.0 + numerator / c;
        if (std::abs(c) < tiny) c = tiny;
        double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 3e-15) break;
    }
    return front * (f - 1.0);
}

double t_cdf(double x, double df) {
    if (!(df > 0.0)) fail(ErrorCode::non_positive_df, "t_cdf: df must be positive");
    if (!std::isfinite(x)) return x > 0.0 ? 1.0 : 0.0;
    double tail = 0.5 * incomplete_beta(df / (df + x * x), 0.5 * df, 0.5);
    return x >= 0.0 ? 1.0 - tail : tail;
}

double t_pdf(double x, double df) {
    if (!(df > 0.0)) fail(ErrorCode::non_positive_df, "t_pdf: df must be positive");
    double ln = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                0.5 * std::log(df * M_PI) -
                0.5 * (df + 1.0) * std::log1p(x * x / df);
    return std::exp(ln);
}

double t_quantile(double p, double df) {
    if (!(df > 0.0)) fail(ErrorCode::non_positive_df, "t_quantile: df must be positive");
    if (!(p > 0.0 && p < 1.0))
        fail(ErrorCode::out_of_domain, "t_quantile: p must lie in (0,1)");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -t_quantile(1.0 - p, df);
    if (df > 1e15) return normal_quantile(p);

    // Cornish-Fisher start, then safeguarded Newton within a bracket.
    double z = normal_quantile(p);
    double x = z + (z * z * z + z) / (4.0 * df) +
               (5.0 * std::pow(z, 5.0) + 16.0 * z * z * z + 3.0 * z) / (96.0 * df * df);
    if (!std::isfinite(x) || x <= 0.0) x = z;

    double lo = 0.0, hi = std::max(1.0, 2.0 * x);
    while (t_cdf(hi, df) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) fail(ErrorCode::no_convergence, "t_quantile: bracket expansion failed");
    }
    if (x <= lo || x >= hi) x = 0.5 * (lo + hi);

    for (int iter = 0; iter < 100; ++iter) {
        double f = t_cdf(x, df) - p;
        if (f > 0.0) hi = x; else lo = x;
        double deriv = t_pdf(x, df);
        double step = deriv > 0.0 ? f / deriv : 0.0;
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-13 * (1.0 + std::abs(x))) return next;
        x = next;
    }
    return x;
}

} // namespace dyadreg
