#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace wedgespec {

inline constexpr double pi_v = 3.14159265358979323846264338327950288;

/// Tolerance and refinement budget for a 1D integral. `kind` declares the
/// geometry of the domain and, implicitly, the decay class the caller
/// promises for the integrand:
///   - FiniteAdaptive:  [a, b], adaptive Gauss-Kronrod bisection.
///   - SemiInfinite:    [a, inf), integrand with algebraic or exponential
///                      decay; handled through the substitution t = a + e^u.
///   - DoublyInfinite:  (-inf, inf); the tails are clipped where the
///                      integrand magnitude stays below abs_tol/100 and the
///                      clipped window is integrated adaptively.
struct QuadratureRule {
    enum class Kind { FiniteAdaptive, SemiInfinite, DoublyInfinite };

    Kind kind = Kind::FiniteAdaptive;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_refinements = 15;

    QuadratureRule() = default;
    QuadratureRule(Kind k, double atol, double rtol, int refinements = 15)
        : kind(k), abs_tol(atol), rel_tol(rtol), max_refinements(refinements) {
        if (!(abs_tol > 0) || !(rel_tol > 0))
            throw std::invalid_argument("QuadratureRule: tolerances must be positive");
        if (max_refinements < 1)
            throw std::invalid_argument("QuadratureRule: max_refinements must be >= 1");
    }
};

/// Value plus an a-posteriori error estimate. `converged` is false when the
/// estimate could not be driven below max(abs_tol, rel_tol*|value|) within
/// the refinement budget; the value is still the best available, never a
/// silently wrong answer.
template <typename T>
struct IntegrationResult {
    T value{};
    double error_estimate = std::numeric_limits<double>::infinity();
    bool converged = false;
};

/// Integration domain; use inf() for unbounded endpoints.
struct Interval {
    double lo = 0;
    double hi = 0;
    static constexpr double inf() { return std::numeric_limits<double>::infinity(); }
};

/// Optional localization hint for infinite domains: a window known to contain
/// the bulk of the integrand mass (in the substituted u-variable for
/// SemiInfinite). Tails are still scanned and integrated beyond it.
struct WindowHint {
    double lo = -1.0;
    double hi = 1.0;
};

namespace detail {

inline bool is_bad(double v) { return std::isnan(v); }
inline bool is_bad(const std::complex<double>& v) {
    return std::isnan(v.real()) || std::isnan(v.imag());
}
inline double mag(double v) { return std::abs(v); }
inline double mag(const std::complex<double>& v) { return std::abs(v); }

template <typename F>
using result_of_integrand = std::decay_t<decltype(std::declval<F>()(0.0))>;

template <typename R, typename F>
IntegrationResult<R> finite_adaptive(const F& f, double a, double b, double abs_tol,
                                     double rel_tol, int max_depth) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    IntegrationResult<R> out;
    if (a == b) {
        out.value = R{};
        out.error_estimate = 0;
        out.converged = true;
        return out;
    }
    double err = 0, l1 = 0;
    R v = GK::integrate(f, a, b, static_cast<unsigned>(max_depth), rel_tol / 4, &err, &l1);
    if (is_bad(v)) throw std::domain_error("integrate: integrand returned NaN");
    double target = std::max(abs_tol, rel_tol * mag(v));
    if (err > target && l1 > 0) {
        // The first pass terminates on a relative criterion; retry with a
        // tolerance scaled to the absolute request.
        double tol2 = std::max(abs_tol / (4 * l1), 1e-15);
        double err2 = 0, l12 = 0;
        R v2 = GK::integrate(f, a, b, static_cast<unsigned>(max_depth), tol2, &err2, &l12);
        if (is_bad(v2)) throw std::domain_error("integrate: integrand returned NaN");
        if (err2 < err) {
            v = v2;
            err = err2;
        }
    }
    out.value = v;
    out.error_estimate = err;
    out.converged = err <= std::max(abs_tol, rel_tol * mag(v));
    return out;
}

// (-inf, inf): integrate the hinted window, then march geometrically growing
// shells outward until successive shell contributions fall below the clip
// threshold. The returned error folds in a tail proxy built from the last
// shells and endpoint magnitudes.
template <typename R, typename F>
IntegrationResult<R> clipped_real_line(const F& f, double abs_tol, double rel_tol,
                                       int max_depth, WindowHint hint) {
    IntegrationResult<R> out;
    double lo = hint.lo, hi = hint.hi;
    if (!(lo < hi)) {
        lo = hint.lo - 1;
        hi = hint.lo + 1;
    }
    const double shell_tol = abs_tol / 16;
    R total{};
    double err_total = 0;
    bool all_ok = true;

    auto center = finite_adaptive<R>(f, lo, hi, abs_tol / 4, rel_tol, max_depth);
    total += center.value;
    err_total += center.error_estimate;
    all_ok = all_ok && center.converged;

    const int min_shells = 3, max_shells = 70;
    for (int dir = 0; dir < 2; ++dir) {
        double edge = (dir == 0) ? hi : lo;
        double width = std::max(1.0, (hi - lo) / 4);
        int quiet = 0;
        double last_mag = 0, last_err = 0;
        int k = 0;
        for (; k < max_shells; ++k) {
            double a = edge, b = (dir == 0) ? edge + width : edge - width;
            auto shell = (dir == 0) ? finite_adaptive<R>(f, a, b, shell_tol, rel_tol, max_depth)
                                    : finite_adaptive<R>(f, b, a, shell_tol, rel_tol, max_depth);
            total += shell.value;
            err_total += shell.error_estimate;
            last_mag = mag(shell.value);
            last_err = shell.error_estimate;
            if (last_mag + last_err < shell_tol)
                ++quiet;
            else
                quiet = 0;
            edge = b;
            width *= 1.5;
            if (k + 1 >= min_shells && quiet >= 2) break;
        }
        if (k >= max_shells) all_ok = false;
        double fend = mag(f(edge));
        if (std::isnan(fend)) throw std::domain_error("integrate: integrand returned NaN");
        err_total += 4 * (last_mag + last_err) + fend * std::abs(edge);
    }

    out.value = total;
    out.error_estimate = err_total;
    out.converged = all_ok && err_total <= std::max(abs_tol, rel_tol * mag(total));
    return out;
}

}  // namespace detail

/// Adaptive integration of f over the given domain. The domain geometry must
/// match rule.kind. Throws std::domain_error if the integrand produces NaN;
/// all other trouble is reported through the convergence flag.
template <typename F>
IntegrationResult<detail::result_of_integrand<F>> integrate(F&& f, Interval domain,
                                                            const QuadratureRule& rule,
                                                            WindowHint hint = {}) {
    using R = detail::result_of_integrand<F>;
    const bool lo_fin = std::isfinite(domain.lo), hi_fin = std::isfinite(domain.hi);
    switch (rule.kind) {
        case QuadratureRule::Kind::FiniteAdaptive:
            if (!lo_fin || !hi_fin)
                throw std::invalid_argument("integrate: FiniteAdaptive needs a finite interval");
            return detail::finite_adaptive<R>(f, domain.lo, domain.hi, rule.abs_tol, rule.rel_tol,
                                              rule.max_refinements);
        case QuadratureRule::Kind::SemiInfinite: {
            if (!lo_fin || hi_fin || !(domain.hi > 0))
                throw std::invalid_argument("integrate: SemiInfinite needs [a, inf)");
            const double a = domain.lo;
            auto g = [&f, a](double u) {
                double eu = std::exp(u);
                return f(a + eu) * eu;
            };
            return detail::clipped_real_line<R>(g, rule.abs_tol, rule.rel_tol,
                                                rule.max_refinements, hint);
        }
        case QuadratureRule::Kind::DoublyInfinite:
            if (lo_fin || hi_fin)
                throw std::invalid_argument("integrate: DoublyInfinite needs (-inf, inf)");
            return detail::clipped_real_line<R>(f, rule.abs_tol, rule.rel_tol,
                                                rule.max_refinements, hint);
    }
    throw std::logic_error("integrate: unknown rule kind");
}

/// Shorthands used throughout the library.
template <typename F>
auto integrate_over_line(F&& f, const QuadratureRule& base, WindowHint hint = {}) {
    QuadratureRule r(QuadratureRule::Kind::DoublyInfinite, base.abs_tol, base.rel_tol,
                     base.max_refinements);
    return integrate(std::forward<F>(f), {-Interval::inf(), Interval::inf()}, r, hint);
}

template <typename F>
auto integrate_half_line(F&& f, const QuadratureRule& base, WindowHint hint = {}) {
    QuadratureRule r(QuadratureRule::Kind::SemiInfinite, base.abs_tol, base.rel_tol,
                     base.max_refinements);
    return integrate(std::forward<F>(f), {0.0, Interval::inf()}, r, hint);
}

template <typename F>
auto integrate_segment(F&& f, double a, double b, const QuadratureRule& base) {
    QuadratureRule r(QuadratureRule::Kind::FiniteAdaptive, base.abs_tol, base.rel_tol,
                     base.max_refinements);
    return integrate(std::forward<F>(f), {a, b}, r);
}

}  // namespace wedgespec
