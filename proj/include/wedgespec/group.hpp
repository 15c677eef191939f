#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "wedgespec/quadrature.hpp"

namespace wedgespec {

/// Point (x, z) of the affine group, x > 0: (x,z) acts as w -> xw + z.
/// Group law (x,z)*(s,t) = (xs, xt+z); right Haar measure dx/x dz.
struct GroupElement {
    double x;
    double z;

    GroupElement(double x_, double z_) : x(x_), z(z_) {
        if (!(x > 0)) throw std::domain_error("GroupElement: dilation must be positive");
    }
};

inline GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    return {g.x * h.x, g.x * h.z + g.z};
}

inline GroupElement inverse(const GroupElement& g) { return {1.0 / g.x, -g.z / g.x}; }

/// Haar modulus of the (non-unimodular) group: Delta(x, z) = 1/x.
inline double haar_modulus(const GroupElement& g) { return 1.0 / g.x; }

/// Axis-aligned box in the coordinates (u, z) = (log x, z).
struct SupportBox {
    double u_lo = 0, u_hi = 0, z_lo = 0, z_hi = 0;
};

enum class DecayClass { CompactBox, LogGaussian };

/// amplitude * exp(-log_decay*(log x - log_center)^2 - z_decay*(z - z_center)^2)
struct LogGaussianSpec {
    double amplitude = 1.0;
    double log_center = 0.0;
    double log_decay = 1.0;
    double z_center = 0.0;
    double z_decay = 1.0;
};

/// Function on the group with a declared decay class. Construction verifies
/// the declaration by sampling past the support box: everything out there
/// must stay below 1e-12 of the peak. The optional core box marks where the
/// bulk of the mass sits; quadrature hints start there and let the tail
/// scan pick up the rest of the support.
class SampledFunctionG {
public:
    using Evaluator = std::function<std::complex<double>(double x, double z)>;

    SampledFunctionG(Evaluator f, SupportBox box, double weight_exponent = 0.0)
        : eval_(std::move(f)),
          decay_(DecayClass::CompactBox),
          box_(box),
          core_(box),
          weight_(weight_exponent) {
        verify_decay();
    }

    SampledFunctionG(Evaluator f, SupportBox box, SupportBox core, double weight_exponent = 0.0)
        : eval_(std::move(f)),
          decay_(DecayClass::CompactBox),
          box_(box),
          core_(core),
          weight_(weight_exponent) {
        verify_decay();
    }

    static SampledFunctionG log_gaussian(const LogGaussianSpec& spec) {
        if (!(spec.log_decay > 0) || !(spec.z_decay > 0))
            throw std::invalid_argument("log_gaussian: decay rates must be positive");
        SupportBox box;
        const double hu = std::sqrt(29.0 / spec.log_decay);
        const double hz = std::sqrt(29.0 / spec.z_decay);
        box.u_lo = spec.log_center - hu;
        box.u_hi = spec.log_center + hu;
        box.z_lo = spec.z_center - hz;
        box.z_hi = spec.z_center + hz;
        SampledFunctionG f(
            [spec](double x, double z) -> std::complex<double> {
                const double u = std::log(x) - spec.log_center;
                const double w = z - spec.z_center;
                return spec.amplitude *
                       std::exp(-spec.log_decay * u * u - spec.z_decay * w * w);
            },
            box, 0.0, DecayClass::LogGaussian);
        f.gaussian_ = spec;
        return f;
    }

    std::complex<double> operator()(double x, double z) const { return eval_(x, z); }

    DecayClass decay_class() const { return decay_; }
    const SupportBox& support() const { return box_; }
    const SupportBox& core() const { return core_; }
    double weight_exponent() const { return weight_; }
    const std::optional<LogGaussianSpec>& gaussian() const { return gaussian_; }

    /// Closed-form squared L^2(G) norm, available for the Gaussian class.
    double l2_norm_sq_closed_form() const {
        if (!gaussian_) throw std::logic_error("l2_norm_sq_closed_form: not Gaussian class");
        const auto& g = *gaussian_;
        return g.amplitude * g.amplitude * std::sqrt(pi_v / (2 * g.log_decay)) *
               std::sqrt(pi_v / (2 * g.z_decay));
    }

    /// Partial Fourier transform in z: fhat(x, zeta) = int e^{-2 pi i z zeta} f(x, z) dz.
    std::complex<double> fourier_z(double x, double zeta, const QuadratureRule& rule) const {
        if (gaussian_) {
            const auto& g = *gaussian_;
            const double u = std::log(x) - g.log_center;
            const double amp = g.amplitude * std::sqrt(pi_v / g.z_decay) *
                               std::exp(-g.log_decay * u * u -
                                        pi_v * pi_v * zeta * zeta / g.z_decay);
            const double phase = -2 * pi_v * zeta * g.z_center;
            return amp * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        const double lx = std::log(x);
        if (lx < box_.u_lo || lx > box_.u_hi) return 0.0;
        auto res = integrate_segment(
            [&](double z) {
                const double ph = -2 * pi_v * z * zeta;
                return eval_(x, z) * std::complex<double>(std::cos(ph), std::sin(ph));
            },
            box_.z_lo, box_.z_hi, rule);
        return res.value;
    }

private:
    SampledFunctionG(Evaluator f, SupportBox box, double weight, DecayClass dc)
        : eval_(std::move(f)), decay_(dc), box_(box), core_(box), weight_(weight) {}

    void verify_decay() const {
        double peak = 0;
        for (int i = 0; i <= 8; ++i) {
            for (int j = 0; j <= 8; ++j) {
                const double u = box_.u_lo + (box_.u_hi - box_.u_lo) * i / 8.0;
                const double z = box_.z_lo + (box_.z_hi - box_.z_lo) * j / 8.0;
                const auto v = eval_(std::exp(u), z);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw std::invalid_argument("SampledFunctionG: non-finite on support");
                peak = std::max(peak, std::abs(v));
            }
        }
        if (peak == 0) return;
        const double uc = (box_.u_lo + box_.u_hi) / 2, zc = (box_.z_lo + box_.z_hi) / 2;
        const double hu = (box_.u_hi - box_.u_lo) / 2, hz = (box_.z_hi - box_.z_lo) / 2;
        for (double lam : {1.05, 1.4, 2.0, 4.0}) {
            const double du[] = {lam * hu, -lam * hu, lam * hu, -lam * hu, lam * hu, -lam * hu, 0, 0};
            const double dz[] = {lam * hz, lam * hz, -lam * hz, -lam * hz, 0, 0, lam * hz, -lam * hz};
            for (int i = 0; i < 8; ++i) {
                const auto v = eval_(std::exp(uc + du[i]), zc + dz[i]);
                if (!(std::abs(v) < 1e-12 * peak))
                    throw std::invalid_argument(
                        "SampledFunctionG: declared decay not honest beyond support box");
            }
        }
    }

    Evaluator eval_;
    DecayClass decay_;
    SupportBox box_;
    SupportBox core_;
    double weight_;
    std::optional<LogGaussianSpec> gaussian_;
};

/// V_gamma f = x^gamma f. Stays inside the declared decay class: a Gaussian
/// in log x absorbs the weight into its center and amplitude.
inline SampledFunctionG v_weight(const SampledFunctionG& f, double gamma) {
    if (gamma == 0) return f;
    if (f.gaussian()) {
        LogGaussianSpec g = *f.gaussian();
        g.amplitude *= std::exp(gamma * g.log_center + gamma * gamma / (4 * g.log_decay));
        g.log_center += gamma / (2 * g.log_decay);
        return SampledFunctionG::log_gaussian(g);
    }
    auto base = f;
    return SampledFunctionG(
        [base, gamma](double x, double z) { return std::pow(x, gamma) * base(x, z); },
        f.support(), f.core(), f.weight_exponent() + gamma);
}

namespace detail {
inline double hull_lo(double a, double b) { return std::min(a, b); }
inline double hull_hi(double a, double b) { return std::max(a, b); }
}  // namespace detail

/// Right convolution on the group evaluated at one point:
///   (f * k)(x, z) = int int f(x/s, z - x t / s) k(s, t) ds/s dt.
/// Non-convergence of the nested quadrature is reported via the flag.
inline IntegrationResult<std::complex<double>> convolve(const SampledFunctionG& f,
                                                        const SampledFunctionG& k,
                                                        const GroupElement& at,
                                                        const QuadratureRule& rule) {
    const double x = at.x, z = at.z;
    const double lx = std::log(x);
    const SupportBox& fb = f.support();
    const SupportBox& kb = k.support();

    // s = e^w; the product vanishes unless log x - w lies in f's u-range and
    // w in k's, so the quadrature windows are the intersections.
    const double w_lo = std::max(kb.u_lo, lx - fb.u_hi);
    const double w_hi = std::min(kb.u_hi, lx - fb.u_lo);
    IntegrationResult<std::complex<double>> out;
    if (!(w_lo < w_hi)) {
        out.value = 0;
        out.error_estimate = 0;
        out.converged = true;
        return out;
    }

    QuadratureRule inner(rule.kind, rule.abs_tol / 10, rule.rel_tol / 10, rule.max_refinements);
    bool inner_ok = true;

    auto outer = integrate_over_line(
        [&](double w) -> std::complex<double> {
            if (lx - w < fb.u_lo || lx - w > fb.u_hi) return 0.0;
            const double s = std::exp(w);
            const double scale = s / x;
            const double t_lo = std::max(kb.z_lo, (z - fb.z_hi) * scale);
            const double t_hi = std::min(kb.z_hi, (z - fb.z_lo) * scale);
            if (!(t_lo < t_hi)) return 0.0;
            auto in = integrate_over_line(
                [&](double t) -> std::complex<double> {
                    return f(x / s, z - x * t / s) * k(s, t);
                },
                inner, WindowHint{t_lo, t_hi});
            inner_ok = inner_ok && in.converged;
            return in.value;
        },
        rule, WindowHint{w_lo, w_hi});

    outer.converged = outer.converged && inner_ok;
    return outer;
}

/// Kernel of a Hilbert-Schmidt operator on L^2(R_+, dr/r), with localization
/// hints in (u, v) = (log r, log w): mass sits in u_lo..u_hi, v_lo..v_hi and
/// within the band v - u in diag_lo..diag_hi.
struct HSKernel {
    std::function<std::complex<double>(double r, double w)> kernel;
    int sign = +1;
    double u_lo = -1, u_hi = 1;
    double v_lo = -1, v_hi = 1;
    double diag_lo = 0, diag_hi = 0;

    std::complex<double> operator()(double r, double w) const { return kernel(r, w); }
};

/// Kernel of the corrected Plancherel transform P_{sign}(f) acting on
/// L^2(R_+, dr/r):  kappa(r, w) = sqrt(r) * fhat_z(w/r, sign*r), so that
/// P(f) eta(r) = int kappa(r, w) eta(w) dw/w.
inline HSKernel plancherel_kernel(const SampledFunctionG& f, int sign,
                                  const QuadratureRule& rule = {}) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("plancherel_kernel: sign must be +1 or -1");
    HSKernel k;
    k.sign = sign;
    QuadratureRule fr(QuadratureRule::Kind::FiniteAdaptive, rule.abs_tol, rule.rel_tol,
                      rule.max_refinements);
    auto fcopy = f;
    k.kernel = [fcopy, sign, fr](double r, double w) -> std::complex<double> {
        if (!(r > 0) || !(w > 0)) return 0.0;
        return std::sqrt(r) * fcopy.fourier_z(w / r, sign * r, fr);
    };
    const SupportBox& fb = f.support();
    k.diag_lo = fb.u_lo;
    k.diag_hi = fb.u_hi;

    // Locate the bulk of |kappa| in u = log r by scanning the r-profile
    // sqrt(r)*|fhat_z(c, r)| around its maximum.
    const double xc = std::exp((fb.u_lo + fb.u_hi) / 2);
    auto profile = [&](double u) {
        return std::sqrt(std::exp(u)) * std::abs(fcopy.fourier_z(xc, sign * std::exp(u), fr));
    };
    double ubest = 0, pbest = 0;
    for (double u = -40; u <= 12; u += 0.5) {
        const double p = profile(u);
        if (p > pbest) {
            pbest = p;
            ubest = u;
        }
    }
    double lo = ubest, hi = ubest;
    if (pbest > 0) {
        while (lo > -700 && profile(lo) > 1e-13 * pbest) lo -= 0.5;
        while (hi < 700 && profile(hi) > 1e-13 * pbest) hi += 0.5;
    }
    k.u_lo = lo - 1;
    k.u_hi = hi + 1;
    k.v_lo = k.u_lo + fb.u_lo;
    k.v_hi = k.u_hi + fb.u_hi;
    return k;
}

/// Hilbert-Schmidt norm (iint |kappa(r,w)|^2 dr/r dw/w)^{1/2}, in logarithmic
/// coordinates with the kernel's localization hints.
inline IntegrationResult<double> hs_norm(const HSKernel& k, const QuadratureRule& rule) {
    QuadratureRule inner(rule.kind, rule.abs_tol / 10, rule.rel_tol / 10, rule.max_refinements);
    bool inner_ok = true;
    auto sq = integrate_over_line(
        [&](double u) -> double {
            const double r = std::exp(u);
            WindowHint vwin{detail::hull_lo(k.v_lo, u + k.diag_lo),
                            detail::hull_hi(k.v_hi, u + k.diag_hi)};
            auto in = integrate_over_line(
                [&](double v) -> double {
                    const double a = std::abs(k.kernel(r, std::exp(v)));
                    return a * a;
                },
                inner, vwin);
            inner_ok = inner_ok && in.converged;
            return in.value;
        },
        rule, WindowHint{k.u_lo, k.u_hi});

    IntegrationResult<double> out;
    out.value = std::sqrt(std::max(0.0, sq.value));
    out.error_estimate = sq.error_estimate / std::max(2 * out.value, 1e-30);
    out.converged = sq.converged && inner_ok;
    return out;
}

/// Squared L^2(G) norm of f by quadrature over (log x, z).
inline IntegrationResult<double> l2_norm_sq(const SampledFunctionG& f,
                                            const QuadratureRule& rule) {
    const SupportBox& b = f.core();
    QuadratureRule inner(rule.kind, rule.abs_tol / 10, rule.rel_tol / 10, rule.max_refinements);
    bool inner_ok = true;
    auto res = integrate_over_line(
        [&](double u) -> double {
            const double x = std::exp(u);
            auto in = integrate_over_line(
                [&](double z) {
                    const double a = std::abs(f(x, z));
                    return a * a;
                },
                inner, WindowHint{b.z_lo, b.z_hi});
            inner_ok = inner_ok && in.converged;
            return in.value;
        },
        rule, WindowHint{b.u_lo, b.u_hi});
    res.converged = res.converged && inner_ok;
    return res;
}

/// L^1(G) norm of f by quadrature over (log x, z).
inline IntegrationResult<double> l1_norm(const SampledFunctionG& f, const QuadratureRule& rule) {
    const SupportBox& b = f.core();
    QuadratureRule inner(rule.kind, rule.abs_tol / 10, rule.rel_tol / 10, rule.max_refinements);
    bool inner_ok = true;
    auto res = integrate_over_line(
        [&](double u) -> double {
            const double x = std::exp(u);
            auto in = integrate_over_line([&](double z) { return std::abs(f(x, z)); }, inner,
                                          WindowHint{b.z_lo, b.z_hi});
            inner_ok = inner_ok && in.converged;
            return in.value;
        },
        rule, WindowHint{b.u_lo, b.u_hi});
    res.converged = res.converged && inner_ok;
    return res;
}

}  // namespace wedgespec
