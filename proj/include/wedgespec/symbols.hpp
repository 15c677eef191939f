#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wedgespec/quadrature.hpp"

namespace wedgespec {

/// Wedge opening angle alpha in (0, 2pi) \ {pi} (radians) and weight
/// exponent a in (-1, 3). Angles within 1e-4 of the degenerate values
/// {0, pi, 2pi} are rejected.
class WedgeParams {
public:
    static constexpr double angle_margin = 1e-4;

    WedgeParams(double alpha, double a) : alpha_(alpha), a_(a) {
        if (!(alpha > angle_margin) || !(alpha < 2 * pi_v - angle_margin) ||
            std::abs(alpha - pi_v) < angle_margin)
            throw std::domain_error("WedgeParams: alpha must lie in (0, 2pi) away from pi");
        if (!(a > -1.0 + 1e-12) || !(a < 3.0 - 1e-12))
            throw std::domain_error("WedgeParams: weight exponent must lie in (-1, 3)");
    }

    double alpha() const { return alpha_; }
    double a() const { return a_; }
    bool energy_weight() const { return std::abs(a_ - 1.0) <= 1e-12; }

private:
    double alpha_;
    double a_;
};

using SpectralPoint = std::complex<double>;

/// Kernel of the truncated Mellin convolution the wedge operator reduces to
/// on (0,1):  i(s) = -(sin(alpha)/pi) s^{(3-a)/2} / (1 + s^2 - 2 s cos(alpha)).
inline double mellin_kernel(const WedgeParams& p, double s) {
    if (!(s > 0)) throw std::domain_error("mellin_kernel: s must be positive");
    const double denom = 1 + s * s - 2 * s * std::cos(p.alpha());
    return -(std::sin(p.alpha()) / pi_v) * std::pow(s, (3 - p.a()) / 2) / denom;
}

namespace detail {

// e^{-|xi| |theta|} * sin((c + i xi) theta), computed without overflow.
inline std::complex<double> scaled_sin(double c, double xi, double theta) {
    const double sgn = (xi * theta >= 0) ? 1.0 : -1.0;
    const double e = std::exp(-2 * std::abs(xi * theta));
    return {0.5 * std::sin(c * theta) * (1 + e), 0.5 * sgn * std::cos(c * theta) * (1 - e)};
}

}  // namespace detail

/// Value of the Mellin symbol at frequency xi:
///   sigma(xi) = -sin(((1-a)/2 + i xi)(pi - alpha)) / sin(((1-a)/2 + i xi) pi).
/// Large |xi| is evaluated through exponentially scaled sines; the a = 1,
/// xi = 0 degeneracy takes its limit value alpha/pi - 1.
inline SpectralPoint sigma_point(const WedgeParams& p, double xi) {
    const double c = (1 - p.a()) / 2;
    const double theta = pi_v - p.alpha();
    if (c == 0 && xi == 0) return {p.alpha() / pi_v - 1.0, 0.0};
    if (std::abs(xi) <= 30) {
        const std::complex<double> zeta(c, xi);
        return -std::sin(zeta * theta) / std::sin(zeta * pi_v);
    }
    const auto num = detail::scaled_sin(c, xi, theta);
    const auto den = detail::scaled_sin(c, xi, pi_v);
    // ratio of the scaled forms carries the residual factor e^{-|xi|(pi - |theta|)}
    return -(num / den) * std::exp(-std::abs(xi) * (pi_v - std::abs(theta)));
}

/// Closed-form operator norm |sin((1-a)(pi-alpha)/2) / sin((1-a) pi/2)|;
/// the a = 1 limit is |1 - alpha/pi|.
inline double norm_bound(const WedgeParams& p) {
    if (p.energy_weight()) return std::abs(1 - p.alpha() / pi_v);
    const double c = (1 - p.a()) / 2;
    return std::abs(std::sin(c * (pi_v - p.alpha())) / std::sin(c * pi_v));
}

struct CurveSample {
    double xi;
    SpectralPoint value;
};

/// Adaptively sampled polyline of the symbol curve. Samples are symmetric
/// under xi -> -xi with conjugate values, xi = 0 is always present, and the
/// tails run out until |value| < tol/10. closed_polyline() prepends and
/// appends the closure point 0 (the xi -> +-inf limit).
struct SpectralCurve {
    WedgeParams params;
    std::vector<CurveSample> samples;  // ordered by xi ascending, closure excluded
    bool closes_at_zero = false;
    double tail_xi = 0;  // |value| is non-increasing on samples beyond this

    std::vector<SpectralPoint> closed_polyline() const {
        std::vector<SpectralPoint> poly;
        poly.reserve(samples.size() + 2);
        poly.push_back({0.0, 0.0});
        for (const auto& s : samples) poly.push_back(s.value);
        poly.push_back({0.0, 0.0});
        return poly;
    }
};

/// Samples the curve with adjacent-sample spacing at most tol in the complex
/// plane.
inline SpectralCurve sample_curve(const WedgeParams& p, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("sample_curve: tol must be positive");

    // Half grid xi >= 0, mirrored at the end. Seed with a tangent-spaced grid
    // and push the tail out until the symbol magnitude drops below tol/10.
    std::vector<double> xs;
    const int seed_n = 16;
    for (int j = 0; j <= seed_n; ++j) {
        xs.push_back(2.0 * std::tan(0.5 * pi_v * j / (seed_n + 1)));
    }
    double xi_max = xs.back();
    while (std::abs(sigma_point(p, xi_max)) >= tol / 10 && xi_max < 1e6) {
        xi_max = std::max(1.0, xi_max) * 1.5;
        xs.push_back(xi_max);
    }
    const bool closed = std::abs(sigma_point(p, xi_max)) < tol / 10;

    std::vector<CurveSample> half;
    for (double x : xs) half.push_back({x, sigma_point(p, x)});

    // Chord refinement by midpoint insertion.
    for (std::size_t i = 0; i + 1 < half.size();) {
        const auto& a = half[i];
        const auto& b = half[i + 1];
        if (std::abs(b.value - a.value) > tol && b.xi - a.xi > 1e-12) {
            const double mid = 0.5 * (a.xi + b.xi);
            half.insert(half.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                        {mid, sigma_point(p, mid)});
        } else {
            ++i;
        }
    }

    SpectralCurve curve{p, {}, closed, 0};
    curve.samples.reserve(2 * half.size() - 1);
    for (std::size_t i = half.size(); i-- > 1;)
        curve.samples.push_back({-half[i].xi, std::conj(half[i].value)});
    for (const auto& s : half) curve.samples.push_back(s);

    // Smallest xi beyond which |value| decays monotonically on the samples.
    double tail = half.back().xi;
    for (std::size_t i = half.size(); i-- > 1;) {
        if (std::abs(half[i].value) <= std::abs(half[i - 1].value) + 1e-15)
            tail = half[i - 1].xi;
        else
            break;
    }
    curve.tail_xi = tail;
    return curve;
}

struct OnCurveError : std::runtime_error {
    explicit OnCurveError(const std::string& what) : std::runtime_error(what) {}
};
struct InsufficientSamplingError : std::runtime_error {
    explicit InsufficientSamplingError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline double segment_distance(SpectralPoint p, SpectralPoint a, SpectralPoint b) {
    const SpectralPoint ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

inline double polyline_distance(const std::vector<SpectralPoint>& poly, SpectralPoint p) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
        d = std::min(d, segment_distance(p, poly[i], poly[i + 1]));
    return d;
}

// Even-odd ray crossing test on the closed polyline (robust insideness,
// independent of the winding computation).
inline bool ray_crossings_odd(const std::vector<SpectralPoint>& poly, SpectralPoint p) {
    bool inside = false;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[i + 1];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double xc =
                a.real() + (p.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
            if (xc > p.real()) inside = !inside;
        }
    }
    return inside;
}

}  // namespace detail

/// Winding number of the closed sampled curve about lambda: the total
/// argument increment divided by 2 pi, rounded. Throws OnCurveError when
/// lambda sits within tau_on of the polyline and InsufficientSamplingError
/// when the rounding residue reaches 0.1 (resample with smaller tol then).
inline int winding_number(const SpectralCurve& c, SpectralPoint lambda, double tau_on = 1e-6) {
    const auto poly = c.closed_polyline();
    if (detail::polyline_distance(poly, lambda) <= tau_on)
        throw OnCurveError("winding_number: point is within tau_on of the curve");
    double total = 0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        const SpectralPoint w0 = poly[i] - lambda;
        const SpectralPoint w1 = poly[i + 1] - lambda;
        total += std::atan2(w0.real() * w1.imag() - w0.imag() * w1.real(),
                            w0.real() * w1.real() + w0.imag() * w1.imag());
    }
    total /= 2 * pi_v;
    const double nearest = std::round(total);
    if (std::abs(total - nearest) >= 0.1)
        throw InsufficientSamplingError("winding_number: argument sum residue >= 0.1");
    return static_cast<int>(nearest);
}

enum class SpectrumLocation { Resolvent, Boundary, Interior };

inline const char* to_string(SpectrumLocation s) {
    switch (s) {
        case SpectrumLocation::Resolvent: return "resolvent";
        case SpectrumLocation::Boundary: return "boundary";
        case SpectrumLocation::Interior: return "interior";
    }
    return "?";
}

struct SpectrumOptions {
    double curve_tol = 1e-4;  // polyline sampling resolution
    double tau_on = 1e-6;     // on-curve tolerance
};

namespace detail {

// Membership of lambda in the real segment [-m, m] with exact real-part
// test and imaginary tolerance tau_on; boundary is the tau_on collar of the
// endpoints inside the segment.
inline SpectrumLocation classify_interval(double m, SpectralPoint lambda, double tau_on) {
    if (std::abs(lambda.imag()) > tau_on) return SpectrumLocation::Resolvent;
    const double r = std::abs(lambda.real());
    if (r > m) return SpectrumLocation::Resolvent;
    if (m - r <= tau_on) return SpectrumLocation::Boundary;
    return SpectrumLocation::Interior;
}

}  // namespace detail

/// Classifies lambda against the predicted L^{2,a} spectrum -hat(Sigma) u
/// hat(Sigma). For a = 1 the set degenerates to the real interval
/// [-|1 - alpha/pi|, |1 - alpha/pi|].
inline SpectrumLocation in_spectrum_L2(const WedgeParams& p, SpectralPoint lambda,
                                       const SpectrumOptions& opts = {}) {
    if (p.energy_weight())
        return detail::classify_interval(norm_bound(p), lambda, opts.tau_on);

    double tol = opts.curve_tol;
    for (int attempt = 0;; ++attempt) {
        const SpectralCurve curve = sample_curve(p, tol);
        const auto poly = curve.closed_polyline();
        if (detail::polyline_distance(poly, lambda) <= opts.tau_on ||
            detail::polyline_distance(poly, -lambda) <= opts.tau_on)
            return SpectrumLocation::Boundary;
        try {
            if (winding_number(curve, lambda, opts.tau_on) != 0 ||
                winding_number(curve, -lambda, opts.tau_on) != 0)
                return SpectrumLocation::Interior;
            return SpectrumLocation::Resolvent;
        } catch (const InsufficientSamplingError&) {
            if (attempt >= 3) throw;
            tol /= 8;
        }
    }
}

/// Distance from lambda to the filled region hat(Sigma) (0 when lambda lies
/// on the sampled boundary or inside it). The a = 1 case reduces to the
/// distance to the degenerate segment.
inline double region_distance(const SpectralCurve& c, SpectralPoint lambda) {
    if (c.params.energy_weight()) {
        const double m = std::abs(1 - c.params.alpha() / pi_v);
        const double dx = std::max(0.0, std::abs(lambda.real()) - m);
        return std::hypot(dx, lambda.imag());
    }
    const auto poly = c.closed_polyline();
    if (detail::ray_crossings_odd(poly, lambda)) return 0.0;
    return detail::polyline_distance(poly, lambda);
}

}  // namespace wedgespec
