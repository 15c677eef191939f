#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "wedgespec/symbols.hpp"

namespace wedgespec {

enum class TransmissionProblem { L, E };

/// Spectral parameter map lambda = (1 + eps) / (1 - eps).
inline std::complex<double> mobius(std::complex<double> eps) {
    if (eps == std::complex<double>(1.0, 0.0))
        throw std::domain_error("mobius: eps = 1 is excluded");
    return (1.0 + eps) / (1.0 - eps);
}

/// Inverse map eps = (lambda - 1) / (lambda + 1).
inline std::complex<double> mobius_inverse(std::complex<double> lambda) {
    if (lambda == std::complex<double>(-1.0, 0.0))
        throw std::domain_error("mobius_inverse: lambda = -1 is excluded");
    return (lambda - 1.0) / (lambda + 1.0);
}

/// A well-posedness query: permittivity ratio eps != 1, wedge angle, the
/// formulation (square-integrable data L or finite-energy E), and for L the
/// weight exponent (default 0).
struct TransmissionQuery {
    std::complex<double> epsilon;
    double alpha;
    TransmissionProblem problem = TransmissionProblem::L;
    double a = 0.0;

    TransmissionQuery(std::complex<double> eps, double alpha_, TransmissionProblem prob,
                      double a_ = 0.0)
        : epsilon(eps), alpha(alpha_), problem(prob), a(a_) {
        if (epsilon == std::complex<double>(1.0, 0.0))
            throw std::domain_error("TransmissionQuery: eps = 1 is excluded");
        WedgeParams validated(alpha_, prob == TransmissionProblem::L ? a_ : 0.0);
        (void)validated;
    }
};

struct Verdict {
    bool wellposed = false;
    std::complex<double> lambda;
    SpectrumLocation classification = SpectrumLocation::Resolvent;
    std::string certificate;
};

/// Decides well-posedness of the query: maps eps to the spectral parameter
/// and classifies it against the predicted spectrum. Boundary points are
/// reported ill-posed; the classification field carries the distinction.
inline Verdict check(const TransmissionQuery& q, const SpectrumOptions& opts = {}) {
    Verdict v;
    v.lambda = mobius(q.epsilon);
    std::ostringstream cert;
    cert.precision(12);

    if (q.problem == TransmissionProblem::E) {
        const double m = std::abs(1 - q.alpha / pi_v);
        v.classification = detail::classify_interval(m, v.lambda, opts.tau_on);
        cert << "energy formulation: |Re lambda| " << std::abs(v.lambda.real())
             << " vs interval half-width " << m;
    } else {
        const WedgeParams p(q.alpha, q.a);
        v.classification = in_spectrum_L2(p, v.lambda, opts);
        const double bound = norm_bound(p);
        if (std::abs(v.lambda) > bound + opts.tau_on) {
            cert << "|lambda| " << std::abs(v.lambda) << " exceeds the operator norm bound "
                 << bound;
        } else {
            cert << "winding/boundary test against both spectral curves, |lambda| "
                 << std::abs(v.lambda) << " within norm bound " << bound;
        }
    }
    v.wellposed = v.classification == SpectrumLocation::Resolvent;
    return v;
}

/// Real-eps interval on which problem E is ill-posed, i.e. the preimage of
/// the energy-space spectrum under the Moebius map, endpoints ascending.
inline std::pair<double, double> illposed_interval_E(double alpha) {
    WedgeParams validated(alpha, 0.0);
    (void)validated;
    const double m = std::abs(1 - alpha / pi_v);
    const double lo = -(1 + m) / (1 - m);  // image of lambda = -m
    const double hi = (m - 1) / (m + 1);   // image of lambda = +m
    return {lo, hi};
}

}  // namespace wedgespec
