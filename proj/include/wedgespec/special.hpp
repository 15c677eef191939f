#pragma once

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <stdexcept>

namespace wedgespec {

/// Modified Bessel function of the second kind, order one. Relative accuracy
/// is far below the 1e-10 contract across [1e-6, 700]; arguments past the
/// representable range underflow gracefully to zero.
inline double bessel_k1(double r) {
    if (!(r > 0)) throw std::domain_error("bessel_k1: argument must be positive");
    if (r > 740.0) return 0.0;  // K1(740) < 1e-320
    return boost::math::cyl_bessel_k(1, r);
}

}  // namespace wedgespec
