#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wedgespec/detail/parallel.hpp"
#include "wedgespec/group.hpp"
#include "wedgespec/linalg.hpp"
#include "wedgespec/quadrature.hpp"
#include "wedgespec/special.hpp"
#include "wedgespec/symbols.hpp"

namespace wedgespec {

/// Convolution kernel of the compressed layer potential on the group:
/// k(s, t) = -(sin(alpha)/2pi) (1 + s^2 - 2 s cos(alpha) + t^2)^{-3/2}.
/// Even in t; sign is constant, opposite to sin(alpha).
inline double k_alpha(const WedgeParams& p, double s, double t) {
    if (!(s > 0)) throw std::domain_error("k_alpha: s must be positive");
    const double d = 1 + s * s - 2 * s * std::cos(p.alpha()) + t * t;
    return -(std::sin(p.alpha()) / (2 * pi_v)) * std::pow(d, -1.5);
}

/// Single-layer convolution kernel for sheet angle beta (0 on the diagonal
/// blocks, alpha off-diagonal): s_beta(s,t) = (1/4pi)(1+s^2-2s cos(beta)+t^2)^{-1/2}.
inline double s_beta(const WedgeParams&, double beta, double s, double t) {
    if (!(s > 0)) throw std::domain_error("s_beta: s must be positive");
    const double d = 1 + s * s - 2 * s * std::cos(beta) + t * t;
    return 1.0 / (4 * pi_v * std::sqrt(d));
}

/// A(r, x) = (1 + (x/r)^2 - 2 (x/r) cos(alpha))^{1/2}; strictly positive.
inline double a_alpha(const WedgeParams& p, double r, double x) {
    if (!(r > 0) || !(x > 0)) throw std::domain_error("a_alpha: arguments must be positive");
    // hypot form of r*A avoids overflow for extreme ratios
    return std::hypot(x - r * std::cos(p.alpha()), r * std::sin(p.alpha())) / r;
}

/// Weighted kernel of the Fourier-side integral operator on L^2(R_+, dr/r):
///   (x/r)^{(a+1)/2} * (-2 sin(alpha)) * r * A(r,x)^{-1} * K_1(2 pi r A(r,x)).
/// The two representation signs produce the same kernel (the group kernel is
/// even in z), so no sign parameter is exposed. Underflows to 0 when the
/// Bessel argument exceeds ~700.
inline double t_kernel(const WedgeParams& p, double r, double x) {
    if (!(r > 0) || !(x > 0)) throw std::domain_error("t_kernel: arguments must be positive");
    const double b = std::hypot(x - r * std::cos(p.alpha()), r * std::sin(p.alpha()));  // r*A
    const double arg = 2 * pi_v * b;
    if (arg > 700.0) return 0.0;
    if (arg < 1e-290) return mellin_kernel(p, r / x);  // K_1 small-argument limit
    // (x/r)^{(a+1)/2} r^2 / b, assembled in log space to dodge overflow
    const double e = 0.5 * (p.a() + 1) * (std::log(x) - std::log(r)) + 2 * std::log(r) -
                     std::log(b);
    if (e < -740.0) return 0.0;
    return -2 * std::sin(p.alpha()) * std::exp(e) * bessel_k1(arg);
}

/// Two-sheet density on the wedge boundary, each sheet a function of
/// (x, z) in (0, inf) x R. The support box lives in (log x, z) coordinates
/// and is shared by both sheets. When the mean-zero flag is set the
/// construction verifies that the total integral vanishes.
class BoundaryDensity {
public:
    using Evaluator = std::function<std::complex<double>(double x, double z)>;

    BoundaryDensity(Evaluator sheet1, Evaluator sheet2, SupportBox box, double weight_a = 0.0,
                    DecayClass decay = DecayClass::CompactBox, bool mean_zero = false)
        : f1_(std::move(sheet1)),
          f2_(std::move(sheet2)),
          box_(box),
          weight_a_(weight_a),
          decay_(decay),
          mean_zero_(mean_zero) {
        if (mean_zero_) verify_mean_zero();
    }

    std::complex<double> sheet1(double x, double z) const { return f1_(x, z); }
    std::complex<double> sheet2(double x, double z) const { return f2_(x, z); }
    const SupportBox& support() const { return box_; }
    double weight_a() const { return weight_a_; }
    DecayClass decay_class() const { return decay_; }
    bool mean_zero() const { return mean_zero_; }

private:
    void verify_mean_zero() const {
        QuadratureRule rule(QuadratureRule::Kind::FiniteAdaptive, 1e-12, 1e-12, 18);
        bool ok = true;
        std::complex<double> total = 0;
        double scale = 0;
        for (const auto* f : {&f1_, &f2_}) {
            auto outer = integrate_segment(
                [&](double u) -> std::complex<double> {
                    const double x = std::exp(u);
                    auto in = integrate_segment(
                        [&](double z) { return (*f)(x, z) * x; }, box_.z_lo, box_.z_hi, rule);
                    ok = ok && in.converged;
                    return in.value;
                },
                box_.u_lo, box_.u_hi, rule);
            ok = ok && outer.converged;
            total += outer.value;
            scale += std::abs(outer.value);
        }
        if (!ok || std::abs(total) > 1e-10 * std::max(1.0, scale))
            throw std::invalid_argument("BoundaryDensity: mean-zero flag not satisfied");
    }

    Evaluator f1_, f2_;
    SupportBox box_;
    double weight_a_;
    DecayClass decay_;
    bool mean_zero_;
};

struct TwoSheetValue {
    std::complex<double> sheet1;
    std::complex<double> sheet2;
    bool converged = true;
};

namespace detail {

// 2D quadrature of w(u, v) over the density support box, with the x
// integration performed in log coordinates.
template <typename F>
std::complex<double> box_integral(const SupportBox& b, const QuadratureRule& rule, bool& ok,
                                  const F& w) {
    QuadratureRule inner(rule.kind, rule.abs_tol / 10, rule.rel_tol / 10, rule.max_refinements);
    auto outer = integrate_segment(
        [&](double lu) -> std::complex<double> {
            const double u = std::exp(lu);
            auto in = integrate_segment([&](double v) { return w(u, v) * u; }, b.z_lo, b.z_hi,
                                        inner);
            ok = ok && in.converged;
            return in.value;
        },
        b.u_lo, b.u_hi, rule);
    ok = ok && outer.converged;
    return outer.value;
}

// One off-diagonal block: K g(x,z) by quadrature of the (u, v) kernel form.
template <typename G>
std::complex<double> apply_k_block(const WedgeParams& p, const SupportBox& b, const G& g,
                                   double x, double z, const QuadratureRule& rule, bool& ok) {
    const double sa = std::sin(p.alpha());
    const double ca = std::cos(p.alpha());
    return box_integral(b, rule, ok, [&](double u, double v) -> std::complex<double> {
        const double d = x * x - 2 * x * u * ca + u * u + (z - v) * (z - v);
        return -(sa / (2 * pi_v)) * u * std::pow(d, -1.5) * g(u, v);
    });
}

// Single-layer block with sheet angle beta. The beta = 0 block evaluated
// inside the support splits off a disc around the singular point: the kernel
// mass of the disc is added back exactly as g(x,z) * rho/2.
template <typename G>
std::complex<double> apply_s_block(const WedgeParams&, double beta, const SupportBox& b,
                                   const G& g, double x, double z, const QuadratureRule& rule,
                                   bool& ok) {
    const double cb = std::cos(beta);
    if (beta != 0.0) {
        return box_integral(b, rule, ok, [&](double u, double v) -> std::complex<double> {
            const double d = x * x - 2 * x * u * cb + u * u + (z - v) * (z - v);
            return (1.0 / (4 * pi_v)) / std::sqrt(d) * g(u, v);
        });
    }
    const double x_lo = std::exp(b.u_lo), x_hi = std::exp(b.u_hi);
    const double margin = 0.0;
    const bool singular = x >= x_lo - margin && x <= x_hi + margin && z >= b.z_lo - margin &&
                          z <= b.z_hi + margin;
    if (!singular) {
        return box_integral(b, rule, ok, [&](double u, double v) -> std::complex<double> {
            const double d = (x - u) * (x - u) + (z - v) * (z - v);
            return (1.0 / (4 * pi_v)) / std::sqrt(d) * g(u, v);
        });
    }
    const double rho = std::min(x / 2, 0.25);
    const std::complex<double> gc = g(x, z);
    SupportBox dom = b;
    dom.u_lo = std::min(dom.u_lo, std::log(x - rho));
    dom.u_hi = std::max(dom.u_hi, std::log(x + rho));
    dom.z_lo = std::min(dom.z_lo, z - rho);
    dom.z_hi = std::max(dom.z_hi, z + rho);
    auto val = box_integral(dom, rule, ok, [&](double u, double v) -> std::complex<double> {
        const double dist = std::hypot(x - u, z - v);
        std::complex<double> num = (std::log(u) >= b.u_lo && std::log(u) <= b.u_hi &&
                                    v >= b.z_lo && v <= b.z_hi)
                                       ? g(u, v)
                                       : std::complex<double>(0.0);
        if (dist < rho) num -= gc;
        if (dist == 0.0) return std::complex<double>(0.0);
        return (1.0 / (4 * pi_v)) * num / dist;
    });
    return val + gc * (rho / 2);
}

}  // namespace detail

/// Applies the compressed layer potential in its off-diagonal block form:
/// sheet-1 output is K f2, sheet-2 output is K f1.
inline TwoSheetValue apply_K(const WedgeParams& p, const BoundaryDensity& f, double x, double z,
                             const QuadratureRule& rule) {
    TwoSheetValue out;
    auto g1 = [&f](double u, double v) { return f.sheet1(u, v); };
    auto g2 = [&f](double u, double v) { return f.sheet2(u, v); };
    out.sheet1 = detail::apply_k_block(p, f.support(), g2, x, z, rule, out.converged);
    out.sheet2 = detail::apply_k_block(p, f.support(), g1, x, z, rule, out.converged);
    return out;
}

/// Applies the full single-layer block matrix
///   sheet-1 = S_0 f1 + S_alpha f2,   sheet-2 = S_alpha f1 + S_0 f2.
/// Unbounded-support densities must carry the mean-zero flag.
inline TwoSheetValue apply_S(const WedgeParams& p, const BoundaryDensity& f, double x, double z,
                             const QuadratureRule& rule) {
    if (f.decay_class() != DecayClass::CompactBox && !f.mean_zero())
        throw std::invalid_argument("apply_S: unbounded-support density must be mean-zero");
    TwoSheetValue out;
    auto g1 = [&f](double u, double v) { return f.sheet1(u, v); };
    auto g2 = [&f](double u, double v) { return f.sheet2(u, v); };
    const auto& b = f.support();
    out.sheet1 = detail::apply_s_block(p, 0.0, b, g1, x, z, rule, out.converged) +
                 detail::apply_s_block(p, p.alpha(), b, g2, x, z, rule, out.converged);
    out.sheet2 = detail::apply_s_block(p, p.alpha(), b, g1, x, z, rule, out.converged) +
                 detail::apply_s_block(p, 0.0, b, g2, x, z, rule, out.converged);
    return out;
}

namespace detail {

// Nodes and weights of composite Gauss-Legendre panels.
struct Quad1D {
    std::vector<double> x, w;
};

inline const std::array<double, 5>& gl10_abscissae() {
    static const std::array<double, 5> a = {0.1488743389816312, 0.4333953941292472,
                                            0.6794095682990244, 0.8650633666889845,
                                            0.9739065285171717};
    return a;
}
inline const std::array<double, 5>& gl10_weights() {
    static const std::array<double, 5> w = {0.2955242247147529, 0.2692667193099963,
                                            0.2190863625159820, 0.1494513491505806,
                                            0.0666713443086881};
    return w;
}

inline void append_gl10(Quad1D& q, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < 5; ++i) {
        q.x.push_back(c - h * gl10_abscissae()[static_cast<std::size_t>(i)]);
        q.w.push_back(h * gl10_weights()[static_cast<std::size_t>(i)]);
        q.x.push_back(c + h * gl10_abscissae()[static_cast<std::size_t>(i)]);
        q.w.push_back(h * gl10_weights()[static_cast<std::size_t>(i)]);
    }
}

inline Quad1D composite_gl10(const std::vector<double>& breaks) {
    Quad1D q;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) append_gl10(q, breaks[i], breaks[i + 1]);
    return q;
}

// Fixed tensor grid over a support box, x part in log coordinates.
struct BoxGrid {
    Quad1D u, v;  // u: log x nodes; weights already include the exp Jacobian
};

inline BoxGrid box_grid(const SupportBox& b, int panels) {
    BoxGrid g;
    std::vector<double> bu, bv;
    for (int i = 0; i <= panels; ++i) {
        bu.push_back(b.u_lo + (b.u_hi - b.u_lo) * i / panels);
        bv.push_back(b.z_lo + (b.z_hi - b.z_lo) * i / panels);
    }
    g.u = composite_gl10(bu);
    g.v = composite_gl10(bv);
    for (std::size_t i = 0; i < g.u.x.size(); ++i) {
        g.u.x[i] = std::exp(g.u.x[i]);
        g.u.w[i] *= g.u.x[i];
    }
    return g;
}

template <typename Kernel, typename G>
std::complex<double> grid_block(const BoxGrid& grid, const Kernel& ker, const G& g) {
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < grid.u.x.size(); ++i) {
        const double u = grid.u.x[i];
        std::complex<double> row = 0;
        for (std::size_t j = 0; j < grid.v.x.size(); ++j)
            row += grid.v.w[j] * ker(u, grid.v.x[j]) * g(u, grid.v.x[j]);
        acc += grid.u.w[i] * row;
    }
    return acc;
}

// S_0 block near or on the support: polar coordinates about the evaluation
// point remove the 1/dist singularity exactly.
template <typename G>
std::complex<double> s0_block_polar(const SupportBox& b, const G& g, double x, double z) {
    const double x_lo = std::exp(b.u_lo), x_hi = std::exp(b.u_hi);
    static const int n_theta = 48;
    std::complex<double> acc = 0;
    for (int it = 0; it < n_theta; ++it) {
        const double theta = 2 * pi_v * (it + 0.5) / n_theta;
        const double cx = std::cos(theta), cz = std::sin(theta);
        // exit segment of the ray against the box
        double t0 = 0, t1 = std::numeric_limits<double>::infinity();
        auto clip = [&](double p, double d, double lo, double hi) {
            if (d == 0) {
                if (p < lo || p > hi) t1 = -1;
                return;
            }
            double ta = (lo - p) / d, tb = (hi - p) / d;
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
        };
        clip(x, cx, x_lo, x_hi);
        clip(z, cz, b.z_lo, b.z_hi);
        if (!(t1 > t0)) continue;
        Quad1D q;
        append_gl10(q, t0, 0.5 * (t0 + t1));
        append_gl10(q, 0.5 * (t0 + t1), t1);
        std::complex<double> ray = 0;
        for (std::size_t i = 0; i < q.x.size(); ++i)
            ray += q.w[i] * g(x + q.x[i] * cx, z + q.x[i] * cz);
        acc += ray * (2 * pi_v / n_theta);
    }
    return acc / (4 * pi_v);
}

}  // namespace detail

/// Normalized symmetry defect of the Plemelj identity,
///   |<K f, S g> - <S f, K g>| / (||f|| ||g||),
/// with the pairings computed by composite Gauss-Legendre quadrature over a
/// truncated boundary. Densities must be compactly supported and mean-zero.
inline double plemelj_residual(const WedgeParams& p, const BoundaryDensity& f,
                               const BoundaryDensity& g, const QuadratureRule&) {
    if (f.decay_class() != DecayClass::CompactBox || g.decay_class() != DecayClass::CompactBox)
        throw std::invalid_argument("plemelj_residual: densities must be compactly supported");
    if (!f.mean_zero() || !g.mean_zero())
        throw std::invalid_argument("plemelj_residual: densities must be mean-zero");

    const double sa = std::sin(p.alpha()), ca = std::cos(p.alpha());

    // Outer pairing nodes on each sheet; the fields decay like |r|^{-2} or
    // faster, so truncation at 64 is far below the coarse target.
    static const std::vector<double> xbreaks = {1e-6, 0.6, 1.4, 3, 8, 24, 64};
    static const std::vector<double> zbreaks = {-64, -24, -8, -3, -1.5, -0.6, 0,
                                                0.6,  1.5, 3,  8,  24,  64};
    const detail::Quad1D qx = detail::composite_gl10(xbreaks);
    const detail::Quad1D qz = detail::composite_gl10(zbreaks);

    const detail::BoxGrid fg = detail::box_grid(f.support(), 3);
    const detail::BoxGrid gg = detail::box_grid(g.support(), 3);

    struct Fields {
        std::complex<double> k1, k2, s1, s2;
    };
    const std::size_t nx = qx.x.size(), nz = qz.x.size();
    std::vector<Fields> Ff(nx * nz), Fg(nx * nz);

    auto eval_density = [&](const BoundaryDensity& d, const detail::BoxGrid& grid,
                            std::vector<Fields>& out) {
        const SupportBox& b = d.support();
        const double x_lo = std::exp(b.u_lo), x_hi = std::exp(b.u_hi);
        detail::parallel_for(static_cast<int>(nx), [&](int ix) {
            const double x = qx.x[static_cast<std::size_t>(ix)];
            for (std::size_t iz = 0; iz < nz; ++iz) {
                const double z = qz.x[iz];
                auto kker = [&](double u, double v) {
                    const double den = x * x - 2 * x * u * ca + u * u + (z - v) * (z - v);
                    return -(sa / (2 * pi_v)) * u * std::pow(den, -1.5);
                };
                auto saker = [&](double u, double v) {
                    const double den = x * x - 2 * x * u * ca + u * u + (z - v) * (z - v);
                    return (1.0 / (4 * pi_v)) / std::sqrt(den);
                };
                auto d1 = [&](double u, double v) { return d.sheet1(u, v); };
                auto d2 = [&](double u, double v) { return d.sheet2(u, v); };
                Fields F;
                F.k1 = detail::grid_block(grid, kker, d2);
                F.k2 = detail::grid_block(grid, kker, d1);
                const bool near = x >= 0.8 * x_lo && x <= 1.25 * x_hi && z >= b.z_lo - 0.4 &&
                                  z <= b.z_hi + 0.4;
                std::complex<double> s01, s02;
                if (near) {
                    s01 = detail::s0_block_polar(b, d1, x, z);
                    s02 = detail::s0_block_polar(b, d2, x, z);
                } else {
                    auto s0ker = [&](double u, double v) {
                        const double den = (x - u) * (x - u) + (z - v) * (z - v);
                        return (1.0 / (4 * pi_v)) / std::sqrt(den);
                    };
                    s01 = detail::grid_block(grid, s0ker, d1);
                    s02 = detail::grid_block(grid, s0ker, d2);
                }
                F.s1 = s01 + detail::grid_block(grid, saker, d2);
                F.s2 = detail::grid_block(grid, saker, d1) + s02;
                out[static_cast<std::size_t>(ix) * nz + iz] = F;
            }
        });
    };
    eval_density(f, fg, Ff);
    eval_density(g, gg, Fg);

    std::complex<double> kf_sg = 0, sf_kg = 0;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const double w = qx.w[ix] * qz.w[iz];
            const Fields& a = Ff[ix * nz + iz];
            const Fields& b = Fg[ix * nz + iz];
            kf_sg += w * (a.k1 * std::conj(b.s1) + a.k2 * std::conj(b.s2));
            sf_kg += w * (a.s1 * std::conj(b.k1) + a.s2 * std::conj(b.k2));
        }
    }

    auto norm_of = [&](const BoundaryDensity& d, const detail::BoxGrid& grid) {
        auto one = [](double, double) { return 1.0; };
        auto sq1 = [&](double u, double v) {
            const double m = std::abs(d.sheet1(u, v));
            return std::complex<double>(m * m);
        };
        auto sq2 = [&](double u, double v) {
            const double m = std::abs(d.sheet2(u, v));
            return std::complex<double>(m * m);
        };
        return std::sqrt(std::abs(detail::grid_block(grid, one, sq1)) +
                         std::abs(detail::grid_block(grid, one, sq2)));
    };
    const double scale = norm_of(f, fg) * norm_of(g, gg);
    if (!(scale > 0)) throw std::invalid_argument("plemelj_residual: zero density");
    return std::abs(kf_sg - sf_kg) / scale;
}

/// Finite section of the truncated Mellin convolution on the logarithmic
/// grid u_j = -j h:  M[j][k] = h * i(e^{-(j-k) h}). Toeplitz by construction.
inline DenseMatrix toeplitz_section(const WedgeParams& p, int n, double h) {
    if (n < 2) throw std::invalid_argument("toeplitz_section: need n >= 2");
    if (n > DenseMatrix::size_cap) throw std::invalid_argument("toeplitz_section: n exceeds cap");
    if (!(h > 0)) throw std::invalid_argument("toeplitz_section: need h > 0");
    std::vector<double> diag(2 * n - 1);
    for (int d = -(n - 1); d <= n - 1; ++d)
        diag[static_cast<std::size_t>(d + n - 1)] = h * mellin_kernel(p, std::exp(-d * h));
    DenseMatrix m(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) m(j, k) = diag[static_cast<std::size_t>(j - k + n - 1)];
    return m;
}

/// Nystrom section of the Fourier-side operator on L^2(R_+, dr/r) over the
/// uniform log grid u_j on [-L, L]:  M[j][k] = h * t_kernel(e^{u_j}, e^{u_k}).
inline DenseMatrix nystrom_T(const WedgeParams& p, int n, double L) {
    if (n < 2) throw std::invalid_argument("nystrom_T: need n >= 2");
    if (n > DenseMatrix::size_cap) throw std::invalid_argument("nystrom_T: n exceeds cap");
    if (!(L > 0)) throw std::invalid_argument("nystrom_T: need L > 0");
    const double h = 2 * L / (n - 1);
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) grid[static_cast<std::size_t>(j)] = std::exp(-L + j * h);
    DenseMatrix m(n);
    detail::parallel_for(n, [&](int j) {
        for (int k = 0; k < n; ++k)
            m(j, k) = h * t_kernel(p, grid[static_cast<std::size_t>(j)],
                                   grid[static_cast<std::size_t>(k)]);
    });
    return m;
}

struct ContainmentStats {
    double tolerance = 0;
    double fraction_inside = 0;
    double max_distance = 0;
};

/// Distance statistics of an eigenvalue cloud against the filled symbol
/// region of the given curve.
inline ContainmentStats containment(const std::vector<std::complex<double>>& eigs,
                                    const SpectralCurve& curve, double tolerance) {
    ContainmentStats st;
    st.tolerance = tolerance;
    if (eigs.empty()) {
        st.fraction_inside = 1.0;
        return st;
    }
    int inside = 0;
    for (const auto& e : eigs) {
        const double d = region_distance(curve, e);
        st.max_distance = std::max(st.max_distance, d);
        if (d <= tolerance) ++inside;
    }
    st.fraction_inside = static_cast<double>(inside) / static_cast<double>(eigs.size());
    return st;
}

}  // namespace wedgespec
