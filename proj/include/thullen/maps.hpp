#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>

#include "domain.hpp"
#include "error.hpp"
#include "kernel.hpp"

namespace thullen {

/// Image of a point together with the Jacobian factor used by the transport operators.
template <class T>
struct MapEval {
    BasicPoint<T> image;
    std::complex<T> jacobian;
};

/// f_alpha(z) = z1 / (1 - |z2|^2)^(alpha/2), the first coordinate of phi_{z2}(z).
template <class T>
std::complex<T> f_alpha(const BasicPoint<T>& z, const BasicDomainParam<T>& p) {
    return z.z1 / std::pow(T(1) - std::norm(z.z2), p.alpha() / T(2));
}

/// Holomorphic involution fixing the fibre structure over z2:
///   w -> ( w1 (s / (1 - conj(z2) w2))^alpha, (z2 - w2) / (1 - conj(z2) w2) ),  s = sqrt(1 - |z2|^2).
/// It sends the base point z to (f_alpha(z), 0).
template <class T>
MapEval<T> phi_z2(const BasicPoint<T>& base, const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    require_interior(base, p, "base");
    require_interior(w, p, "w");
    const T s2 = T(1) - std::norm(base.z2);
    const std::complex<T> d = T(1) - std::conj(base.z2) * w.z2;
    // Re d > 0, so the principal power is continuous in w.
    const std::complex<T> scale = std::pow(std::sqrt(s2) / d, p.alpha());
    MapEval<T> r;
    r.image = {w.z1 * scale, (base.z2 - w.z2) / d};
    r.jacobian = scale * (-s2 / (d * d));
    return r;
}

namespace detail {

/// h(r) = (1 - r^2) / (1 - r^(2/alpha)) with h(0) = 1, evaluated through expm1 of log r
/// so that both factors keep full relative accuracy as r -> 1.
template <class T>
T fibre_ratio(T r, T alpha) {
    if (r <= T(0)) return T(1);
    const T lr = std::log(r);
    return std::expm1(T(2) * lr) / std::expm1((T(2) / alpha) * lr);
}

} // namespace detail

/// Non-holomorphic involution built on the disc automorphism in w1:
///   u = (c - w1) / (1 - conj(c) w1),
///   second coordinate w2 sqrt(1-|c|^2) / (1 - conj(c) w1) * sqrt(h(|w1|) / h(|u|)).
/// The Jacobian is d(first)/dw1 times d(second)/dw2.
template <class T>
MapEval<T> phi_z1(const std::complex<T>& c, const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    if (!(std::abs(c) < T(1))) throw DomainError("phi_z1 requires |c| < 1");
    require_interior(w, p, "w");
    const T a = p.alpha();
    const T c2 = T(1) - std::norm(c);
    const std::complex<T> d = T(1) - std::conj(c) * w.z1;
    const std::complex<T> u = (c - w.z1) / d;
    const T hw = detail::fibre_ratio(std::abs(w.z1), a);
    const T hu = detail::fibre_ratio(std::abs(u), a);
    if (!(hw > T(0)) || !(hu > T(0)) || !std::isfinite(hw) || !std::isfinite(hu)) {
        throw NumericError("phi_z1 correction factor is degenerate");
    }
    const std::complex<T> g = std::sqrt(c2) / d * std::sqrt(hw / hu);
    MapEval<T> r;
    r.image = {u, w.z2 * g};
    r.jacobian = -c2 / (d * d) * g;
    return r;
}

/// phi_{f_alpha(z)} o phi_{z2}: sends z to the origin. The Jacobian is the chain-rule product.
template <class T>
MapEval<T> center_map(const BasicPoint<T>& z, const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    const MapEval<T> inner = phi_z2(z, w, p);
    const MapEval<T> outer = phi_z1(f_alpha(z, p), inner.image, p);
    return {outer.image, outer.jacobian * inner.jacobian};
}

template <class T>
using PointFunction = std::function<std::complex<T>(const BasicPoint<T>&)>;

enum class TransportRecipe { U, V, VU };

inline std::string to_string(TransportRecipe r) {
    switch (r) {
    case TransportRecipe::U: return "U";
    case TransportRecipe::V: return "V";
    case TransportRecipe::VU: return "VU";
    }
    return "?";
}

/// A function on U^alpha obtained by transporting another one through U_z, V_c or V_{f(z)} U_z.
template <class T>
struct TransportedFunction {
    PointFunction<T> fn;
    TransportRecipe recipe;
    std::complex<T> operator()(const BasicPoint<T>& w) const { return fn(w); }
};

/// (U_z f)(w) = f(phi_{z2}(w)) J phi_{z2}(w).
template <class T>
TransportedFunction<T> transport_U(const BasicPoint<T>& z, PointFunction<T> f, const BasicDomainParam<T>& p) {
    require_interior(z, p, "base");
    return {[z, f = std::move(f), p](const BasicPoint<T>& w) {
                const MapEval<T> m = phi_z2(z, w, p);
                return f(m.image) * m.jacobian;
            },
            TransportRecipe::U};
}

/// (V_c f)(w) = f(phi_c(w)) J phi_c(w).
template <class T>
TransportedFunction<T> transport_V(const std::complex<T>& c, PointFunction<T> f, const BasicDomainParam<T>& p) {
    if (!(std::abs(c) < T(1))) throw DomainError("transport_V requires |c| < 1");
    return {[c, f = std::move(f), p](const BasicPoint<T>& w) {
                const MapEval<T> m = phi_z1(c, w, p);
                return f(m.image) * m.jacobian;
            },
            TransportRecipe::V};
}

/// V_{f_alpha(z)} U_z f.
template <class T>
TransportedFunction<T> transport_VU(const BasicPoint<T>& z, PointFunction<T> f, const BasicDomainParam<T>& p) {
    TransportedFunction<T> u = transport_U(z, std::move(f), p);
    TransportedFunction<T> v = transport_V(f_alpha(z, p), std::move(u.fn), p);
    v.recipe = TransportRecipe::VU;
    return v;
}

/// |V_{f_alpha(z)} U_z k_z(w)|, evaluated from the closed-form kernel.
template <class T>
T composite_kernel_modulus(const BasicPoint<T>& z, const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    const MapEval<T> v = phi_z1(f_alpha(z, p), w, p);
    const MapEval<T> u = phi_z2(z, v.image, p);
    return std::abs(normalized_kernel_eval(z, u.image, p)) * std::abs(u.jacobian) * std::abs(v.jacobian);
}

/// Residuals of the kernel transformation rules at w, with base point z.
///
/// first:  |K(w) - K(phi_{z2}(w)) |J phi_{z2}(w)|^2| / K(w), zero up to rounding (holomorphic case);
/// second: K(w) / [K(phi(w)) |J phi(w)|^2 (1-|phi2(w)|^2)^(a-1) / (1-|w2|^2)^(a-1)] with phi = phi_{z1},
///         a comparability ratio that equals 1 at alpha = 1.
template <class T>
std::pair<T, T> transformation_residual(const BasicPoint<T>& z, const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    require_interior(z, p, "z");
    const T kw = kernel_diagonal(w, p);
    const MapEval<T> h = phi_z2(z, w, p);
    const T exact = std::abs(kw - kernel_diagonal(h.image, p) * std::norm(h.jacobian)) / kw;
    const MapEval<T> v = phi_z1(z.z1, w, p);
    const T a = p.alpha();
    const T weight = std::pow((T(1) - std::norm(v.image.z2)) / (T(1) - std::norm(w.z2)), a - T(1));
    const T ratio = kw / (kernel_diagonal(v.image, p) * std::norm(v.jacobian) * weight);
    return {exact, ratio};
}

} // namespace thullen
