#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <algorithm>

#include "domain.hpp"
#include "error.hpp"

namespace thullen {

namespace detail {

template <class T>
void require_finite(const std::complex<T>& v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericError(std::string(what) + " produced a nonfinite value");
    }
}

} // namespace detail

/// Bergman kernel K(z; conj w) of U^alpha in closed form.
///
/// With q = 1 - z2 conj(w2), which has positive real part on the interior, the principal
/// branch of q^alpha is the continuous one:
///   K = [(a+1) q^a + (a-1) z1 conj(w1)] / [pi^2 q^(2-a) (q^a - z1 conj(w1))^3].
/// Identical arguments return the real diagonal value.
template <class T>
std::complex<T> bergman_kernel(const BasicPoint<T>& z, const BasicPoint<T>& w, const BasicDomainParam<T>& p);

/// K(z; conj z), computed in real arithmetic so that positivity is exact.
template <class T>
T kernel_diagonal(const BasicPoint<T>& z, const BasicDomainParam<T>& p) {
    require_interior(z, p);
    const T a = p.alpha();
    const T pi2 = std::numbers::pi_v<T> * std::numbers::pi_v<T>;
    const T s = T(1) - std::norm(z.z2);
    const T sa = std::pow(s, a);
    const T x = std::norm(z.z1) / sa;
    const T v = ((a + 1) + (a - 1) * x) / (pi2 * s * s * sa * (T(1) - x) * (T(1) - x) * (T(1) - x));
    if (!(v > T(0)) || !std::isfinite(v)) throw NumericError("kernel diagonal is not a finite positive number");
    return v;
}

template <class T>
std::complex<T> bergman_kernel(const BasicPoint<T>& z, const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    if (z == w) return {kernel_diagonal(z, p), T(0)};
    require_interior(z, p, "z");
    require_interior(w, p, "w");
    const T a = p.alpha();
    const T pi2 = std::numbers::pi_v<T> * std::numbers::pi_v<T>;
    const std::complex<T> q = T(1) - z.z2 * std::conj(w.z2);
    const std::complex<T> x = z.z1 * std::conj(w.z1);
    const std::complex<T> qa = std::pow(q, a);
    const std::complex<T> d = qa - x;
    const std::complex<T> v = ((a + 1) * qa + (a - 1) * x) / (pi2 * std::pow(q, T(2) - a) * d * d * d);
    detail::require_finite(v, "bergman_kernel");
    return v;
}

/// ||K_z|| = sqrt(K(z; conj z)).
template <class T>
T kernel_norm(const BasicPoint<T>& z, const BasicDomainParam<T>& p) {
    return std::sqrt(kernel_diagonal(z, p));
}

/// k_z(w) = K(w; conj z) / ||K_z||.
template <class T>
std::complex<T> normalized_kernel_eval(const BasicPoint<T>& z, const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    return bergman_kernel(w, z, p) / kernel_norm(z, p);
}

/// Kernel of the unit ball of C^2, 2 / (pi^2 (1 - <z, w>)^3). Used as an oracle at alpha = 1.
template <class T>
std::complex<T> ball_kernel(const BasicPoint<T>& z, const BasicPoint<T>& w) {
    const T pi2 = std::numbers::pi_v<T> * std::numbers::pi_v<T>;
    const std::complex<T> d = T(1) - z.z1 * std::conj(w.z1) - z.z2 * std::conj(w.z2);
    return T(2) / (pi2 * d * d * d);
}

/// Size estimate 1 / (|q|^(2+a) |1 - z1 conj(w1) / q^a|^3) for |K(z; conj w)|.
///
/// The exact ratio |K| / estimate equals |(a+1) + (a-1) x| / pi^2 with |x| < 1,
/// so it lies in [2 min(a,1), 2 max(a,1)] / pi^2.
template <class T>
T kernel_modulus_estimate(const BasicPoint<T>& z, const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    require_interior(z, p, "z");
    require_interior(w, p, "w");
    const T a = p.alpha();
    const std::complex<T> q = T(1) - z.z2 * std::conj(w.z2);
    const T d = std::abs(T(1) - z.z1 * std::conj(w.z1) / std::pow(q, a));
    return T(1) / (std::pow(std::abs(q), T(2) + a) * d * d * d);
}

/// The analytic band [lo, hi] that contains |K| / kernel_modulus_estimate for every pair.
template <class T>
std::pair<T, T> kernel_modulus_band(const BasicDomainParam<T>& p) {
    const T pi2 = std::numbers::pi_v<T> * std::numbers::pi_v<T>;
    const T a = p.alpha();
    return {T(2) * std::min(a, T(1)) / pi2, T(2) * std::max(a, T(1)) / pi2};
}

} // namespace thullen
