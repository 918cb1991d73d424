#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "domain.hpp"
#include "error.hpp"
#include "kernel.hpp"

namespace thullen {

/// Monomial z1^m z2^n. Enumeration is row-major: index = m (M+1) + n.
struct BasisIndex {
    int m = 0;
    int n = 0;
    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// log c_{m,n}, where c_{m,n} = int_U |z1|^(2m) |z2|^(2n) dV.
///
/// Integrating first over z1 in the disc of radius (1-|z2|^2)^(alpha/2) and then over z2 gives
///   c_{m,n} = pi^2 / (m+1) * B(n+1, alpha (m+1) + 1).
template <class T>
T log_monomial_norm_sq(int m, int n, const BasicDomainParam<T>& p) {
    if (m < 0 || n < 0) throw PreconditionError("monomial indices must be nonnegative");
    const T b = p.alpha() * T(m + 1);
    return T(2) * std::log(std::numbers::pi_v<T>) - std::log(T(m + 1)) + std::lgamma(T(n + 1)) +
           std::lgamma(b + T(1)) - std::lgamma(T(n) + b + T(2));
}

/// c_{m,n}; throws NumericError when c or 1/c is not representable.
template <class T>
T monomial_norm_sq(int m, int n, const BasicDomainParam<T>& p) {
    const T l = log_monomial_norm_sq(m, n, p);
    const T lim_hi = std::log(std::numeric_limits<T>::max());
    const T lim_lo = std::log(std::numeric_limits<T>::min());
    if (!std::isfinite(l) || l >= lim_hi || l <= lim_lo || -l >= lim_hi) {
        throw NumericError("monomial norm c_{" + std::to_string(m) + "," + std::to_string(n) +
                           "} is outside the floating-point range");
    }
    return std::exp(l);
}

/// Read-only table of c_{m,n} for 0 <= m, n <= M.
template <class T>
class MonomialBasis {
public:
    MonomialBasis(const BasicDomainParam<T>& p, int M) : p_(p), M_(M) {
        if (M < 0) throw PreconditionError("truncation order must be nonnegative");
        const int d = M + 1;
        norm_sq_.resize(static_cast<std::size_t>(d) * d);
        inv_sqrt_.resize(norm_sq_.size());
        for (int m = 0; m <= M; ++m) {
            for (int n = 0; n <= M; ++n) {
                const T c = monomial_norm_sq(m, n, p);
                norm_sq_[index(m, n)] = c;
                inv_sqrt_[index(m, n)] = T(1) / std::sqrt(c);
            }
        }
    }

    int order() const noexcept { return M_; }
    int size() const noexcept { return (M_ + 1) * (M_ + 1); }
    const BasicDomainParam<T>& param() const noexcept { return p_; }
    std::size_t index(int m, int n) const noexcept { return static_cast<std::size_t>(m) * (M_ + 1) + n; }
    BasisIndex unindex(std::size_t k) const noexcept {
        return {static_cast<int>(k / (M_ + 1)), static_cast<int>(k % (M_ + 1))};
    }
    T norm_sq(int m, int n) const { return norm_sq_[index(m, n)]; }
    T inv_sqrt(std::size_t k) const { return inv_sqrt_[k]; }

    /// Values e_{m,n}(w) = w1^m w2^n / sqrt(c_{m,n}) for every basis index.
    Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1> evaluate(const BasicPoint<T>& w) const {
        Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1> e(size());
        std::vector<std::complex<T>> p2(M_ + 1);
        p2[0] = T(1);
        for (int n = 1; n <= M_; ++n) p2[n] = p2[n - 1] * w.z2;
        std::complex<T> p1 = T(1);
        for (int m = 0; m <= M_; ++m) {
            for (int n = 0; n <= M_; ++n) {
                const std::size_t k = index(m, n);
                e[static_cast<Eigen::Index>(k)] = p1 * p2[n] * inv_sqrt_[k];
            }
            p1 *= w.z1;
        }
        return e;
    }

private:
    BasicDomainParam<T> p_;
    int M_;
    std::vector<T> norm_sq_;
    std::vector<T> inv_sqrt_;
};

template <class T>
using CoefficientVector = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;

/// Truncated series sum_{m,n <= M} (z1 conj w1)^m (z2 conj w2)^n / c_{m,n}.
template <class T>
std::complex<T> kernel_series(const BasicPoint<T>& z, const BasicPoint<T>& w, const MonomialBasis<T>& basis) {
    require_interior(z, basis.param(), "z");
    require_interior(w, basis.param(), "w");
    const int M = basis.order();
    const std::complex<T> x = z.z1 * std::conj(w.z1);
    const std::complex<T> y = z.z2 * std::conj(w.z2);
    std::complex<T> total = T(0);
    std::complex<T> xm = T(1);
    for (int m = 0; m <= M; ++m) {
        std::complex<T> row = T(0);
        std::complex<T> yn = T(1);
        for (int n = 0; n <= M; ++n) {
            row += yn / basis.norm_sq(m, n);
            yn *= y;
        }
        total += xm * row;
        xm *= x;
    }
    return total;
}

template <class T>
std::complex<T> kernel_series(const BasicPoint<T>& z, const BasicPoint<T>& w, const BasicDomainParam<T>& p, int M) {
    return kernel_series(z, w, MonomialBasis<T>(p, M));
}

/// Coefficients of K_z in the orthonormal basis: entry (m,n) = conj(e_{m,n}(z)).
template <class T>
CoefficientVector<T> kz_coefficients(const BasicPoint<T>& z, const MonomialBasis<T>& basis) {
    require_interior(z, basis.param());
    return basis.evaluate(z).conjugate();
}

template <class T>
CoefficientVector<T> kz_coefficients(const BasicPoint<T>& z, const BasicDomainParam<T>& p, int M) {
    return kz_coefficients(z, MonomialBasis<T>(p, M));
}

/// 1 - ||P_M K_z||^2 / K(z; conj z): the mass of K_z beyond the truncation.
template <class T>
T truncation_defect(const BasicPoint<T>& z, const MonomialBasis<T>& basis) {
    const T kd = kernel_diagonal(z, basis.param());
    return T(1) - kz_coefficients(z, basis).squaredNorm() / kd;
}

} // namespace thullen
