#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "error.hpp"

namespace thullen {

/// Exponent of the Thullen domain U = { |z1|^(2/alpha) + |z2|^2 < 1 }.
///
/// alpha == 1 is the unit ball. It is accepted and flagged, because the ball kernel
/// is the cheapest exact oracle available for the whole library.
template <class T>
class BasicDomainParam {
public:
    explicit BasicDomainParam(T alpha) : alpha_(alpha) {
        if (!(alpha > T(0)) || !std::isfinite(alpha)) {
            std::ostringstream os;
            os << "alpha must be a finite positive number, got " << alpha;
            throw DomainError(os.str());
        }
    }

    T alpha() const noexcept { return alpha_; }
    bool is_ball() const noexcept { return alpha_ == T(1); }

private:
    T alpha_;
};

template <class T>
struct BasicPoint {
    std::complex<T> z1{};
    std::complex<T> z2{};

    friend bool operator==(const BasicPoint&, const BasicPoint&) = default;
};

using DomainParam = BasicDomainParam<double>;
using Point = BasicPoint<double>;
using cplx = std::complex<double>;

/// |x|^e for x >= 0, with 0^e = 0 for e > 0.
template <class T>
T abs_pow(T x, T e) {
    return x > T(0) ? std::exp(e * std::log(x)) : T(0);
}

/// rho(z) = 1 - |z1|^(2/alpha) - |z2|^2, positive exactly on the interior.
template <class T>
T boundary_defect(const BasicPoint<T>& z, const BasicDomainParam<T>& p) {
    return T(1) - abs_pow(std::abs(z.z1), T(2) / p.alpha()) - std::norm(z.z2);
}

template <class T>
bool in_domain(const BasicPoint<T>& z, const BasicDomainParam<T>& p) {
    const T r = boundary_defect(z, p);
    return r > T(0) && std::isfinite(r);
}

template <class T>
std::string to_string(const BasicPoint<T>& z) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.z1.real() << (z.z1.imag() < 0 ? "" : "+") << z.z1.imag() << "i, " << z.z2.real()
       << (z.z2.imag() < 0 ? "" : "+") << z.z2.imag() << "i)";
    return os.str();
}

template <class T>
void require_interior(const BasicPoint<T>& z, const BasicDomainParam<T>& p, const char* what = "point") {
    if (!in_domain(z, p)) {
        throw DomainError(std::string(what) + " " + to_string(z) + " is not interior to U^alpha");
    }
}

/// Polydisc coordinates (t1, w2) of a point: t1 = w1 / (1 - |w2|^2)^(alpha/2).
template <class T>
BasicPoint<T> to_polydisc(const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    const T s = T(1) - std::norm(w.z2);
    return {w.z1 / std::pow(s, p.alpha() / T(2)), w.z2};
}

template <class T>
BasicPoint<T> from_polydisc(const BasicPoint<T>& t, const BasicDomainParam<T>& p) {
    const T s = T(1) - std::norm(t.z2);
    return {t.z1 * std::pow(s, p.alpha() / T(2)), t.z2};
}

/// max(|t1|, |w2|) in polydisc coordinates; < 1 exactly on the interior.
template <class T>
T polydisc_radius(const BasicPoint<T>& w, const BasicDomainParam<T>& p) {
    const BasicPoint<T> t = to_polydisc(w, p);
    return std::max(std::abs(t.z1), std::abs(t.z2));
}

} // namespace thullen
