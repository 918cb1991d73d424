#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "basis.hpp"
#include "domain.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "maps.hpp"
#include "metric.hpp"
#include "quadrature.hpp"

namespace thullen {

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

/// A bounded function on U^alpha used as a Toeplitz or Hankel symbol.
struct Symbol {
    std::string name;
    std::function<cplx(const Point&)> fn;
    bool radial = false;      // depends on |w1| and |w2| only
    bool real_valued = false;
    double sup_abs = 1.0;     // sup |u| over U^alpha
    cplx operator()(const Point& w) const { return fn(w); }
};

namespace symbols {

inline Symbol one() { return {"one", [](const Point&) { return cplx(1.0); }, true, true, 1.0}; }

inline Symbol constant(cplx c) {
    return {"const", [c](const Point&) { return c; }, true, c.imag() == 0.0, std::abs(c)};
}

/// Indicator of { rho > t }; for t > 0 its support is compact in U^alpha.
inline Symbol bump(double t, const DomainParam& p) {
    return {"bump", [t, p](const Point& w) { return cplx(boundary_defect(w, p) > t ? 1.0 : 0.0); }, true, true, 1.0};
}

inline Symbol z2() { return {"z2", [](const Point& w) { return w.z2; }, false, false, 1.0}; }

inline Symbol conj_z2() { return {"conj-z2", [](const Point& w) { return std::conj(w.z2); }, false, false, 1.0}; }

inline Symbol z1() { return {"z1", [](const Point& w) { return w.z1; }, false, false, 1.0}; }

inline Symbol abs_z2_sq() {
    return {"abs-z2-sq", [](const Point& w) { return cplx(std::norm(w.z2)); }, true, true, 1.0};
}

} // namespace symbols

/// Builtin vocabulary: one, const:c, bump:t, z2, conj-z2, z1, abs-z2-sq.
/// The parametrized names also accept call syntax, const(c) and bump(t).
inline Symbol make_symbol(std::string spec, const DomainParam& p) {
    if (const auto open = spec.find('('); open != std::string::npos && !spec.empty() && spec.back() == ')')
        spec = spec.substr(0, open) + ":" + spec.substr(open + 1, spec.size() - open - 2);
    auto number = [&](const std::string& text) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || text.empty() || !std::isfinite(v))
            throw PreconditionError("symbol '" + spec + "' has a malformed numeric argument");
        return v;
    };
    if (spec == "one") return symbols::one();
    if (spec == "z2") return symbols::z2();
    if (spec == "conj-z2") return symbols::conj_z2();
    if (spec == "z1") return symbols::z1();
    if (spec == "abs-z2-sq") return symbols::abs_z2_sq();
    if (spec.rfind("const:", 0) == 0) {
        Symbol s = symbols::constant(number(spec.substr(6)));
        s.name = spec;
        return s;
    }
    if (spec.rfind("bump:", 0) == 0) {
        const double t = number(spec.substr(5));
        if (!(t > 0.0 && t < 1.0)) throw PreconditionError("bump threshold must lie in (0, 1)");
        Symbol s = symbols::bump(t, p);
        s.name = spec;
        return s;
    }
    throw PreconditionError("unknown symbol '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Truncated operators
// ---------------------------------------------------------------------------

/// Dense matrix on span{e_{m,n} : m, n <= M}, rows and columns in row-major basis order.
struct TruncatedOperator {
    Eigen::MatrixXcd matrix;
    MonomialBasis<double> basis;
    std::string symbol;

    int order() const { return basis.order(); }
    double alpha() const { return basis.param().alpha(); }
    TruncatedOperator adjoint() const { return {matrix.adjoint(), basis, symbol.empty() ? "" : symbol + "*"}; }
};

inline TruncatedOperator identity_operator(const MonomialBasis<double>& basis) {
    return {Eigen::MatrixXcd::Identity(basis.size(), basis.size()), basis, "one"};
}

inline TruncatedOperator zero_operator(const MonomialBasis<double>& basis) {
    return {Eigen::MatrixXcd::Zero(basis.size(), basis.size()), basis, "zero"};
}

enum class AssemblyPath { Auto, General };

namespace detail {

inline void check_rule(const QuadratureRule& rule, const MonomialBasis<double>& basis) {
    if (rule.alpha != basis.param().alpha()) throw PreconditionError("rule and basis disagree on alpha");
}

/// Entry (mn, pq) = sum_nodes w u e_pq conj(e_mn), by an angular Fourier transform per radial pair.
inline Eigen::MatrixXcd assemble_polydisc(const std::vector<cplx>& u, const MonomialBasis<double>& basis,
                                          const QuadratureRule& rule) {
    const int M = basis.order();
    const int N1 = rule.levels.n_theta1, N2 = rule.levels.n_theta2;
    const int nr1 = rule.levels.n_r1, nr2 = rule.levels.n_r2;
    if (N1 <= M || N2 <= M)
        throw PreconditionError("angular levels must exceed the truncation order to avoid aliasing");
    const int F = 2 * M + 1;
    const double dt1 = 2.0 * std::numbers::pi / N1, dt2 = 2.0 * std::numbers::pi / N2;
    Eigen::MatrixXcd E1(F, N1), E2T(N2, F);
    for (int a = -M; a <= M; ++a) {
        for (int k = 0; k < N1; ++k) E1(a + M, k) = std::polar(1.0, a * dt1 * (k + 0.5));
        for (int l = 0; l < N2; ++l) E2T(l, a + M) = std::polar(1.0, a * dt2 * (l + 0.5));
    }
    const int dim = basis.size();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd vals(N1, N2);
    std::vector<double> p1(2 * M + 1), p2(2 * M + 1);
    for (int i1 = 0; i1 < nr1; ++i1) {
        for (int i2 = 0; i2 < nr2; ++i2) {
            const std::size_t pair = static_cast<std::size_t>(i1) * nr2 + i2;
            const std::size_t base = pair * N1 * N2;
            for (int k = 0; k < N1; ++k)
                for (int l = 0; l < N2; ++l) vals(k, l) = u[base + static_cast<std::size_t>(k) * N2 + l];
            const Eigen::MatrixXcd hat = E1 * (vals * E2T);
            const double W = rule.wr1[i1] * rule.wr2[i2] * dt1 * dt2;
            const double rho = rule.rho1[pair], r2 = rule.r2[i2];
            p1[0] = p2[0] = 1.0;
            for (int e = 1; e <= 2 * M; ++e) {
                p1[e] = p1[e - 1] * rho;
                p2[e] = p2[e - 1] * r2;
            }
            for (int m = 0; m <= M; ++m)
                for (int n = 0; n <= M; ++n) {
                    const Eigen::Index row = static_cast<Eigen::Index>(basis.index(m, n));
                    for (int p = 0; p <= M; ++p) {
                        const double wp = W * p1[p + m];
                        for (int q = 0; q <= M; ++q) {
                            const Eigen::Index col = static_cast<Eigen::Index>(basis.index(p, q));
                            A(row, col) += wp * p2[q + n] * hat(p - m + M, q - n + M);
                        }
                    }
                }
        }
    }
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            A(r, c) *= basis.inv_sqrt(static_cast<std::size_t>(r)) * basis.inv_sqrt(static_cast<std::size_t>(c));
    return A;
}

/// E^H diag(w u) E for rules without tensor structure.
inline Eigen::MatrixXcd assemble_dense(const std::vector<cplx>& u, const MonomialBasis<double>& basis,
                                       const QuadratureRule& rule) {
    const int dim = basis.size();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const Eigen::VectorXcd e = basis.evaluate(rule.nodes[i]);
        A.noalias() += (rule.weights[i] * u[i]) * (e.conjugate() * e.transpose());
    }
    return A;
}

/// Radial symbols are diagonal in the monomial basis; only one node per radial pair is needed.
inline Eigen::MatrixXcd assemble_radial(const Symbol& u, const MonomialBasis<double>& basis, const QuadratureRule& rule) {
    const int M = basis.order();
    const int nr1 = rule.levels.n_r1, nr2 = rule.levels.n_r2;
    Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(basis.size());
    const double full_turns = 4.0 * std::numbers::pi * std::numbers::pi;
    std::vector<double> p1(M + 1), p2(M + 1);
    for (int i1 = 0; i1 < nr1; ++i1) {
        for (int i2 = 0; i2 < nr2; ++i2) {
            const std::size_t pair = static_cast<std::size_t>(i1) * nr2 + i2;
            const double rho = rule.rho1[pair], r2 = rule.r2[i2];
            const cplx val = u(Point{rho, r2});
            if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
                throw NumericError("symbol " + u.name + " is nonfinite on the rule");
            const cplx W = rule.wr1[i1] * rule.wr2[i2] * full_turns * val;
            p1[0] = p2[0] = 1.0;
            for (int e = 1; e <= M; ++e) {
                p1[e] = p1[e - 1] * rho * rho;
                p2[e] = p2[e - 1] * r2 * r2;
            }
            for (int m = 0; m <= M; ++m)
                for (int n = 0; n <= M; ++n) diag[static_cast<Eigen::Index>(basis.index(m, n))] += W * p1[m] * p2[n];
        }
    }
    for (Eigen::Index k = 0; k < diag.size(); ++k) {
        const double s = basis.inv_sqrt(static_cast<std::size_t>(k));
        diag[k] *= s * s;
    }
    return diag.asDiagonal();
}

} // namespace detail

/// Toeplitz matrix from symbol values at the rule nodes.
inline TruncatedOperator toeplitz_from_values(const std::vector<cplx>& values, const MonomialBasis<double>& basis,
                                              const QuadratureRule& rule, std::string label = {}) {
    detail::check_rule(rule, basis);
    if (values.size() != rule.size()) throw PreconditionError("symbol values do not match the rule");
    Eigen::MatrixXcd A = rule.kind == RuleKind::Polydisc ? detail::assemble_polydisc(values, basis, rule)
                                                         : detail::assemble_dense(values, basis, rule);
    return {std::move(A), basis, std::move(label)};
}

/// T_u = P_M M_u restricted to the truncated space: entries <u e_pq, e_mn> by quadrature.
inline TruncatedOperator toeplitz_matrix(const Symbol& u, const MonomialBasis<double>& basis, const QuadratureRule& rule,
                                         AssemblyPath path = AssemblyPath::Auto, NodePolicy policy = NodePolicy::Reject) {
    detail::check_rule(rule, basis);
    if (path == AssemblyPath::Auto && u.radial && rule.kind == RuleKind::Polydisc)
        return {detail::assemble_radial(u, basis, rule), basis, u.name};
    const std::vector<cplx> vals = evaluate_on_rule(u.fn, rule, policy, nullptr);
    return toeplitz_from_values(vals, basis, rule, u.name);
}

// ---------------------------------------------------------------------------
// Normalized kernels
// ---------------------------------------------------------------------------

enum class KernelNormalization { Truncated, Full };

/// Coefficients of k_z in the truncated basis, and the truncation defect of K_z.
inline CoefficientVector<double> normalized_kz(const Point& z, const MonomialBasis<double>& basis, double* defect,
                                                KernelNormalization mode = KernelNormalization::Truncated) {
    CoefficientVector<double> k = kz_coefficients(z, basis);
    const double tn2 = k.squaredNorm();
    const double kd = kernel_diagonal(z, basis.param());
    if (defect) *defect = 1.0 - tn2 / kd;
    k /= mode == KernelNormalization::Truncated ? std::sqrt(tn2) : std::sqrt(kd);
    return k;
}

struct KzApplication {
    CoefficientVector<double> coefficients;
    double norm = 0.0;
    double defect = 0.0;
};

/// T k_z, its norm and the truncation defect of K_z.
inline KzApplication apply_to_kz(const TruncatedOperator& T, const Point& z,
                                 KernelNormalization mode = KernelNormalization::Truncated) {
    KzApplication r;
    const CoefficientVector<double> k = normalized_kz(z, T.basis, &r.defect, mode);
    r.coefficients = T.matrix * k;
    r.norm = r.coefficients.norm();
    return r;
}

/// <T k_z, k_z> in the truncated space.
inline cplx berezin(const TruncatedOperator& T, const Point& z) {
    const CoefficientVector<double> k = normalized_kz(z, T.basis, nullptr);
    return k.dot(T.matrix * k);  // Eigen's dot conjugates its left argument
}

struct Ray {
    cplx a1{};
    cplx a2{1.0};
    Point at(double t) const { return {t * a1, t * a2}; }
};

struct ProfileEntry {
    double t = 0.0;
    Point z;
    double d = 0.0;
    double norm = 0.0;
    cplx berezin{};
    double defect = 0.0;
    bool trusted = true;
};

struct BoundaryProfile {
    Ray ray;
    std::string symbol;
    double defect_threshold = 0.05;
    std::vector<ProfileEntry> entries;
};

/// (d(z, 0), ||T k_z||) along z = t (a1, a2); entries whose truncation defect exceeds the
/// threshold are flagged as untrusted.
inline BoundaryProfile boundary_profile(const TruncatedOperator& T, const Ray& ray, const std::vector<double>& grid,
                                        double defect_threshold = 0.05) {
    const DomainParam p = T.basis.param();
    BoundaryProfile prof;
    prof.ray = ray;
    prof.symbol = T.symbol;
    prof.defect_threshold = defect_threshold;
    for (double t : grid) {
        ProfileEntry e;
        e.t = t;
        e.z = ray.at(t);
        require_interior(e.z, p, "ray point");
        e.d = distance_to_origin(e.z, p).d;
        const CoefficientVector<double> k = normalized_kz(e.z, T.basis, &e.defect);
        const CoefficientVector<double> tk = T.matrix * k;
        e.norm = tk.norm();
        e.berezin = k.dot(tk);
        e.trusted = e.defect <= defect_threshold;
        prof.entries.push_back(e);
    }
    return prof;
}

struct ProfileVerdict {
    bool decays = false;           // last trusted norm below the level
    double last_trusted_norm = 0.0;
    double min_trusted_norm = 0.0;
    std::size_t trusted = 0;
};

inline ProfileVerdict classify_profile(const BoundaryProfile& prof, double level = 0.05) {
    ProfileVerdict v;
    v.min_trusted_norm = std::numeric_limits<double>::infinity();
    for (const auto& e : prof.entries) {
        if (!e.trusted) continue;
        ++v.trusted;
        v.last_trusted_norm = e.norm;
        v.min_trusted_norm = std::min(v.min_trusted_norm, e.norm);
    }
    v.decays = v.trusted > 0 && v.last_trusted_norm < level;
    return v;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

struct NormEstimate {
    double power = 0.0;      // power iteration on T^H T
    double svd = 0.0;        // largest singular value from a dense SVD
    double residual = 0.0;   // ||T^H T v - lambda v|| at the final iterate
    int iterations = 0;
};

/// Operator norm by 200 power iterations on T^H T from a fixed-seed start, certified by a dense SVD.
inline NormEstimate operator_norm(const Eigen::MatrixXcd& T, int iterations = 200, unsigned long long seed = 20240601ULL) {
    NormEstimate est;
    est.iterations = iterations;
    if (T.size() == 0) return est;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(T.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(nd(gen), nd(gen));
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXcd w = T.adjoint() * (T * v);
        lambda = v.dot(w).real();
        const double nw = w.norm();
        if (nw == 0.0) {
            lambda = 0.0;
            break;
        }
        v = w / nw;
    }
    const Eigen::VectorXcd w = T.adjoint() * (T * v);
    lambda = v.dot(w).real();
    est.residual = (w - lambda * v).norm();
    est.power = std::sqrt(std::max(lambda, 0.0));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(T);
    est.svd = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    return est;
}

// ---------------------------------------------------------------------------
// Boundedness functionals
// ---------------------------------------------------------------------------

namespace detail {
inline void check_pexp(double p_exp) {
    if (!(p_exp > 4.0) || !std::isfinite(p_exp)) throw PreconditionError("the L^p exponent must exceed 4");
}
} // namespace detail

/// ||V_{f(z)} U_z T k_z||_{L^p}, with T k_z rebuilt from its coefficients. With adjoint = true
/// the conjugate-transpose matrix is used.
inline double boundedness_functional(const TruncatedOperator& T, const Point& z, double p_exp,
                                     const QuadratureRule& rule, bool adjoint = false) {
    detail::check_pexp(p_exp);
    const DomainParam p = T.basis.param();
    detail::check_rule(rule, T.basis);
    const CoefficientVector<double> k = normalized_kz(z, T.basis, nullptr);
    const CoefficientVector<double> c = adjoint ? CoefficientVector<double>(T.matrix.adjoint() * k)
                                                : CoefficientVector<double>(T.matrix * k);
    if (c.norm() == 0.0) return 0.0;
    const MonomialBasis<double>& basis = T.basis;
    PointFunction<double> g = [&basis, c](const Point& w) { return cplx((basis.evaluate(w).array() * c.array()).sum()); };
    const TransportedFunction<double> h = transport_VU(z, std::move(g), p);
    return lp_norm(h, rule, p_exp);
}

/// ||V_{f(z)} U_z g||_{L^p} for a callable g standing for T k_z, e.g. the exact normalized kernel
/// when T is the identity. This avoids the truncation of k_z near the boundary.
inline double boundedness_functional(const PointFunction<double>& Tkz, const Point& z, double p_exp,
                                     const QuadratureRule& rule) {
    detail::check_pexp(p_exp);
    const DomainParam p = rule.param();
    require_interior(z, p);
    return lp_norm(transport_VU(z, Tkz, p), rule, p_exp);
}

/// The identity functional with the exact k_z.
inline double identity_functional(const Point& z, double p_exp, const QuadratureRule& rule) {
    const DomainParam p = rule.param();
    return boundedness_functional([z, p](const Point& w) { return normalized_kernel_eval(z, w, p); }, z, p_exp, rule);
}

/// ||u(phi_{z2}(phi_{f(z)}(w)))||_{L^p(dV(w))}.
inline double symbol_condition(const Symbol& u, const Point& z, double p_exp, const QuadratureRule& rule,
                               const DomainParam& p) {
    detail::check_pexp(p_exp);
    require_interior(z, p);
    const cplx f = f_alpha(z, p);
    auto g = [&](const Point& w) { return u(phi_z2(z, phi_z1(f, w, p).image, p).image); };
    return lp_norm(g, rule, p_exp);
}

/// ||u(z) - u(phi_{z2}(phi_{f(z)}(w)))||_{L^p(dV(w))}.
inline double hankel_condition(const Symbol& u, const Point& z, double p_exp, const QuadratureRule& rule,
                               const DomainParam& p) {
    detail::check_pexp(p_exp);
    require_interior(z, p);
    const cplx f = f_alpha(z, p);
    const cplx uz = u(z);
    auto g = [&](const Point& w) { return uz - u(phi_z2(z, phi_z1(f, w, p).image, p).image); };
    return lp_norm(g, rule, p_exp);
}

struct HankelResult {
    double norm_sq = 0.0;  // may be slightly negative from quadrature error
    double norm = 0.0;
};

/// ||H_u f|| = ||(I - P)(u f)|| with P the projection onto the truncated space:
/// ||u f||^2 - ||P(u f)||^2, where P(u f) has coefficients T_u c.
inline HankelResult hankel_apply(const Symbol& u, const CoefficientVector<double>& f, const MonomialBasis<double>& basis,
                                 const QuadratureRule& rule) {
    detail::check_rule(rule, basis);
    if (f.size() != basis.size()) throw PreconditionError("coefficient vector does not match the basis");
    auto uf = [&](const Point& w) { return u(w) * cplx((basis.evaluate(w).array() * f.array()).sum()); };
    const std::vector<cplx> v = evaluate_on_rule(uf, rule, NodePolicy::Reject, nullptr);
    const double total = inner_product_values(v, v, rule).real();
    const TruncatedOperator T = toeplitz_matrix(u, basis, rule, AssemblyPath::General);
    const double proj = (T.matrix * f).squaredNorm();
    HankelResult r;
    r.norm_sq = total - proj;
    r.norm = std::sqrt(std::max(r.norm_sq, 0.0));
    return r;
}

// ---------------------------------------------------------------------------
// Localization and compactness
// ---------------------------------------------------------------------------

struct LocalizationResult {
    double lower_bound = 0.0;  // never an upper bound on the true operator norm
    std::size_t cells = 0;
};

/// Estimates ||T - sum_j M_{1_{F_j}} T P M_{1_{G_j}}|| on the truncated space.
///
/// Rule nodes inherit the cell of their nearest sample point; a node lies in G_j when it is within
/// distance r of the sample part of F_j, or belongs to F_j itself. Since the F_j partition U^alpha,
/// the residual applied to f is sum_j 1_{F_j} T (I - T_{G_j}) f, whose squared norm is f^H Q f with
/// Q = sum_j A_j^H T_{F_j} A_j, A_j = T (I - T_{G_j}). The result is sqrt(lambda_max(Q)): a maximum
/// over the truncated unit sphere, hence a lower bound for the full operator norm.
inline LocalizationResult localization_error(const TruncatedOperator& T, const Covering& cov,
                                             const std::vector<Point>& sample, const QuadratureRule& rule) {
    const DomainParam p = T.basis.param();
    if (cov.alpha != p.alpha() || rule.alpha != p.alpha())
        throw PreconditionError("covering, rule and operator must share alpha");
    if (cov.owner.size() != sample.size()) throw PreconditionError("covering does not match the sample");
    const std::size_t nc = cov.cells.size();
    const std::size_t nn = rule.size();

    std::vector<double> ks(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) ks[i] = kernel_diagonal(sample[i], p);
    std::vector<std::size_t> cell_of_node(nn);
    std::vector<std::vector<char>> in_g(nc, std::vector<char>(nn, 0));
    std::vector<double> cell_min(nc);
    for (std::size_t i = 0; i < nn; ++i) {
        const Point& x = rule.nodes[i];
        const double kx = kernel_diagonal(x, p);
        std::fill(cell_min.begin(), cell_min.end(), std::numeric_limits<double>::infinity());
        double best = std::numeric_limits<double>::infinity();
        std::size_t near = 0;
        for (std::size_t s = 0; s < sample.size(); ++s) {
            const double d = skwarczynski_cached(x, kx, sample[s], ks[s], p).d;
            if (d < best) {
                best = d;
                near = s;
            }
            double& cm = cell_min[cov.owner[s]];
            cm = std::min(cm, d);
        }
        cell_of_node[i] = cov.owner[near];
        for (std::size_t j = 0; j < nc; ++j) in_g[j][i] = (cell_min[j] <= cov.r || cell_of_node[i] == j) ? 1 : 0;
    }

    const int dim = T.basis.size();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<cplx> fv(nn), gv(nn);
    for (std::size_t j = 0; j < nc; ++j) {
        for (std::size_t i = 0; i < nn; ++i) {
            fv[i] = cell_of_node[i] == j ? 1.0 : 0.0;
            gv[i] = in_g[j][i] ? 1.0 : 0.0;
        }
        const Eigen::MatrixXcd TF = toeplitz_from_values(fv, T.basis, rule).matrix;
        const Eigen::MatrixXcd TG = toeplitz_from_values(gv, T.basis, rule).matrix;
        const Eigen::MatrixXcd A = T.matrix * (I - TG);
        Q += A.adjoint() * TF * A;
    }
    const Eigen::MatrixXcd H = 0.5 * (Q + Q.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    LocalizationResult r;
    r.cells = nc;
    r.lower_bound = std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
    return r;
}

/// Region { rho > threshold }; precompact in U^alpha exactly when threshold > 0.
struct Region {
    double rho_threshold = 0.5;
};

struct SingularValueRow {
    int M = 0;
    std::vector<double> sigma;  // descending
    int knee = 0;               // number of sigma_k above 0.1 sigma_1
};

/// Singular values of T_{1_G} for each truncation order. The indicator is radial, so a rule
/// with one angular node per disc and many radial nodes resolves its jump.
inline std::vector<SingularValueRow> indicator_compactness(const Region& G, const std::vector<int>& orders,
                                                           const DomainParam& p, int radial_nodes = 400) {
    if (!(G.rho_threshold > 0.0))
        throw PreconditionError("region reaches the boundary, so its closure is not inside U^alpha");
    const QuadratureRule rule = build_rule(p, Levels{radial_nodes, 1, radial_nodes, 1, 0, 0});
    const Symbol u = symbols::bump(G.rho_threshold, p);
    std::vector<SingularValueRow> table;
    for (int M : orders) {
        const MonomialBasis<double> basis(p, M);
        SingularValueRow row;
        row.M = M;
        if (G.rho_threshold >= 1.0) {
            row.sigma.assign(static_cast<std::size_t>(basis.size()), 0.0);
        } else {
            const TruncatedOperator T = toeplitz_matrix(u, basis, rule);
            Eigen::BDCSVD<Eigen::MatrixXcd> svd(T.matrix);
            const Eigen::VectorXd s = svd.singularValues();
            row.sigma.assign(s.data(), s.data() + s.size());
        }
        const double s1 = row.sigma.empty() ? 0.0 : row.sigma.front();
        for (double s : row.sigma)
            if (s1 > 0.0 && s > 0.1 * s1) ++row.knee;
        table.push_back(std::move(row));
    }
    return table;
}

} // namespace thullen
