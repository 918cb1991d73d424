#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "domain.hpp"
#include "error.hpp"
#include "maps.hpp"

namespace thullen {

// ---------------------------------------------------------------------------
// One-dimensional building blocks
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Golub-Welsch eigenvalues for the starting nodes, then Newton polishing on the
/// three-term recurrence; weights from 2 / ((1 - x^2) P_n'(x)^2).
inline GaussRule gauss_legendre(int n) {
    if (n < 1) throw PreconditionError("Gauss-Legendre order must be positive");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()[i];
        double dp = 1.0;
        for (int it = 0; it < 3; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            x -= p1 / dp;
        }
        r.x[i] = 0.5 * (x + 1.0);
        r.w[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

/// Integral over [0, L] of f, with geometric panels [0,h], [h,2h], [2h,4h], ... toward 0.
/// Resolves integrable endpoint singularities and peaks of width ~h at the origin.
template <class F>
double graded_integral(F&& f, double L, double h0, const GaussRule& g) {
    double total = 0.0;
    double a = 0.0;
    double b = std::min(h0, L);
    while (a < L) {
        double part = 0.0;
        const double len = b - a;
        for (std::size_t i = 0; i < g.x.size(); ++i) part += g.w[i] * f(a + len * g.x[i]);
        total += part * len;
        a = b;
        b = std::min(2.0 * b, L);
    }
    return total;
}

namespace detail {
inline const GaussRule& panel_rule() {
    static const GaussRule g = gauss_legendre(20);
    return g;
}
} // namespace detail

/// Theta(x, lambda) = int_0^{2 pi} |1 - x e^{i t}|^{-lambda} dt for 0 <= x < 1.
inline double circle_power_integral(double x, double lambda) {
    if (x == 0.0) return 2.0 * std::numbers::pi;
    const double gap = 1.0 - x;
    auto f = [&](double t) {
        const double s = std::sin(0.5 * t);
        const double m2 = gap * gap + 4.0 * x * s * s;
        return std::pow(m2, -0.5 * lambda);
    };
    return 2.0 * graded_integral(f, std::numbers::pi, std::max(gap, 1e-300) * 0.25, detail::panel_rule());
}

/// a_{eps,delta}(w) = int_D (1-|eta|^2)^{-eps} |1 - w conj(eta)|^{-(2-eps-delta)} dA(eta)/pi.
/// The area measure is normalized so that the disc has mass 1.
inline double disc_integral_a(double eps, double delta, std::complex<double> w) {
    if (!(eps < 1.0)) throw PreconditionError("disc_integral_a requires eps < 1");
    const double r = std::abs(w);
    if (!(r < 1.0)) throw DomainError("disc_integral_a requires |w| < 1");
    const double lambda = 2.0 - eps - delta;
    // Substitute rho = 1 - sigma so that the grading resolves the rim.
    auto g = [&](double sigma) {
        const double rho = 1.0 - sigma;
        const double one_minus_rho2 = sigma * (2.0 - sigma);
        return rho * std::pow(one_minus_rho2, -eps) * circle_power_integral(r * rho, lambda);
    };
    return graded_integral(g, 1.0, 1e-14, detail::panel_rule()) / std::numbers::pi;
}

/// b_delta(w) = int_{circle} |1 - w conj(eta)|^{-(1-delta)} d theta / (2 pi).
inline double circle_integral_b(double delta, std::complex<double> w) {
    const double r = std::abs(w);
    if (!(r < 1.0)) throw DomainError("circle_integral_b requires |w| < 1");
    return circle_power_integral(r, 1.0 - delta) / (2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Rules on U^alpha
// ---------------------------------------------------------------------------

/// Resolution of a product rule.
///
/// Polydisc rule: radial counts in |t1| and |w2|, angular counts in arg t1 and arg w2.
/// Focused rule:  radial and angular counts about the focus in the w1 disc, then radial and
/// angular counts in the normalized fibre variable tau = w2 / sqrt(1 - |w1|^(2/alpha)).
/// A radial node u in (0,1) becomes r = 1 - (1-u)^g (polydisc) or rho = rho_max u^g (focused).
/// A grading of 0 selects the automatic value.
struct Levels {
    int n_r1 = 16;
    int n_theta1 = 16;
    int n_r2 = 16;
    int n_theta2 = 16;
    int grading_r1 = 0;
    int grading_r2 = 0;

    friend bool operator==(const Levels&, const Levels&) = default;
};

enum class RuleKind { Polydisc, Focused, FocusedW2 };

inline std::string to_string(RuleKind k) {
    switch (k) {
    case RuleKind::Polydisc: return "polydisc";
    case RuleKind::Focused: return "focused";
    case RuleKind::FocusedW2: return "focused-w2";
    }
    return "unknown";
}

/// Smallest g in 1..8 for which g alpha / 2 is an integer, else 3. With that grading,
/// (1 - r^2)^(alpha/2) becomes smooth in the Gauss variable and the rule is exact on monomials.
inline int auto_radial_grading(double alpha) {
    for (int g = 1; g <= 8; ++g) {
        const double v = g * alpha / 2.0;
        if (std::abs(v - std::round(v)) < 1e-12) return g;
    }
    return 3;
}

/// Levels at which the polydisc rule reproduces every Gram entry <e_pq, e_mn> of the degree-M
/// basis. Exactness is attained when the auto grading makes (1 - |w2|^2)^alpha a polynomial in the
/// Gauss variable, and approximately otherwise. extra adds nodes in every direction for symbols
/// of low polynomial degree.
inline Levels levels_for_order(const DomainParam& p, int M, int extra = 4) {
    if (M < 0 || extra < 0) throw PreconditionError("truncation order and margin must be nonnegative");
    const int g = auto_radial_grading(p.alpha());
    // degree in the Gauss variable of r2^(2M+1) dr2 (1 - r2^2)^(alpha (M+1)) after grading
    const double degree = g * (2.0 * M + 2.0) + 2.0 * g * p.alpha() * (M + 1.0);
    Levels lv;
    lv.n_r1 = M + 1 + extra;
    lv.n_r2 = static_cast<int>(std::ceil(degree / 2.0)) + extra;
    lv.n_theta1 = lv.n_theta2 = 2 * M + 2 + extra;
    return lv;
}

struct QuadratureRule {
    double alpha = 1.0;
    Levels levels;
    RuleKind kind = RuleKind::Polydisc;
    cplx focus{};
    std::vector<Point> nodes;
    std::vector<double> weights;

    // Tensor structure of the polydisc rule. Node index is
    // ((i1 * n_r2 + i2) * n_theta1 + k1) * n_theta2 + k2.
    std::vector<double> r1, r2;     // |t1| and |w2| radial nodes
    std::vector<double> wr1, wr2;   // radial weights including r dr and (1 - r2^2)^alpha
    std::vector<double> rho1;       // |w1| = r1 (1 - r2^2)^(alpha/2), indexed i1 * n_r2 + i2

    std::size_t size() const noexcept { return nodes.size(); }
    DomainParam param() const { return DomainParam(alpha); }
    double volume() const;
};

namespace detail {

/// Pairwise summation in blocks, fixed order, so every reduction is reproducible.
template <class V>
V pairwise_sum(const std::vector<V>& terms, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 256) {
        V s{};
        for (std::size_t i = lo; i < hi; ++i) s += terms[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

template <class V>
V pairwise_sum(const std::vector<V>& terms) {
    return terms.empty() ? V{} : pairwise_sum(terms, 0, terms.size());
}

inline void validate_levels(const Levels& lv) {
    if (lv.n_r1 < 1 || lv.n_theta1 < 1 || lv.n_r2 < 1 || lv.n_theta2 < 1)
        throw PreconditionError("quadrature levels must be positive");
    if (lv.grading_r1 < 0 || lv.grading_r2 < 0 || lv.grading_r1 > 16 || lv.grading_r2 > 16)
        throw PreconditionError("radial grading must lie in 0..16");
}

/// b + sqrt(b^2 + c2) evaluated without cancellation for negative b.
inline double rim_sum(double b, double c2) {
    const double root = std::sqrt(b * b + c2);
    return b >= 0.0 ? b + root : c2 / (root - b);
}

inline void check_nodes(const QuadratureRule& rule) {
    const DomainParam p(rule.alpha);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (!in_domain(rule.nodes[i], p) || !(rule.weights[i] > 0.0) || !std::isfinite(rule.weights[i])) {
            throw PreconditionError("levels are too fine for double precision: node " + std::to_string(i) +
                                    " is not interior or has a degenerate weight");
        }
    }
}

} // namespace detail

inline double QuadratureRule::volume() const { return detail::pairwise_sum(weights); }

/// Tensor rule on the polydisc coordinates (t1, w2), w1 = t1 (1 - |w2|^2)^(alpha/2), so that
/// dV(w) = (1 - |w2|^2)^alpha dA(t1) dA(w2). Gauss-Legendre radially, uniform in angle.
inline QuadratureRule build_rule(const DomainParam& p, const Levels& levels) {
    detail::validate_levels(levels);
    const double a = p.alpha();
    const int g1 = levels.grading_r1 == 0 ? 1 : levels.grading_r1;
    const int g2 = levels.grading_r2 == 0 ? auto_radial_grading(a) : levels.grading_r2;
    const GaussRule G1 = gauss_legendre(levels.n_r1);
    const GaussRule G2 = gauss_legendre(levels.n_r2);

    QuadratureRule rule;
    rule.alpha = a;
    rule.levels = levels;
    rule.kind = RuleKind::Polydisc;
    for (int i = 0; i < levels.n_r1; ++i) {
        const double v = 1.0 - G1.x[i];
        const double r = 1.0 - std::pow(v, g1);
        rule.r1.push_back(r);
        rule.wr1.push_back(G1.w[i] * g1 * std::pow(v, g1 - 1) * r);
    }
    std::vector<double> one_minus_sq;
    for (int i = 0; i < levels.n_r2; ++i) {
        const double v = 1.0 - G2.x[i];
        const double gap = std::pow(v, g2);
        const double r = 1.0 - gap;
        const double s = gap * (1.0 + r);
        one_minus_sq.push_back(s);
        rule.r2.push_back(r);
        rule.wr2.push_back(G2.w[i] * g2 * std::pow(v, g2 - 1) * r * std::pow(s, a));
    }
    const int N1 = levels.n_theta1;
    const int N2 = levels.n_theta2;
    const double dt1 = 2.0 * std::numbers::pi / N1;
    const double dt2 = 2.0 * std::numbers::pi / N2;
    std::vector<cplx> e1(N1), e2(N2);
    for (int k = 0; k < N1; ++k) e1[k] = std::polar(1.0, dt1 * (k + 0.5));
    for (int k = 0; k < N2; ++k) e2[k] = std::polar(1.0, dt2 * (k + 0.5));

    const std::size_t total = static_cast<std::size_t>(levels.n_r1) * levels.n_r2 * N1 * N2;
    rule.nodes.reserve(total);
    rule.weights.reserve(total);
    for (int i1 = 0; i1 < levels.n_r1; ++i1) {
        for (int i2 = 0; i2 < levels.n_r2; ++i2) {
            const double rho = rule.r1[i1] * std::pow(one_minus_sq[i2], a / 2.0);
            rule.rho1.push_back(rho);
            const double w = rule.wr1[i1] * rule.wr2[i2] * dt1 * dt2;
            for (int k1 = 0; k1 < N1; ++k1) {
                for (int k2 = 0; k2 < N2; ++k2) {
                    rule.nodes.push_back({rho * e1[k1], rule.r2[i2] * e2[k2]});
                    rule.weights.push_back(w);
                }
            }
        }
    }
    detail::check_nodes(rule);
    return rule;
}

/// Rule fibred over w1: w1 = focus + rho e^{i theta} covers the unit disc in polar coordinates
/// about the focus, and w2 = tau sqrt(1 - |w1|^(2/alpha)) with tau in the unit disc, so that
/// dV = (1 - |w1|^(2/alpha)) dA(w1) dA(tau).
///
/// Integrands that are smooth except for a point singularity in w1 at the focus (for instance
/// |.|^(2/alpha) of a disc automorphism vanishing there) converge spectrally on this rule.
inline QuadratureRule build_focused_rule(const DomainParam& p, const Levels& levels, cplx focus) {
    detail::validate_levels(levels);
    if (!(std::abs(focus) < 1.0)) throw DomainError("rule focus must lie in the unit disc");
    const double a = p.alpha();
    const int g1 = levels.grading_r1 == 0 ? 3 : levels.grading_r1;
    const int g2 = levels.grading_r2 == 0 ? 1 : levels.grading_r2;
    const GaussRule G1 = gauss_legendre(levels.n_r1);
    const GaussRule G2 = gauss_legendre(levels.n_r2);
    const int N1 = levels.n_theta1;
    const int N2 = levels.n_theta2;
    const double dt1 = 2.0 * std::numbers::pi / N1;
    const double dt2 = 2.0 * std::numbers::pi / N2;

    QuadratureRule rule;
    rule.alpha = a;
    rule.levels = levels;
    rule.kind = RuleKind::Focused;
    rule.focus = focus;

    std::vector<cplx> tau;
    std::vector<double> wtau;
    for (int i = 0; i < levels.n_r2; ++i) {
        const double r = std::pow(G2.x[i], g2);
        const double wr = G2.w[i] * g2 * std::pow(G2.x[i], g2 - 1) * r;
        for (int k = 0; k < N2; ++k) {
            tau.push_back(std::polar(r, dt2 * (k + 0.5)));
            wtau.push_back(wr * dt2);
        }
    }
    const double c2 = 1.0 - std::norm(focus);
    for (int k = 0; k < N1; ++k) {
        const cplx e = std::polar(1.0, dt1 * (k + 0.5));
        const double b = std::real(std::conj(focus) * e);
        const double rmax = c2 / detail::rim_sum(b, c2);  // positive root of |focus + rho e|^2 = 1
        for (int i = 0; i < levels.n_r1; ++i) {
            const double rho = rmax * std::pow(G1.x[i], g1);
            const double wr = G1.w[i] * rmax * g1 * std::pow(G1.x[i], g1 - 1) * rho * dt1;
            const cplx w1 = focus + rho * e;
            const double fibre = 1.0 - abs_pow(std::abs(w1), 2.0 / a);
            const double s = std::sqrt(fibre);
            for (std::size_t j = 0; j < tau.size(); ++j) {
                rule.nodes.push_back({w1, tau[j] * s});
                rule.weights.push_back(wr * fibre * wtau[j]);
            }
        }
    }
    detail::check_nodes(rule);
    return rule;
}

/// Rule fibred over w2: w2 = focus + rho e^{i theta} in polar coordinates about the focus, and
/// w1 = t (1 - |w2|^2)^(alpha/2) with t in the unit disc, so that dV = (1 - |w2|^2)^alpha dA(w2) dA(t).
///
/// Pullbacks under the disc automorphism of w2 exchanging the focus and 0 carry powers of
/// (1 - conj(focus) w2)^(-1). Seen from the focus the pole sits about twice as far out as the
/// rim, so the radial Gauss rule converges geometrically however close the focus is to the rim.
/// The rim factor (1 - |w2|^2)^alpha is tamed with the same grading as the polydisc rule.
inline QuadratureRule build_focused_rule_w2(const DomainParam& p, const Levels& levels, cplx focus) {
    detail::validate_levels(levels);
    if (!(std::abs(focus) < 1.0)) throw DomainError("rule focus must lie in the unit disc");
    const double a = p.alpha();
    const int g1 = levels.grading_r1 == 0 ? auto_radial_grading(a) : levels.grading_r1;
    const int g2 = levels.grading_r2 == 0 ? 1 : levels.grading_r2;
    const GaussRule G1 = gauss_legendre(levels.n_r1);
    const GaussRule G2 = gauss_legendre(levels.n_r2);
    const int N1 = levels.n_theta1;
    const int N2 = levels.n_theta2;
    const double dt1 = 2.0 * std::numbers::pi / N1;
    const double dt2 = 2.0 * std::numbers::pi / N2;

    QuadratureRule rule;
    rule.alpha = a;
    rule.levels = levels;
    rule.kind = RuleKind::FocusedW2;
    rule.focus = focus;

    std::vector<cplx> t;
    std::vector<double> wt;
    for (int i = 0; i < levels.n_r2; ++i) {
        const double r = std::pow(G2.x[i], g2);
        const double wr = G2.w[i] * g2 * std::pow(G2.x[i], g2 - 1) * r;
        for (int k = 0; k < N2; ++k) {
            t.push_back(std::polar(r, dt2 * (k + 0.5)));
            wt.push_back(wr * dt2);
        }
    }
    const double c2 = 1.0 - std::norm(focus);
    for (int k = 0; k < N1; ++k) {
        const cplx e = std::polar(1.0, dt1 * (k + 0.5));
        const double b = std::real(std::conj(focus) * e);
        const double bp = detail::rim_sum(b, c2);
        const double rmax = c2 / bp;
        for (int i = 0; i < levels.n_r1; ++i) {
            const double v = 1.0 - G1.x[i];
            const double gap = std::pow(v, g1);
            const double rho = rmax * (1.0 - gap);
            const double wr = G1.w[i] * rmax * g1 * std::pow(v, g1 - 1) * rho * dt1;
            const cplx w2 = focus + rho * e;
            // 1 - |w2|^2 = (rmax - rho)(rho + bp), free of cancellation near the rim
            const double s = rmax * gap * (rho + bp);
            const double scale = std::pow(s, a / 2.0);
            const double ws = wr * std::pow(s, a);
            for (std::size_t j = 0; j < t.size(); ++j) {
                rule.nodes.push_back({t[j] * scale, w2});
                rule.weights.push_back(ws * wt[j]);
            }
        }
    }
    detail::check_nodes(rule);
    return rule;
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

/// What to do when an integrand is nonfinite at a node.
enum class NodePolicy { Reject, Skip };

struct IntegrationReport {
    cplx value{};
    std::size_t skipped = 0;
};

/// Evaluates f at every node. Nonfinite values either throw (naming the node) or are skipped.
template <class F>
std::vector<cplx> evaluate_on_rule(F&& f, const QuadratureRule& rule, NodePolicy policy, std::size_t* skipped) {
    std::vector<cplx> v(rule.size());
    std::size_t bad = 0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        cplx x;
        try {
            x = f(rule.nodes[i]);
        } catch (const Error& e) {
            throw NumericError("integrand failed at node " + std::to_string(i) + " " + to_string(rule.nodes[i]) +
                               ": " + e.what());
        }
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            if (policy == NodePolicy::Reject)
                throw NumericError("integrand is nonfinite at node " + std::to_string(i) + " " +
                                   to_string(rule.nodes[i]));
            ++bad;
            x = 0.0;
        }
        v[i] = x;
    }
    if (skipped) *skipped = bad;
    return v;
}

/// sum_i w_i f(x_i).
template <class F>
IntegrationReport integrate(F&& f, const QuadratureRule& rule, NodePolicy policy = NodePolicy::Reject) {
    IntegrationReport rep;
    const std::vector<cplx> v = evaluate_on_rule(f, rule, policy, &rep.skipped);
    std::vector<cplx> terms(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) terms[i] = rule.weights[i] * v[i];
    rep.value = detail::pairwise_sum(terms);
    return rep;
}

/// <f, g> = sum_i w_i f(x_i) conj(g(x_i)). The products are formed explicitly so that
/// swapping f and g conjugates every term, and therefore the sum, bit for bit.
inline cplx inner_product_values(const std::vector<cplx>& f, const std::vector<cplx>& g, const QuadratureRule& rule) {
    if (f.size() != rule.size() || g.size() != rule.size())
        throw PreconditionError("inner_product: value arrays do not match the rule");
    std::vector<double> re(f.size()), im(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = f[i].real(), b = f[i].imag(), c = g[i].real(), d = g[i].imag();
        re[i] = rule.weights[i] * (a * c + b * d);
        im[i] = rule.weights[i] * (b * c - a * d);
    }
    return {detail::pairwise_sum(re), detail::pairwise_sum(im)};
}

template <class F, class G>
cplx inner_product(F&& f, G&& g, const QuadratureRule& rule, NodePolicy policy = NodePolicy::Reject) {
    const std::vector<cplx> fv = evaluate_on_rule(f, rule, policy, nullptr);
    const std::vector<cplx> gv = evaluate_on_rule(g, rule, policy, nullptr);
    return inner_product_values(fv, gv, rule);
}

/// (sum_i w_i |f(x_i)|^p)^(1/p).
template <class F>
double lp_norm(F&& f, const QuadratureRule& rule, double p_exp, NodePolicy policy = NodePolicy::Reject) {
    if (!(p_exp >= 1.0)) throw PreconditionError("lp_norm requires p >= 1");
    const std::vector<cplx> v = evaluate_on_rule(f, rule, policy, nullptr);
    std::vector<double> terms(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) terms[i] = rule.weights[i] * std::pow(std::abs(v[i]), p_exp);
    return std::pow(detail::pairwise_sum(terms), 1.0 / p_exp);
}

// ---------------------------------------------------------------------------
// Forelli-Rudin type integral
// ---------------------------------------------------------------------------

struct ForelliRudinParams {
    double eps1 = 0.5;
    double eps2 = 0.5;
    double eps3 = 0.1;
    double delta1 = 0.5;
    double delta2 = 0.5;
};

namespace detail {

inline void validate_fr(const ForelliRudinParams& q, const DomainParam& p) {
    if (!(q.eps1 < p.alpha() + 1.0)) throw PreconditionError("Forelli-Rudin integral requires eps1 < alpha + 1");
    if (!(q.eps2 < 1.0)) throw PreconditionError("Forelli-Rudin integral requires eps2 < 1");
    if (!(q.eps3 > 0.0)) throw PreconditionError("Forelli-Rudin integral requires eps3 > 0");
    // The t1 factor (1 - |t1|^2)^(-eps1) is only integrable for eps1 < 1.
    if (!(q.eps1 < 1.0)) throw NumericError("Forelli-Rudin integral diverges for eps1 >= 1");
}

} // namespace detail

/// Integrand of I_{delta1,delta2}(z) with respect to volume measure on U^alpha.
inline double forelli_rudin_integrand(const Point& z, const Point& w, const ForelliRudinParams& q, const DomainParam& p) {
    const double a = p.alpha();
    const double s2 = 1.0 - std::norm(w.z2);
    const double x = 1.0 - std::norm(z.z1) / std::pow(1.0 - std::norm(z.z2), a);
    const double t = 1.0 - std::norm(w.z1) / std::pow(s2, a);
    const double d2 = std::abs(1.0 - std::conj(z.z2) * w.z2);
    const double d1 = std::abs(1.0 - std::conj(f_alpha(z, p)) * w.z1);
    return std::pow(s2, -q.eps2) * std::pow(t, -q.eps1) * std::pow(x, q.eps3) /
           (std::pow(d2, 2.0 + a - q.eps2 - q.delta2) * std::pow(d1, 3.0 - q.eps1 + q.eps3 - q.delta1));
}

/// I_{delta1,delta2}(z) by a given rule on U^alpha. Suited to z away from the boundary.
inline double forelli_rudin_I(const Point& z, const ForelliRudinParams& q, const DomainParam& p,
                              const QuadratureRule& rule) {
    detail::validate_fr(q, p);
    require_interior(z, p);
    if (rule.alpha != p.alpha()) throw PreconditionError("rule and domain parameter disagree on alpha");
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i)
        terms[i] = rule.weights[i] * forelli_rudin_integrand(z, rule.nodes[i], q, p);
    return detail::pairwise_sum(terms);
}

/// I_{delta1,delta2}(z) through rotation invariance in each polydisc variable:
///   I = X^eps3 int_0^1 r (1-r^2)^(a-eps2) Theta(|z2| r, l2) D(|f| (1-r^2)^(a/2)) dr,
///   D(b) = int_0^1 s (1-s^2)^(-eps1) Theta(b s, l1) ds,
/// with X = 1 - |f_alpha(z)|^2, l1 = 3 - eps1 + eps3 - delta1, l2 = 2 + a - eps2 - delta2.
/// Every one-dimensional integral uses geometric grading, so z may sit very close to the boundary.
inline double forelli_rudin_I(const Point& z, const ForelliRudinParams& q, const DomainParam& p) {
    detail::validate_fr(q, p);
    require_interior(z, p);
    const double a = p.alpha();
    const double f = std::abs(f_alpha(z, p));
    const double r2z = std::abs(z.z2);
    const double X = 1.0 - f * f;
    const double l1 = 3.0 - q.eps1 + q.eps3 - q.delta1;
    const double l2 = 2.0 + a - q.eps2 - q.delta2;
    static const GaussRule g = gauss_legendre(12);
    auto D = [&](double b) {
        if (b == 0.0) return std::numbers::pi / (1.0 - q.eps1);
        auto h = [&](double sigma) {
            const double s = 1.0 - sigma;
            return s * std::pow(sigma * (2.0 - sigma), -q.eps1) * circle_power_integral(b * s, l1);
        };
        return graded_integral(h, 1.0, 1e-12, g);
    };
    auto outer = [&](double sigma) {
        const double r = 1.0 - sigma;
        const double s2 = sigma * (2.0 - sigma);
        return r * std::pow(s2, a - q.eps2) * circle_power_integral(r2z * r, l2) * D(f * std::pow(s2, a / 2.0));
    };
    return std::pow(X, q.eps3) * graded_integral(outer, 1.0, 1e-12, g);
}

// ---------------------------------------------------------------------------
// Schur test on a node set
// ---------------------------------------------------------------------------

struct SchurResult {
    double C_q = 0.0;
    double C_p = 0.0;
    double norm_estimate = 0.0;  // C_q^(1/q) C_p^(1/p)
};

/// Discrete Schur test for the integral operator with nonnegative kernel R and test function h:
///   C_q = max_x sum_y R(x,y) h(y)^q w_y / h(x)^q,   C_p = max_y sum_x R(x,y) h(x)^p w_x / h(y)^p,
/// with 1/p + 1/q = 1.
template <class Kernel, class H>
SchurResult schur_test(Kernel&& R, H&& h, double q_exp, const QuadratureRule& rule) {
    if (!(q_exp > 1.0)) throw PreconditionError("Schur test requires q > 1");
    const double p_exp = q_exp / (q_exp - 1.0);
    const std::size_t n = rule.size();
    std::vector<double> hv(n);
    for (std::size_t i = 0; i < n; ++i) {
        hv[i] = h(rule.nodes[i]);
        if (!(hv[i] > 0.0) || !std::isfinite(hv[i]))
            throw PreconditionError("Schur test function must be positive at node " + std::to_string(i));
    }
    std::vector<double> row(n, 0.0), col(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double r = R(rule.nodes[i], rule.nodes[j]);
            if (r < 0.0) throw PreconditionError("Schur test kernel must be nonnegative");
            row[i] += r * std::pow(hv[j], q_exp) * rule.weights[j];
            col[j] += r * std::pow(hv[i], p_exp) * rule.weights[i];
        }
    }
    SchurResult s;
    for (std::size_t i = 0; i < n; ++i) {
        s.C_q = std::max(s.C_q, row[i] / std::pow(hv[i], q_exp));
        s.C_p = std::max(s.C_p, col[i] / std::pow(hv[i], p_exp));
    }
    s.norm_estimate = std::pow(s.C_q, 1.0 / q_exp) * std::pow(s.C_p, 1.0 / p_exp);
    return s;
}

} // namespace thullen
