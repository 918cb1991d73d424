#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <thullen/basis.hpp>
#include <thullen/quadrature.hpp>

#include "test_util.hpp"

using namespace thullen;
using testutil::random_point;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;
} // namespace

TEST(GaussLegendre, ExactOnPolynomials) {
    for (int n : {1, 2, 5, 17, 64}) {
        const GaussRule g = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], k);
            EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "n=" << n << " k=" << k;
        }
    }
    EXPECT_THROW(gauss_legendre(0), PreconditionError);
}

TEST(AutoGrading, MakesTheSubstitutionSmooth) {
    EXPECT_EQ(auto_radial_grading(2.0), 1);
    EXPECT_EQ(auto_radial_grading(3.0), 2);
    EXPECT_EQ(auto_radial_grading(0.5), 4);
    EXPECT_EQ(auto_radial_grading(1.0), 2);
    EXPECT_EQ(auto_radial_grading(0.7), 3);
}

TEST(BuildRule, VolumeAndInteriorNodes) {
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        const DomainParam p(a);
        const QuadratureRule r = build_rule(p, Levels{6, 4, 16, 4});
        EXPECT_NEAR(r.volume() / (pi2 / (a + 1)), 1.0, 1e-8) << a;
        for (const Point& x : r.nodes) ASSERT_TRUE(in_domain(x, p));
    }
    EXPECT_THROW(build_rule(DomainParam(2.0), Levels{0, 4, 4, 4}), PreconditionError);
}

TEST(BuildRule, VolumeIsExactWhenTheGradedWeightIsPolynomial) {
    for (double a : {1.0, 2.0, 3.0})
        EXPECT_NEAR(build_rule(DomainParam(a), Levels{4, 1, 8, 1}).volume() / (pi2 / (a + 1)), 1.0, 1e-14) << a;
}

TEST(BuildRule, RefinementConvergesForGenericAlpha) {
    // alpha = 0.7 has no integer grading; the volume error still falls quickly with the level.
    const DomainParam p(0.7);
    double last = 1.0;
    for (int n : {4, 8, 16, 32}) {
        const double err = std::abs(build_rule(p, Levels{4, 1, n, 1}).volume() / (pi2 / 1.7) - 1.0);
        EXPECT_LT(err, last);
        last = err;
    }
    EXPECT_LT(last, 1e-8);
}

TEST(BuildRule, MonomialMomentsAreExact) {
    for (double a : {0.5, 2.0, 3.0}) {
        const DomainParam p(a);
        const QuadratureRule r = build_rule(p, Levels{12, 2, 24, 2});
        for (int m = 0; m <= 5; ++m)
            for (int n = 0; n <= 5; ++n) {
                auto f = [&](const Point& w) { return cplx(std::pow(std::norm(w.z1), m) * std::pow(std::norm(w.z2), n)); };
                EXPECT_NEAR(integrate(f, r).value.real() / monomial_norm_sq(m, n, p), 1.0, 1e-10);
            }
    }
}

TEST(BuildRule, Parity) {
    const QuadratureRule r = build_rule(DomainParam(2.0), Levels{8, 8, 8, 8});
    EXPECT_LT(std::abs(integrate([](const Point& w) { return w.z1; }, r).value), 1e-12);
    EXPECT_LT(std::abs(integrate([](const Point& w) { return w.z2 * w.z2; }, r).value), 1e-12);
}

TEST(InnerProduct, VolumeOrthogonalityAndExactHermitian) {
    const DomainParam p(2.0);
    const QuadratureRule r = build_rule(p, Levels{8, 8, 8, 8});
    const auto one = [](const Point&) { return cplx(1.0); };
    EXPECT_NEAR(inner_product(one, one, r).real(), pi2 / 3.0, 1e-12);
    const MonomialBasis<double> b(p, 2);
    auto e10 = [&](const Point& w) { return b.evaluate(w)[static_cast<Eigen::Index>(b.index(1, 0))]; };
    auto e01 = [&](const Point& w) { return b.evaluate(w)[static_cast<Eigen::Index>(b.index(0, 1))]; };
    EXPECT_LT(std::abs(inner_product(e10, e01, r)), 1e-10);
    auto f = [](const Point& w) { return cplx(0.3, 1.0) + w.z1 * std::conj(w.z2); };
    auto g = [](const Point& w) { return std::exp(w.z2) - cplx(0.0, 2.0) * w.z1; };
    const cplx fg = inner_product(f, g, r), gf = inner_product(g, f, r);
    EXPECT_EQ(fg.real(), gf.real());
    EXPECT_EQ(fg.imag(), -gf.imag());
}

TEST(InnerProduct, ReproducingProperty) {
    const DomainParam p(2.0);
    const QuadratureRule r = build_rule(p, Levels{32, 32, 32, 32});
    const MonomialBasis<double> b(p, 2);
    const Point z{cplx(0.2, 0.1), cplx(-0.3, 0.25)};
    auto e11 = [&](const Point& w) { return b.evaluate(w)[static_cast<Eigen::Index>(b.index(1, 1))]; };
    auto Kz = [&](const Point& w) { return bergman_kernel(w, z, p); };
    EXPECT_LT(std::abs(inner_product(e11, Kz, r) - e11(z)), 1e-6);
}

TEST(Integrate, NodePolicy) {
    const QuadratureRule r = build_rule(DomainParam(2.0), Levels{4, 4, 4, 4});
    auto bad = [&](const Point& w) { return w == r.nodes[5] ? cplx(std::nan("")) : cplx(1.0); };
    EXPECT_THROW(integrate(bad, r), NumericError);
    const IntegrationReport rep = integrate(bad, r, NodePolicy::Skip);
    EXPECT_EQ(rep.skipped, 1u);
    EXPECT_NEAR(rep.value.real(), r.volume() - r.weights[5], 1e-12);
}

TEST(LpNorm, ConstantFunction) {
    const QuadratureRule r = build_rule(DomainParam(3.0), Levels{4, 4, 8, 4});
    EXPECT_NEAR(lp_norm([](const Point&) { return cplx(2.0); }, r, 4.5), 2.0 * std::pow(pi2 / 4.0, 1 / 4.5), 1e-12);
}

TEST(Levels, ForOrderCoversTheGramDegree) {
    // alpha = 2 grades with g = 1: degree 2M + 2 + 4(M + 1) = 6M + 6
    const Levels a = levels_for_order(DomainParam(2.0), 6);
    EXPECT_EQ(a.n_r1, 11);
    EXPECT_EQ(a.n_r2, 25);
    EXPECT_EQ(a.n_theta1, 18);
    EXPECT_EQ(a.n_theta2, 18);
    // alpha = 0.5 grades with g = 4
    const Levels b = levels_for_order(DomainParam(0.5), 2, 0);
    EXPECT_EQ(b.n_r2, 18);
    EXPECT_EQ(b.n_theta1, 6);
    EXPECT_THROW(levels_for_order(DomainParam(1.0), -1), PreconditionError);
}

TEST(FocusedRule, VolumeAtOriginAndIsometries) {
    for (double a : {0.5, 2.0, 3.0}) {
        const DomainParam p(a);
        const QuadratureRule r0 = build_focused_rule(p, Levels{32, 64, 4, 8}, cplx(0.0));
        EXPECT_NEAR(r0.volume() / (pi2 / (a + 1)), 1.0, 1e-12);
        for (const Point& x : r0.nodes) ASSERT_TRUE(in_domain(x, p));
        PointFunction<double> f = [](const Point& w) {
            return cplx(0.5, -1.0) + 2.0 * w.z1 - w.z2 * w.z1 * cplx(0.0, 3.0) + w.z2 * w.z2 * w.z2;
        };
        auto sq = [&](const Point& w) { return cplx(std::norm(f(w))); };
        const double n0 = integrate(sq, r0).value.real();
        const cplx c(0.5, 0.4);
        const QuadratureRule rc = build_focused_rule(p, Levels{32, 64, 4, 8}, c);
        const auto V = transport_V(c, f, p);
        const double nv = integrate([&](const Point& w) { return cplx(std::norm(V(w))); }, rc).value.real();
        EXPECT_NEAR(std::sqrt(nv / n0), 1.0, 1e-10) << a;
        EXPECT_THROW(build_focused_rule(p, Levels{}, cplx(1.0)), DomainError);
    }
}

TEST(FocusedRuleW2, VolumeAndUIsometry) {
    PointFunction<double> f = [](const Point& w) {
        return cplx(1.0, 0.5) - w.z1 * w.z2 + 2.0 * w.z2 * w.z2 + cplx(0.0, 1.0) * w.z1 * w.z1 * w.z1;
    };
    for (double a : {0.5, 0.7, 2.0, 3.0}) {
        const DomainParam p(a);
        const double n0 = integrate([&](const Point& w) { return cplx(std::norm(f(w))); }, build_rule(p, Levels{})).value.real();
        for (double t : {0.3, 0.9}) {
            const double s = std::pow(1.0 - t * t, a / 2.0);
            const Point z{cplx(0.3 * s, -0.2 * s), std::polar(t, 1.0)};
            const QuadratureRule r = build_focused_rule_w2(p, Levels{32, 64, 8, 16}, z.z2);
            EXPECT_EQ(r.kind, RuleKind::FocusedW2);
            EXPECT_NEAR(r.volume() / (pi2 / (a + 1)), 1.0, 1e-8);
            for (const Point& x : r.nodes) ASSERT_TRUE(in_domain(x, p));
            const auto U = transport_U(z, f, p);
            const double nu = integrate([&](const Point& w) { return cplx(std::norm(U(w))); }, r).value.real();
            EXPECT_NEAR(std::sqrt(nu / n0), 1.0, 1e-6) << a << " " << t;
        }
    }
    EXPECT_THROW(build_focused_rule_w2(DomainParam(2.0), Levels{}, cplx(0.0, -1.0)), DomainError);
}

TEST(DiscIntegral, ClosedFormsAndOracles) {
    for (double r : {0.0, 0.5, 0.9, 0.99, 0.9999}) {
        const double expected = r == 0.0 ? 1.0 : -std::log1p(-r * r) / (r * r);
        EXPECT_NEAR(disc_integral_a(0.0, 0.0, cplx(r)) / expected, 1.0, 1e-9) << r;
    }
    // mpmath oracles (tests/oracles/generate.py)
    EXPECT_NEAR(disc_integral_a(0.0, 0.5, cplx(0.0, 0.9)) / 1.4480931654825021132, 1.0, 1e-9);
    EXPECT_NEAR(disc_integral_a(0.3, -0.5, cplx(0.8)) / 2.8730519194364437274, 1.0, 1e-8);
    EXPECT_THROW(disc_integral_a(1.0, 0.0, cplx(0.1)), PreconditionError);
    // b_0 on the circle equals 2 K(r) / pi
    for (double r : {0.3, 0.9, 0.999}) EXPECT_NEAR(circle_integral_b(0.0, cplx(r)), 2.0 * std::comp_ellint_1(r) / pi, 1e-12);
}

TEST(DiscIntegral, ThreeRegimes) {
    const std::vector<double> radii{0.9, 0.99, 0.999, 0.9999};
    std::vector<double> bounded, logscaled, powscaled;
    for (double r : radii) {
        bounded.push_back(disc_integral_a(0.0, 0.5, cplx(r)));
        logscaled.push_back(disc_integral_a(0.0, 0.0, cplx(r)) / -std::log1p(-r * r));
        powscaled.push_back(disc_integral_a(0.0, -0.5, cplx(r)) * std::sqrt(1.0 - r * r));
    }
    for (std::size_t i = 1; i + 1 < radii.size(); ++i) {
        // increments shrink, so the bounded family settles
        EXPECT_LT(bounded[i + 1] - bounded[i], bounded[i] - bounded[i - 1]);
    }
    EXPECT_LT(bounded.back(), 2.0 * bounded.front());
    for (double v : logscaled) {
        EXPECT_GT(v, 0.9);
        EXPECT_LT(v, 1.3);
    }
    for (double v : powscaled) {
        EXPECT_GT(v, 1.0);
        EXPECT_LT(v, 2.5);
    }
}

TEST(DiscIntegral, ReflectionIdentity) {
    // (1 - |w|^2)^(-delta) a_{0,delta}(w) = a_{0,-delta}(w): Euler's transformation of the hypergeometric series
    for (double r : {0.5, 0.9, 0.999})
        EXPECT_NEAR(disc_integral_a(0.0, -0.5, cplx(r)) * std::sqrt(1.0 - r * r) / disc_integral_a(0.0, 0.5, cplx(r)), 1.0, 1e-9);
}

TEST(ForelliRudin, OriginClosedForm) {
    const ForelliRudinParams q;
    for (double a : {0.5, 2.0, 3.0}) {
        const DomainParam p(a);
        const double expected = pi2 / ((a + 1 - q.eps2) * (1 - q.eps1));
        EXPECT_NEAR(forelli_rudin_I(Point{}, q, p) / expected, 1.0, 1e-8);
    }
    EXPECT_THROW(forelli_rudin_I(Point{}, ForelliRudinParams{0.5, 1.0, 0.1, 0.5, 0.5}, DomainParam(2.0)),
                 PreconditionError);
    EXPECT_THROW(forelli_rudin_I(Point{}, ForelliRudinParams{0.5, 0.5, 0.0, 0.5, 0.5}, DomainParam(2.0)),
                 PreconditionError);
}

TEST(ForelliRudin, ReductionMatchesOracleAndRule) {
    const DomainParam p(2.0);
    const ForelliRudinParams q;
    EXPECT_NEAR(forelli_rudin_I(Point{0.0, 0.5}, q, p) / 9.4358155349566307576, 1.0, 1e-8);
    const Point z{0.3, 0.4};
    EXPECT_NEAR(forelli_rudin_I(z, q, p) / 9.1599824511778472002, 1.0, 1e-7);
    // a plain tensor rule is adequate away from the boundary and for mild endpoint singularities
    const QuadratureRule r = build_rule(p, Levels{48, 48, 48, 48, 2, 2});
    EXPECT_NEAR(forelli_rudin_I(z, q, p, r) / 9.1599824511778472002, 1.0, 1e-3);
}

TEST(ForelliRudin, GrowthAlongTheSecondAxis) {
    // closed form pi^2 / ((1 - eps1) b) 2F1(A, A; b + 1; t^2), A = (2 + a - eps2 - delta2) / 2, b = a - eps2 + 1
    const DomainParam p(2.0);
    const ForelliRudinParams q;
    const double t[] = {0.9, 0.99, 0.999};
    const double expected[] = {18.47155987873967, 33.22608185270083, 41.60594816545625};
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(forelli_rudin_I(Point{0.0, t[i]}, q, p) / expected[i], 1.0, 1e-7);
}

TEST(ForelliRudin, FirstAxisWithAndWithoutDelta1) {
    // along (t, 0) the factor in w1 is active; delta1 = 0 sits on the edge of the stated hypothesis
    const DomainParam p(2.0);
    ForelliRudinParams q;
    std::vector<double> bounded, edge;
    for (double t : {0.9, 0.99, 0.999, 0.9999}) {
        bounded.push_back(forelli_rudin_I(Point{t, 0.0}, q, p));
        q.delta1 = 0.0;
        edge.push_back(forelli_rudin_I(Point{t, 0.0}, q, p));
        q.delta1 = 0.5;
    }
    EXPECT_LT(*std::max_element(bounded.begin(), bounded.end()) / *std::min_element(bounded.begin(), bounded.end()), 1.5);
    // roughly a constant increment per decade of 1 - t: logarithmic growth
    for (std::size_t i = 1; i < edge.size(); ++i) {
        EXPECT_GT(edge[i] - edge[i - 1], 10.0);
        EXPECT_LT(edge[i] - edge[i - 1], 16.0);
    }
    RecordProperty("delta1_zero_at_0.9999", std::to_string(edge.back()));
}

TEST(SchurTest, ZeroKernelScaleInvarianceAndWindow) {
    const DomainParam p(2.0);
    const QuadratureRule r = build_rule(p, Levels{4, 4, 4, 4});
    auto zero = [](const Point&, const Point&) { return 0.0; };
    auto h1 = [&](const Point& x) { return std::pow(kernel_diagonal(x, p), 0.45 / 2.0); };
    const SchurResult s0 = schur_test(zero, h1, 1.2, r);
    EXPECT_EQ(s0.C_q, 0.0);
    EXPECT_EQ(s0.C_p, 0.0);
    auto R = [&](const Point& x, const Point& y) { return std::abs(bergman_kernel(x, y, p)); };
    const SchurResult s1 = schur_test(R, h1, 1.2, r);
    EXPECT_TRUE(std::isfinite(s1.C_q) && s1.C_q > 0.0);
    EXPECT_TRUE(std::isfinite(s1.C_p) && s1.C_p > 0.0);
    auto h2 = [&](const Point& x) { return 2.0 * h1(x); };
    const SchurResult s2 = schur_test(R, h2, 1.2, r);
    EXPECT_NEAR(s2.C_q / s1.C_q, 1.0, 1e-12);
    EXPECT_NEAR(s2.C_p / s1.C_p, 1.0, 1e-12);
    EXPECT_THROW(schur_test(R, [](const Point&) { return 0.0; }, 1.2, r), PreconditionError);
    EXPECT_THROW(schur_test(R, h1, 1.0, r), PreconditionError);
}
