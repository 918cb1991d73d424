// Command-line front end: every diagnostic of the library as CSV or JSON.
//
// Exit status: 0 success, 1 a tolerance breach under --strict, 2 invalid input.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <thullen/io.hpp>
#include <thullen/thullen.hpp>

namespace {

using namespace thullen;
namespace tio = thullen::io;

struct Config {
    double alpha = 2.0;
    std::optional<int> trunc;
    std::string levels;
    double pexp = 4.5;
    std::vector<double> radius;
    std::vector<std::string> ray;
    std::vector<std::string> symbol;
    std::string out = "-";
    unsigned long long seed = 20240601ULL;
    bool strict = false;
    int points = 0;
    int grid = 40;
    int density = 1000;
    double refinement = 2.0;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw PreconditionError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size() || !std::isfinite(v))
        throw PreconditionError(what + ": '" + text + "' is not a finite number");
    return v;
}

int parse_int(const std::string& text, const std::string& what) {
    const double v = parse_double(text, what);
    if (v != std::floor(v) || std::abs(v) > 1e6) throw PreconditionError(what + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
}

/// "n_r1,n_theta1,n_r2,n_theta2[,grading_r1,grading_r2]"
Levels parse_levels(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4 && parts.size() != 6)
        throw PreconditionError("--levels expects n_r1,n_theta1,n_r2,n_theta2[,grading_r1,grading_r2]");
    Levels lv;
    lv.n_r1 = parse_int(parts[0], "--levels");
    lv.n_theta1 = parse_int(parts[1], "--levels");
    lv.n_r2 = parse_int(parts[2], "--levels");
    lv.n_theta2 = parse_int(parts[3], "--levels");
    if (parts.size() == 6) {
        lv.grading_r1 = parse_int(parts[4], "--levels");
        lv.grading_r2 = parse_int(parts[5], "--levels");
    }
    return lv;
}

/// "a1_re,a1_im,a2_re,a2_im": the ray t -> t (a1, a2).
Ray parse_ray(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) throw PreconditionError("--ray expects a1_re,a1_im,a2_re,a2_im");
    Ray r;
    r.a1 = {parse_double(parts[0], "--ray"), parse_double(parts[1], "--ray")};
    r.a2 = {parse_double(parts[2], "--ray"), parse_double(parts[3], "--ray")};
    if (r.a1 == cplx{} && r.a2 == cplx{}) throw PreconditionError("--ray direction must be nonzero");
    return r;
}

/// Largest t with t (a1, a2) on the closed domain, by bisection on the defining inequality.
double ray_exit(const Ray& ray, const DomainParam& p) {
    double lo = 0.0, hi = 1.0;
    while (in_domain(ray.at(hi), p)) hi *= 2.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (in_domain(ray.at(mid), p) ? lo : hi) = mid;
    }
    return lo;
}

Levels levels_or(const Config& c, const Levels& fallback) { return c.levels.empty() ? fallback : parse_levels(c.levels); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw PreconditionError(msg);
}

int strict_outcome(const Config& c, const std::vector<std::string>& breaches) {
    for (const auto& b : breaches) std::cerr << "tolerance breach: " << b << "\n";
    return c.strict && !breaches.empty() ? 1 : 0;
}

// ---------------------------------------------------------------------------

int cmd_kernel(const Config& c) {
    const DomainParam p(c.alpha);
    const int M = c.trunc.value_or(60);
    require(M >= 0 && M <= 200, "--trunc must lie in 0..200");
    const int n = c.points > 0 ? c.points : 200;
    const MonomialBasis<double> basis(p, M);
    std::mt19937_64 gen(c.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    // polydisc radius at most 0.6 keeps the degree-60 series converged to double precision
    auto draw = [&] {
        const cplx t1 = std::polar(0.6 * std::sqrt(U(gen)), 2.0 * std::numbers::pi * U(gen));
        const cplx w2 = std::polar(0.6 * std::sqrt(U(gen)), 2.0 * std::numbers::pi * U(gen));
        return from_polydisc(Point{t1, w2}, p);
    };
    const bool ball = p.is_ball();
    Output out(c.out);
    std::ostream& os = out.stream();
    std::vector<std::string> head{"z1_re", "z1_im", "z2_re", "z2_im", "w1_re", "w1_im", "w2_re", "w2_im",
                                  "closed_re", "closed_im", "series_re", "series_im", "rel_err"};
    if (ball) head.insert(head.end(), {"ball_re", "ball_im", "ball_rel_err"});
    tio::write_csv_row(os, head);
    double worst = 0.0, worst_ball = 0.0;
    for (int i = 0; i < n; ++i) {
        const Point z = draw(), w = draw();
        const cplx k = bergman_kernel(z, w, p);
        const cplx s = kernel_series(z, w, basis);
        const double e = std::abs(k - s) / std::abs(k);
        worst = std::max(worst, e);
        std::vector<std::string> row{tio::fmt(z.z1.real()), tio::fmt(z.z1.imag()), tio::fmt(z.z2.real()),
                                     tio::fmt(z.z2.imag()), tio::fmt(w.z1.real()), tio::fmt(w.z1.imag()),
                                     tio::fmt(w.z2.real()), tio::fmt(w.z2.imag()), tio::fmt(k.real()),
                                     tio::fmt(k.imag()), tio::fmt(s.real()), tio::fmt(s.imag()), tio::fmt(e)};
        if (ball) {
            const cplx b = ball_kernel(z, w);
            const double eb = std::abs(k - b) / std::abs(b);
            worst_ball = std::max(worst_ball, eb);
            row.insert(row.end(), {tio::fmt(b.real()), tio::fmt(b.imag()), tio::fmt(eb)});
        }
        tio::write_csv_row(os, row);
    }
    // footer: the maximum of each error column, other fields empty
    std::vector<std::string> footer(head.size());
    footer[0] = "max";
    footer[12] = tio::fmt(worst);
    if (ball) footer[15] = tio::fmt(worst_ball);
    tio::write_csv_row(os, footer);
    os.flush();
    std::vector<std::string> breaches;
    if (!(worst <= 1e-8)) breaches.push_back("series vs closed form " + tio::fmt(worst) + " > 1e-8");
    if (ball && !(worst_ball <= 1e-12)) breaches.push_back("ball kernel " + tio::fmt(worst_ball) + " > 1e-12");
    return strict_outcome(c, breaches);
}

int cmd_profile(const Config& c) {
    const DomainParam p(c.alpha);
    require(!c.symbol.empty(), "profile needs at least one --symbol");
    require(c.grid >= 1 && c.grid <= 100000, "--grid must lie in 1..100000");
    const int M = c.trunc.value_or(16);
    require(M >= 0 && M <= 60, "--trunc must lie in 0..60 for profiles");
    std::vector<Symbol> syms;
    for (const auto& s : c.symbol) syms.push_back(make_symbol(s, p));
    std::vector<Ray> rays;
    for (const auto& r : c.ray) rays.push_back(parse_ray(r));
    if (rays.empty()) rays.push_back(Ray{});
    const Levels lv = levels_or(c, levels_for_order(p, M));
    const MonomialBasis<double> basis(p, M);
    const QuadratureRule rule = build_rule(p, lv);

    Output out(c.out);
    std::ostream& os = out.stream();
    tio::write_csv_row(os, {"ray", "symbol", "t", "z1_re", "z1_im", "z2_re", "z2_im", "d", "norm", "berezin_re",
                            "berezin_im", "defect", "trusted"});
    std::vector<std::string> breaches;
    for (std::size_t ri = 0; ri < rays.size(); ++ri) {
        const double edge = ray_exit(rays[ri], p);
        std::vector<double> grid;
        for (int k = 1; k <= c.grid; ++k) grid.push_back(edge * k / (c.grid + 1.0));
        for (std::size_t si = 0; si < syms.size(); ++si) {
            const TruncatedOperator T = toeplitz_matrix(syms[si], basis, rule);
            const BoundaryProfile prof = boundary_profile(T, rays[ri], grid);
            for (const auto& e : prof.entries) {
                tio::write_csv_row(os, {std::to_string(ri), c.symbol[si], tio::fmt(e.t), tio::fmt(e.z.z1.real()),
                                        tio::fmt(e.z.z1.imag()), tio::fmt(e.z.z2.real()), tio::fmt(e.z.z2.imag()),
                                        tio::fmt(e.d), tio::fmt(e.norm), tio::fmt(e.berezin.real()),
                                        tio::fmt(e.berezin.imag()), tio::fmt(e.defect), e.trusted ? "1" : "0"});
            }
            const ProfileVerdict v = classify_profile(prof);
            const std::string& name = syms[si].name;
            if (name == "one") {
                for (const auto& e : prof.entries)
                    if (std::abs(e.norm - 1.0) > 1e-12) breaches.push_back("profile of one is not 1");
            } else if (name.rfind("bump", 0) == 0 && !v.decays) {
                breaches.push_back("profile of " + name + " along ray " + std::to_string(ri) + " does not decay");
            }
        }
    }
    os.flush();
    return strict_outcome(c, breaches);
}

int cmd_cover(const Config& c) {
    const DomainParam p(c.alpha);
    require(c.density >= 1 && c.density <= 20000, "--density must lie in 1..20000");
    std::vector<double> radii = c.radius.empty() ? std::vector<double>{0.8, 0.9, 0.95} : c.radius;
    for (double r : radii) require(r > 0.0 && r < 1.0, "--radius must lie in (0, 1)");
    const SampleDescriptor desc{c.alpha, c.density, c.refinement};
    const std::vector<Point> sample = sample_domain(desc);
    const Eigen::MatrixXd D = distance_matrix(sample, p);

    tio::json runs = tio::json::array();
    std::vector<std::string> breaches;
    for (double r : radii) {
        const Covering cov = build_covering(sample, r, p, &D);
        const CoveringStats st = covering_stats(cov, D);
        const bool valid = verify_covering(cov, D);
        tio::json j = tio::covering_to_json(cov, desc, &st);
        j["valid"] = valid;
        runs.push_back(j);
        if (!valid) breaches.push_back("covering at r=" + tio::fmt(r) + " fails the partition or sandwich check");
        if (!(st.max_diameter < 1.0)) breaches.push_back("diam_obs at r=" + tio::fmt(r) + " is not below 1");
    }
    const tio::json doc = {{"schema_version", tio::schema_version},
                           {"type", "covering_report"},
                           {"alpha", c.alpha},
                           {"sample_size", sample.size()},
                           {"runs", runs}};
    Output out(c.out);
    out.stream() << doc.dump(2) << "\n";
    out.stream().flush();
    return strict_outcome(c, breaches);
}

/// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_integrals(const Config& c) {
    const DomainParam p(c.alpha);
    const std::vector<double> radii{0.9, 0.99, 0.999, 0.9999, 0.99999};  // |w| approaching the circle
    std::vector<std::string> breaches;

    auto regime = [&](double delta) {
        std::vector<double> vals, logs, logv, logw;
        for (double r : radii) {
            const double a = disc_integral_a(0.0, delta, cplx(r));
            vals.push_back(a);
            logs.push_back(-std::log1p(-r * r));
            logv.push_back(std::log(a));
            logw.push_back(std::log1p(-r * r));
        }
        tio::json j = {{"eps", 0.0}, {"delta", delta}, {"radii", radii}, {"values", vals}};
        if (delta > 0.0) {
            std::vector<double> ratios;
            for (std::size_t i = 1; i < vals.size(); ++i) ratios.push_back(vals[i] / vals[i - 1]);
            j["regime"] = "bounded";
            j["successive_ratios"] = ratios;
            j["max_value"] = *std::max_element(vals.begin(), vals.end());
            if (!(ratios.back() < 1.05)) breaches.push_back("bounded regime has not settled");
        } else if (delta == 0.0) {
            const double s = slope(logs, vals);
            j["regime"] = "logarithmic";
            j["slope"] = s;
            if (!(s >= 0.8 && s <= 1.2)) breaches.push_back("log slope " + tio::fmt(s) + " outside [0.8, 1.2]");
        } else {
            // fit the exponent on the three radii closest to the rim
            const std::vector<double> x(logw.end() - 3, logw.end()), y(logv.end() - 3, logv.end());
            const double e = slope(x, y);
            j["regime"] = "power";
            j["exponent"] = e;
            if (!(std::abs(e - delta) <= 0.1)) breaches.push_back("power exponent " + tio::fmt(e) + " not within 0.1 of delta");
        }
        return j;
    };

    const ForelliRudinParams fr;  // eps1 = eps2 = 0.5, eps3 = 0.1, delta1 = delta2 = 0.5
    auto fr_ray = [&](const ForelliRudinParams& q) {
        std::vector<double> ts{0.9, 0.99, 0.999}, vals;
        for (double t : ts) vals.push_back(forelli_rudin_I(Point{0.0, t}, q, p));
        return tio::json{{"eps1", q.eps1}, {"eps2", q.eps2}, {"eps3", q.eps3}, {"delta1", q.delta1},
                         {"delta2", q.delta2}, {"t", ts}, {"values", vals},
                         {"spread", *std::max_element(vals.begin(), vals.end()) / *std::min_element(vals.begin(), vals.end())}};
    };
    const tio::json bounded = fr_ray(fr);
    if (!(bounded.at("spread").get<double>() <= 2.0)) breaches.push_back("Forelli-Rudin values spread beyond a factor 2");
    ForelliRudinParams sharp = fr;
    sharp.delta2 = 0.0;

    const tio::json doc = {{"schema_version", tio::schema_version},
                           {"type", "integrals_report"},
                           {"alpha", c.alpha},
                           {"disc_integrals", tio::json::array({regime(0.5), regime(0.0), regime(-0.5)})},
                           {"forelli_rudin", {{"bounded", bounded}, {"delta2_zero", fr_ray(sharp)}}}};
    Output out(c.out);
    out.stream() << doc.dump(2) << "\n";
    out.stream().flush();
    return strict_outcome(c, breaches);
}

int cmd_bounds(const Config& c) {
    const DomainParam p(c.alpha);
    require(c.pexp > 4.0, "--pexp must exceed 4");
    const int M = c.trunc.value_or(12);
    require(M >= 0 && M <= 30, "--trunc must lie in 0..30 for bounds");
    const int n = c.points > 0 ? c.points : 100;
    std::vector<std::string> names = c.symbol.empty() ? std::vector<std::string>{"one"} : c.symbol;
    std::vector<Symbol> syms;
    for (const auto& s : names) syms.push_back(make_symbol(s, p));
    const MonomialBasis<double> basis(p, M);
    const QuadratureRule assembly = build_rule(p, levels_for_order(p, M));
    const QuadratureRule rule = build_rule(p, levels_or(c, Levels{12, 12, 12, 12}));

    std::mt19937_64 gen(c.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Point> zs;
    for (int i = 0; i < n; ++i) {
        const cplx t1 = std::polar(0.95 * std::sqrt(U(gen)), 2.0 * std::numbers::pi * U(gen));
        const cplx w2 = std::polar(0.95 * std::sqrt(U(gen)), 2.0 * std::numbers::pi * U(gen));
        zs.push_back(from_polydisc(Point{t1, w2}, p));
    }
    Output out(c.out);
    std::ostream& os = out.stream();
    tio::write_csv_row(os, {"symbol", "z1_re", "z1_im", "z2_re", "z2_im", "functional", "adjoint_functional",
                            "symbol_condition", "identity_exact", "defect", "trusted"});
    std::vector<std::string> breaches;
    const double vol = std::pow(std::numbers::pi * std::numbers::pi / (c.alpha + 1.0), 1.0 / c.pexp);
    // the exact identity functional does not depend on the symbol, so it is computed once per point
    std::vector<double> exact;
    for (const Point& z : zs) exact.push_back(identity_functional(z, c.pexp, rule));
    for (std::size_t si = 0; si < syms.size(); ++si) {
        const TruncatedOperator T = toeplitz_matrix(syms[si], basis, assembly);
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const Point& z = zs[i];
            double defect = 0.0;
            normalized_kz(z, basis, &defect);
            const bool trusted = defect <= 0.05;
            const double f = boundedness_functional(T, z, c.pexp, rule);
            const double fa = boundedness_functional(T, z, c.pexp, rule, true);
            const double sc = symbol_condition(syms[si], z, c.pexp, rule, p);
            tio::write_csv_row(os, {names[si], tio::fmt(z.z1.real()), tio::fmt(z.z1.imag()), tio::fmt(z.z2.real()),
                                    tio::fmt(z.z2.imag()), tio::fmt(f), tio::fmt(fa), tio::fmt(sc), tio::fmt(exact[i]),
                                    tio::fmt(defect), trusted ? "1" : "0"});
            if (!std::isfinite(f) || !std::isfinite(fa) || !std::isfinite(exact[i]))
                breaches.push_back("nonfinite functional for " + names[si]);
            if (sc > syms[si].sup_abs * vol * (1.0 + 1e-9)) breaches.push_back("symbol condition above sup|u| vol^(1/p)");
        }
    }
    os.flush();
    return strict_outcome(c, breaches);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the Bergman space of the Thullen domain"};
    app.require_subcommand(1);
    Config cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.alpha, "domain exponent alpha > 0")->capture_default_str();
        sub->add_option("--trunc", cfg.trunc, "truncation order M");
        sub->add_option("--levels", cfg.levels, "quadrature levels n_r1,n_theta1,n_r2,n_theta2[,g1,g2]");
        sub->add_option("--out", cfg.out, "output file, '-' for standard output")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "seed of the point generator")->capture_default_str();
        sub->add_flag("--strict", cfg.strict, "exit 1 when a documented tolerance is breached");
    };

    CLI::App* kernel = app.add_subcommand("kernel", "closed-form kernel against the monomial series");
    common(kernel);
    kernel->add_option("--points", cfg.points, "number of point pairs (default 200)");

    CLI::App* profile = app.add_subcommand("profile", "boundary profile ||T_u k_z|| along rays");
    common(profile);
    profile->add_option("--symbol", cfg.symbol, "symbol: one, const:c, bump:t, z2, conj-z2, z1, abs-z2-sq");
    profile->add_option("--ray", cfg.ray, "ray direction a1_re,a1_im,a2_re,a2_im (default 0,0,1,0)");
    profile->add_option("--grid", cfg.grid, "points per ray")->capture_default_str();

    CLI::App* cover = app.add_subcommand("cover", "net decomposition statistics");
    common(cover);
    cover->add_option("--radius", cfg.radius, "covering radius r in (0, 1), repeatable (default 0.8 0.9 0.95)");
    cover->add_option("--density", cfg.density, "sample size before the origin is added")->capture_default_str();
    cover->add_option("--refinement", cfg.refinement, "hyperbolic radius of the sample")->capture_default_str();

    CLI::App* integrals = app.add_subcommand("integrals", "disc integral regimes and Forelli-Rudin values");
    common(integrals);

    CLI::App* bounds = app.add_subcommand("bounds", "boundedness functional sweep");
    common(bounds);
    bounds->add_option("--pexp", cfg.pexp, "L^p exponent, must exceed 4")->capture_default_str();
    bounds->add_option("--symbol", cfg.symbol, "symbols of the Toeplitz operators (default one)");
    bounds->add_option("--points", cfg.points, "number of base points (default 100)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) throw DomainError("--alpha must be a positive finite number");
        if (*kernel) return cmd_kernel(cfg);
        if (*profile) return cmd_profile(cfg);
        if (*cover) return cmd_cover(cfg);
        if (*integrals) return cmd_integrals(cfg);
        if (*bounds) return cmd_bounds(cfg);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
