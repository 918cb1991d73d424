#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <array>
#include <vector>

#include <Eigen/Dense>

#include "domain.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "maps.hpp"

namespace thullen {

/// s = |<k_z, k_w>| in [0, 1] and the distance d = sqrt(1 - s).
struct MetricValue {
    double s = 1.0;
    double d = 0.0;
};

namespace detail {

inline bool point_less(const Point& a, const Point& b) {
    const std::array<double, 4> x{a.z1.real(), a.z1.imag(), a.z2.real(), a.z2.imag()};
    const std::array<double, 4> y{b.z1.real(), b.z1.imag(), b.z2.real(), b.z2.imag()};
    return x < y;
}

inline MetricValue metric_from_s(double s) {
    s = std::clamp(s, 0.0, 1.0);
    return {s, std::sqrt(1.0 - s)};
}

} // namespace detail

/// Skwarczynski distance. The pair is put in a canonical order before evaluation, so
/// d(z, w) and d(w, z) are the same floating-point number.
inline MetricValue skwarczynski(const Point& z, const Point& w, const DomainParam& p) {
    require_interior(z, p, "z");
    require_interior(w, p, "w");
    if (z == w) return {1.0, 0.0};
    const bool swap = detail::point_less(w, z);
    const Point& a = swap ? w : z;
    const Point& b = swap ? z : w;
    const double s = std::abs(bergman_kernel(a, b, p)) / std::sqrt(kernel_diagonal(a, p) * kernel_diagonal(b, p));
    return detail::metric_from_s(s);
}

/// Same as skwarczynski, with the diagonal values supplied by the caller. No canonical ordering.
inline MetricValue skwarczynski_cached(const Point& z, double kz, const Point& w, double kw, const DomainParam& p) {
    if (z == w) return {1.0, 0.0};
    return detail::metric_from_s(std::abs(bergman_kernel(z, w, p)) / std::sqrt(kz * kw));
}

/// d((0,0), z). Here s = sqrt(K(0)/K(z)) because K(z; 0) = K(0; 0).
inline MetricValue distance_to_origin(const Point& z, const DomainParam& p) {
    const double k0 = (p.alpha() + 1.0) / (std::numbers::pi * std::numbers::pi);
    if (z == Point{}) return {1.0, 0.0};
    return detail::metric_from_s(std::sqrt(k0 / kernel_diagonal(z, p)));
}

/// Symmetric matrix of pairwise distances, filled from the canonical evaluation.
inline Eigen::MatrixXd distance_matrix(const std::vector<Point>& pts, const DomainParam& p) {
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = skwarczynski(pts[i], pts[j], p).d;
            D(i, j) = d;
            D(j, i) = d;
        }
    }
    return D;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Radical inverse of i in the given base (van der Corput digit reversal).
inline double radical_inverse(unsigned long long i, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

struct SampleDescriptor {
    double alpha = 2.0;
    int density = 1000;
    double boundary_refinement = 2.0;
};

/// Deterministic cloud on U^alpha.
///
/// Points are Halton points (bases 2, 3, 5, 7) in polydisc coordinates. In each disc the
/// radius is uniform in hyperbolic area up to hyperbolic radius R = boundary_refinement:
/// cosh(rad) = 1 + u (cosh R - 1), r = tanh(rad/2). The origin is added, and the cloud is
/// listed boundary first (ascending rho, stable), which is the greedy insertion order of
/// the covering.
inline std::vector<Point> sample_domain(const DomainParam& p, int density, double boundary_refinement = 2.0) {
    if (density < 1) throw PreconditionError("sample density must be positive");
    if (!(boundary_refinement > 0.0) || !std::isfinite(boundary_refinement))
        throw PreconditionError("boundary refinement must be a positive hyperbolic radius");
    const double ch = std::cosh(boundary_refinement) - 1.0;
    auto radius = [&](double u) { return std::tanh(0.5 * std::acosh(1.0 + u * ch)); };
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(density) + 1);
    pts.push_back({});
    for (int i = 1; i <= density; ++i) {
        const auto k = static_cast<unsigned long long>(i);
        const cplx t1 = std::polar(radius(radical_inverse(k, 2)), 2.0 * std::numbers::pi * radical_inverse(k, 3));
        const cplx w2 = std::polar(radius(radical_inverse(k, 5)), 2.0 * std::numbers::pi * radical_inverse(k, 7));
        pts.push_back(from_polydisc(Point{t1, w2}, p));
    }
    std::vector<double> rho(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) rho[i] = boundary_defect(pts[i], p);
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rho[a] < rho[b]; });
    std::vector<Point> out;
    out.reserve(pts.size());
    for (std::size_t i : order) out.push_back(pts[i]);
    return out;
}

inline std::vector<Point> sample_domain(const SampleDescriptor& s) {
    return sample_domain(DomainParam(s.alpha), s.density, s.boundary_refinement);
}

/// Mean over the cloud of the distance to the nearest other point.
inline double nearest_neighbor_spacing(const std::vector<Point>& pts, const DomainParam& p) {
    if (pts.size() < 2) return 0.0;
    const Eigen::MatrixXd D = distance_matrix(pts, p);
    double total = 0.0;
    for (Eigen::Index i = 0; i < D.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < D.cols(); ++j)
            if (j != i) best = std::min(best, D(i, j));
        total += best;
    }
    return total / static_cast<double>(D.rows());
}

// ---------------------------------------------------------------------------
// Covering
// ---------------------------------------------------------------------------

/// Net decomposition of a finite sample. Indices refer to positions in the sample.
struct Covering {
    double alpha = 2.0;
    double r = 0.9;
    std::vector<std::size_t> centers;
    std::vector<std::size_t> owner;                    // cell of each sample point
    std::vector<std::vector<std::size_t>> cells;       // F_j
    std::vector<std::vector<std::size_t>> balls;       // D(x_j, r) within the sample
    std::vector<std::vector<std::size_t>> enlargements; // G_j = { d(., F_j) <= r }
};

struct CoveringStats {
    std::size_t n_cells = 0;
    std::size_t max_overlap = 0; // N_obs
    double max_diameter = 0.0;   // diam_obs
};

/// Greedy net in enumeration order: a point becomes a center when its open r-ball (within the
/// sample) misses every earlier ball. Ball members join that center's cell; every other point
/// joins the nearest center whose ball is within distance r, lower index on ties.
inline Covering build_covering(const std::vector<Point>& sample, double r, const DomainParam& p,
                               const Eigen::MatrixXd* distances = nullptr) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("covering radius must lie in (0, 1)");
    if (sample.empty()) throw PreconditionError("covering needs a nonempty sample");
    Eigen::MatrixXd local;
    if (!distances) {
        local = distance_matrix(sample, p);
        distances = &local;
    }
    const Eigen::MatrixXd& D = *distances;
    const std::size_t n = sample.size();
    if (static_cast<std::size_t>(D.rows()) != n) throw PreconditionError("distance matrix does not match the sample");

    Covering cov;
    cov.alpha = p.alpha();
    cov.r = r;
    std::vector<char> used(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> ball;
        bool free = true;
        for (std::size_t k = 0; k < n && free; ++k) {
            if (D(i, k) < r) {
                if (used[k]) free = false;
                ball.push_back(k);
            }
        }
        if (!free) continue;
        for (std::size_t k : ball) used[k] = 1;
        cov.centers.push_back(i);
        cov.balls.push_back(std::move(ball));
    }

    const std::size_t nc = cov.centers.size();
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    cov.owner.assign(n, none);
    for (std::size_t j = 0; j < nc; ++j)
        for (std::size_t k : cov.balls[j]) cov.owner[k] = j;
    for (std::size_t x = 0; x < n; ++x) {
        if (cov.owner[x] != none) continue;
        std::size_t best = none;
        for (std::size_t j = 0; j < nc; ++j) {
            double to_ball = std::numeric_limits<double>::infinity();
            for (std::size_t k : cov.balls[j]) to_ball = std::min(to_ball, D(x, k));
            if (to_ball > r) continue;
            if (best == none || D(x, cov.centers[j]) < D(x, cov.centers[best])) best = j;
        }
        if (best == none) throw NumericError("covering: point is farther than r from every ball");
        cov.owner[x] = best;
    }
    cov.cells.assign(nc, {});
    for (std::size_t x = 0; x < n; ++x) cov.cells[cov.owner[x]].push_back(x);
    cov.enlargements.assign(nc, {});
    for (std::size_t j = 0; j < nc; ++j) {
        for (std::size_t x = 0; x < n; ++x) {
            double dist = std::numeric_limits<double>::infinity();
            for (std::size_t k : cov.cells[j]) dist = std::min(dist, D(x, k));
            if (dist <= r) cov.enlargements[j].push_back(x);
        }
    }
    return cov;
}

inline CoveringStats covering_stats(const Covering& cov, const Eigen::MatrixXd& D) {
    CoveringStats st;
    st.n_cells = cov.centers.size();
    std::vector<std::size_t> count(cov.owner.size(), 0);
    for (const auto& g : cov.enlargements)
        for (std::size_t x : g) ++count[x];
    for (std::size_t c : count) st.max_overlap = std::max(st.max_overlap, c);
    for (const auto& cell : cov.cells)
        for (std::size_t a : cell)
            for (std::size_t b : cell) st.max_diameter = std::max(st.max_diameter, D(a, b));
    return st;
}

inline CoveringStats covering_stats(const Covering& cov, const std::vector<Point>& sample) {
    return covering_stats(cov, distance_matrix(sample, DomainParam(cov.alpha)));
}

/// Checks the partition property and the sandwich D(x_j, r) subset F_j subset {d(., D(x_j, r)) <= r}.
inline bool verify_covering(const Covering& cov, const Eigen::MatrixXd& D) {
    const std::size_t n = cov.owner.size();
    std::vector<int> seen(n, 0);
    for (std::size_t j = 0; j < cov.cells.size(); ++j) {
        for (std::size_t x : cov.cells[j]) {
            if (x >= n || cov.owner[x] != j) return false;
            ++seen[x];
        }
    }
    for (int s : seen)
        if (s != 1) return false;
    for (std::size_t j = 0; j < cov.centers.size(); ++j) {
        for (std::size_t k : cov.balls[j])
            if (cov.owner[k] != j) return false;
        for (std::size_t x : cov.cells[j]) {
            double to_ball = std::numeric_limits<double>::infinity();
            for (std::size_t k : cov.balls[j]) to_ball = std::min(to_ball, D(x, k));
            if (to_ball > cov.r) return false;
        }
    }
    return true;
}

/// (-log s(z, w)) / (-log s(center_map(z, w), 0)) for far pairs (s(z, w) < 0.1).
inline double recentering_log_ratio(const Point& z, const Point& w, const DomainParam& p) {
    const double s = skwarczynski(z, w, p).s;
    if (!(s < 0.1)) throw PreconditionError("recentering_log_ratio needs s(z, w) < 0.1");
    const Point c = center_map(z, w, p).image;
    const double s0 = distance_to_origin(c, p).s;
    return std::log(s) / std::log(s0);
}

} // namespace thullen
