#pragma once
// Numerical side of the genie-aided bound: the inner minimization
//   g(P1,P2) = min over the useful-genie set A of f(P1,P2,a1^2,v1,a2^2,v2)
// by multi-start Nelder-Mead with infeasible points rejected, the outer
// maximization of g over P1 = P2 in [0,P], and an exhaustive grid oracle used
// by the tests to bound the optimality gap.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <vector>

#include "icb/channel.hpp"
#include "icb/parallel.hpp"
#include "icb/regimes.hpp"
#include "icb/rng.hpp"

namespace icb {

struct OptimizerConfig {
    int outer_grid_points = 257;
    int inner_multistarts = 32;
    int inner_max_iters = 500;
    double feasibility_tol = 1e-10;
    double value_tol = 1e-7; // bits
    std::uint64_t seed = 1;

    void validate() const {
        if (outer_grid_points < 1 || inner_multistarts < 1 || inner_max_iters < 1)
            throw std::domain_error("OptimizerConfig: counts must be >= 1");
        if (!(feasibility_tol > 0.0) || !(value_tol > 0.0))
            throw std::domain_error("OptimizerConfig: tolerances must be > 0");
    }
};

// Witness of the inner minimum: a feasible point of A and its f value.
struct GenieCertificate {
    GenieParams gp;
    double value_bits = 0.0;
    bool feasible = false;
    PowerAllocation alloc;
};

// The optimizer never evaluates f below this genie-noise variance; f diverges
// to +inf as v -> 0 whenever its numerator stays positive, so the clamp cannot
// hide a minimizer.
inline constexpr double kGenieVarFloor = 1e-9;

namespace detail {

using Point4 = std::array<double, 4>; // (a1_sq, a2_sq, v1, v2)

inline bool point_feasible(const ChannelParams& ch, const PowerAllocation& alloc,
                           const Point4& x) {
    if (!(x[0] >= 0.0 && x[0] <= 1.0 && x[1] >= 0.0 && x[1] <= 1.0)) return false;
    if (!(x[2] >= kGenieVarFloor && x[3] >= kGenieVarFloor)) return false;
    const double c2 = ch.c * ch.c;
    auto side = [&](double v, double a_other_sq, double Pk) {
        if (v > 1.0 - a_other_sq) return false;
        const double s = std::sqrt(std::max(0.0, 1.0 - a_other_sq - v) * (1.0 - v));
        return s - v >= c2 * Pk;
    };
    return side(x[2], x[1], alloc.P1) && side(x[3], x[0], alloc.P2);
}

inline double objective_or_inf(const ChannelParams& ch, const PowerAllocation& alloc,
                               const Point4& x) {
    if (!point_feasible(ch, alloc, x)) return std::numeric_limits<double>::infinity();
    return genie_objective_f(ch, alloc, GenieParams{x[0], x[1], x[2], x[3]});
}

// Nelder-Mead on the 4-dim genie box; infeasible proposals evaluate to +inf.
template <class F>
inline std::pair<Point4, double> nelder_mead4(const F& fn, const Point4& start,
                                              const Point4& step, int max_iters) {
    constexpr int n = 4;
    std::array<Point4, n + 1> xs;
    std::array<double, n + 1> fs;
    xs[0] = start;
    fs[0] = fn(start);
    for (int i = 0; i < n; ++i) {
        Point4 p = start;
        p[i] += step[i];
        xs[i + 1] = p;
        fs[i + 1] = fn(p);
    }
    auto order = [&] {
        std::array<int, n + 1> idx{};
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<Point4, n + 1> xs2;
        std::array<double, n + 1> fs2;
        for (int i = 0; i <= n; ++i) { xs2[i] = xs[idx[i]]; fs2[i] = fs[idx[i]]; }
        xs = xs2;
        fs = fs2;
    };
    order();
    for (int it = 0; it < max_iters; ++it) {
        Point4 centroid{};
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < n; ++d) centroid[d] += xs[i][d] / n;
        auto at = [&](double t) {
            Point4 p;
            for (int d = 0; d < n; ++d) p[d] = centroid[d] + t * (xs[n][d] - centroid[d]);
            return p;
        };
        Point4 xr = at(-1.0);
        double fr = fn(xr);
        if (fr < fs[0]) {
            Point4 xe = at(-2.0);
            double fe = fn(xe);
            if (fe < fr) { xs[n] = xe; fs[n] = fe; }
            else { xs[n] = xr; fs[n] = fr; }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr; fs[n] = fr;
        } else {
            Point4 xc = at(fr < fs[n] ? -0.5 : 0.5);
            double fc = fn(xc);
            if (fc < std::min(fr, fs[n])) { xs[n] = xc; fs[n] = fc; }
            else {
                for (int i = 1; i <= n; ++i) {
                    for (int d = 0; d < n; ++d) xs[i][d] = xs[0][d] + 0.5 * (xs[i][d] - xs[0][d]);
                    fs[i] = fn(xs[i]);
                }
            }
        }
        order();
        double spread = 0.0;
        for (int d = 0; d < n; ++d) spread = std::max(spread, std::fabs(xs[n][d] - xs[0][d]));
        if (std::isfinite(fs[0]) && std::isfinite(fs[n])
            && fs[n] - fs[0] < 1e-13 && spread < 1e-12)
            break;
    }
    return {xs[0], fs[0]};
}

} // namespace detail

// A(P1,P2) is nonempty exactly when c^2 max(P1,P2) <= 1: the left side of the
// useful-genie inequality peaks at 1 (a = 0, v = 0). With the v-floor the
// usable set needs c^2 Pk <= 1 - 2*floor.
inline bool genie_set_nonempty(const ChannelParams& ch, const PowerAllocation& alloc) {
    const double c2 = ch.c * ch.c;
    return c2 * std::max(alloc.P1, alloc.P2) <= 1.0 - 2.0 * kGenieVarFloor;
}

// Multi-start local minimization of f over A. Start points: the per-user
// smart-genie construction when available, the always-feasible a = 0 corner,
// and seeded uniform draws. Returns the best feasible witness, or nullopt
// when the feasible set is empty.
inline std::optional<GenieCertificate> inner_min_g(const ChannelParams& ch,
                                                   const PowerAllocation& alloc,
                                                   const OptimizerConfig& cfg) {
    ch.validate();
    alloc.validate(ch);
    cfg.validate();
    if (!genie_set_nonempty(ch, alloc)) return std::nullopt;

    const double c2 = ch.c * ch.c;
    std::vector<detail::Point4> starts;

    // Smart-genie warm start, a_k^2 = s.a_sq, v_k from m_k = c(1 + c^2 Pk).
    {
        auto s1 = smart_genie_solve(ChannelParams{alloc.P1, ch.c});
        auto s2 = alloc.P1 == alloc.P2 ? s1 : smart_genie_solve(ChannelParams{alloc.P2, ch.c});
        if (s1 && s2 && s1->b_sq >= kGenieVarFloor && s2->b_sq >= kGenieVarFloor)
            starts.push_back({s1->a_sq, s2->a_sq, s1->b_sq, s2->b_sq});
    }
    // a = 0 corner: feasible whenever A is nonempty.
    {
        auto vk = [&](double Pk) {
            return std::clamp(0.499 * (1.0 - c2 * Pk), kGenieVarFloor, 0.499);
        };
        starts.push_back({0.0, 0.0, vk(alloc.P1), vk(alloc.P2)});
    }
    // Draw streams are keyed by the allocation, so every outer grid point gets
    // its own deterministic multistart sequence.
    std::uint64_t stream;
    {
        std::uint64_t h1, h2;
        std::memcpy(&h1, &alloc.P1, sizeof h1);
        std::memcpy(&h2, &alloc.P2, sizeof h2);
        stream = detail::splitmix64(h1 ^ (h2 * 0x9E3779B97F4A7C15ULL) ^ 17);
    }
    for (int s = 0; s < cfg.inner_multistarts; ++s) {
        for (int attempt = 0; attempt < 24; ++attempt) {
            const std::uint64_t ctr = static_cast<std::uint64_t>(s) * 128 + 4 * attempt;
            detail::Point4 p;
            p[0] = rand_u01(cfg.seed, stream, ctr);
            p[1] = rand_u01(cfg.seed, stream, ctr + 1);
            p[2] = rand_uniform(cfg.seed, stream, ctr + 2, kGenieVarFloor, 1.0 - p[1]);
            p[3] = rand_uniform(cfg.seed, stream, ctr + 3, kGenieVarFloor, 1.0 - p[0]);
            if (detail::point_feasible(ch, alloc, p)) {
                starts.push_back(p);
                break;
            }
        }
    }
    if (starts.empty()) return std::nullopt;

    auto fn = [&](const detail::Point4& x) { return detail::objective_or_inf(ch, alloc, x); };
    bool have = false;
    detail::Point4 best_x{};
    double best_f = std::numeric_limits<double>::infinity();
    for (const auto& s0 : starts) {
        detail::Point4 step{0.04, 0.04, 0.02, 0.02};
        for (int d = 0; d < 4; ++d)
            if (s0[d] + step[d] > 1.0) step[d] = -step[d];
        auto [x, fv] = detail::nelder_mead4(fn, s0, step, cfg.inner_max_iters);
        // Earlier starts win ties: replace only on clear improvement so the
        // warm-start witness survives along flat minimizer sets.
        if (std::isfinite(fv) && (!have || fv < best_f - 1e-13)) {
            have = true;
            best_x = x;
            best_f = fv;
        }
    }
    if (!have) return std::nullopt;
    GenieCertificate cert;
    cert.gp = GenieParams{best_x[0], best_x[1], best_x[2], best_x[3]};
    cert.value_bits = best_f;
    cert.feasible = useful_genie_feasible(ch, alloc, cert.gp, cfg.feasibility_tol);
    cert.alloc = alloc;
    return cert;
}

struct UpperBoundResult {
    double upper_bits = std::numeric_limits<double>::infinity();
    double argmax_P1 = 0.0;
    std::optional<GenieCertificate> certificate;
    bool no_certificate = true;
};

// Outer maximization  max over 0 <= P1 = P2 <= P of g(P1,P1): dense grid,
// then golden-section shrinking around the best bracket (unimodality is not
// assumed, so the grid comes first). If the feasible set is empty for any
// admissible P1 the converse bound is vacuous and the result is +inf.
inline UpperBoundResult upper_bound_sum_capacity(const ChannelParams& ch,
                                                 const OptimizerConfig& cfg) {
    ch.validate();
    cfg.validate();
    UpperBoundResult out;
    // Emptiness is monotone in P1, so checking the endpoint covers the grid.
    if (!genie_set_nonempty(ch, PowerAllocation::symmetric(ch, 0.0))) return out;

    const int n = std::max(2, cfg.outer_grid_points);
    std::vector<double> grid(n), value(n);
    std::vector<std::optional<GenieCertificate>> certs(n);
    for (int i = 0; i < n; ++i)
        grid[i] = ch.P * static_cast<double>(i) / (n - 1);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        auto c = inner_min_g(ch, PowerAllocation::private_only(grid[i], grid[i]), cfg);
        certs[i] = c;
        value[i] = c ? c->value_bits : std::numeric_limits<double>::infinity();
    });
    std::vector<std::pair<double, double>> evals; // (P1, g)
    int best = 0;
    for (int i = 0; i < n; ++i) {
        if (!certs[i]) return out; // vacuous bound
        evals.emplace_back(grid[i], value[i]);
        if (value[i] > value[best]) best = i;
    }
    auto eval = [&](double P1) {
        auto c = inner_min_g(ch, PowerAllocation::private_only(P1, P1), cfg);
        const double v = c ? c->value_bits : std::numeric_limits<double>::infinity();
        evals.emplace_back(P1, v);
        return std::make_pair(v, c);
    };

    double lo = grid[std::max(0, best - 1)];
    double hi = grid[std::min(n - 1, best + 1)];
    auto best_cert = certs[best];
    double best_val = value[best];
    double best_P1 = grid[best];
    const double gold = 0.6180339887498949;
    double x1 = hi - gold * (hi - lo), x2 = lo + gold * (hi - lo);
    auto [f1, c1] = eval(x1);
    auto [f2, c2] = eval(x2);
    for (int it = 0; it < 48 && hi - lo > 1e-12 * std::max(1.0, ch.P); ++it) {
        if (f1 >= f2) {
            hi = x2; x2 = x1; f2 = f1; c2 = c1;
            x1 = hi - gold * (hi - lo);
            std::tie(f1, c1) = eval(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2; c1 = c2;
            x2 = lo + gold * (hi - lo);
            std::tie(f2, c2) = eval(x2);
        }
        if (f1 > best_val) { best_val = f1; best_P1 = x1; best_cert = c1; }
        if (f2 > best_val) { best_val = f2; best_P1 = x2; best_cert = c2; }
    }
    // Argmax tie-break: smallest P1 attaining the max within value_tol.
    for (const auto& [p1, v] : evals)
        if (v >= best_val - cfg.value_tol && p1 < best_P1) best_P1 = p1;
    if (best_P1 != (best_cert ? best_cert->alloc.P1 : best_P1)) {
        auto c = inner_min_g(ch, PowerAllocation::private_only(best_P1, best_P1), cfg);
        if (c) best_cert = c;
    }
    out.upper_bits = best_val;
    out.argmax_P1 = best_P1;
    out.certificate = best_cert;
    out.no_certificate = false;
    return out;
}

// Exhaustive minimization of f over a dyadic grid intersected with A. The a^2
// axes span [0,1]; each v axis spans its box [0, 1 - a_other^2] so nested
// grid_per_axis values (33, 65, ...) give nested point sets per (a1^2, a2^2).
// An optional box restricts the scan (used for one-step refinement).
struct GpBox {
    double a1_lo = 0.0, a1_hi = 1.0;
    double a2_lo = 0.0, a2_hi = 1.0;
    double v1_lo = 0.0, v1_hi = 1.0;
    double v2_lo = 0.0, v2_hi = 1.0;
};

inline std::optional<GenieCertificate> brute_force_oracle(const ChannelParams& ch,
                                                          const PowerAllocation& alloc,
                                                          int grid_per_axis,
                                                          const GpBox& box = GpBox{}) {
    ch.validate();
    alloc.validate(ch);
    if (grid_per_axis < 2)
        throw std::domain_error("brute_force_oracle: grid_per_axis must be >= 2");
    const int n = grid_per_axis;
    auto lin = [n](double lo, double hi, int k) {
        return lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    };
    struct Best {
        double f = std::numeric_limits<double>::infinity();
        detail::Point4 x{};
        bool have = false;
    };
    std::vector<Best> by_row(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i1) {
        Best b;
        const double a1 = lin(box.a1_lo, box.a1_hi, static_cast<int>(i1));
        if (a1 < 0.0 || a1 > 1.0) { by_row[i1] = b; return; }
        for (int i2 = 0; i2 < n; ++i2) {
            const double a2 = lin(box.a2_lo, box.a2_hi, i2);
            if (a2 < 0.0 || a2 > 1.0) continue;
            const double v1_hi = std::min(box.v1_hi, 1.0 - a2);
            const double v2_hi = std::min(box.v2_hi, 1.0 - a1);
            for (int j1 = 0; j1 < n; ++j1) {
                const double v1 = lin(std::max(0.0, box.v1_lo), v1_hi, j1);
                if (v1 < kGenieVarFloor || v1 > v1_hi) continue;
                for (int j2 = 0; j2 < n; ++j2) {
                    const double v2 = lin(std::max(0.0, box.v2_lo), v2_hi, j2);
                    if (v2 < kGenieVarFloor || v2 > v2_hi) continue;
                    detail::Point4 x{a1, a2, v1, v2};
                    if (!detail::point_feasible(ch, alloc, x)) continue;
                    const double fv = genie_objective_f(ch, alloc, GenieParams{a1, a2, v1, v2});
                    if (!b.have || fv < b.f) { b.have = true; b.f = fv; b.x = x; }
                }
            }
        }
        by_row[i1] = b;
    });
    Best best;
    for (const auto& b : by_row)
        if (b.have && (!best.have || b.f < best.f)) best = b;
    if (!best.have) return std::nullopt;
    GenieCertificate cert;
    cert.gp = GenieParams{best.x[0], best.x[1], best.x[2], best.x[3]};
    cert.value_bits = best.f;
    cert.feasible = true;
    cert.alloc = alloc;
    return cert;
}

// Oracle with one refinement pass: rescan a one-cell neighborhood of the
// coarse argmin at the same per-axis resolution.
inline std::optional<GenieCertificate> brute_force_oracle_refined(const ChannelParams& ch,
                                                                  const PowerAllocation& alloc,
                                                                  int grid_per_axis) {
    auto coarse = brute_force_oracle(ch, alloc, grid_per_axis);
    if (!coarse) return coarse;
    const double ha = 1.0 / (grid_per_axis - 1);
    GpBox box;
    box.a1_lo = std::max(0.0, coarse->gp.a1_sq - ha);
    box.a1_hi = std::min(1.0, coarse->gp.a1_sq + ha);
    box.a2_lo = std::max(0.0, coarse->gp.a2_sq - ha);
    box.a2_hi = std::min(1.0, coarse->gp.a2_sq + ha);
    box.v1_lo = std::max(0.0, coarse->gp.v1 - ha);
    box.v1_hi = coarse->gp.v1 + ha;
    box.v2_lo = std::max(0.0, coarse->gp.v2 - ha);
    box.v2_hi = coarse->gp.v2 + ha;
    auto fine = brute_force_oracle(ch, alloc, grid_per_axis, box);
    if (fine && fine->value_bits < coarse->value_bits) return fine;
    return coarse;
}

} // namespace icb
