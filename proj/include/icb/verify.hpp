#pragma once
// Property suites behind `icb verify`: cross-checks that tie the closed-form
// evaluators, the covariance/log-det route, the regime algebra, the optimizer,
// and the exact elimination code to one another. Each check reports a count,
// a max residual, and pass/fail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icb/channel.hpp"
#include "icb/fme.hpp"
#include "icb/gaussian.hpp"
#include "icb/optimizer.hpp"
#include "icb/regimes.hpp"
#include "icb/rng.hpp"
#include "icb/sweep.hpp"

namespace icb {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::size_t checked = 0;
    std::size_t failures = 0;
    double max_residual = 0.0;
    std::string detail;
};

namespace detail_verify {

struct RandomConfig {
    ChannelParams ch;
    PowerAllocation alloc;
    GenieParams gp;
};

// Type-valid draw (not necessarily inside the useful-genie set A).
inline RandomConfig random_config(std::uint64_t seed, std::uint64_t i, bool symmetric) {
    RandomConfig r;
    r.ch.P = rand_uniform(seed, 2, 8 * i + 0, 0.1, 30.0);
    r.ch.c = rand_uniform(seed, 2, 8 * i + 1, 0.0, 1.5);
    r.alloc.P1 = rand_uniform(seed, 2, 8 * i + 2, 0.0, r.ch.P);
    r.alloc.P2 = symmetric ? r.alloc.P1 : rand_uniform(seed, 2, 8 * i + 3, 0.0, r.ch.P);
    r.alloc.P0 = 0.0;
    r.gp.a1_sq = rand_uniform(seed, 2, 8 * i + 4, 0.0, 0.98);
    r.gp.a2_sq = rand_uniform(seed, 2, 8 * i + 5, 0.0, 0.98);
    r.gp.v1 = rand_uniform(seed, 2, 8 * i + 6, 1e-4, 1.0);
    r.gp.v2 = rand_uniform(seed, 2, 8 * i + 7, 1e-4, 1.0);
    return r;
}

inline ChannelParams random_gamma_B_channel(std::uint64_t seed, std::uint64_t i) {
    const double root2m1 = 0.41421356237309503;
    for (std::uint64_t att = 0;; ++att) {
        const double c = rand_uniform(seed, 3, 4 * i + 2 * att, 0.02, root2m1);
        auto PB = gamma_B_boundary_P(c);
        if (!PB || *PB <= 0.0) continue;
        const double P = *PB * rand_u01(seed, 3, 4 * i + 2 * att + 1);
        ChannelParams ch{P, c};
        if (in_gamma_B(ch)) return ch;
    }
}

inline ChannelParams random_gamma_A_channel(std::uint64_t seed, std::uint64_t i) {
    for (std::uint64_t att = 0;; ++att) {
        const double c = rand_uniform(seed, 4, 4 * i + 2 * att, 1e-3, 0.5);
        double P_max = std::min(1e6, (0.5 / c - 1.0) / (c * c));
        if (P_max <= 0.0) continue;
        const double P = P_max * rand_u01(seed, 4, 4 * i + 2 * att + 1);
        ChannelParams ch{P, c};
        if (in_gamma_A(ch)) return ch;
    }
}

} // namespace detail_verify

// ---- identities suite (gaussian_algebra vs closed forms) ----

inline std::vector<CheckResult> verify_identities(std::uint64_t seed, std::size_t draws = 1000) {
    using detail_verify::random_config;
    std::vector<CheckResult> out;

    {
        CheckResult r;
        r.name = "f_identity_logdet";
        for (std::size_t i = 0; i < draws; ++i) {
            auto cfg = random_config(seed, i, false);
            CovarianceModel m = build_model(cfg.ch, cfg.alloc, cfg.gp);
            const double lhs =
                0.5 * (gaussian_cmi(m, {Sig::X1}, {Sig::Y1, Sig::U1}, {Sig::X0})
                       + gaussian_cmi(m, {Sig::Y1}, {Sig::X1, Sig::X0}, {})
                       + gaussian_cmi(m, {Sig::X2}, {Sig::Y2, Sig::U2}, {Sig::X0})
                       + gaussian_cmi(m, {Sig::Y2}, {Sig::X2, Sig::X0}, {}));
            const double rhs = genie_objective_f(cfg.ch, cfg.alloc, cfg.gp);
            const double resid = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
            r.max_residual = std::max(r.max_residual, resid);
            ++r.checked;
            if (resid > 1e-9) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "f_decomposition_gap";
        for (std::size_t i = 0; i < draws; ++i) {
            auto cfg = random_config(seed ^ 0x5bd1e995, i, true);
            CovarianceModel m = build_model(cfg.ch, cfg.alloc, cfg.gp);
            const double lower = lower_bound_sum_rate(cfg.ch, cfg.ch.P - cfg.alloc.P1);
            const double lhs = genie_objective_f(cfg.ch, cfg.alloc, cfg.gp);
            const double rhs = lower + genie_gap(m);
            const double resid = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
            r.max_residual = std::max(r.max_residual, resid);
            ++r.checked;
            if (resid > 1e-9) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "genie_gap_nonnegative";
        for (std::size_t i = 0; i < draws; ++i) {
            auto cfg = random_config(seed ^ 0xc2b2ae35, i, true);
            const double gap = genie_gap(build_model(cfg.ch, cfg.alloc, cfg.gp));
            r.max_residual = std::max(r.max_residual, -gap);
            ++r.checked;
            if (gap < -1e-12) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "f_swap_symmetry";
        for (std::size_t i = 0; i < draws; ++i) {
            auto cfg = random_config(seed ^ 0x27d4eb2f, i, false);
            const double lhs = genie_objective_f(cfg.ch, cfg.alloc, cfg.gp);
            PowerAllocation sw{0.0, cfg.alloc.P2, cfg.alloc.P1};
            GenieParams gsw{cfg.gp.a2_sq, cfg.gp.a1_sq, cfg.gp.v2, cfg.gp.v1};
            const double rhs = genie_objective_f(cfg.ch, sw, gsw);
            const double resid = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
            r.max_residual = std::max(r.max_residual, resid);
            ++r.checked;
            if (resid > 1e-12) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "mac_two_routes";
        for (std::size_t i = 0; i < draws; ++i) {
            const double P = rand_uniform(seed, 5, 3 * i, 0.0, 40.0);
            const double c = rand_uniform(seed, 5, 3 * i + 1, 0.0, 2.0);
            const double P0 = P * rand_u01(seed, 5, 3 * i + 2);
            ChannelParams ch{P, c};
            const double direct = lower_bound_sum_rate(ch, P0);
            const double via_mac =
                mac_sum_rate_closed_form(ch, PowerAllocation::symmetric(ch, P0)).sum_bits;
            const double resid = std::fabs(direct - via_mac) / std::max(1.0, std::fabs(direct));
            r.max_residual = std::max(r.max_residual, resid);
            ++r.checked;
            if (resid > 1e-12) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        // Markov criterion vs conditional mutual information at smart-genie
        // points: the chain holds and I(X;Z|Y) vanishes.
        CheckResult r;
        r.name = "markov_cmi_consistency";
        for (std::size_t i = 0; i < std::max<std::size_t>(1, draws / 20); ++i) {
            ChannelParams ch = detail_verify::random_gamma_A_channel(seed ^ 0x85ebca6b, i);
            auto sg = smart_genie_solve(ch);
            if (!sg || sg->b_sq < 1e-9) continue;
            GenieParams gp{sg->a_sq, sg->a_sq, sg->b_sq, sg->b_sq};
            CovarianceModel m = build_model(ch, PowerAllocation::private_only(ch.P, ch.P), gp);
            auto mk = markov_check(m, {Sig::X11}, {Sig::Yt1}, {Sig::Ut1});
            const double cmi = gaussian_cmi(m, {Sig::X11}, {Sig::Ut1}, {Sig::Yt1});
            ++r.checked;
            r.max_residual = std::max({r.max_residual, mk.residual, cmi});
            if (!mk.is_markov || cmi > 1e-10) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    return out;
}

// ---- regions suite ----

inline std::vector<CheckResult> verify_regions(std::uint64_t seed, std::size_t samples = 10000) {
    std::vector<CheckResult> out;
    {
        CheckResult r;
        r.name = "gamma_A_subset_gamma_B";
        auto rep = verify_region_inclusion(samples, seed);
        r.checked = rep.tested;
        r.failures = rep.violations;
        r.pass = rep.violations == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "polynomial_identity";
        for (std::size_t i = 0; i < 100; ++i) {
            const double c = rand_uniform(seed, 6, i, 0.0, 3.0);
            const double lhs = ((((((c + 6.0) * c - 1.0) * c - 28.0) * c + 31.0) * c - 10.0) * c) + 1.0;
            const double t = c * c + 4.0 * c - 1.0;
            const double rhs = (c - 1.0) * (c - 1.0) * t * t;
            const double resid = std::fabs(lhs - rhs) / std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
            r.max_residual = std::max(r.max_residual, resid);
            ++r.checked;
            if (resid > 1e-9) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        // At the Gamma_B boundary power the Gamma_A inequalities hold at or
        // beyond their boundary (P_A <= P_B).
        CheckResult r;
        r.name = "boundary_consistency";
        for (int k = 1; k <= 100; ++k) {
            const double c = 0.41421356237309503 * k / 100.0;
            auto PB = gamma_B_boundary_P(c);
            if (!PB) continue;
            const double c2P = c * c * *PB;
            const double eq4 = c2P * c2P + (4.0 * c2P + 3.0) * c * c * (1.0 + c2P) * (1.0 + c2P);
            const double eq5 = c * (1.0 + c2P);
            ++r.checked;
            r.max_residual = std::max({r.max_residual, 0.5 - eq4, eq5 - 0.5});
            if (eq4 < 0.5 - 1e-9 || eq5 > 0.5 + 1e-9) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        // Constructive claim: Gamma_A membership yields a smart-genie witness
        // that re-verifies the three conditions.
        CheckResult r;
        r.name = "smart_genie_recheck";
        for (std::size_t i = 0; i < 200; ++i) {
            ChannelParams ch = detail_verify::random_gamma_A_channel(seed ^ 0x165667b1, i);
            auto sg = smart_genie_solve(ch);
            ++r.checked;
            if (!sg) { ++r.failures; continue; }
            const double m = ch.c * (1.0 + ch.c * ch.c * ch.P);
            const double eq1 = std::fabs(sg->a_sq * sg->b_sq - m * m);
            const double eq3 = sg->a_sq + sg->b_sq - 1.0;
            const double s = std::sqrt(std::max(0.0, 1.0 - sg->a_sq - sg->b_sq)
                                       * std::max(0.0, 1.0 - sg->b_sq));
            const double eq2 = ch.c * ch.c * ch.P - (s - sg->b_sq);
            r.max_residual = std::max({r.max_residual, eq1, eq3, eq2});
            if (eq1 > 1e-12 || eq3 > 1e-12 || eq2 > 1e-12) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        // Inside Gamma_B the sum rate is non-increasing in P0 and the closed
        // derivative stays nonpositive.
        CheckResult r;
        r.name = "gamma_B_monotone";
        const std::size_t channels = 50;
        for (std::size_t i = 0; i < channels; ++i) {
            ChannelParams ch = detail_verify::random_gamma_B_channel(seed ^ 0x9e3779b1, i);
            double prev = lower_bound_sum_rate(ch, 0.0);
            bool ok = true;
            double worst = 0.0;
            for (int k = 1; k < 1000; ++k) {
                const double P0 = ch.P * (k / 999.0);
                const double cur = lower_bound_sum_rate(ch, P0);
                worst = std::max(worst, cur - prev);
                if (cur > prev + 1e-12) ok = false;
                prev = cur;
                const double dv = sum_rate_derivative(ch, P0).value_bits;
                worst = std::max(worst, dv);
                if (dv > 1e-12) ok = false;
            }
            ++r.checked;
            r.max_residual = std::max(r.max_residual, worst);
            if (!ok) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        // Closed-form derivative against a central finite difference.
        CheckResult r;
        r.name = "derivative_finite_difference";
        for (std::size_t i = 0; i < 200; ++i) {
            const double P = rand_uniform(seed, 7, 3 * i, 0.1, 30.0);
            const double c = rand_uniform(seed, 7, 3 * i + 1, 0.05, 1.5);
            ChannelParams ch{P, c};
            const double h = 1e-5 * std::max(1.0, P);
            const double P0 = rand_uniform(seed, 7, 3 * i + 2, h, P - h);
            if (P0 <= h || P0 >= P - h) continue;
            const double fd = (lower_bound_sum_rate(ch, P0 + h) - lower_bound_sum_rate(ch, P0 - h))
                              / (2.0 * h);
            const double cf = sum_rate_derivative(ch, P0).value_bits;
            const double resid = std::fabs(cf - fd) / std::max(1.0, std::fabs(cf));
            ++r.checked;
            r.max_residual = std::max(r.max_residual, resid);
            if (resid > 1e-6) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        // z1 equals the numerator root found by bisection.
        CheckResult r;
        r.name = "derivative_zero_vs_bisection";
        for (std::size_t i = 0; i < 100; ++i) {
            const double P = rand_uniform(seed, 8, 2 * i, 0.1, 30.0);
            const double c = rand_uniform(seed, 8, 2 * i + 1, 0.05, 1.5);
            ChannelParams ch{P, c};
            auto d = sum_rate_derivative(ch, 0.0);
            const double c2 = c * c;
            const double a = P + 1.0 / c2, b = P + (1.0 + P) / c2;
            const double dd = 2.0 / c, e = 1.0 + 1.0 / c2;
            auto numer = [&](double x) {
                return (b * dd - 2.0 * a * e * dd - b * e) * x + a * b * dd + 2.0 * b * b - a * b * e;
            };
            double lo = d.anatomy.z1 - std::max(1.0, std::fabs(d.anatomy.z1)),
                   hi = d.anatomy.z1 + std::max(1.0, std::fabs(d.anatomy.z1));
            if (numer(lo) * numer(hi) > 0.0) { ++r.checked; ++r.failures; continue; }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (numer(lo) * numer(mid) <= 0.0) hi = mid;
                else lo = mid;
            }
            const double root = 0.5 * (lo + hi);
            const double resid = std::fabs(root - d.anatomy.z1)
                                 / std::max(1.0, std::fabs(d.anatomy.z1));
            ++r.checked;
            r.max_residual = std::max(r.max_residual, resid);
            if (resid > 1e-8) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    return out;
}

// ---- optimizer suite ----

inline std::vector<CheckResult> verify_optimizer(std::uint64_t seed, std::size_t ordering_draws = 50,
                                                 std::size_t oracle_points = 5) {
    std::vector<CheckResult> out;
    OptimizerConfig cfg;
    cfg.seed = seed;
    OptimizerConfig light = cfg;
    light.outer_grid_points = 33;
    light.inner_multistarts = 6;
    light.inner_max_iters = 200;

    {
        CheckResult r;
        r.name = "certificate_validity";
        for (std::size_t i = 0; i < 30; ++i) {
            const double c = rand_uniform(seed, 9, 2 * i, 0.01, 0.9);
            const double P = rand_uniform(seed, 9, 2 * i + 1, 0.0, 0.95 / (c * c));
            ChannelParams ch{std::min(P, 50.0), c};
            auto cert = inner_min_g(ch, PowerAllocation::private_only(ch.P, ch.P), light);
            if (!cert) continue;
            ++r.checked;
            const bool feas = useful_genie_feasible(ch, cert->alloc, cert->gp, cfg.feasibility_tol);
            const double f = genie_objective_f(ch, cert->alloc, cert->gp);
            const double resid = std::fabs(f - cert->value_bits) / std::max(1.0, std::fabs(f));
            r.max_residual = std::max(r.max_residual, resid);
            if (!feas || resid > 1e-12) ++r.failures;
        }
        r.pass = r.failures == 0 && r.checked > 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "determinism";
        ChannelParams ch{10.0, 0.1};
        auto a = upper_bound_sum_capacity(ch, light);
        auto b = upper_bound_sum_capacity(ch, light);
        r.checked = 1;
        const bool same = a.upper_bits == b.upper_bits && a.argmax_P1 == b.argmax_P1
                          && a.certificate.has_value() == b.certificate.has_value()
                          && (!a.certificate
                              || (a.certificate->gp.a1_sq == b.certificate->gp.a1_sq
                                  && a.certificate->gp.v1 == b.certificate->gp.v1));
        if (!same) ++r.failures;
        r.pass = same;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "oracle_agreement";
        for (std::size_t i = 0; i < oracle_points; ++i) {
            ChannelParams ch = detail_verify::random_gamma_A_channel(seed ^ 0x2545f491, i);
            auto alloc = PowerAllocation::private_only(ch.P, ch.P);
            auto inner = inner_min_g(ch, alloc, cfg);
            auto oracle = brute_force_oracle_refined(ch, alloc, 33);
            ++r.checked;
            if (!inner || !oracle) { ++r.failures; continue; }
            const double diff = std::fabs(inner->value_bits - oracle->value_bits);
            r.max_residual = std::max(r.max_residual, diff);
            if (diff > 5e-3) ++r.failures;
            if (inner->value_bits > oracle->value_bits + cfg.value_tol) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "upper_lower_ordering";
        for (std::size_t i = 0; i < ordering_draws; ++i) {
            const double c = rand_uniform(seed, 10, 2 * i, 0.01, 1.2);
            const double Pmax = std::min(50.0, 0.95 / (c * c));
            const double P = Pmax * rand_u01(seed, 10, 2 * i + 1);
            ChannelParams ch{P, c};
            auto ub = upper_bound_sum_capacity(ch, light);
            if (ub.no_certificate) continue;
            const double lower = maximize_lower_bound(ch, 101).lower_bits;
            ++r.checked;
            r.max_residual = std::max(r.max_residual, lower - ub.upper_bits);
            if (ub.upper_bits < lower - 1e-9) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "v_clamp_safety";
        for (std::size_t i = 0; i < oracle_points; ++i) {
            ChannelParams ch = detail_verify::random_gamma_A_channel(seed ^ 0x94d049bb, i);
            auto cert = inner_min_g(ch, PowerAllocation::private_only(ch.P, ch.P), cfg);
            ++r.checked;
            if (!cert) { ++r.failures; continue; }
            const double vmin = std::min(cert->gp.v1, cert->gp.v2);
            r.max_residual = std::max(r.max_residual, 1e-6 - vmin);
            if (vmin < 1e-6) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    return out;
}

// ---- FME suite ----

// Exact LP oracle for small systems: enumerate basic solutions (vertices) and
// maximize over the feasible ones. Intended for bounded test systems with at
// most four variables.
inline OptimumResult vertex_enumeration_max(const LinearSystem& sys,
                                            const std::vector<Rat>& objective) {
    const std::size_t n = sys.variables.size();
    if (n == 0 || n > 4)
        throw std::invalid_argument("vertex_enumeration_max: supports 1..4 variables");
    const std::size_t m = sys.rows.size();
    std::vector<std::size_t> pick(n);
    bool any_vertex = false;
    Rat best;
    // iterate all n-subsets of rows
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    auto advance = [&]() -> bool {
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (idx[k] + (n - k) < m) {
                ++idx[k];
                for (std::size_t j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    if (m < n) return {OptimumResult::Status::Unbounded, Rat(0)};
    do {
        // solve A x = b on the selected rows by Gaussian elimination
        std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t ccol = 0; ccol < n; ++ccol) a[r][ccol] = sys.rows[idx[r]].coeff[ccol];
            a[r][n] = sys.rows[idx[r]].bound;
        }
        bool singular = false;
        for (std::size_t col = 0; col < n && !singular; ++col) {
            std::size_t piv = col;
            while (piv < n && a[piv][col] == 0) ++piv;
            if (piv == n) { singular = true; break; }
            std::swap(a[piv], a[col]);
            for (std::size_t r2 = 0; r2 < n; ++r2) {
                if (r2 == col || a[r2][col] == 0) continue;
                Rat factor = a[r2][col] / a[col][col];
                for (std::size_t ccol = col; ccol <= n; ++ccol)
                    a[r2][ccol] -= factor * a[col][ccol];
            }
        }
        if (singular) continue;
        std::vector<Rat> x(n);
        for (std::size_t r = 0; r < n; ++r) x[r] = a[r][n] / a[r][r];
        bool feasible = true;
        for (const auto& row : sys.rows) {
            Rat lhs(0);
            for (std::size_t ccol = 0; ccol < n; ++ccol) lhs += row.coeff[ccol] * x[ccol];
            if (lhs > row.bound) { feasible = false; break; }
        }
        if (!feasible) continue;
        Rat val(0);
        for (std::size_t ccol = 0; ccol < n; ++ccol) val += objective[ccol] * x[ccol];
        if (!any_vertex || val > best) { any_vertex = true; best = val; }
    } while (advance());
    if (!any_vertex) return {OptimumResult::Status::Infeasible, Rat(0)};
    return {OptimumResult::Status::Value, best};
}

namespace detail_verify {

inline Rat random_rat(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr, int lo, int hi,
                      int max_den) {
    const long num = lo + static_cast<long>(rand_u01(seed, stream, 2 * ctr)
                                            * static_cast<double>(hi - lo + 1));
    const long den = 1 + static_cast<long>(rand_u01(seed, stream, 2 * ctr + 1)
                                           * static_cast<double>(max_den));
    Rat q(std::min<long>(num, hi), den);
    q.canonicalize();
    return q;
}

// Feasible-by-construction random system: rows a.x <= a.x0 + slack around a
// rational base point x0, plus a bounding box.
inline LinearSystem random_feasible_system(std::uint64_t seed, std::uint64_t i, int nvars,
                                           int extra_rows, bool with_box) {
    LinearSystem sys;
    for (int v = 0; v < nvars; ++v) sys.variables.push_back("x" + std::to_string(v));
    std::vector<Rat> x0(static_cast<std::size_t>(nvars));
    for (int v = 0; v < nvars; ++v)
        x0[static_cast<std::size_t>(v)] = random_rat(seed, 11, 64 * i + static_cast<std::uint64_t>(v), -2, 2, 4);
    for (int r = 0; r < extra_rows; ++r) {
        std::vector<Rat> coeff(static_cast<std::size_t>(nvars));
        bool nonzero = false;
        for (int v = 0; v < nvars; ++v) {
            coeff[static_cast<std::size_t>(v)] = random_rat(
                seed, 12, 64 * i + 8 * static_cast<std::uint64_t>(r) + static_cast<std::uint64_t>(v),
                -4, 4, 4);
            if (coeff[static_cast<std::size_t>(v)] != 0) nonzero = true;
        }
        if (!nonzero) coeff[0] = 1;
        Rat rhs(0);
        for (int v = 0; v < nvars; ++v) rhs += coeff[static_cast<std::size_t>(v)] * x0[static_cast<std::size_t>(v)];
        rhs += random_rat(seed, 13, 64 * i + static_cast<std::uint64_t>(r), 1, 3, 2); // positive slack
        sys.add_row(std::move(coeff), std::move(rhs));
    }
    if (with_box) {
        for (int v = 0; v < nvars; ++v) {
            std::vector<Rat> up(static_cast<std::size_t>(nvars), Rat(0)), dn(static_cast<std::size_t>(nvars), Rat(0));
            up[static_cast<std::size_t>(v)] = 1;
            dn[static_cast<std::size_t>(v)] = -1;
            sys.add_row(std::move(up), x0[static_cast<std::size_t>(v)] + 8);
            sys.add_row(std::move(dn), 8 - x0[static_cast<std::size_t>(v)]);
        }
    }
    return sys;
}

// Removes rows implied by the remainder of the system (exact, via the
// FME-based LP). Used to compare projections facet-by-facet.
inline LinearSystem irredundant_rows(LinearSystem sys) {
    detail_fme::prune(sys.rows);
    for (std::size_t r = 0; r < sys.rows.size();) {
        LinearSystem rest = sys;
        rest.rows.erase(rest.rows.begin() + static_cast<std::ptrdiff_t>(r));
        std::vector<Rat> obj = sys.rows[r].coeff;
        auto opt = max_linear(rest, obj);
        const bool implied =
            opt.status == OptimumResult::Status::Infeasible
            || (opt.status == OptimumResult::Status::Value && opt.value <= sys.rows[r].bound);
        if (implied) sys.rows.erase(sys.rows.begin() + static_cast<std::ptrdiff_t>(r));
        else ++r;
    }
    return sys;
}

inline bool same_row_set(const LinearSystem& a, const LinearSystem& b) {
    if (a.rows.size() != b.rows.size()) return false;
    auto key = [](const LinearSystem& s) {
        std::vector<std::string> keys;
        for (auto r : s.rows) {
            detail_fme::canonicalize(r);
            std::string k;
            for (const auto& c : r.coeff) k += rat_to_string(c) + ";";
            k += "|" + rat_to_string(r.bound);
            keys.push_back(k);
        }
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    return key(a) == key(b);
}

} // namespace detail_verify

inline std::vector<CheckResult> verify_fme(std::uint64_t seed, std::size_t formula_draws = 10000,
                                           std::size_t oracle_systems = 200) {
    using namespace detail_verify;
    std::vector<CheckResult> out;
    {
        // Projection of the six-row MAC pattern: max sum equals
        // min{a+b+e, b+d+e, c+e, b+f} exactly.
        CheckResult r;
        r.name = "mac_min_formula";
        for (std::size_t i = 0; i < formula_draws; ++i) {
            Rat av = random_rat(seed, 14, 8 * i + 0, 0, 8, 4);
            Rat bv = random_rat(seed, 14, 8 * i + 1, 0, 8, 4);
            Rat ev = random_rat(seed, 14, 8 * i + 2, 0, 8, 4);
            Rat dv = random_rat(seed, 14, 8 * i + 3, 0, 8, 4);
            // c <= a + b, f <= d + e keep the implicit MAC conditions.
            Rat scale_c(1 + static_cast<int>(i % 4), 4);
            scale_c.canonicalize();
            Rat scale_f(1 + static_cast<int>((i / 4) % 4), 4);
            scale_f.canonicalize();
            Rat cv = (av + bv) * scale_c;
            Rat fv = (dv + ev) * scale_f;
            LinearSystem sys;
            sys.variables = {"R0", "R1", "R2"};
            sys.add_row({Rat(1), Rat(0), Rat(0)}, av);
            sys.add_row({Rat(0), Rat(1), Rat(0)}, bv);
            sys.add_row({Rat(1), Rat(1), Rat(0)}, cv);
            sys.add_row({Rat(1), Rat(0), Rat(0)}, dv);
            sys.add_row({Rat(0), Rat(0), Rat(1)}, ev);
            sys.add_row({Rat(1), Rat(0), Rat(1)}, fv);
            auto got = max_sum_rate(sys, {"R0", "R1", "R2"});
            Rat cand1 = av + bv + ev, cand2 = bv + dv + ev, cand3 = cv + ev, cand4 = bv + fv;
            Rat expect = std::min(std::min(cand1, cand2), std::min(cand3, cand4));
            ++r.checked;
            if (got.status != OptimumResult::Status::Value || got.value != expect) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "vertex_oracle_agreement";
        for (std::size_t i = 0; i < oracle_systems; ++i) {
            const int nvars = 2 + static_cast<int>(i % 3);
            LinearSystem sys = random_feasible_system(seed, i, nvars, 4 + static_cast<int>(i % 3), true);
            std::vector<Rat> obj(sys.variables.size());
            for (std::size_t v = 0; v < obj.size(); ++v)
                obj[v] = random_rat(seed, 15, 8 * i + v, -3, 3, 3);
            auto viaFme = max_linear(sys, obj);
            auto viaVertex = vertex_enumeration_max(sys, obj);
            ++r.checked;
            if (viaFme.status != viaVertex.status) { ++r.failures; continue; }
            if (viaFme.status == OptimumResult::Status::Value && viaFme.value != viaVertex.value)
                ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        // Eliminating in different orders projects to the same polyhedron
        // with the same facet rows.
        CheckResult r;
        r.name = "order_independence";
        for (std::size_t i = 0; i < 40; ++i) {
            const int nvars = 3 + static_cast<int>(i % 3);
            LinearSystem sys = random_feasible_system(seed ^ 0x7f4a7c15, i, nvars, 5, true);
            std::vector<std::string> order1, order2;
            for (int v = 0; v + 2 < nvars; ++v) order1.push_back("x" + std::to_string(v));
            order2 = order1;
            std::reverse(order2.begin(), order2.end());
            auto p1 = fme_eliminate_all(sys, order1);
            auto p2 = fme_eliminate_all(sys, order2);
            ++r.checked;
            if (!same_row_set(irredundant_rows(p1.system), irredundant_rows(p2.system)))
                ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        // Every sampled point of a projection extends to a feasible point of
        // the original system (exact interval back-substitution).
        CheckResult r;
        r.name = "projection_soundness";
        for (std::size_t i = 0; i < 25; ++i) {
            const int nvars = 3 + static_cast<int>(i % 3);
            LinearSystem sys = random_feasible_system(seed ^ 0x1ce4e5b9, i, nvars, 5, true);
            const std::string victim = "x0";
            auto proj = fme_eliminate(sys, victim);
            const int j = sys.var_index(victim);
            std::size_t tried = 0;
            for (std::uint64_t s = 0; s < 400 && tried < 100; ++s) {
                std::vector<Rat> y(proj.system.variables.size());
                for (std::size_t v = 0; v < y.size(); ++v)
                    y[v] = random_rat(seed, 16, 512 * i + 8 * s + v, -6, 6, 8);
                bool inside = true;
                for (const auto& row : proj.system.rows) {
                    Rat lhs(0);
                    for (std::size_t v = 0; v < y.size(); ++v) lhs += row.coeff[v] * y[v];
                    if (lhs > row.bound) { inside = false; break; }
                }
                if (!inside) continue;
                ++tried;
                ++r.checked;
                bool has_lo = false, has_hi = false;
                Rat lo, hi;
                bool ok = true;
                for (const auto& row : sys.rows) {
                    Rat rest(0);
                    std::size_t yi = 0;
                    for (std::size_t v = 0; v < row.coeff.size(); ++v) {
                        if (static_cast<int>(v) == j) continue;
                        rest += row.coeff[v] * y[yi++];
                    }
                    const Rat& cj = row.coeff[static_cast<std::size_t>(j)];
                    if (cj == 0) {
                        if (rest > row.bound) ok = false;
                    } else {
                        Rat limit = (row.bound - rest) / cj;
                        if (cj > 0) {
                            if (!has_hi || limit < hi) { hi = limit; has_hi = true; }
                        } else {
                            if (!has_lo || limit > lo) { lo = limit; has_lo = true; }
                        }
                    }
                }
                if (!ok || (has_lo && has_hi && lo > hi)) ++r.failures;
            }
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    {
        CheckResult r;
        r.name = "mac_system_two_routes";
        for (std::size_t i = 0; i < 100; ++i) {
            const double P = rand_uniform(seed, 18, 3 * i, 0.0, 40.0);
            const double c = rand_uniform(seed, 18, 3 * i + 1, 0.0, 2.0);
            const double P0 = P * rand_u01(seed, 18, 3 * i + 2);
            ChannelParams ch{P, c};
            auto alloc = PowerAllocation::symmetric(ch, P0);
            auto sys = mac_system_from_channel(ch, alloc);
            auto got = max_sum_rate(sys, {"R0", "R1", "R2"});
            const double direct = lower_bound_sum_rate(ch, P0);
            ++r.checked;
            if (got.status != OptimumResult::Status::Value) { ++r.failures; continue; }
            const double resid = std::fabs(rat_to_double(got.value) - direct);
            r.max_residual = std::max(r.max_residual, resid);
            if (resid > 1e-9) ++r.failures;
        }
        r.pass = r.failures == 0;
        out.push_back(r);
    }
    return out;
}

} // namespace icb
