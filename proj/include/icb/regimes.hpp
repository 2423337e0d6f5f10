#pragma once
// Closed-form regime classification for the symmetric interference channel:
// smart-genie solvability, the low-interference sufficient conditions (region
// Gamma_A), the monotonicity region Gamma_B where R(P0) is decreasing, the
// Gamma_B boundary power, and the rational derivative of the sum rate with its
// pole/zero anatomy.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "icb/channel.hpp"
#include "icb/rng.hpp"

namespace icb {

// Parameters (a^2, b^2) with a*b = c(1 + c^2 P), a^2 + b^2 <= 1, and the
// useful-genie inequality satisfied. Used as v = b^2 in a GenieParams witness.
struct SmartGenieSolution {
    double a_sq = 0.0;
    double b_sq = 0.0;
};

namespace detail {
// Slack of the useful-genie inequality c^2 P <= sqrt((1-a^2-b^2)(1-b^2)) - b^2
// given a^2 and b^2 = m^2 / a^2. Negative slack (or a violated box) means the
// pair is not admissible.
inline double smart_genie_slack(double a_sq, double m, double c2P) {
    if (a_sq <= 0.0) return -1.0;
    const double b_sq = (m * m) / a_sq;
    if (a_sq + b_sq > 1.0) return -1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - a_sq - b_sq) * std::max(0.0, 1.0 - b_sq));
    return s - b_sq - c2P;
}
} // namespace detail

// Finds (a^2, b^2) satisfying the matching conditions
//   (1) c(1 + c^2 P) = a b,  (2) c^2 P <= sqrt((1-a^2-b^2)(1-b^2)) - b^2,
//   (3) a^2 + b^2 <= 1.
// Tries the explicit candidate a^2 = 1/2, b^2 = 2 m^2 (m = c(1+c^2 P)) first,
// then scans a^2 over (0,1) with b^2 = m^2/a^2 pinned by (1).
inline std::optional<SmartGenieSolution> smart_genie_solve(const ChannelParams& ch) {
    ch.validate();
    const double m = ch.c * (1.0 + ch.c * ch.c * ch.P);
    const double c2P = ch.c * ch.c * ch.P;

    if (m == 0.0) return SmartGenieSolution{0.5, 0.0}; // c = 0: any a, b = 0

    // ab <= (a^2+b^2)/2 <= 1/2, so m > 1/2 is infeasible outright.
    if (m > 0.5) return std::nullopt;

    if (detail::smart_genie_slack(0.5, m, c2P) >= 0.0)
        return SmartGenieSolution{0.5, 2.0 * m * m};

    // Scan for a feasible a^2; keep the grid point with the largest slack.
    const int n = 10000;
    int best = -1;
    double best_slack = 0.0;
    for (int k = 1; k < n; ++k) {
        const double a_sq = static_cast<double>(k) / n;
        const double s = detail::smart_genie_slack(a_sq, m, c2P);
        if (s >= 0.0 && (best < 0 || s > best_slack)) {
            best = k;
            best_slack = s;
        }
    }
    if (best < 0) return std::nullopt;

    // Bisect the slack sign changes bracketing the feasible interval, then
    // return its midpoint; falls back to the grid hit if the midpoint fails.
    auto bisect_edge = [&](double inside, double outside) {
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (inside + outside);
            if (detail::smart_genie_slack(mid, m, c2P) >= 0.0) inside = mid;
            else outside = mid;
        }
        return inside;
    };
    double lo = static_cast<double>(best) / n;
    double hi = lo;
    while (best > 1 && detail::smart_genie_slack(static_cast<double>(best - 1) / n, m, c2P) >= 0.0)
        --best;
    lo = static_cast<double>(best) / n;
    if (best > 1) lo = bisect_edge(lo, static_cast<double>(best - 1) / n);
    int top = static_cast<int>(hi * n + 0.5);
    while (top < n - 1 && detail::smart_genie_slack(static_cast<double>(top + 1) / n, m, c2P) >= 0.0)
        ++top;
    hi = static_cast<double>(top) / n;
    if (top < n - 1) hi = bisect_edge(hi, static_cast<double>(top + 1) / n);

    double a_sq = 0.5 * (lo + hi);
    if (detail::smart_genie_slack(a_sq, m, c2P) < 0.0) a_sq = static_cast<double>(best) / n;
    return SmartGenieSolution{a_sq, (m * m) / a_sq};
}

// Low-interference region Gamma_A:
//   c^4 P^2 + (4 c^2 P + 3) c^2 (1 + c^2 P)^2 <= 1/2  and  c(1 + c^2 P) <= 1/2.
inline bool in_gamma_A(const ChannelParams& ch) {
    ch.validate();
    const double c2 = ch.c * ch.c, c2P = c2 * ch.P;
    const double lhs4 = c2P * c2P + (4.0 * c2P + 3.0) * c2 * (1.0 + c2P) * (1.0 + c2P);
    const double lhs5 = ch.c * (1.0 + c2P);
    return lhs4 <= 0.5 && lhs5 <= 0.5;
}

// Monotonicity region Gamma_B: (c^4 + 2c^3 + c^2) P + c^2 + 2c - 1 <= 0.
inline bool in_gamma_B(const ChannelParams& ch) {
    ch.validate();
    const double c = ch.c;
    return (c * c * c * c + 2.0 * c * c * c + c * c) * ch.P + c * c + 2.0 * c - 1.0 <= 0.0;
}

// Boundary power P_B = (1 - 2c - c^2) / (c^4 + 2c^3 + c^2); defined for
// 0 < c <= sqrt(2) - 1. c = 0 has no finite boundary (Gamma_B holds for all P).
inline std::optional<double> gamma_B_boundary_P(double c) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw std::domain_error("gamma_B_boundary_P: c must be finite and >= 0");
    if (c == 0.0) return std::nullopt;
    const double num = 1.0 - 2.0 * c - c * c;
    if (num < 0.0) return std::nullopt;
    return num / (c * c * (c * c + 2.0 * c + 1.0));
}

// Pole/zero anatomy of dR/dP0. With abar = P + 1/c^2, bbar = P + (1+P)/c^2,
// dbar = 2/c, ebar = 1 + 1/c^2 the derivative is
//   dR/dP0 = 1/2 * ((bd - 2aed - be) P0 + abd + 2b^2 - abe)
//            / ((d P0 + b)(P0 - a)(e P0 - b))          (rates in nats).
struct DerivativeAnatomy {
    double p1, p2, p3; // poles, p1 < 0 < P < p3 < p2
    double z1;         // zero of the numerator
};

struct SumRateDerivative {
    double value_bits; // d/dP0 of lower_bound_sum_rate, bits per power unit
    DerivativeAnatomy anatomy;
};

inline SumRateDerivative sum_rate_derivative(const ChannelParams& ch, double P0) {
    ch.validate();
    if (ch.c <= 0.0)
        throw std::domain_error("sum_rate_derivative: requires c > 0");
    if (!(P0 >= 0.0) || P0 > ch.P * (1.0 + 1e-15) + 1e-300)
        throw std::domain_error("sum_rate_derivative: P0 outside [0, P]");
    P0 = std::min(P0, ch.P);
    const double c = ch.c, c2 = c * c;
    const double a = ch.P + 1.0 / c2;
    const double b = ch.P + (1.0 + ch.P) / c2;
    const double d = 2.0 / c;
    const double e = 1.0 + 1.0 / c2;
    const double slope = b * d - 2.0 * a * e * d - b * e;
    const double intercept = a * b * d + 2.0 * b * b - a * b * e;
    const double num = slope * P0 + intercept;
    const double den = (d * P0 + b) * (P0 - a) * (e * P0 - b);
    SumRateDerivative r{};
    r.value_bits = 0.5 * (num / den) / std::log(2.0);
    r.anatomy.p1 = -b / d;
    r.anatomy.p2 = a;
    r.anatomy.p3 = b / e;
    // Exact root of the linear numerator. The quotient printed in the source
    // derivation does not reproduce this root; the root form is what satisfies
    // z1 <= 0  <=>  (c^4 + 2c^3 + c^2) P + c^2 + 2c - 1 <= 0.
    r.anatomy.z1 = -intercept / slope;
    return r;
}

// Rejection-samples Gamma_A points (c in [0, 1/2], P up to the c(1+c^2 P)<=1/2
// boundary) and counts Gamma_B violations. Expected count: zero.
struct RegionInclusionReport {
    std::size_t tested = 0;
    std::size_t violations = 0;
};

inline RegionInclusionReport verify_region_inclusion(std::size_t samples, std::uint64_t seed) {
    if (samples < 1)
        throw std::domain_error("verify_region_inclusion: samples must be >= 1");
    RegionInclusionReport rep;
    const double P_cap = 1e6;
    for (std::size_t i = 0; rep.tested < samples && i < 1000 * samples; ++i) {
        const double c = 0.5 * rand_u01(seed, 0, 2 * i);
        double P_max = P_cap;
        if (c > 1e-4) P_max = std::min(P_cap, (0.5 / c - 1.0) / (c * c));
        if (P_max < 0.0) continue;
        const double P = P_max * rand_u01(seed, 0, 2 * i + 1);
        ChannelParams ch{P, c};
        if (!in_gamma_A(ch)) continue;
        ++rep.tested;
        if (!in_gamma_B(ch)) ++rep.violations;
    }
    return rep;
}

} // namespace icb
