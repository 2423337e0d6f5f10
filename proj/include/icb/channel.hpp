#pragma once
// Symmetric two-user Gaussian interference channel with a common message:
//   Y1 = X1 + c*X2 + Z1,  Y2 = X2 + c*X1 + Z2,  Zk ~ N(0,1),  E[Xk^2] <= P.
// Direct evaluators for the superposition/TIN sum-rate lower bound, the
// genie-aided objective f, the useful-genie feasibility set, and the
// per-receiver MAC bounds. All rates are in bits per channel use (log base 2).

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace icb {

struct ChannelParams {
    double P = 0.0; // per-user transmit power, linear
    double c = 0.0; // cross-channel gain, linear, assumed >= 0

    void validate() const {
        if (!(P >= 0.0) || !std::isfinite(P))
            throw std::domain_error("ChannelParams: P must be finite and >= 0");
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::domain_error("ChannelParams: c must be finite and >= 0");
    }
};

// Common/private power split. P0 is the common-message power; P1, P2 are the
// private powers (conditional variances given the common message).
struct PowerAllocation {
    double P0 = 0.0;
    double P1 = 0.0;
    double P2 = 0.0;

    static PowerAllocation symmetric(const ChannelParams& ch, double P0) {
        return PowerAllocation{P0, ch.P - P0, ch.P - P0};
    }
    static PowerAllocation private_only(double P1, double P2) {
        return PowerAllocation{0.0, P1, P2};
    }

    bool is_symmetric() const { return P1 == P2; }

    void validate(const ChannelParams& ch) const {
        if (!(P0 >= 0.0 && P1 >= 0.0 && P2 >= 0.0))
            throw std::domain_error("PowerAllocation: powers must be >= 0");
        const double tol = 1e-12 * std::max(1.0, ch.P);
        if (P0 + P1 > ch.P + tol || P0 + P2 > ch.P + tol)
            throw std::domain_error("PowerAllocation: P0 + Pk exceeds P");
    }
};

// Genie parameters: squared noise-correlation coefficients a_k^2 in [0,1] and
// genie-noise variances v_k = Var(Z~_k) >= 0. a_k is the nonnegative root.
struct GenieParams {
    double a1_sq = 0.0;
    double a2_sq = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;

    void validate() const {
        auto bad = [](double x) { return !std::isfinite(x); };
        if (bad(a1_sq) || bad(a2_sq) || bad(v1) || bad(v2))
            throw std::domain_error("GenieParams: non-finite field");
        if (a1_sq < 0.0 || a1_sq > 1.0 || a2_sq < 0.0 || a2_sq > 1.0)
            throw std::domain_error("GenieParams: a_k^2 must lie in [0,1]");
        if (v1 < 0.0 || v2 < 0.0)
            throw std::domain_error("GenieParams: v_k must be >= 0");
    }
};

enum class BoundStatus { Matched, GapOpen, NoCertificate };

inline const char* to_string(BoundStatus s) {
    switch (s) {
        case BoundStatus::Matched: return "Matched";
        case BoundStatus::GapOpen: return "GapOpen";
        case BoundStatus::NoCertificate: return "NoCertificate";
    }
    return "?";
}

struct BoundReport {
    double lower_bits = 0.0;
    double upper_bits = std::numeric_limits<double>::infinity();
    double gap_bits = std::numeric_limits<double>::infinity();
    double optimal_P0 = 0.0;
    std::optional<GenieParams> certificate;
    bool in_gamma_A = false;
    bool in_gamma_B = false;
    bool smart_genie_solvable = false;
    BoundStatus status = BoundStatus::NoCertificate;
};

// Sum rate of the superposition coding scheme with P1 = P2 = P - P0 and
// interference treated as noise:
//   R(P0) = 1/2 [ log2(1 + (P1 + (1+c)^2 P0)/(c^2 P2 + 1))
//               + log2(1 + P2/(c^2 P1 + 1)) ].
inline double lower_bound_sum_rate(const ChannelParams& ch, double P0) {
    ch.validate();
    if (!(P0 >= 0.0) || P0 > ch.P * (1.0 + 1e-15) + 1e-300)
        throw std::domain_error("lower_bound_sum_rate: P0 outside [0, P]");
    P0 = std::min(P0, ch.P);
    const double c = ch.c, c2 = c * c;
    const double Pp = ch.P - P0; // private power per user
    const double t1 = 1.0 + (Pp + (1.0 + c) * (1.0 + c) * P0) / (c2 * Pp + 1.0);
    const double t2 = 1.0 + Pp / (c2 * Pp + 1.0);
    return 0.5 * (std::log2(t1) + std::log2(t2));
}

// Genie-aided objective
//   f = 1/4 [ log2((P + c^2 P + 2 c sqrt((P-P1)(P-P2)) + 1)^2
//                  / ((c^2 P1 + 1)(c^2 P2 + 1)))
//           + log2(((P1 + c^2 P2 + 1)(c^2 P1 + v1) - (c P1 + a1 sqrt(v1))^2)
//                  / ((c^2 P1 + 1 - a2^2) v1))
//           + log2(((P2 + c^2 P1 + 1)(c^2 P2 + v2) - (c P2 + a2 sqrt(v2))^2)
//                  / ((c^2 P2 + 1 - a1^2) v2)) ].
// Requires v1, v2 > 0; throws naming the offending term when a log argument
// degenerates.
inline double genie_objective_f(const ChannelParams& ch, const PowerAllocation& alloc,
                                const GenieParams& gp) {
    ch.validate();
    alloc.validate(ch);
    gp.validate();
    if (!(gp.v1 > 0.0))
        throw std::domain_error("genie_objective_f: term 2 requires v1 > 0");
    if (!(gp.v2 > 0.0))
        throw std::domain_error("genie_objective_f: term 3 requires v2 > 0");

    const double P = ch.P, c = ch.c, c2 = c * c;
    const double P1 = alloc.P1, P2 = alloc.P2;
    const double a1 = std::sqrt(gp.a1_sq), a2 = std::sqrt(gp.a2_sq);

    const double common = std::sqrt(std::max(0.0, (P - P1)) * std::max(0.0, (P - P2)));
    const double vy = P + c2 * P + 2.0 * c * common + 1.0;
    const double t1 = std::log2(vy * vy / ((c2 * P1 + 1.0) * (c2 * P2 + 1.0)));

    auto receiver_term = [&](double Pa, double Pb, double a_own, double a_other_sq,
                             double v, const char* which) {
        const double num = (Pa + c2 * Pb + 1.0) * (c2 * Pa + v)
                         - (c * Pa + a_own * std::sqrt(v)) * (c * Pa + a_own * std::sqrt(v));
        const double den = (c2 * Pa + 1.0 - a_other_sq) * v;
        if (!(num > 0.0) || !(den > 0.0))
            throw std::domain_error(std::string("genie_objective_f: nonpositive log argument in ")
                                    + which);
        return std::log2(num / den);
    };
    const double t2 = receiver_term(P1, P2, a1, gp.a2_sq, gp.v1, "term 2 (receiver 1)");
    const double t3 = receiver_term(P2, P1, a2, gp.a1_sq, gp.v2, "term 3 (receiver 2)");
    return 0.25 * (t1 + t2 + t3);
}

// Membership in the useful-genie feasible set A(P1, P2):
//   0 <= v1 <= 1 - a2^2,  sqrt((1 - a2^2 - v1)(1 - v1)) - v1 >= c^2 P1,
//   0 <= v2 <= 1 - a1^2,  sqrt((1 - a1^2 - v2)(1 - v2)) - v2 >= c^2 P2.
// A nonnegative tol relaxes every inequality by tol.
inline bool useful_genie_feasible(const ChannelParams& ch, const PowerAllocation& alloc,
                                  const GenieParams& gp, double tol = 0.0) {
    ch.validate();
    alloc.validate(ch);
    gp.validate();
    const double c2 = ch.c * ch.c;
    auto side = [&](double v, double a_other_sq, double Pk) {
        if (v < -tol || v > 1.0 - a_other_sq + tol) return false;
        const double s = std::sqrt(std::max(0.0, 1.0 - a_other_sq - v) * std::max(0.0, 1.0 - v));
        return s - v >= c2 * Pk - tol;
    };
    return side(gp.v1, gp.a2_sq, alloc.P1) && side(gp.v2, gp.a1_sq, alloc.P2);
}

// The six per-receiver MAC bounds with interference treated as noise, plus the
// sum rate min{a+b+e, b+d+e, c+e, b+f}. Requires a symmetric allocation.
struct MacBounds {
    double r0_rx1, r1_rx1, r01_rx1; // a, b, c at receiver 1
    double r0_rx2, r2_rx2, r02_rx2; // d, e, f at receiver 2
    double sum_bits;

    std::array<double, 6> as_array() const {
        return {r0_rx1, r1_rx1, r01_rx1, r0_rx2, r2_rx2, r02_rx2};
    }
};

inline MacBounds mac_sum_rate_closed_form(const ChannelParams& ch, const PowerAllocation& alloc) {
    ch.validate();
    alloc.validate(ch);
    if (alloc.P1 != alloc.P2)
        throw std::domain_error("mac_sum_rate_closed_form: allocation must be symmetric");
    const double c = ch.c, c2 = c * c;
    const double P0 = alloc.P0, P1 = alloc.P1, P2 = alloc.P2;
    const double g0 = (1.0 + c) * (1.0 + c) * P0;
    const double n1 = c2 * P2 + 1.0; // noise-plus-interference at receiver 1
    const double n2 = c2 * P1 + 1.0;
    MacBounds m{};
    m.r0_rx1 = 0.5 * std::log2(1.0 + g0 / n1);
    m.r1_rx1 = 0.5 * std::log2(1.0 + P1 / n1);
    m.r01_rx1 = 0.5 * std::log2(1.0 + (P1 + g0) / n1);
    m.r0_rx2 = 0.5 * std::log2(1.0 + g0 / n2);
    m.r2_rx2 = 0.5 * std::log2(1.0 + P2 / n2);
    m.r02_rx2 = 0.5 * std::log2(1.0 + (P2 + g0) / n2);
    const double cand1 = m.r0_rx1 + m.r1_rx1 + m.r2_rx2;
    const double cand2 = m.r1_rx1 + m.r0_rx2 + m.r2_rx2;
    const double cand3 = m.r01_rx1 + m.r2_rx2;
    const double cand4 = m.r1_rx1 + m.r02_rx2;
    m.sum_bits = std::min(std::min(cand1, cand2), std::min(cand3, cand4));
    return m;
}

} // namespace icb
