#pragma once
// Bound reports for single (P, c) points and deterministic CSV sweeps over a
// parameter grid. Sweep cells are pure functions of (cell, config, seed); rows
// are emitted in row-major order (P outer, c inner) whatever the thread count,
// so output is byte-identical across runs.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "icb/channel.hpp"
#include "icb/optimizer.hpp"
#include "icb/parallel.hpp"
#include "icb/regimes.hpp"

namespace icb {

// Maximizes the superposition sum rate over the common-power split: P0 grid
// scan plus golden-section refinement around the best bracket (monotonicity in
// P0 holds only inside Gamma_B, so it is not assumed). Ties resolve to the
// smallest P0.
struct LowerBoundResult {
    double lower_bits = 0.0;
    double optimal_P0 = 0.0;
};

inline LowerBoundResult maximize_lower_bound(const ChannelParams& ch, int P0_steps,
                                             double value_tol = 1e-9) {
    ch.validate();
    if (P0_steps < 1) throw std::domain_error("maximize_lower_bound: P0_steps must be >= 1");
    if (ch.P == 0.0) return {0.0, 0.0};
    const int n = std::max(2, P0_steps);
    std::vector<std::pair<double, double>> evals;
    evals.reserve(static_cast<std::size_t>(n) + 64);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        const double P0 = ch.P * static_cast<double>(i) / (n - 1);
        evals.emplace_back(P0, lower_bound_sum_rate(ch, P0));
        if (evals[static_cast<std::size_t>(i)].second > evals[static_cast<std::size_t>(best)].second)
            best = i;
    }
    double lo = evals[static_cast<std::size_t>(std::max(0, best - 1))].first;
    double hi = evals[static_cast<std::size_t>(std::min(n - 1, best + 1))].first;
    const double gold = 0.6180339887498949;
    double x1 = hi - gold * (hi - lo), x2 = lo + gold * (hi - lo);
    double f1 = lower_bound_sum_rate(ch, x1), f2 = lower_bound_sum_rate(ch, x2);
    evals.emplace_back(x1, f1);
    evals.emplace_back(x2, f2);
    for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, ch.P); ++it) {
        if (f1 >= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gold * (hi - lo);
            f1 = lower_bound_sum_rate(ch, x1);
            evals.emplace_back(x1, f1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gold * (hi - lo);
            f2 = lower_bound_sum_rate(ch, x2);
            evals.emplace_back(x2, f2);
        }
    }
    LowerBoundResult out;
    for (const auto& [p0, v] : evals)
        if (v > out.lower_bits) { out.lower_bits = v; out.optimal_P0 = p0; }
    for (const auto& [p0, v] : evals)
        if (v >= out.lower_bits - value_tol && p0 < out.optimal_P0) out.optimal_P0 = p0;
    return out;
}

inline BoundReport compute_bound_report(const ChannelParams& ch, const OptimizerConfig& cfg,
                                        int P0_steps = 101, double match_tol = 1e-4) {
    ch.validate();
    BoundReport rep;
    LowerBoundResult lb = maximize_lower_bound(ch, P0_steps);
    rep.lower_bits = lb.lower_bits;
    rep.optimal_P0 = lb.optimal_P0;
    rep.in_gamma_A = in_gamma_A(ch);
    rep.in_gamma_B = in_gamma_B(ch);
    rep.smart_genie_solvable = smart_genie_solve(ch).has_value();
    UpperBoundResult ub = upper_bound_sum_capacity(ch, cfg);
    if (ub.no_certificate) {
        rep.upper_bits = std::numeric_limits<double>::infinity();
        rep.gap_bits = std::numeric_limits<double>::infinity();
        rep.status = BoundStatus::NoCertificate;
        return rep;
    }
    rep.upper_bits = ub.upper_bits;
    rep.gap_bits = ub.upper_bits - rep.lower_bits;
    if (ub.certificate) rep.certificate = ub.certificate->gp;
    rep.status = rep.gap_bits <= match_tol ? BoundStatus::Matched : BoundStatus::GapOpen;
    return rep;
}

struct SweepConfig {
    double P_min = 1.0, P_max = 50.0;
    int P_steps = 5;
    double c_min = 0.01, c_max = 0.45;
    int c_steps = 5;
    int P0_steps = 101;
    double match_tol = 1e-4;
    OptimizerConfig optimizer;
    std::string output_path; // empty = stdout

    void validate() const {
        if (P_min > P_max || c_min > c_max)
            throw std::domain_error("SweepConfig: min exceeds max");
        if (P_steps < 1 || c_steps < 1 || P0_steps < 1)
            throw std::domain_error("SweepConfig: steps must be >= 1");
        if (c_min < 0.0 || P_min < 0.0)
            throw std::domain_error("SweepConfig: P_min and c_min must be >= 0");
        optimizer.validate();
    }
};

namespace detail_csv {
// 12 significant digits; infinities as "inf", NaN as "nan".
inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}
} // namespace detail_csv

inline const char* kSweepCsvHeader =
    "P,c,in_gamma_A,in_gamma_B,smart_genie,optimal_P0,lower_bits,upper_bits,gap_bits,"
    "genie_a_sq,genie_b_sq,status";

inline std::string sweep_csv_row(const ChannelParams& ch, const SweepConfig& cfg) {
    using detail_csv::num;
    BoundReport rep = compute_bound_report(ch, cfg.optimizer, cfg.P0_steps, cfg.match_tol);
    auto sg = smart_genie_solve(ch);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::string row;
    row += num(ch.P) + "," + num(ch.c) + ",";
    row += std::string(rep.in_gamma_A ? "1" : "0") + "," + (rep.in_gamma_B ? "1" : "0") + ",";
    row += std::string(rep.smart_genie_solvable ? "1" : "0") + ",";
    row += num(rep.optimal_P0) + "," + num(rep.lower_bits) + "," + num(rep.upper_bits) + ","
         + num(rep.gap_bits) + ",";
    row += num(sg ? sg->a_sq : nan) + "," + num(sg ? sg->b_sq : nan) + ",";
    row += to_string(rep.status);
    return row;
}

// Full sweep as one CSV string. Cells run concurrently; the row order is
// row-major (P outer, c inner) regardless.
inline std::string run_sweep(const SweepConfig& cfg, unsigned threads = 0) {
    cfg.validate();
    std::vector<ChannelParams> cells;
    for (int i = 0; i < cfg.P_steps; ++i) {
        const double P = cfg.P_steps == 1
                             ? cfg.P_min
                             : cfg.P_min + (cfg.P_max - cfg.P_min) * i / (cfg.P_steps - 1);
        for (int j = 0; j < cfg.c_steps; ++j) {
            const double c = cfg.c_steps == 1
                                 ? cfg.c_min
                                 : cfg.c_min + (cfg.c_max - cfg.c_min) * j / (cfg.c_steps - 1);
            cells.push_back(ChannelParams{P, c});
        }
    }
    std::vector<std::string> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) { rows[i] = sweep_csv_row(cells[i], cfg); },
                 threads);
    std::string out = std::string(kSweepCsvHeader) + "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

} // namespace icb
