// Acceptance suite: end-to-end checks of the bound calculator at fixed
// tolerances, one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails. The sweep determinism criterion shells out to the real
// CLI; point it at the binary with ICB_BIN.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "icb/channel.hpp"
#include "icb/fme.hpp"
#include "icb/gaussian.hpp"
#include "icb/optimizer.hpp"
#include "icb/regimes.hpp"
#include "icb/rng.hpp"
#include "icb/sweep.hpp"
#include "icb/verify.hpp"

using namespace icb;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("%s  criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// 20 channels inside Gamma_A spanning P in [0.5, 50]: geometric P ladder,
// c a fixed fraction of the per-P regime boundary found by bisection.
std::vector<ChannelParams> regime_test_set() {
    std::vector<ChannelParams> out;
    const double fracs[4] = {0.35, 0.55, 0.75, 0.9};
    for (int i = 0; i < 20; ++i) {
        const double P = 0.5 * std::pow(100.0, i / 19.0);
        double lo = 0.0, hi = 0.5;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (in_gamma_A(ChannelParams{P, mid}) ? lo : hi) = mid;
        }
        out.push_back(ChannelParams{P, fracs[i % 4] * lo});
    }
    return out;
}

void criterion_1_and_2(const std::vector<ChannelParams>& set) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    OptimizerConfig cfg; // defaults
    double worst_gap = 0.0, worst_p0 = 0.0;
    bool pass1 = true;
    for (const auto& ch : set) {
        auto lb = maximize_lower_bound(ch, 101);
        auto ub = upper_bound_sum_capacity(ch, cfg);
        if (ub.no_certificate) { pass1 = false; continue; }
        worst_gap = std::max(worst_gap, std::fabs(ub.upper_bits - lb.lower_bits));
        worst_p0 = std::max(worst_p0, std::fabs(lb.optimal_P0));
        if (std::fabs(ub.upper_bits - lb.lower_bits) > 1e-4 || lb.optimal_P0 != 0.0) pass1 = false;
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (secs >= 60.0) pass1 = false;
    report(1, pass1,
           "in-regime matching on 20 channels: max |upper-lower| = " + fmt(worst_gap)
               + " bits (<= 1e-4), lower argmax P0 = 0, runtime " + fmt(secs) + " s (< 60)");

    double worst = 0.0;
    bool pass2 = true;
    for (const auto& ch : set) {
        auto sg = smart_genie_solve(ch);
        if (!sg) { pass2 = false; continue; }
        GenieParams gp{sg->a_sq, sg->a_sq, sg->b_sq, sg->b_sq};
        const double f = genie_objective_f(ch, PowerAllocation::private_only(ch.P, ch.P), gp);
        const double diff = std::fabs(f - lower_bound_sum_rate(ch, 0.0));
        worst = std::max(worst, diff);
        if (diff > 1e-10) pass2 = false;
    }
    report(2, pass2,
           "analytic certificate: max |f(smart genie) - lower(P0=0)| = " + fmt(worst)
               + " bits (<= 1e-10)");
}

void criterion_3(const std::vector<ChannelParams>& set) {
    const std::uint64_t seed = 0xacceb7;
    double worst_rel = 0.0;
    bool pass = true;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double P = rand_uniform(seed, 0, 8 * i, 0.1, 30.0);
        const double c = rand_uniform(seed, 0, 8 * i + 1, 0.0, 1.5);
        const double P1 = rand_uniform(seed, 0, 8 * i + 2, 0.0, P);
        GenieParams gp{rand_uniform(seed, 0, 8 * i + 4, 0.0, 0.98),
                       rand_uniform(seed, 0, 8 * i + 5, 0.0, 0.98),
                       rand_uniform(seed, 0, 8 * i + 6, 1e-4, 1.0),
                       rand_uniform(seed, 0, 8 * i + 7, 1e-4, 1.0)};
        ChannelParams ch{P, c};
        auto alloc = PowerAllocation::private_only(P1, P1);
        const double f = genie_objective_f(ch, alloc, gp);
        const double decomposed =
            lower_bound_sum_rate(ch, P - P1) + genie_gap(build_model(ch, alloc, gp));
        const double rel = std::fabs(f - decomposed) / std::max(1.0, std::fabs(f));
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-9) pass = false;
    }
    double worst_gap = 0.0;
    for (const auto& ch : set) {
        auto sg = smart_genie_solve(ch);
        if (!sg) { pass = false; continue; }
        GenieParams gp{sg->a_sq, sg->a_sq, sg->b_sq, sg->b_sq};
        const double gap = genie_gap(build_model(ch, PowerAllocation::private_only(ch.P, ch.P), gp));
        worst_gap = std::max(worst_gap, std::fabs(gap));
        if (std::fabs(gap) > 1e-10) pass = false;
    }
    report(3, pass,
           "gap identity: max rel residual " + fmt(worst_rel)
               + " (<= 1e-9) over 1000 draws; smart-genie gap <= " + fmt(worst_gap)
               + " bits (<= 1e-10)");
}

void criterion_4() {
    auto checks = verify_identities(0xacce4, 1000);
    double worst = 0.0;
    bool pass = false;
    for (const auto& r : checks)
        if (r.name == "f_identity_logdet") {
            pass = r.pass;
            worst = r.max_residual;
        }
    report(4, pass,
           "f-identity oracle: closed form vs log-det route, max rel residual " + fmt(worst)
               + " (<= 1e-9) over 1000 draws");
}

void criterion_5() {
    auto rep = verify_region_inclusion(10000, 0xacce5);
    bool pass = rep.tested == 10000 && rep.violations == 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const double c = rand_uniform(0xacce5, 1, i, 0.0, 3.0);
        const double lhs =
            ((((((c + 6.0) * c - 1.0) * c - 28.0) * c + 31.0) * c - 10.0) * c) + 1.0;
        const double t = c * c + 4.0 * c - 1.0;
        const double rhs = (c - 1.0) * (c - 1.0) * t * t;
        const double rel = std::fabs(lhs - rhs) / std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
        worst = std::max(worst, rel);
        if (rel > 1e-9) pass = false;
    }
    report(5, pass,
           "region inclusion: " + std::to_string(rep.violations) + "/"
               + std::to_string(rep.tested) + " violations; polynomial identity max rel "
               + fmt(worst) + " (<= 1e-9)");
}

void criterion_6() {
    const std::uint64_t seed = 0xacce6;
    bool pass = true;
    double worst_step = 0.0, worst_deriv = -1.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        ChannelParams ch = detail_verify::random_gamma_B_channel(seed, i);
        double prev = lower_bound_sum_rate(ch, 0.0);
        for (int k = 1; k < 1000; ++k) {
            const double cur = lower_bound_sum_rate(ch, ch.P * (k / 999.0));
            worst_step = std::max(worst_step, cur - prev);
            if (cur > prev + 1e-12) pass = false;
            prev = cur;
        }
        for (int k = 0; k < 1000; ++k) {
            const double d = sum_rate_derivative(ch, ch.P * (k / 999.0)).value_bits;
            worst_deriv = std::max(worst_deriv, d);
            if (d > 1e-12) pass = false;
        }
    }
    report(6, pass,
           "monotonicity on 50 Gamma_B channels: max upward step " + fmt(worst_step)
               + " (<= 1e-12), max derivative " + fmt(worst_deriv) + " (<= 1e-12)");
}

void criterion_7(const std::vector<ChannelParams>& set) {
    OptimizerConfig cfg; // defaults for the oracle comparison
    bool pass = true;
    double worst = 0.0;
    for (const auto& ch : set) {
        auto alloc = PowerAllocation::private_only(ch.P, ch.P);
        auto inner = inner_min_g(ch, alloc, cfg);
        auto oracle = brute_force_oracle(ch, alloc, 65);
        if (!inner || !oracle) { pass = false; continue; }
        const double diff = std::fabs(inner->value_bits - oracle->value_bits);
        worst = std::max(worst, diff);
        if (diff > 5e-3) pass = false;
    }

    OptimizerConfig light;
    light.outer_grid_points = 33;
    light.inner_multistarts = 6;
    light.inner_max_iters = 200;
    light.seed = 0xacce7;
    std::size_t checked = 0;
    double worst_order = 0.0;
    for (std::uint64_t i = 0; i < 500; ++i) {
        const double c = rand_uniform(0xacce7, 0, 2 * i, 0.01, 1.2);
        const double P = std::min(50.0, 0.95 / (c * c)) * rand_u01(0xacce7, 0, 2 * i + 1);
        ChannelParams ch{P, c};
        auto ub = upper_bound_sum_capacity(ch, light);
        if (ub.no_certificate) { pass = false; continue; }
        ++checked;
        const double lower = maximize_lower_bound(ch, 101).lower_bits;
        worst_order = std::max(worst_order, lower - ub.upper_bits);
        if (ub.upper_bits < lower - 1e-9) pass = false;
    }
    if (checked != 500) pass = false;
    report(7, pass,
           "optimizer soundness: max |inner - oracle(65)| = " + fmt(worst)
               + " bits (<= 5e-3) on 20 channels; upper >= lower - 1e-9 on "
               + std::to_string(checked) + "/500 random channels (max deficit "
               + fmt(worst_order) + ")");
}

void criterion_8() {
    auto checks = verify_fme(0xacce8, 10000, 200);
    bool formula = false, oracle = false, mac = false;
    double mac_resid = 0.0;
    for (const auto& r : checks) {
        if (r.name == "mac_min_formula") formula = r.pass && r.checked == 10000;
        if (r.name == "vertex_oracle_agreement") oracle = r.pass && r.checked == 200;
        if (r.name == "mac_system_two_routes") {
            mac = r.pass && r.checked == 100;
            mac_resid = r.max_residual;
        }
    }
    report(8, formula && oracle && mac,
           "FME: min-formula exact on 10000 six-tuples; vertex oracle exact on 200 systems; "
           "MAC route within " + fmt(mac_resid) + " bits (<= 1e-9) on 100 draws");
}

void criterion_9() {
    const char* bin = std::getenv("ICB_BIN");
    if (!bin || !*bin) {
        report(9, false, "sweep determinism: ICB_BIN not set, cannot drive the CLI");
        return;
    }
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string args = " sweep --P-min 1 --P-max 50 --P-steps 5 --c-min 0.01 --c-max 0.45"
                             " --c-steps 5 --seed 3 --out ";
    const std::string f1 = "acceptance_sweep_run1.csv";
    const std::string f2 = "acceptance_sweep_run2.csv";
    const std::string f3 = "acceptance_sweep_threads8.csv";
    int rc1 = std::system(("ICB_THREADS=1 '" + std::string(bin) + "'" + args + f1).c_str());
    int rc2 = std::system(("ICB_THREADS=1 '" + std::string(bin) + "'" + args + f2).c_str());
    int rc3 = std::system(("ICB_THREADS=8 '" + std::string(bin) + "'" + args + f3).c_str());
    const std::string a = slurp(f1), b = slurp(f2), c = slurp(f3);
    const bool pass = rc1 == 0 && rc2 == 0 && rc3 == 0 && !a.empty() && a == b && a == c;
    report(9, pass,
           "sweep determinism: " + std::to_string(a.size())
               + "-byte CSV byte-identical across two runs and across ICB_THREADS=1 vs 8");
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    auto set = regime_test_set();
    criterion_1_and_2(set);
    criterion_3(set);
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7(set);
    criterion_8();
    criterion_9();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
