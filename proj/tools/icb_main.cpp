// Command-line surface for the interference-channel bound calculator:
//   icb bounds --P <power> --c <gain>      one-point bound report
//   icb sweep  ...                         (P, c) grid sweep to CSV
//   icb verify --suite <name>              cross-check property suites
//   icb fme    --eliminate v1,v2 ...       project a linear system
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "icb/channel.hpp"
#include "icb/fme.hpp"
#include "icb/optimizer.hpp"
#include "icb/regimes.hpp"
#include "icb/sweep.hpp"
#include "icb/verify.hpp"

namespace {

// Plain `key = value` config support; lines starting with '#' are comments.
// Command-line flags always win over file values.
struct ConfigKey {
    std::string name; // flag name without leading dashes
    std::function<void(const std::string&)> set;
};

// Returns 0 on success, 2 on malformed content or unknown keys, 3 on I/O error.
int apply_config_file(const CLI::App& sub, const std::string& path,
                      const std::vector<ConfigKey>& keys) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot read config file '" << path << "'\n";
        return 3;
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: " << path << ":" << lineno << ": expected key = value\n";
            return 2;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = std::find_if(keys.begin(), keys.end(),
                               [&](const ConfigKey& k) { return k.name == key; });
        if (it == keys.end()) {
            std::cerr << "error: " << path << ":" << lineno << ": unknown key '" << key << "'\n";
            return 2;
        }
        if (sub.count("--" + key) > 0) continue; // flag overrides file
        try {
            it->set(value);
        } catch (const std::exception&) {
            std::cerr << "error: " << path << ":" << lineno << ": bad value '" << value
                      << "' for '" << key << "'\n";
            return 2;
        }
    }
    return 0;
}

int write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return 3;
    }
    out << content;
    out.flush();
    if (!out) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return 3;
    }
    return 0;
}

std::string fmt(double x) { return icb::detail_csv::num(x); }

int run_bounds(double P, double c, int P0_steps, double tol, const icb::OptimizerConfig& ocfg,
               const std::string& out_path) {
    icb::ChannelParams ch{P, c};
    icb::BoundReport rep = icb::compute_bound_report(ch, ocfg, P0_steps, tol);
    auto sg = icb::smart_genie_solve(ch);

    auto line = [](const char* k, const std::string& v) {
        std::printf("%-18s %s\n", k, v.c_str());
    };
    line("P", fmt(P));
    line("c", fmt(c));
    line("in_gamma_A", rep.in_gamma_A ? "yes" : "no");
    line("in_gamma_B", rep.in_gamma_B ? "yes" : "no");
    line("smart_genie", rep.smart_genie_solvable ? "yes" : "no");
    if (sg) {
        line("genie_a_sq", fmt(sg->a_sq));
        line("genie_b_sq", fmt(sg->b_sq));
    }
    line("optimal_P0", fmt(rep.optimal_P0));
    line("lower_bits", fmt(rep.lower_bits));
    line("upper_bits", fmt(rep.upper_bits));
    line("gap_bits", fmt(rep.gap_bits));
    if (rep.certificate) {
        line("cert_a1_sq", fmt(rep.certificate->a1_sq));
        line("cert_a2_sq", fmt(rep.certificate->a2_sq));
        line("cert_v1", fmt(rep.certificate->v1));
        line("cert_v2", fmt(rep.certificate->v2));
    }
    line("status", icb::to_string(rep.status));

    if (!out_path.empty()) {
        icb::SweepConfig scfg;
        scfg.optimizer = ocfg;
        scfg.P0_steps = P0_steps;
        scfg.match_tol = tol;
        std::string csv = std::string(icb::kSweepCsvHeader) + "\n" + icb::sweep_csv_row(ch, scfg) + "\n";
        return write_text_file(out_path, csv);
    }
    return 0;
}

int cmd_sweep(const icb::SweepConfig& cfg) {
    std::string csv = icb::run_sweep(cfg);
    if (cfg.output_path.empty()) {
        std::fputs(csv.c_str(), stdout);
        return 0;
    }
    return write_text_file(cfg.output_path, csv);
}

int run_verify(const std::string& suite, std::uint64_t seed) {
    std::vector<icb::CheckResult> results;
    auto append = [&](std::vector<icb::CheckResult> v) {
        results.insert(results.end(), v.begin(), v.end());
    };
    if (suite == "identities" || suite == "all") append(icb::verify_identities(seed));
    if (suite == "regions" || suite == "all") append(icb::verify_regions(seed));
    if (suite == "optimizer" || suite == "all") append(icb::verify_optimizer(seed));
    if (suite == "fme" || suite == "all") append(icb::verify_fme(seed));
    if (results.empty()) {
        std::cerr << "error: unknown suite '" << suite
                  << "' (expected identities, regions, optimizer, fme, or all)\n";
        return 2;
    }
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("%-32s %s  checked=%zu failures=%zu max_residual=%.3g\n", r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.checked, r.failures, r.max_residual);
        all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", all_pass ? "all checks passed" : "some checks FAILED");
    return all_pass ? 0 : 1;
}

int run_fme(const std::string& input_path, const std::vector<std::string>& eliminate,
            const std::vector<std::string>& objective) {
    std::string text;
    if (input_path.empty() || input_path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(input_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot open '" << input_path << "'\n";
            return 3;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    icb::LinearSystem sys;
    try {
        sys = icb::parse_linear_system(text);
    } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    try {
        if (!eliminate.empty()) {
            auto proj = icb::fme_eliminate_all(sys, eliminate);
            std::printf("# eliminated:");
            for (const auto& v : proj.eliminated) std::printf(" %s", v.c_str());
            std::printf("  (redundant rows removed: %zu)\n", proj.redundant_removed);
            std::fputs(icb::format_system(proj.system).c_str(), stdout);
        }
        if (!objective.empty()) {
            auto opt = icb::max_sum_rate(sys, objective);
            switch (opt.status) {
                case icb::OptimumResult::Status::Value:
                    std::printf("max_sum = %s (~ %.12g)\n", icb::rat_to_string(opt.value).c_str(),
                                icb::rat_to_double(opt.value));
                    break;
                case icb::OptimumResult::Status::Unbounded:
                    std::printf("max_sum = unbounded\n");
                    break;
                case icb::OptimumResult::Status::Infeasible:
                    std::printf("max_sum = infeasible\n");
                    break;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sum-capacity bounds for the symmetric Gaussian interference channel "
                 "with common messages"};
    app.require_subcommand(1);

    // bounds
    double P = 0.0, c = 0.0, tol = 1e-4;
    int P0_steps = 101;
    icb::OptimizerConfig ocfg;
    std::string out_path, bounds_config;
    auto* bounds = app.add_subcommand("bounds", "Bound report for one (P, c) point");
    bounds->add_option("--P", P, "Transmit power per user")->required();
    bounds->add_option("--c", c, "Cross-channel gain")->required();
    bounds->add_option("--P0-steps", P0_steps, "Grid points for the P0 maximization");
    bounds->add_option("--tol", tol, "Match tolerance in bits");
    bounds->add_option("--seed", ocfg.seed, "Optimizer seed");
    bounds->add_option("--out", out_path, "Also write a CSV row to this path");
    bounds->add_option("--config", bounds_config, "key = value config file");

    // sweep
    icb::SweepConfig scfg;
    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "Grid sweep over (P, c) to CSV");
    sweep->add_option("--P-min", scfg.P_min, "Smallest P");
    sweep->add_option("--P-max", scfg.P_max, "Largest P");
    sweep->add_option("--P-steps", scfg.P_steps, "Grid points in P");
    sweep->add_option("--c-min", scfg.c_min, "Smallest c");
    sweep->add_option("--c-max", scfg.c_max, "Largest c");
    sweep->add_option("--c-steps", scfg.c_steps, "Grid points in c");
    sweep->add_option("--P0-steps", scfg.P0_steps, "Grid points for the P0 maximization");
    sweep->add_option("--tol", scfg.match_tol, "Match tolerance in bits");
    sweep->add_option("--seed", scfg.optimizer.seed, "Optimizer seed");
    sweep->add_option("--out", scfg.output_path, "Output CSV path (default: stdout)");
    sweep->add_option("--config", sweep_config, "key = value config file");

    // verify
    std::string suite, verify_config;
    std::uint64_t vseed = 1;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", suite, "identities | regions | optimizer | fme | all")
        ->required();
    verify->add_option("--seed", vseed, "Suite seed");
    verify->add_option("--config", verify_config, "key = value config file");

    // fme
    std::string fme_input;
    std::vector<std::string> fme_eliminate_vars, fme_objective;
    auto* fme = app.add_subcommand("fme", "Fourier-Motzkin projection of a linear system");
    fme->add_option("--input", fme_input, "System file ('-' or empty reads stdin)");
    fme->add_option("--eliminate", fme_eliminate_vars, "Variables to eliminate")->delimiter(',');
    fme->add_option("--max-sum", fme_objective, "Report max of this variable sum")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bounds->parsed()) {
            if (!bounds_config.empty()) {
                const std::vector<ConfigKey> keys{
                    {"P", [&](const std::string& v) { P = std::stod(v); }},
                    {"c", [&](const std::string& v) { c = std::stod(v); }},
                    {"P0-steps", [&](const std::string& v) { P0_steps = std::stoi(v); }},
                    {"tol", [&](const std::string& v) { tol = std::stod(v); }},
                    {"seed", [&](const std::string& v) { ocfg.seed = std::stoull(v); }},
                    {"out", [&](const std::string& v) { out_path = v; }},
                };
                if (int rc = apply_config_file(*bounds, bounds_config, keys)) return rc;
            }
            return run_bounds(P, c, P0_steps, tol, ocfg, out_path);
        }
        if (sweep->parsed()) {
            if (!sweep_config.empty()) {
                const std::vector<ConfigKey> keys{
                    {"P-min", [&](const std::string& v) { scfg.P_min = std::stod(v); }},
                    {"P-max", [&](const std::string& v) { scfg.P_max = std::stod(v); }},
                    {"P-steps", [&](const std::string& v) { scfg.P_steps = std::stoi(v); }},
                    {"c-min", [&](const std::string& v) { scfg.c_min = std::stod(v); }},
                    {"c-max", [&](const std::string& v) { scfg.c_max = std::stod(v); }},
                    {"c-steps", [&](const std::string& v) { scfg.c_steps = std::stoi(v); }},
                    {"P0-steps", [&](const std::string& v) { scfg.P0_steps = std::stoi(v); }},
                    {"tol", [&](const std::string& v) { scfg.match_tol = std::stod(v); }},
                    {"seed",
                     [&](const std::string& v) { scfg.optimizer.seed = std::stoull(v); }},
                    {"out", [&](const std::string& v) { scfg.output_path = v; }},
                };
                if (int rc = apply_config_file(*sweep, sweep_config, keys)) return rc;
            }
            return cmd_sweep(scfg);
        }
        if (verify->parsed()) {
            if (!verify_config.empty()) {
                const std::vector<ConfigKey> keys{
                    {"suite", [&](const std::string& v) { suite = v; }},
                    {"seed", [&](const std::string& v) { vseed = std::stoull(v); }},
                };
                if (int rc = apply_config_file(*verify, verify_config, keys)) return rc;
            }
            return run_verify(suite, vseed);
        }
        if (fme->parsed()) return run_fme(fme_input, fme_eliminate_vars, fme_objective);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
