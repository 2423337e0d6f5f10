// Drives the installed CLI binary (path in ICB_BIN) end to end: subcommand
// output, exit codes, config files, and stdin-fed projections.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() {
    const char* b = std::getenv("ICB_BIN");
    REQUIRE(b != nullptr);
    return b;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& cmd) {
    const std::string path = "cli_test_output.txt";
    const int rc = std::system((cmd + " > " + path + " 2>&1").c_str());
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return RunResult{WEXITSTATUS(rc), ss.str()};
}

} // namespace

TEST_CASE("bounds reports a matched in-regime point") {
    auto r = run(bin() + " bounds --P 10 --c 0.1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("status             Matched") != std::string::npos);
    CHECK(r.out.find("optimal_P0         0\n") != std::string::npos);
    CHECK(r.out.find("3.33498424771") != std::string::npos);
}

TEST_CASE("bounds reports a vacuous outer bound as inf") {
    auto r = run(bin() + " bounds --P 10 --c 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("upper_bits         inf") != std::string::npos);
    CHECK(r.out.find("NoCertificate") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run(bin() + " bounds --P 10").exit_code == 2);          // missing --c
    CHECK(run(bin() + " bounds --P 10 --c 0.1 --bogus").exit_code == 2);
    CHECK(run(bin() + " nonsense").exit_code == 2);
    CHECK(run(bin() + " verify --suite unknown_suite").exit_code == 2);
    CHECK(run(bin() + " bounds --P -3 --c 0.1").exit_code == 2);  // invalid value
}

TEST_CASE("unwritable output exits with 3") {
    auto r = run(bin() + " sweep --P-steps 1 --c-steps 1 --out /nonexistent_dir/x.csv");
    CHECK(r.exit_code == 3);
}

TEST_CASE("verify exits 0 on pass and prints per-check lines") {
    auto r = run(bin() + " verify --suite fme --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("mac_min_formula") != std::string::npos);
    CHECK(r.out.find("vertex_oracle_agreement") != std::string::npos);
    CHECK(r.out.find("all checks passed") != std::string::npos);
}

TEST_CASE("sweep honors a key = value config file overridden by flags") {
    {
        std::ofstream cfg("cli_test_sweep.cfg");
        cfg << "P-min = 2\n"
            << "P-max = 2\n"
            << "P-steps = 1\n"
            << "c-min = 0.05\n"
            << "c-max = 0.45\n"
            << "c-steps = 2\n"
            << "seed = 11\n";
    }
    auto r = run(bin() + " sweep --config cli_test_sweep.cfg --c-steps 1");
    CHECK(r.exit_code == 0);
    std::size_t lines = 0;
    for (char ch : r.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 2); // header + single row: flag overrode the config's c-steps
    CHECK(r.out.find("\n2,0.05,") != std::string::npos);
}

TEST_CASE("fme subcommand projects a system from stdin") {
    auto r = run("printf '2*x <= 3\\n-1*x + 1*y <= 1\\n' | " + bin() + " fme --eliminate x");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1*y <= 5/2") != std::string::npos);

    auto bad = run("printf 'garbage\\n' | " + bin() + " fme --eliminate x");
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.find("line 1") != std::string::npos);

    auto sum = run("printf '1*R0 <= 1\\n1*R1 <= 2\\n1*R0 + 1*R1 <= 5/2\\n1*R0 <= 1\\n"
                   "1*R2 <= 2\\n1*R0 + 1*R2 <= 5/2\\n' | "
                   + bin() + " fme --max-sum R0,R1,R2");
    CHECK(sum.exit_code == 0);
    CHECK(sum.out.find("max_sum = 9/2") != std::string::npos);
}
