#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "icb/fme.hpp"
#include "icb/verify.hpp"

using namespace icb;

namespace {
LinearSystem::Row canon(LinearSystem::Row r) {
    detail_fme::canonicalize(r);
    return r;
}

bool contains_row(const LinearSystem& sys, std::vector<Rat> coeff, Rat bound) {
    LinearSystem::Row want{std::move(coeff), std::move(bound)};
    want = canon(std::move(want));
    for (auto r : sys.rows) {
        r = canon(std::move(r));
        if (r.coeff == want.coeff && r.bound == want.bound) return true;
    }
    return false;
}
} // namespace

TEST_CASE("eliminating between opposite bounds leaves a consistent empty system") {
    LinearSystem sys;
    sys.variables = {"x"};
    sys.add_row({Rat(1)}, Rat(3));
    sys.add_row({Rat(-1)}, Rat(-1));
    auto proj = fme_eliminate(sys, "x");
    CHECK(proj.system.rows.empty()); // the 0 <= 2 row is trivially true
    CHECK(proj.redundant_removed == 1);
    CHECK(proj.eliminated == std::vector<std::string>{"x"});
}

TEST_CASE("one-sided rows vanish under elimination") {
    LinearSystem sys;
    sys.variables = {"x", "y"};
    sys.add_row({Rat(1), Rat(1)}, Rat(1));
    auto proj = fme_eliminate(sys, "x");
    CHECK(proj.system.variables == std::vector<std::string>{"y"});
    CHECK(proj.system.rows.empty()); // projection is the whole y-line
}

TEST_CASE("infeasible constant rows survive pruning") {
    LinearSystem sys;
    sys.variables = {"x"};
    sys.add_row({Rat(1)}, Rat(0));
    sys.add_row({Rat(-1)}, Rat(-1)); // x >= 1 contradicts x <= 0
    auto proj = fme_eliminate(sys, "x");
    REQUIRE(proj.system.rows.size() == 1);
    CHECK(proj.system.rows[0].bound < 0);
}

namespace {
LinearSystem mac_with_sum(Rat a, Rat b, Rat c, Rat d, Rat e, Rat f) {
    LinearSystem sys;
    sys.variables = {"R0", "R1", "R2", "s"};
    sys.add_row({Rat(1), Rat(0), Rat(0), Rat(0)}, a);
    sys.add_row({Rat(0), Rat(1), Rat(0), Rat(0)}, b);
    sys.add_row({Rat(1), Rat(1), Rat(0), Rat(0)}, c);
    sys.add_row({Rat(1), Rat(0), Rat(0), Rat(0)}, d);
    sys.add_row({Rat(0), Rat(0), Rat(1), Rat(0)}, e);
    sys.add_row({Rat(1), Rat(0), Rat(1), Rat(0)}, f);
    sys.add_row({Rat(-1), Rat(-1), Rat(-1), Rat(1)}, Rat(0)); // s <= R0+R1+R2
    sys.add_row({Rat(1), Rat(1), Rat(1), Rat(-1)}, Rat(0));   // s >= R0+R1+R2
    return sys;
}
} // namespace

TEST_CASE("partial elimination of the MAC system exposes the pairing structure") {
    Rat a(1), b(2), d(1), e(2);
    Rat c(5, 2), f(5, 2);
    c.canonicalize();
    f.canonicalize();
    auto sys = mac_with_sum(a, b, c, d, e, f);
    auto proj = fme_eliminate_all(sys, {"R1", "R2"});
    // over (R0, s): s - R0 <= b + e, s <= c + e = b + f, s + R0 <= c + f, R0 <= min(a, d)
    CHECK(proj.system.variables == std::vector<std::string>{"R0", "s"});
    CHECK(contains_row(proj.system, {Rat(-1), Rat(1)}, b + e));
    CHECK(contains_row(proj.system, {Rat(0), Rat(1)}, c + e));
    CHECK(contains_row(proj.system, {Rat(1), Rat(1)}, c + f));
    CHECK(contains_row(proj.system, {Rat(1), Rat(0)}, Rat(1)));
}

TEST_CASE("full elimination leaves the four-candidate minimum on the sum") {
    Rat a(1), b(2), d(3), e(4);
    Rat c(5, 2), f(13, 2);
    c.canonicalize();
    f.canonicalize();
    auto sys = mac_with_sum(a, b, c, d, e, f);
    auto proj = fme_eliminate_all(sys, {"R0", "R1", "R2"});
    REQUIRE(proj.system.variables == std::vector<std::string>{"s"});
    // min{a+b+e, b+d+e, c+e, b+f} = min{7, 9, 13/2, 17/2} = 13/2
    Rat expect(13, 2);
    expect.canonicalize();
    bool found = false;
    for (const auto& r : proj.system.rows) {
        REQUIRE(r.coeff[0] > 0);
        if (r.bound / r.coeff[0] == expect) found = true;
        CHECK(r.bound / r.coeff[0] >= expect);
    }
    CHECK(found);
}

TEST_CASE("max_sum_rate on the worked six-tuple") {
    Rat c(5, 2), f(5, 2);
    c.canonicalize();
    f.canonicalize();
    auto sys = mac_with_sum(Rat(1), Rat(2), c, Rat(1), Rat(2), f);
    sys.variables.pop_back(); // drop the adjoined s; max_sum_rate adds its own
    for (auto& r : sys.rows) r.coeff.pop_back();
    sys.rows.pop_back();
    sys.rows.pop_back();
    auto got = max_sum_rate(sys, {"R0", "R1", "R2"});
    REQUIRE(got.status == OptimumResult::Status::Value);
    Rat expect(9, 2);
    expect.canonicalize();
    CHECK(got.value == expect);
}

TEST_CASE("symmetric bounds with a + b >= c give b + f = c + e") {
    const std::uint64_t seed = 11;
    using detail_verify::random_rat;
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rat a = random_rat(seed, 0, 4 * i, 0, 6, 4);
        Rat b = random_rat(seed, 0, 4 * i + 1, 0, 6, 4);
        Rat c = a + b - random_rat(seed, 0, 4 * i + 2, 0, 3, 4);
        if (c < 0) c = a + b;
        LinearSystem sys;
        sys.variables = {"R0", "R1", "R2"};
        sys.add_row({Rat(1), Rat(0), Rat(0)}, a);
        sys.add_row({Rat(0), Rat(1), Rat(0)}, b);
        sys.add_row({Rat(1), Rat(1), Rat(0)}, c);
        sys.add_row({Rat(1), Rat(0), Rat(0)}, a);
        sys.add_row({Rat(0), Rat(0), Rat(1)}, b);
        sys.add_row({Rat(1), Rat(0), Rat(1)}, c);
        auto got = max_sum_rate(sys, {"R0", "R1", "R2"});
        REQUIRE(got.status == OptimumResult::Status::Value);
        CHECK(got.value == b + c);
    }
}

TEST_CASE("dropping a + b >= c moves the attaining candidate, min stays exact") {
    LinearSystem sys;
    sys.variables = {"R0", "R1", "R2"};
    sys.add_row({Rat(1), Rat(0), Rat(0)}, Rat(0)); // a = 0
    sys.add_row({Rat(0), Rat(1), Rat(0)}, Rat(0)); // b = 0
    sys.add_row({Rat(1), Rat(1), Rat(0)}, Rat(1)); // c = 1 > a + b
    sys.add_row({Rat(1), Rat(0), Rat(0)}, Rat(0)); // d = 0
    sys.add_row({Rat(0), Rat(0), Rat(1)}, Rat(2)); // e = 2
    sys.add_row({Rat(1), Rat(0), Rat(1)}, Rat(1)); // f = 1
    auto got = max_sum_rate(sys, {"R0", "R1", "R2"});
    REQUIRE(got.status == OptimumResult::Status::Value);
    CHECK(got.value == Rat(1)); // b + f, not c + e = 3
    LinearSystem boxed = sys;
    for (int v = 0; v < 3; ++v) {
        std::vector<Rat> dn(3, Rat(0));
        dn[static_cast<std::size_t>(v)] = -1;
        boxed.add_row(std::move(dn), Rat(50));
    }
    auto oracle = vertex_enumeration_max(boxed, {Rat(1), Rat(1), Rat(1)});
    REQUIRE(oracle.status == OptimumResult::Status::Value);
    CHECK(oracle.value == got.value);
}

TEST_CASE("nonnegativity rows do not change the MAC maximum") {
    ChannelParams ch{10.0, 0.1};
    auto sys = mac_system_from_channel(ch, PowerAllocation::symmetric(ch, 0.0));
    auto base = max_sum_rate(sys, {"R0", "R1", "R2"});
    for (int v = 0; v < 3; ++v) {
        std::vector<Rat> dn(3, Rat(0));
        dn[static_cast<std::size_t>(v)] = -1;
        sys.add_row(std::move(dn), Rat(0)); // R >= 0
    }
    auto with_nonneg = max_sum_rate(sys, {"R0", "R1", "R2"});
    REQUIRE(base.status == OptimumResult::Status::Value);
    REQUIRE(with_nonneg.status == OptimumResult::Status::Value);
    CHECK(base.value == with_nonneg.value);
}

TEST_CASE("unbounded objectives are reported as unbounded") {
    LinearSystem sys;
    sys.variables = {"x", "y"};
    sys.add_row({Rat(1), Rat(1)}, Rat(1));
    auto bounded = max_sum_rate(sys, {"x", "y"});
    REQUIRE(bounded.status == OptimumResult::Status::Value);
    CHECK(bounded.value == Rat(1));
    auto unbounded = max_sum_rate(sys, {"x"});
    CHECK(unbounded.status == OptimumResult::Status::Unbounded);
}

TEST_CASE("mac_system_from_channel reproduces the lower bound") {
    ChannelParams ch{10.0, 0.1};
    auto sys = mac_system_from_channel(ch, PowerAllocation::symmetric(ch, 0.0));
    auto got = max_sum_rate(sys, {"R0", "R1", "R2"});
    REQUIRE(got.status == OptimumResult::Status::Value);
    CHECK(rat_to_double(got.value)
          == Catch::Approx(lower_bound_sum_rate(ch, 0.0)).margin(1e-9));

    ChannelParams ch0{10.0, 0.0};
    auto sys0 = mac_system_from_channel(ch0, PowerAllocation::symmetric(ch0, 5.0));
    auto got0 = max_sum_rate(sys0, {"R0", "R1", "R2"});
    REQUIRE(got0.status == OptimumResult::Status::Value);
    CHECK(rat_to_double(got0.value)
          == Catch::Approx(lower_bound_sum_rate(ch0, 5.0)).margin(1e-9));

    ChannelParams chz{0.0, 0.5};
    auto sysz = mac_system_from_channel(chz, PowerAllocation::symmetric(chz, 0.0));
    auto gotz = max_sum_rate(sysz, {"R0", "R1", "R2"});
    REQUIRE(gotz.status == OptimumResult::Status::Value);
    CHECK(gotz.value == Rat(0));
}

TEST_CASE("row explosion guard trips with a diagnostic") {
    // 320 x 320 opposite-sign pairs exceed the limit in a single step
    LinearSystem sys;
    sys.variables = {"x", "y"};
    for (int r = 0; r < 320; ++r) {
        Rat up(1, 1 + r % 7), dn(-1, 1 + r % 5);
        up.canonicalize();
        dn.canonicalize();
        sys.add_row({up, Rat(1 + r)}, Rat(r));
        sys.add_row({dn, Rat(2 + r)}, Rat(r));
    }
    CHECK_THROWS_WITH(fme_eliminate(sys, "x"),
                      Catch::Matchers::ContainsSubstring("row count"));
}

TEST_CASE("text format round-trips and rejects malformed lines") {
    const std::string text = "1*R0 + 1*R1 <= 5/2\n-1/3*R1 + 2*R2 <= 4\n# comment\n\n0*R0 <= 1\n";
    auto sys = parse_linear_system(text);
    CHECK(sys.variables == std::vector<std::string>{"R0", "R1", "R2"});
    REQUIRE(sys.rows.size() == 3);
    Rat half5(5, 2);
    half5.canonicalize();
    CHECK(sys.rows[0].bound == half5);
    Rat third(-1, 3);
    third.canonicalize();
    CHECK(sys.rows[1].coeff[1] == third);
    auto reparsed = parse_linear_system(format_system(sys));
    REQUIRE(reparsed.rows.size() == sys.rows.size());
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        CHECK(canon(reparsed.rows[i]).coeff == canon(sys.rows[i]).coeff);
        CHECK(canon(reparsed.rows[i]).bound == canon(sys.rows[i]).bound);
    }

    CHECK_THROWS_WITH(parse_linear_system("1*x + 2*y\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(parse_linear_system("1*x <= 1\nx <= 2\n"),
                      Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse_linear_system("1*x + <= 2\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(parse_linear_system("1/0*x <= 2\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(parse_linear_system("1*x <= 2 3\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
}

TEST_CASE("rationalization rejects non-finite values") {
    CHECK_THROWS_AS(rat_from_double(std::numeric_limits<double>::infinity()), std::domain_error);
    CHECK_THROWS_AS(rat_from_double(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    // doubles rationalize exactly
    CHECK(rat_to_double(rat_from_double(0.1)) == 0.1);
    Rat tenth = rat_from_double(0.1);
    CHECK(tenth * 10 != Rat(1)); // 0.1 is not exactly 1/10 in binary
}

TEST_CASE("variable registration deduplicates names") {
    LinearSystem sys;
    CHECK(sys.add_variable("x") == 0);
    CHECK(sys.add_variable("y") == 1);
    CHECK(sys.add_variable("x") == 0);
    CHECK(sys.variables.size() == 2);
}

TEST_CASE("bulk FME properties") {
    for (auto& r : verify_fme(2025, 2000, 60)) {
        INFO(r.name);
        CHECK(r.pass);
    }
}
