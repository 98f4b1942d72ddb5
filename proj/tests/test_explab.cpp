#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qlab/checks.hpp"
#include "qlab/errors.hpp"
#include "qlab/explab.hpp"
#include "qlab/report_io.hpp"

using namespace qlab;
using doctest::Approx;

namespace {

const SieveTables& tables() {
    static const auto t = build_sieve(1 << 22);
    return t;
}

ExperimentConfig bt_config(std::uint64_t X, std::uint64_t x) {
    ExperimentConfig c;
    c.mode = Mode::Bt;
    c.X = X;
    c.x = x;
    c.y_M = 47;
    c.sieve_limit = 1 << 22;
    return c;
}

ExperimentConfig hough_config() {
    ExperimentConfig c;
    c.mode = Mode::Hough;
    c.X = 1'000'000;
    c.x = 50;
    c.hough_overrides = {10.0, 100.0, 1e4};
    c.sieve_limit = 1 << 22;
    return c;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = Config::from_string("# comment\nX = 1e6\n  x=50 # trailing\n\nf = fixed_angle(pi/5)\n");
    CHECK(c.get_uint("X") == 1'000'000u);
    CHECK(c.get_uint("x") == 50u);
    CHECK(c.get("f") == "fixed_angle(pi/5)");
    CHECK_FALSE(c.get("alpha"));
    CHECK_THROWS_AS(Config::from_string("no equals sign"), ParseError);
    CHECK_THROWS_AS(Config::from_string(" = 3"), ParseError);
    CHECK_THROWS_AS(Config::from_file("/nonexistent/qlab.cfg"), ParseError);
}

TEST_CASE("numeric parsing") {
    CHECK(parse_real("e^2") == Approx(std::exp(2.0)));
    CHECK(parse_real(" 2.5 ") == 2.5);
    CHECK(parse_uint("250") == 250u);
    CHECK(parse_uint("1e6") == 1'000'000u);
    CHECK(parse_uint("18446744073709551615") == 18446744073709551615ull);
    CHECK_THROWS_AS(parse_uint("2.5"), UsageError);
    CHECK_THROWS_AS(parse_real("abc"), UsageError);
}

TEST_CASE("apply_config and validation") {
    ExperimentConfig base;
    base.mode = Mode::Bt;
    auto c = apply_config(base, Config::from_string("X = 10000\nx = 200\nkappa = 0.2\nym = 30\nworkers = 3"));
    CHECK(c.X == 10'000u);
    CHECK(c.kappa == 0.2);
    CHECK(c.y_M == 30u);
    CHECK(c.workers == 3u);
    CHECK_THROWS_AS(validate(c), UsageError);  // 200^2 > 10^4
    c.x = 100;
    CHECK_NOTHROW(validate(c));
    c.kappa = 0.6;
    CHECK_THROWS_AS(validate(c), UsageError);
    ExperimentConfig h = hough_config();
    h.alpha = 0.3;
    CHECK_THROWS_AS(validate(h), UsageError);
    CHECK_THROWS_AS(apply_config(base, Config::from_string("sieve_limit = 1")), UsageError);
}

TEST_CASE("reference curves") {
    const auto c = curves_log(100.0, 10.0);
    REQUIRE(c.weighted);
    CHECK(std::log(*c.weighted) == Approx(8.295051144911305).epsilon(1e-13));
    // sqrt(X)/x = e^40
    const auto z = curves_log(100.0, 10.0);
    REQUIRE(z.set);
    CHECK(std::log(*z.set) - 5.0 == Approx(3.762198587441616).epsilon(1e-13));
    CHECK_FALSE(curves_log(10.0, 4.0).set.has_value());
    double prev = 0.0;
    for (double lX = 3.0; lX < 300.0; lX += 7.0) {
        const double w = *curves_log(lX, 2.0).weighted;
        CHECK(w > prev);
        prev = w;
    }
    CHECK(curves(std::exp(100.0), std::exp(10.0)).weighted == Approx(*c.weighted).epsilon(1e-12));
}

TEST_CASE("range flags") {
    CHECK_FALSE(weighted_range_ok(std::log(1e6), std::log(50.0), 0.1));
    CHECK(set_range_ok(100.0, 40.0, 0.1));
    CHECK_FALSE(set_range_ok(100.0, 60.0, 0.1));
    CHECK_FALSE(set_range_ok(100.0, 5.0, 0.1));
}

TEST_CASE("bt cardinality and smoothness") {
    CHECK(bt_cardinality(1'000'000, 10, 0.1) == 25);
    CHECK(bt_cardinality(100, 50, 0.1) == 0);
    CHECK(default_smoothness_bound(256, 1.3) == 10);
    CHECK(default_smoothness_bound(16384, 1.3) == 20);
}

TEST_CASE("scan_max fixtures") {
    const auto one = CoefficientFunction::constant_one();
    const auto s = scan_max(2, 3, one, tables());
    CHECK(s.max_abs == 0.0);
    CHECK(s.argmax_d == -3);
    const auto t = scan_max(10, 1, one, tables());
    CHECK(t.max_abs == 1.0);
    CHECK(t.argmax_d == -11);  // every |S_d(1)| = 1; smallest |d| wins
    const auto big = scan_max(10'000, 50, one, tables());
    CHECK(big.discriminants == DiscriminantEnumerator(20'000).count(10'000, 20'000));
    double oracle = 0.0;
    for (const auto d : checks::dyadic_discriminants_naive(10'000)) {
        long long s = 0;
        for (std::int64_t n = 1; n <= 50; ++n) s += kronecker(d, n);
        oracle = std::max(oracle, std::abs(static_cast<double>(s)));
    }
    CHECK(big.max_abs == oracle);
    CHECK(big.max_abs == 40.0);  // regression value
}

TEST_CASE("weighted experiment end to end") {
    const auto run = run_hough_experiment(hough_config(), tables());
    CHECK(run.resonance_ok);
    CHECK_FALSE(run.degenerate);
    CHECK_FALSE(run.range_ok);
    CHECK(run.report.ratio <= run.report.scan_max * run.report.scan_max * (1 + 1e-9));
    CHECK(run.params.p_lo == 10.0);
    CHECK(run.resonator.support.size() > 21);
    CHECK(run.equal_product_ratio >= 1.0);
    CHECK(run.report.curve_weighted);
}

TEST_CASE("weighted experiment at x = 1") {
    auto c = hough_config();
    c.x = 1;
    const auto run = run_hough_experiment(c, tables());
    CHECK(run.report.ratio == Approx(1.0).epsilon(1e-12));
    CHECK(run.report.scan_max == 1.0);
}

TEST_CASE("set experiment end to end") {
    const auto run = run_bt_experiment(bt_config(1'000'000, 10), tables());
    CHECK(run.N_formula == 25);
    CHECK(run.N == 25);
    CHECK_FALSE(run.N_capped);
    CHECK(run.resonance_ok);
    CHECK(run.chain_ok);
    CHECK(run.split.head + run.split.tail == Approx(run.gcd_sum).epsilon(1e-9));
    CHECK(run.equal_products == total_equal_products(run.set, 10));

    auto capped = bt_config(1'000'000, 10);
    capped.max_N = 16;
    const auto c = run_bt_experiment(capped, tables());
    CHECK(c.N == 16);
    CHECK(c.N_capped);
}

TEST_CASE("set experiment at x = 1") {
    auto c = bt_config(10'000, 1);
    const auto run = run_bt_experiment(c, tables());
    CHECK(run.equal_products == run.N);
    CHECK(run.split.head == 0.0);
}

TEST_CASE("default smoothness bound is infeasible at desk scale") {
    auto c = bt_config(1'000'000, 10);
    c.y_M.reset();
    CHECK_THROWS_AS(run_bt_experiment(c, tables()), ResourceError);
}

TEST_CASE("reports are identical for 1 and 4 workers") {
    auto h = hough_config();
    auto b = bt_config(200'000, 7);
    b.f_spec = "archimedean(1)";
    std::string out[2];
    for (int i = 0; i < 2; ++i) {
        h.workers = b.workers = i == 0 ? 1 : 4;
        std::ostringstream os;
        write_csv_row(os, csv_fields(run_hough_experiment(h, tables())));
        write_csv_row(os, csv_fields(run_bt_experiment(b, tables())));
        os << to_json(run_bt_experiment(b, tables())).dump();
        out[i] = os.str();
    }
    CHECK(out[0] == out[1]);
}

TEST_CASE("csv and json emission") {
    MomentReport r;
    r.X = 10;
    r.x = 3;
    r.f_name = "fixed_angle(0.62831853071795862)";
    r.resonator_id = "set(N=2,y_M=3,T=2)";
    r.ratio = 0.1;
    std::ostringstream os;
    write_csv_header(os, moment_report_columns());
    write_csv_row(os, csv_fields(r));
    CHECK(os.str() ==
          "X,x,f_name,resonator_id,M1,M2,ratio,scan_max,argmax_d,curve_weighted,curve_set\n"
          "10,3,fixed_angle(0.62831853071795862),\"set(N=2,y_M=3,T=2)\",0,0,0.1,0,0,,\n");
    const auto j = to_json(r);
    CHECK(j["curve_set"].is_null());
    CHECK(j["ratio"] == 0.1);
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("verify rejects unknown suites") {
    CHECK_THROWS_AS(checks::verify("bogus"), UsageError);
}
