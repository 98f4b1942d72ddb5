#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qlab/checks.hpp"
#include "qlab/errors.hpp"
#include "qlab/resonator.hpp"

using namespace qlab;
using doctest::Approx;

namespace {

const SieveTables& tables() {
    static const auto t = build_sieve(1 << 23);
    return t;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("weighted parameters at X = e^100, x = e^10") {
    const auto p = hough_params_log(100.0, 10.0, 0.1);
    CHECK(p.formula_log_y == Approx(20.0).epsilon(1e-15));
    CHECK(p.lambda == Approx(7.740455120409899).epsilon(1e-14));
    CHECK(p.p_lo == Approx(59.91464547107982).epsilon(1e-14));
    CHECK(p.p_hi == Approx(65.89091190814027).epsilon(1e-14));
    const auto window = tables().primes_between(static_cast<std::uint64_t>(std::ceil(p.p_lo)),
                                                static_cast<std::uint64_t>(std::floor(p.p_hi)));
    REQUIRE(window.size() == 1);
    CHECK(window[0] == 61);
    // log N = 80 against 3 lambda log log lambda = 16.629...
    CHECK(3.0 * p.lambda * std::log(std::log(p.lambda)) == Approx(16.62909163752888).epsilon(1e-13));
    CHECK(p.side_condition(80.0));
    CHECK_FALSE(p.side_condition(16.0));
}

TEST_CASE("weighted parameter domain") {
    CHECK_THROWS_AS(hough_params_log(2.0, 1.0, 0.1), DomainError);
    CHECK_THROWS_AS(hough_params_log(100.0, 10.0, 0.3), DomainError);
    CHECK_THROWS_AS(hough_params_log(100.0, 0.5, 0.1), DomainError);
    CHECK_THROWS_AS(hough_params(1e6, 50.0, 0.1), DomainError);  // y < e^e
}

TEST_CASE("overrides fix the window") {
    HoughOverrides o{10.0, 100.0, 1e6};
    const auto p = hough_params_log(100.0, 10.0, 0.1, o);
    CHECK(p.p_lo == 10.0);
    CHECK(p.p_hi == 100.0);
    CHECK(p.y() == Approx(1e6));
    CHECK(p.formula_log_y == Approx(20.0));
    CHECK(p.overrides.any());
}

TEST_CASE("weighted resonator support and weights") {
    const auto r = build_weighted_resonator(5.0, 10.0, 100.0, 500, tables());
    REQUIRE(!r.support.empty());
    CHECK(r.support.front() == ResonatorTerm{1, 1.0});
    auto find = [&](std::uint64_t n) {
        for (const auto& t : r.support)
            if (t.n == n) return t.r;
        return -1.0;
    };
    for (std::uint64_t p = 11; p <= 97; ++p)
        if (is_prime_trial(p)) CHECK(find(p) == Approx(hough_prime_weight(5.0, p)).epsilon(1e-12));
    const double expect = 5.0 / (std::sqrt(11.0) * std::log(11.0)) * 5.0 / (std::sqrt(13.0) * std::log(13.0));
    CHECK(find(143) == Approx(expect).epsilon(1e-12));
    CHECK(find(11 * 47) < 0.0);  // 517 > 500
    CHECK(find(2) < 0.0);
    for (std::size_t i = 1; i < r.support.size(); ++i) CHECK(r.support[i - 1].n < r.support[i].n);
}

TEST_CASE("weighted resonator degenerate windows") {
    const auto empty = build_weighted_resonator(5.0, 100.0, 10.0, 500, tables());
    CHECK(empty.empty_window);
    CHECK(empty.support == std::vector<ResonatorTerm>{{1, 1.0}});
    const auto small = build_weighted_resonator(5.0, 10.0, 12.0, 10, tables());
    CHECK(small.support == std::vector<ResonatorTerm>{{1, 1.0}});
}

TEST_CASE("set resonator fixtures") {
    const auto one = build_bt_set(1, 2, tables());
    CHECK(one.M == std::vector<std::uint64_t>{2});
    CHECK(one.window_start == 2);
    // {6, 7, 10} in [6, 12) and {14, 15, 21} in [12, 24); the pool product 210 caps the search.
    CHECK_THROWS_AS(build_bt_set(4, 7, tables()), ResourceError);
    const auto s = build_bt_set(4, 11, tables());
    CHECK(set_resonator_violations(s, 4).empty());
    CHECK(s.M.back() <= 2 * s.M.front());
    CHECK_THROWS_AS(build_bt_set(0, 11, tables()), DomainError);
}

TEST_CASE("set resonator violations are reported") {
    SetResonator bad;
    bad.y_M = 5;
    bad.M = {4, 7, 30};
    const auto issues = set_resonator_violations(bad, 4);
    CHECK(issues.size() == 4);  // cardinality, squarefree, smooth, dyadic
}

TEST_CASE("set resonator for larger N keeps the highest omega") {
    const auto s = build_bt_set(256, 41, tables());
    CHECK(s.N() == 256);
    CHECK(set_resonator_violations(s, 256).empty());
}

TEST_CASE("gcd sum fixtures") {
    SetResonator a;
    a.M = {1};
    CHECK(gcd_sum(a) == 1.0);
    a.M = {1, 2};
    CHECK(gcd_sum(a) == Approx(2.0 + std::numbers::sqrt2).epsilon(1e-15));
    CHECK(std::abs(gcd_sum(a) - 3.414213562373095) <= 1e-12);
    SetResonator b;
    b.M = {2, 3, 6};
    const double closed = 3.0 + 2.0 / std::sqrt(6.0) + 2.0 / std::sqrt(3.0) + 2.0 / std::sqrt(2.0);
    CHECK(std::abs(gcd_sum(b) - closed) <= 1e-12);
    CHECK(std::abs(gcd_sum(b) - 6.385410681680073) <= 1e-12);
    CHECK(gcd_term(4, 6) == Approx(2.0 / std::sqrt(24.0)));
}

TEST_CASE("gcd sum split fixtures") {
    SetResonator a;
    a.M = {1, 2};
    auto s = gcd_sum_split(a, 2.0);
    CHECK(s.head == Approx(2.0 + std::numbers::sqrt2));
    CHECK(s.tail == 0.0);
    SetResonator b;
    b.M = {2, 3, 6};
    s = gcd_sum_split(b, 2.0);
    CHECK(s.head == Approx(3.0 + 2.0 / std::sqrt(2.0)));
    CHECK(s.tail == Approx(2.0 / std::sqrt(6.0) + 2.0 / std::sqrt(3.0)));
    s = gcd_sum_split(b, 100.0);
    CHECK(s.tail == 0.0);
    CHECK_THROWS_AS(gcd_sum_split(b, 1.5), DomainError);
    CHECK(in_gcd_head(1, 2, 2.0));
    CHECK_FALSE(in_gcd_head(2, 3, 2.0));
}

TEST_CASE("gcd sum is independent of worker count") {
    const auto s = build_bt_set(1024, 47, tables());
    CHECK(gcd_sum(s, 1) == gcd_sum(s, 4));
    const auto a = gcd_sum_split(s, 30.0, 1);
    const auto b = gcd_sum_split(s, 30.0, 3);
    CHECK(a.head == b.head);
    CHECK(a.tail == b.tail);
}

TEST_CASE("equal-product ratio") {
    WeightedResonator trivial;
    trivial.support = {{1, 1.0}};
    for (const std::uint64_t N : {1u, 3u, 10u}) CHECK(rmrn_ratio(trivial, N, 5) == Approx(static_cast<double>(N)));
    WeightedResonator two;
    two.support = {{1, 1.0}, {7, 0.3}};
    CHECK(rmrn_ratio(two, 1, 10) == Approx(1.0));
    WeightedResonator syn;
    syn.support = {{1, 1.0}, {2, 1.0}};
    CHECK(rmrn_ratio(syn, 2, 2) == Approx(checks::rmrn_ratio_bruteforce(syn, 2, 2)).epsilon(1e-14));
    CHECK(rmrn_ratio(syn, 2, 2) == Approx(3.0));
    CHECK_THROWS_AS(rmrn_ratio(syn, 0, 2), DomainError);
}

TEST_CASE("equal-product reference curve") {
    const double y = std::exp(std::exp(2.0));
    CHECK(rmrn_reference(y, 1.0) == Approx(46.72274206040533).epsilon(1e-13));
    CHECK(rmrn_reference(y, 10.0) == Approx(467.2274206040533).epsilon(1e-13));
    CHECK(rmrn_reference(y, 6.0) == Approx(2.0 * rmrn_reference(y, 3.0)));
    CHECK_THROWS_AS(rmrn_reference(10.0, 1.0), DomainError);
}

TEST_CASE("resonator text round trip") {
    const auto w = build_weighted_resonator(4.0, 10.0, 50.0, 2000, tables());
    std::stringstream ws;
    write_resonator(ws, w);
    const auto back = read_resonator(ws);
    REQUIRE(std::holds_alternative<WeightedResonator>(back));
    CHECK(std::get<WeightedResonator>(back).support == w.support);

    const auto s = build_bt_set(16, 19, tables());
    std::stringstream ss;
    write_resonator(ss, s);
    const auto sback = read_resonator(ss);
    REQUIRE(std::holds_alternative<SetResonator>(sback));
    CHECK(std::get<SetResonator>(sback).M == s.M);

    std::stringstream bad("set\n5\n3\n");
    CHECK_THROWS_AS(read_resonator(bad), ParseError);
    std::stringstream junk("banana\n");
    CHECK_THROWS_AS(read_resonator(junk), ParseError);
    CHECK(resonator_id(w) != resonator_id(Resonator{s}));
}
