#include "qlab/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "qlab/errors.hpp"
#include "qlab/explab.hpp"
#include "qlab/moments.hpp"
#include "qlab/report_io.hpp"

namespace qlab::checks {

int euler_criterion(std::int64_t d, std::uint64_t p) {
    const auto pi = static_cast<std::int64_t>(p);
    unsigned __int128 base = static_cast<std::uint64_t>(((d % pi) + pi) % pi);
    unsigned __int128 acc = 1;
    for (std::uint64_t e = (p - 1) / 2; e; e >>= 1) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
    }
    const auto r = static_cast<std::uint64_t>(acc);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

double pairwise_min_cos(const std::vector<Complex>& values, std::uint64_t L) {
    double best = 1.0;
    for (std::uint64_t m = 1; m <= L; ++m)
        for (std::uint64_t n = 1; n <= L; ++n)
            best = std::min(best, (values[n] * std::conj(values[m])).real());
    return best;
}

std::uint64_t equal_products_bruteforce(std::uint64_t m, std::uint64_t n, std::uint64_t x) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= x; ++a)
        for (std::uint64_t b = 1; b <= x; ++b)
            if (a * m == b * n) ++count;
    return count;
}

double rmrn_ratio_bruteforce(const WeightedResonator& r, std::uint64_t N, std::uint64_t Y) {
    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto& [m, rm] : r.support) {
        if (m > Y) continue;
        denominator += rm * rm;
        for (const auto& [n, rn] : r.support) {
            if (n > Y) continue;
            for (std::uint64_t k = 1; k <= N; ++k)
                for (std::uint64_t l = 1; l <= N; ++l)
                    if (m * k == n * l) numerator += rm * rn;
        }
    }
    return numerator / denominator;
}

std::vector<std::int64_t> dyadic_discriminants_naive(std::uint64_t X) {
    std::vector<std::int64_t> out;
    for (std::uint64_t a = X + 1; a <= 2 * X; ++a)
        for (const std::int64_t d : {static_cast<std::int64_t>(a), -static_cast<std::int64_t>(a)})
            if (is_fundamental_discriminant(d)) out.push_back(d);
    return out;
}

namespace {

std::vector<Complex> term_coefficients(const std::vector<ResonatorTerm>& terms,
                                       const CoefficientFunction& f, const SieveTables& tables) {
    std::vector<Complex> c;
    for (const auto& t : terms) c.push_back(eval_at(f, t.n, tables) * t.r);
    return c;
}

}  // namespace

double m1_by_expansion(const std::vector<ResonatorTerm>& terms, std::uint64_t X,
                       const CoefficientFunction& f, const SieveTables& tables) {
    const auto ds = dyadic_discriminants_naive(X);
    const auto c = term_coefficients(terms, f, tables);
    std::map<std::uint64_t, Complex> by_product;
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = 0; j < terms.size(); ++j)
            by_product[terms[i].n * terms[j].n] += c[i] * std::conj(c[j]);
    Complex total{0.0, 0.0};
    for (const auto& [k, coeff] : by_product) {
        long long char_total = 0;
        for (const auto d : ds) char_total += kronecker(d, static_cast<std::int64_t>(k));
        total += coeff * static_cast<double>(char_total);
    }
    return total.real();
}

double m2_by_expansion(const std::vector<ResonatorTerm>& terms, std::uint64_t X, std::uint64_t x,
                       const CoefficientFunction& f, const SieveTables& tables) {
    const auto ds = dyadic_discriminants_naive(X);
    const auto c = term_coefficients(terms, f, tables);
    std::map<std::uint64_t, Complex> ab;
    for (std::uint64_t a = 1; a <= x; ++a)
        for (std::uint64_t b = 1; b <= x; ++b)
            ab[a * b] += eval_at(f, a, tables) * std::conj(eval_at(f, b, tables));
    std::map<std::uint64_t, Complex> mn;
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = 0; j < terms.size(); ++j)
            mn[terms[i].n * terms[j].n] += c[i] * std::conj(c[j]);
    std::map<std::uint64_t, Complex> by_product;
    for (const auto& [u, cu] : ab)
        for (const auto& [v, cv] : mn) by_product[u * v] += cu * cv;
    Complex total{0.0, 0.0};
    for (const auto& [k, coeff] : by_product) {
        long long char_total = 0;
        for (const auto d : ds) char_total += kronecker(d, static_cast<std::int64_t>(k));
        total += coeff * static_cast<double>(char_total);
    }
    return total.real();
}

double m1_by_definition(const std::vector<ResonatorTerm>& terms, std::uint64_t X,
                        const CoefficientFunction& f, const SieveTables& tables) {
    const auto c = term_coefficients(terms, f, tables);
    double total = 0.0;
    for (const auto d : dyadic_discriminants_naive(X)) {
        Complex R{0.0, 0.0};
        for (std::size_t i = 0; i < terms.size(); ++i)
            R += c[i] * static_cast<double>(kronecker(d, static_cast<std::int64_t>(terms[i].n)));
        total += std::norm(R);
    }
    return total;
}

double m2_by_definition(const std::vector<ResonatorTerm>& terms, std::uint64_t X, std::uint64_t x,
                        const CoefficientFunction& f, const SieveTables& tables) {
    const auto c = term_coefficients(terms, f, tables);
    double total = 0.0;
    for (const auto d : dyadic_discriminants_naive(X)) {
        Complex R{0.0, 0.0};
        for (std::size_t i = 0; i < terms.size(); ++i)
            R += c[i] * static_cast<double>(kronecker(d, static_cast<std::int64_t>(terms[i].n)));
        Complex S{0.0, 0.0};
        for (std::uint64_t n = 1; n <= x; ++n)
            S += eval_at(f, n, tables) * static_cast<double>(kronecker(d, static_cast<std::int64_t>(n)));
        total += std::norm(S) * std::norm(R);
    }
    return total;
}

bool VerifySummary::all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

using Property = std::function<Outcome()>;

double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::vector<CoefficientFunction> builtin_corpus() {
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::map<std::uint64_t, double> table;
    for (const std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29}) table[p] = angle(rng);
    return {CoefficientFunction::constant_one(), CoefficientFunction::liouville(),
            CoefficientFunction::fixed_angle(std::numbers::pi / 5), CoefficientFunction::archimedean(1.0),
            CoefficientFunction::prime_table("prime_table(random)", table)};
}

// ---- arith ----

Outcome sieve_invariants() {
    const auto tables = build_sieve(100'000);
    std::vector<std::uint32_t> trial_primes;
    for (std::uint64_t n = 2; n <= tables.limit(); ++n) {
        const auto p = tables.spf(n);
        if (!is_prime_trial(p) || n % p) return {false, "spf(" + std::to_string(n) + ") wrong"};
        if (is_prime_trial(n)) trial_primes.push_back(static_cast<std::uint32_t>(n));
        int mu = 1;
        std::uint64_t rest = n;
        for (std::uint64_t q = 2; q * q <= rest; ++q) {
            if (rest % q) continue;
            rest /= q;
            if (rest % q == 0) {
                mu = 0;
                break;
            }
            mu = -mu;
        }
        if (mu != 0 && rest > 1) mu = -mu;
        if (tables.mobius(n) != mu) return {false, "mobius(" + std::to_string(n) + ") wrong"};
    }
    const auto primes = tables.primes();
    if (!std::equal(primes.begin(), primes.end(), trial_primes.begin(), trial_primes.end()))
        return {false, "prime list differs from trial division"};
    return {true, "limit 100000"};
}

std::vector<std::int64_t> fundamentals_up_to(std::int64_t bound, std::int64_t min_abs = 1) {
    std::vector<std::int64_t> out;
    for (std::int64_t a = min_abs; a <= bound; ++a)
        for (const std::int64_t d : {a, -a})
            if (is_fundamental_discriminant(d)) out.push_back(d);
    return out;
}

Outcome kronecker_multiplicative() {
    for (const auto d : fundamentals_up_to(200))
        for (std::int64_t m = 1; m <= 200; ++m)
            for (std::int64_t n = 1; n <= 200; ++n)
                if (kronecker(d, m * n) != kronecker(d, m) * kronecker(d, n))
                    return {false, "d=" + std::to_string(d) + " m=" + std::to_string(m) + " n=" + std::to_string(n)};
    return {true, "|d| <= 200, m, n <= 200"};
}

Outcome character_orthogonality() {
    for (const auto d : fundamentals_up_to(10'000, 2)) {
        long long s = 0;
        for (std::int64_t n = 1; n <= std::abs(d); ++n) s += kronecker(d, n);
        if (s != 0) return {false, "sum over a period is " + std::to_string(s) + " for d=" + std::to_string(d)};
    }
    return {true, "2 <= |d| <= 10000"};
}

Outcome character_periodicity() {
    for (const auto d : fundamentals_up_to(500)) {
        const std::int64_t q = std::abs(d);
        for (std::int64_t n = 1; n <= 3 * q; ++n)
            if (kronecker(d, n + q) != kronecker(d, n))
                return {false, "d=" + std::to_string(d) + " n=" + std::to_string(n)};
    }
    return {true, "|d| <= 500, n <= 3|d|"};
}

Outcome kronecker_euler() {
    std::size_t checked = 0;
    for (const auto d : fundamentals_up_to(500))
        for (std::uint64_t p = 3; p <= 500; p += 2) {
            if (!is_prime_trial(p) || d % static_cast<std::int64_t>(p) == 0) continue;
            ++checked;
            if (kronecker(d, static_cast<std::int64_t>(p)) != euler_criterion(d, p))
                return {false, "d=" + std::to_string(d) + " p=" + std::to_string(p)};
        }
    return {true, std::to_string(checked) + " pairs"};
}

Outcome squarefree_roundtrip() {
    const auto tables = build_sieve(100'000);
    for (std::uint64_t n = 1; n <= 100'000; ++n) {
        const auto [n0, n1] = squarefree_decompose(n, tables);
        if (n0 * n1 * n1 != n || tables.mobius(n0) == 0) return {false, "n=" + std::to_string(n)};
    }
    return {true, "n <= 100000"};
}

// ---- coeffs ----

Outcome coeff_multiplicativity() {
    const auto tables = build_sieve(10'000);
    for (const auto& f : builtin_corpus()) {
        const auto v = eval_range(f, 10'000, tables);
        for (std::uint64_t m = 1; m <= 10'000; ++m)
            for (std::uint64_t n = 1; m * n <= 10'000; ++n)
                if (std::abs(v[m * n] - v[m] * v[n]) > 1e-9)
                    return {false, f.name() + " at m=" + std::to_string(m) + " n=" + std::to_string(n)};
    }
    return {true, "x = 10000, all builtins"};
}

Outcome coeff_unimodularity() {
    const auto tables = build_sieve(1'000'000);
    double worst = 0.0;
    for (const auto& f : builtin_corpus()) {
        const auto v = eval_range(f, 1'000'000, tables);
        for (std::uint64_t n = 1; n <= 1'000'000; ++n) worst = std::max(worst, std::abs(std::abs(v[n]) - 1.0));
    }
    return {worst <= 1e-9, "max ||f(n)| - 1| = " + num(worst)};
}

Outcome f_condition_oracle() {
    const auto tables = build_sieve(300);
    for (const auto& f : builtin_corpus()) {
        const auto v = eval_range(f, 300, tables);
        for (std::uint64_t L = 1; L <= 300; ++L) {
            const auto report = check_f_condition(f, L, tables);
            const double brute = pairwise_min_cos(v, L);
            if (std::abs(report.min_pair_cos - brute) > 1e-12 ||
                report.passes != (brute >= -kFConditionTolerance))
                return {false, f.name() + " L=" + std::to_string(L) + ": spread " +
                                   num(report.min_pair_cos) + " vs pairwise " + num(brute)};
            if (!report.passes) {
                const auto [m, n] = *report.witness;
                if (!((v[n] * std::conj(v[m])).real() < 0.0)) return {false, "witness not negative"};
            }
        }
    }
    return {true, "L = 1..300, all builtins"};
}

// ---- resonator ----

Outcome hough_weights() {
    const auto tables = build_sieve(100'000);
    const auto r = build_weighted_resonator(5.0, 10.0, 100.0, 100'000, tables);
    for (const auto& [n, weight] : r.support) {
        double expect = 1.0;
        for (const auto& [p, e] : factorize(n, tables)) {
            if (e != 1) return {false, std::to_string(n) + " not squarefree"};
            expect *= 5.0 / (std::sqrt(static_cast<double>(p)) * std::log(static_cast<double>(p)));
        }
        if (rel_diff(weight, expect) > 1e-12) return {false, "r(" + std::to_string(n) + ") mismatch"};
    }
    return {true, std::to_string(r.support.size()) + " support elements"};
}

Outcome set_invariants() {
    const auto tables = build_sieve(1 << 23);
    for (const auto& [N, yM] : std::vector<std::pair<std::size_t, std::uint64_t>>{
             {1, 2}, {3, 7}, {16, 19}, {64, 29}, {256, 41}, {1024, 47}}) {
        const auto set = build_bt_set(N, yM, tables);
        if (const auto issues = set_resonator_violations(set, N); !issues.empty())
            return {false, "N=" + std::to_string(N) + ": " + issues.front()};
    }
    return {true, "6 constructions"};
}

Outcome gcd_symmetry() {
    const auto tables = build_sieve(1 << 20);
    const auto set = build_bt_set(256, 41, tables);
    double off = 0.0;
    for (std::size_t i = 0; i < set.M.size(); ++i)
        for (std::size_t j = 0; j < set.M.size(); ++j) {
            const double a = gcd_term(set.M[i], set.M[j]);
            if (a != gcd_term(set.M[j], set.M[i])) return {false, "asymmetric term"};
            if (i == j && a != 1.0) return {false, "diagonal term != 1"};
            if (i < j) off += a;
        }
    const double total = gcd_sum(set);
    const double expect = static_cast<double>(set.N()) + 2.0 * off;
    return {rel_diff(total, expect) <= 1e-12, "gcd_sum " + num(total) + " vs N + 2*offdiag " + num(expect)};
}

SetResonator random_set(std::mt19937_64& rng, std::size_t max_size, std::uint64_t max_value) {
    std::uniform_int_distribution<std::size_t> size(1, max_size);
    std::uniform_int_distribution<std::uint64_t> value(1, max_value);
    SetResonator s;
    const std::size_t want = size(rng);
    while (s.M.size() < want) {
        const auto v = value(rng);
        if (is_squarefree(v) && std::find(s.M.begin(), s.M.end(), v) == s.M.end()) s.M.push_back(v);
    }
    std::sort(s.M.begin(), s.M.end());
    return s;
}

Outcome gcd_split_partition() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xdist(2.0, 40.0);
    for (int t = 0; t < 100; ++t) {
        const auto set = random_set(rng, 40, 2000);
        const double x = xdist(rng);
        const auto split = gcd_sum_split(set, x);
        const double total = gcd_sum(set);
        if (rel_diff(split.head + split.tail, total) > 1e-9) return {false, "fixture " + std::to_string(t)};
    }
    return {true, "100 random sets"};
}

Outcome bt_growth_trend() {
    const auto tables = build_sieve(1 << 24);
    double previous = -1.0;
    std::string detail;
    for (const std::size_t N : {256u, 1024u, 4096u, 16384u}) {
        const auto yM = default_smoothness_bound(N, 1.3);
        SetResonator set;
        try {
            set = build_bt_set(N, yM, tables);
        } catch (const ResourceError& e) {
            return {false, "N=" + std::to_string(N) + ", y_M=" + std::to_string(yM) + ": " + e.what()};
        }
        if (const auto issues = set_resonator_violations(set, N); !issues.empty())
            return {false, issues.front()};
        const double g = std::log(gcd_sum(set, 4) / static_cast<double>(N));
        detail += "N=" + std::to_string(N) + ":" + num(g) + " ";
        if (!(g > previous)) return {false, "not increasing: " + detail};
        previous = g;
    }
    return {true, detail};
}

Outcome rmrn_oracle() {
    const auto tables = build_sieve(10'000);
    const auto r = build_weighted_resonator(4.0, 2.0, 40.0, 400, tables);
    for (const std::uint64_t N : {1u, 2u, 5u, 9u})
        for (const std::uint64_t Y : {1u, 10u, 60u, 400u}) {
            const double fast = rmrn_ratio(r, N, Y);
            const double brute = rmrn_ratio_bruteforce(r, N, Y);
            if (rel_diff(fast, brute) > 1e-12)
                return {false, "N=" + std::to_string(N) + " Y=" + std::to_string(Y)};
        }
    return {true, "16 (N, Y) pairs"};
}

// ---- moments ----

std::vector<ResonatorTerm> random_weighted_terms(std::mt19937_64& rng, std::size_t max_size) {
    std::uniform_int_distribution<std::size_t> size(1, max_size);
    std::uniform_int_distribution<std::uint64_t> value(1, 60);
    std::uniform_real_distribution<double> weight(0.1, 2.0);
    std::vector<ResonatorTerm> terms;
    const std::size_t want = size(rng);
    while (terms.size() < want) {
        const auto n = value(rng);
        if (std::none_of(terms.begin(), terms.end(), [n](const auto& t) { return t.n == n; }))
            terms.push_back({n, weight(rng)});
    }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
    return terms;
}

Outcome moment_expansions(bool second) {
    const auto tables = build_sieve(10'000);
    const auto corpus = builtin_corpus();
    std::mt19937_64 rng(second ? 22 : 11);
    std::uniform_int_distribution<std::uint64_t> Xdist(2, 200);
    std::uniform_int_distribution<std::uint64_t> xdist(1, 20);
    std::uniform_int_distribution<std::size_t> fdist(0, corpus.size() - 1);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto terms = random_weighted_terms(rng, 10);
        const auto X = Xdist(rng);
        const auto x = xdist(rng);
        const auto& f = corpus[fdist(rng)];
        WeightedResonator w;
        w.support = terms;
        const Resonator R = w;
        const auto scan = dyadic_scan(X, x, f, &R, tables);
        const double expanded = second ? m2_by_expansion(terms, X, x, f, tables)
                                       : m1_by_expansion(terms, X, f, tables);
        const double direct = second ? scan.M2 : scan.M1;
        const double err = std::abs(direct - expanded) / std::max(1.0, std::abs(direct));
        worst = std::max(worst, err);
        if (err > 1e-9)
            return {false, "fixture " + std::to_string(t) + ": " + num(direct) + " vs " + num(expanded)};
    }
    return {true, "20 fixtures, worst rel err " + num(worst)};
}

Outcome resonance_random() {
    const auto tables = build_sieve(10'000);
    const auto corpus = builtin_corpus();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> Xdist(1, 10'000);
    std::uniform_int_distribution<std::uint64_t> xdist(1, 200);
    for (int t = 0; t < 50; ++t) {
        const Resonator R = random_set(rng, 32, 1000);
        const auto X = Xdist(rng);
        const auto x = xdist(rng);
        const auto& f = corpus[static_cast<std::size_t>(t) % 4];
        const auto scan = dyadic_scan(X, x, f, &R, tables);
        if (scan.degenerate()) continue;
        const auto report = make_moment_report(scan, f.name(), resonator_id(R));
        if (!resonance_inequality(report)) return {false, "config " + std::to_string(t)};
    }
    return {true, "50 random configs"};
}

Outcome equal_products_exhaustive() {
    for (std::uint64_t m = 1; m <= 40; ++m)
        for (std::uint64_t n = 1; n <= 40; ++n)
            for (std::uint64_t x = 1; x <= 120; ++x)
                if (count_equal_products(m, n, x) != equal_products_bruteforce(m, n, x))
                    return {false, "m=" + std::to_string(m) + " n=" + std::to_string(n) + " x=" + std::to_string(x)};
    return {true, "m, n <= 40, x <= 120"};
}

Outcome mean_value_nonsquare() {
    const auto tables = build_sieve(1000);
    std::string detail;
    for (const std::uint64_t X : {10'000u, 100'000u, 1'000'000u}) {
        double worst = 0.0;
        for (const std::uint64_t n : {2u, 3u, 5u, 6u, 7u, 10u}) {
            const auto s = static_cast<double>(mean_value_sum(n, X));
            if (mean_value_main_term(n, X, tables) != 0.0) return {false, "non-square with main term"};
            worst = std::max(worst, std::abs(s) / std::sqrt(static_cast<double>(X)));
        }
        detail += "X=" + std::to_string(X) + ":" + num(worst) + " ";
        if (worst > 20.0) return {false, "|sum|/sqrt(X) " + detail};
    }
    return {true, "max |sum|/sqrt(X) " + detail};
}

Outcome mean_value_square() {
    const auto tables = build_sieve(1000);
    const std::uint64_t X = 1'000'000;
    double worst = 0.0;
    for (const std::uint64_t n : {1u, 4u, 9u, 36u, 100u, 900u}) {
        const auto s = static_cast<double>(mean_value_sum(n, X));
        worst = std::max(worst, rel_diff(s, mean_value_main_term(n, X, tables)));
    }
    return {worst <= 0.02, "worst relative deviation " + num(worst)};
}

Outcome euler_factor_lower_bound() {
    const auto tables = build_sieve(1'000'000);
    for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
        const double e = euler_factor_product(n, tables);
        if (!(e >= 1.0 / (2.0 * std::log(static_cast<double>(n) + 2.0))) || e > 1.0)
            return {false, "n=" + std::to_string(n) + " product " + num(e)};
    }
    return {true, "n <= 1000000"};
}

Outcome scan_vs_definition() {
    const auto tables = build_sieve(10'000);
    const auto corpus = builtin_corpus();
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        const auto terms = random_weighted_terms(rng, 8);
        const std::uint64_t X = 50 + 17 * static_cast<std::uint64_t>(t);
        const std::uint64_t x = 3 + 2 * static_cast<std::uint64_t>(t);
        const auto& f = corpus[static_cast<std::size_t>(t) % corpus.size()];
        WeightedResonator w;
        w.support = terms;
        const Resonator R = w;
        const auto scan = dyadic_scan(X, x, f, &R, tables);
        const double m1 = m1_by_definition(terms, X, f, tables);
        const double m2 = m2_by_definition(terms, X, x, f, tables);
        if (rel_diff(scan.M1, m1) > 1e-9 || rel_diff(scan.M2, m2) > 1e-9)
            return {false, "fixture " + std::to_string(t)};
        if (scan.discriminants != dyadic_discriminants_naive(X).size())
            return {false, "discriminant count differs at X=" + std::to_string(X)};
    }
    return {true, "10 fixtures"};
}

// ---- explab ----

Outcome curves_recompute() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> lX(3.0, 400.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const double log_X = lX(rng);
        std::uniform_real_distribution<double> lx(0.0, log_X / 2.0);
        const double log_x = lx(rng);
        const auto c = curves_log(log_X, log_x);
        // Long double, written from the displayed formulas.
        const long double LX = log_X, Lx = log_x;
        const long double w = std::exp(Lx / 2 + std::sqrt(LX / std::log(LX) / 2));
        if (!c.weighted) return {false, "weighted curve missing"};
        worst = std::max(worst, rel_diff(*c.weighted, static_cast<double>(w)));
        const long double z1 = LX / 2 - Lx;
        const bool defined = z1 > 1 && std::log(z1) > 1 && std::log(std::log(z1)) > 0;
        if (defined != c.set.has_value()) return {false, "set curve domain mismatch at log z = " + num(double(z1))};
        if (defined) {
            const long double z2 = std::log(z1), z3 = std::log(z2);
            const long double v = std::exp(Lx / 2 + std::sqrt(z1 * z3 / z2));
            worst = std::max(worst, rel_diff(*c.set, static_cast<double>(v)));
        }
    }
    return {worst <= 1e-12, "1000 random points, worst rel diff " + num(worst)};
}

std::vector<ExperimentConfig> bt_configs() {
    std::vector<ExperimentConfig> out;
    for (const auto& [X, x] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
             {10'000, 2}, {10'000, 5}, {10'000, 10}, {50'000, 3}, {100'000, 4},
             {100'000, 10}, {200'000, 7}, {500'000, 20}, {1'000'000, 10}, {1'000'000, 50}}) {
        ExperimentConfig c;
        c.mode = Mode::Bt;
        c.X = X;
        c.x = x;
        c.sieve_limit = 1 << 22;
        c.y_M = 47;
        out.push_back(c);
    }
    return out;
}

Outcome bt_split_chain() {
    const auto tables = build_sieve(1 << 22);
    std::string detail;
    for (const auto& c : bt_configs()) {
        const auto run = run_bt_experiment(c, tables);
        if (rel_diff(run.split.head + run.split.tail, run.gcd_sum) > 1e-9)
            return {false, "split mismatch at X=" + std::to_string(c.X) + " x=" + std::to_string(c.x)};
        if (!run.chain_ok)
            return {false, "chain fails at X=" + std::to_string(c.X) + " x=" + std::to_string(c.x) + ": " +
                               std::to_string(run.equal_products) + " < " + num(run.chain_rhs)};
    }
    return {true, "10 bt configurations"};
}

Outcome worker_determinism() {
    const auto tables = build_sieve(1 << 22);
    ExperimentConfig h;
    h.mode = Mode::Hough;
    h.X = 200'000;
    h.x = 30;
    h.f_spec = "fixed_angle(pi/5)";
    h.hough_overrides = {10.0, 100.0, 1e5};
    ExperimentConfig b = bt_configs()[8];
    b.f_spec = "liouville";
    std::string first[2];
    for (const unsigned workers : {1u, 4u}) {
        h.workers = b.workers = workers;
        std::ostringstream os;
        write_csv_row(os, csv_fields(run_hough_experiment(h, tables)));
        write_csv_row(os, csv_fields(run_bt_experiment(b, tables)));
        if (workers == 1) first[0] = os.str();
        else first[1] = os.str();
    }
    return {first[0] == first[1], first[0] == first[1] ? "CSV identical" : "CSV differs"};
}

struct NamedProperty {
    const char* suite;
    const char* name;
    Property run;
};

std::vector<NamedProperty> registry() {
    return {
        {"arith", "sieve_invariants", sieve_invariants},
        {"arith", "kronecker_multiplicative", kronecker_multiplicative},
        {"arith", "character_orthogonality", character_orthogonality},
        {"arith", "character_periodicity", character_periodicity},
        {"arith", "kronecker_euler_criterion", kronecker_euler},
        {"arith", "squarefree_roundtrip", squarefree_roundtrip},
        {"coeffs", "multiplicativity", coeff_multiplicativity},
        {"coeffs", "unimodularity", coeff_unimodularity},
        {"coeffs", "f_condition_vs_pairwise", f_condition_oracle},
        {"resonator", "weighted_weights", hough_weights},
        {"resonator", "set_invariants", set_invariants},
        {"resonator", "gcd_symmetry_diagonal", gcd_symmetry},
        {"resonator", "gcd_split_partition", gcd_split_partition},
        {"resonator", "rmrn_ratio_vs_bruteforce", rmrn_oracle},
        {"resonator", "gcd_growth_default_smoothness", bt_growth_trend},
        {"moments", "m1_expansion", [] { return moment_expansions(false); }},
        {"moments", "m2_expansion", [] { return moment_expansions(true); }},
        {"moments", "scan_vs_definition", scan_vs_definition},
        {"moments", "resonance_inequality_random", resonance_random},
        {"moments", "equal_products_exhaustive", equal_products_exhaustive},
        {"moments", "mean_value_nonsquare", mean_value_nonsquare},
        {"moments", "mean_value_square", mean_value_square},
        {"moments", "euler_factor_lower_bound", euler_factor_lower_bound},
        {"explab", "curves_recompute", curves_recompute},
        {"explab", "bt_split_and_chain", bt_split_chain},
        {"explab", "worker_determinism", worker_determinism},
    };
}

}  // namespace

VerifySummary verify(const std::string& suite, unsigned workers) {
    (void)workers;
    static const std::vector<std::string> known{"arith", "coeffs", "resonator", "moments", "explab", "all"};
    if (std::find(known.begin(), known.end(), suite) == known.end())
        throw UsageError("unknown suite '" + suite + "' (expected arith, coeffs, resonator, moments, explab or all)");
    VerifySummary summary{suite, {}};
    for (const auto& p : registry()) {
        if (suite != "all" && suite != p.suite) continue;
        PropertyResult result{p.suite, p.name, false, {}, 0.0};
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto outcome = p.run();
            result.passed = outcome.passed;
            result.detail = outcome.detail;
        } catch (const std::exception& e) {
            result.detail = std::string("exception: ") + e.what();
        }
        result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        summary.results.push_back(std::move(result));
    }
    return summary;
}

nlohmann::ordered_json to_json(const VerifySummary& summary) {
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const auto& r : summary.results)
        results.push_back({{"suite", r.suite},
                           {"name", r.name},
                           {"passed", r.passed},
                           {"detail", r.detail},
                           {"seconds", r.seconds}});
    return {{"suite", summary.suite}, {"all_passed", summary.all_passed()}, {"results", results}};
}

}  // namespace qlab::checks
