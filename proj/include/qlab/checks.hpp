#pragma once

// Invariant suites for every module, backed by independent oracles
// (Euler's criterion, pairwise brute force, swapped-order expansions).
// Shared by the `verify` subcommand and the test binaries.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlab/arith.hpp"
#include "qlab/coeffs.hpp"
#include "qlab/resonator.hpp"

namespace qlab::checks {

// d^{(p-1)/2} mod p mapped to {-1, 0, 1}; p an odd prime.
int euler_criterion(std::int64_t d, std::uint64_t p);

// Minimum of Re f(n) conj(f(m)) over 1 <= m, n <= L by direct O(L^2) pairs.
double pairwise_min_cos(const std::vector<Complex>& values, std::uint64_t L);

// #{(a, b) : a, b <= x, am = bn} by enumerating all pairs.
std::uint64_t equal_products_bruteforce(std::uint64_t m, std::uint64_t n, std::uint64_t x);

// Quadruple loop over k, l <= N and m, n <= Y in the support.
double rmrn_ratio_bruteforce(const WeightedResonator& r, std::uint64_t N, std::uint64_t Y);

// Fundamental X < |d| <= 2X by testing every candidate with the predicate.
std::vector<std::int64_t> dyadic_discriminants_naive(std::uint64_t X);

// M1 = Sum_{m,n} f(m) conj f(n) r(m) r(n) Sum_d chi_d(mn), swapped order.
double m1_by_expansion(const std::vector<ResonatorTerm>& terms, std::uint64_t X,
                       const CoefficientFunction& f, const SieveTables& tables);
// M2 = Sum_{a,b<=x} Sum_{m,n} f(a) conj f(b) f(m) conj f(n) r(m) r(n) Sum_d chi_d(abmn).
double m2_by_expansion(const std::vector<ResonatorTerm>& terms, std::uint64_t X, std::uint64_t x,
                       const CoefficientFunction& f, const SieveTables& tables);

// Per-d definitions evaluated directly with kronecker() on the naive list.
double m1_by_definition(const std::vector<ResonatorTerm>& terms, std::uint64_t X,
                        const CoefficientFunction& f, const SieveTables& tables);
double m2_by_definition(const std::vector<ResonatorTerm>& terms, std::uint64_t X, std::uint64_t x,
                        const CoefficientFunction& f, const SieveTables& tables);

struct PropertyResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifySummary {
    std::string suite;
    std::vector<PropertyResult> results;

    bool all_passed() const;
};

// suite in {arith, coeffs, resonator, moments, explab, all}; throws UsageError otherwise.
VerifySummary verify(const std::string& suite, unsigned workers = 1);

nlohmann::ordered_json to_json(const VerifySummary& summary);

}  // namespace qlab::checks
