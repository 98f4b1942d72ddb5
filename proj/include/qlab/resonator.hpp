#pragma once

// Resonators: Hough-type weighted resonators on squarefree products of a
// prime window, and set resonators built from squarefree smooth integers in
// a dyadic window. Also the GCD (Gál) sum and the brute-force ratio of the
// weighted resonator's equal-product sum.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qlab/arith.hpp"

namespace qlab {

struct HoughOverrides {
    std::optional<double> p_lo;
    std::optional<double> p_hi;
    std::optional<double> y_cap;  // replaces y as the support bound

    bool any() const noexcept { return p_lo || p_hi || y_cap; }
};

struct HoughParams {
    double log_X = 0.0;
    double log_x = 0.0;
    double alpha = 0.0;
    double formula_log_y = 0.0;  // (1/2 - alpha) log X - 2 log x
    double log_y = 0.0;        // effective; differs only under a y_cap override
    double lambda = 0.0;       // sqrt(log y * log log y)
    double p_lo = 0.0;         // lambda^2 unless overridden
    double p_hi = 0.0;         // exp((log lambda)^2) unless overridden
    HoughOverrides overrides;

    double X() const;
    double x() const;
    double y() const;
    bool window_empty() const noexcept { return !(p_lo <= p_hi); }

    // log N > 3 lambda log log lambda, the side condition on N for the ratio bound.
    bool side_condition(double log_N) const;
};

// Throws DomainError unless X > e^e, x >= 2, 0 < alpha < 1/4 and y > e^e.
HoughParams hough_params(double X, double x, double alpha, const HoughOverrides& overrides = {});
HoughParams hough_params_log(double log_X, double log_x, double alpha,
                             const HoughOverrides& overrides = {});

struct ResonatorTerm {
    std::uint64_t n;
    double r;

    friend bool operator==(const ResonatorTerm&, const ResonatorTerm&) = default;
};

struct WeightedResonator {
    std::vector<ResonatorTerm> support;  // ascending in n, starts with (1, 1)
    double lambda = 0.0;
    bool empty_window = false;           // trivial {(1, 1)} returned
};

struct SetResonator {
    std::vector<std::uint64_t> M;  // ascending
    std::uint64_t y_M = 1;
    std::uint64_t window_start = 0;  // T of the dyadic window [T, 2T)

    std::size_t N() const noexcept { return M.size(); }
};

using Resonator = std::variant<WeightedResonator, SetResonator>;

// r(p) = lambda / (sqrt(p) log p)
double hough_prime_weight(double lambda, std::uint64_t p);

WeightedResonator build_hough_resonator(const HoughParams& params, const SieveTables& tables);

// Squarefree products of window primes up to `bound`, weights multiplicative
// with r(p) = lambda/(sqrt(p) log p).
WeightedResonator build_weighted_resonator(double lambda, double p_lo, double p_hi,
                                           std::uint64_t bound, const SieveTables& tables);

// Smallest T (doubling from max(N, 2)) whose window [T, 2T) holds >= N
// squarefree y_M-smooth integers; keeps those with most prime factors, then
// smallest. Throws ResourceError if the search leaves the sieve or no
// window can ever qualify.
SetResonator build_bt_set(std::size_t N, std::uint64_t y_M, const SieveTables& tables);

// Empty on success, otherwise one message per violated invariant.
std::vector<std::string> set_resonator_violations(const SetResonator& set,
                                                  std::size_t expected_N);

// sqrt((m,n)/[m,n]) = (m,n)/sqrt(mn)
double gcd_term(std::uint64_t m, std::uint64_t n);

double gcd_sum(const SetResonator& set, unsigned workers = 1);

struct GcdSplit {
    double head = 0.0;  // pairs with [m,n]/(m,n) <= x^2/2
    double tail = 0.0;
};

GcdSplit gcd_sum_split(const SetResonator& set, double x, unsigned workers = 1);

// True when [m,n]/(m,n) <= x^2/2.
bool in_gcd_head(std::uint64_t m, std::uint64_t n, double x);

// Sum_{k,l<=N} Sum_{m,n<=Y, mk=nl} r(m) r(n) / Sum_{n<=Y} r(n)^2, grouped by
// the common product v = mk.
double rmrn_ratio(const WeightedResonator& r, std::uint64_t N, std::uint64_t Y);

// N exp(2 sqrt(log y / log log y)); throws DomainError unless log y > e.
double rmrn_reference(double y, double N);
double rmrn_reference_log(double log_y, double N);

// Text format: "weighted" or "set" header line, then "n r" or "m" per line.
void write_resonator(std::ostream& out, const Resonator& r);
Resonator read_resonator(std::istream& in);

std::string resonator_id(const Resonator& r);

// Elements with their weights; set members carry weight 1.
std::vector<ResonatorTerm> resonator_terms(const Resonator& r);

}  // namespace qlab
