#pragma once

// Character sums S_d(x), resonator values R_d, the moments M1 and M2 over a
// dyadic discriminant range, and the mean-value decomposition of
// Sum_{|d|<=X} chi_d(n).

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlab/arith.hpp"
#include "qlab/coeffs.hpp"
#include "qlab/errors.hpp"
#include "qlab/resonator.hpp"

namespace qlab {

struct CharSumRecord {
    std::int64_t d = 0;
    std::uint64_t x = 0;
    Complex value;
};

// Sum_{n<=x} f(n) chi_d(n) for many d with f(1..x) evaluated once.
// chi_d is filled multiplicatively along the spf table, one Kronecker
// evaluation per prime.
class CharSumEvaluator {
public:
    CharSumEvaluator(const CoefficientFunction& f, std::uint64_t x, const SieveTables& tables);

    std::uint64_t x() const noexcept { return x_; }

    // `scratch` is per-thread workspace.
    Complex value(std::int64_t d, std::vector<std::int8_t>& scratch) const;

private:
    std::uint64_t x_;
    std::vector<Complex> f_values_;
    std::span<const std::uint32_t> spf_;
};

CharSumRecord char_sum(std::int64_t d, std::uint64_t x, const CoefficientFunction& f,
                       const SieveTables& tables);

// R_d = Sum f(n) r(n) chi_d(n) over the resonator; chi_d is evaluated once
// per prime dividing some support element.
class ResonatorEvaluator {
public:
    ResonatorEvaluator(const Resonator& R, const CoefficientFunction& f, const SieveTables& tables);

    Complex value(std::int64_t d, std::vector<std::int8_t>& scratch) const;

    std::size_t size() const noexcept { return coeff_.size(); }

private:
    std::vector<std::uint64_t> pool_;         // distinct primes
    std::vector<Complex> coeff_;              // f(n) r(n)
    std::vector<std::uint32_t> factor_begin_; // offsets into factor_index_
    std::vector<std::uint32_t> factor_index_; // prime indices, with multiplicity
};

Complex resonator_value(std::int64_t d, const Resonator& R, const CoefficientFunction& f,
                        const SieveTables& tables);

inline constexpr std::size_t kHistogramBins = 64;

struct ScanOptions {
    unsigned workers = 1;
    std::uint64_t scan_bound = kDefaultScanBound;
    std::uint64_t chunk_size = 1 << 14;  // |d| values per reduction chunk
    std::optional<std::chrono::duration<double>> budget;
};

// One pass over fundamental X < |d| <= 2X accumulating both moments, the
// maximum of |S_d(x)| and a histogram of |S_d(x)| on [0, x].
struct DyadicScanResult {
    std::uint64_t X = 0;
    std::uint64_t x = 0;
    std::uint64_t discriminants = 0;
    double M1 = 0.0;
    double M2 = 0.0;
    double max_norm = 0.0;  // max |S_d(x)|^2
    std::int64_t argmax_d = 0;
    std::array<std::uint64_t, kHistogramBins> histogram{};

    double scan_max() const;
    bool degenerate() const noexcept { return discriminants == 0 || !(M1 > 0.0); }
};

// Raised when the time budget runs out; lists the |d| sub-ranges finished.
class ScanBudgetExceeded : public ResourceError {
public:
    ScanBudgetExceeded(const std::string& what,
                       std::vector<std::pair<std::uint64_t, std::uint64_t>> completed)
        : ResourceError(what), completed_(std::move(completed)) {}

    // (lo, hi] ranges of |d| that were fully scanned.
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& completed() const noexcept {
        return completed_;
    }

private:
    std::vector<std::pair<std::uint64_t, std::uint64_t>> completed_;
};

// R == nullptr means the trivial resonator (R_d = 1). Chunks are reduced in
// |d| order, so results are bit-identical for any worker count. Ties for
// the maximum go to the smallest |d|, positive before negative.
DyadicScanResult dyadic_scan(std::uint64_t X, std::uint64_t x, const CoefficientFunction& f,
                             const Resonator* R, const SieveTables& tables,
                             const ScanOptions& options = {});

double moment_m1(const Resonator& R, std::uint64_t X, const CoefficientFunction& f,
                 const SieveTables& tables, const ScanOptions& options = {});
double moment_m2(const Resonator& R, std::uint64_t X, std::uint64_t x,
                 const CoefficientFunction& f, const SieveTables& tables,
                 const ScanOptions& options = {});

struct MomentReport {
    std::uint64_t X = 0;
    std::uint64_t x = 0;
    std::string f_name;
    std::string resonator_id;
    double M1 = 0.0;
    double M2 = 0.0;
    double ratio = 0.0;
    double scan_max = 0.0;
    std::int64_t argmax_d = 0;
    std::optional<double> curve_weighted;
    std::optional<double> curve_set;
};

inline constexpr double kResonanceTolerance = 1e-9;

// ratio <= scan_max^2 within 1e-9 relative. Throws DomainError when M1 = 0.
bool resonance_inequality(const MomentReport& report);

// #{(a, b) : a, b <= x, am = bn} = floor(x / max(m', n')), m' = m/(m,n), n' = n/(m,n).
std::uint64_t count_equal_products(std::uint64_t m, std::uint64_t n, std::uint64_t x);

// Sum over fundamental 0 < |d| <= X (d = 1 included) of chi_d(n).
std::int64_t mean_value_sum(std::uint64_t n, std::uint64_t X,
                            std::uint64_t scan_bound = kDefaultScanBound);

// Product over distinct p | n of p/(p+1).
double euler_factor_product(std::uint64_t n, const SieveTables& tables);

inline constexpr double kZeta2 = 1.6449340668482264;  // pi^2/6

// (X/zeta(2)) prod_{p|n} p/(p+1) when n is a square, else 0.
double mean_value_main_term(std::uint64_t n, std::uint64_t X, const SieveTables& tables);

// X^{1/2+eps} g1(n0) g2(n1), g1(n0) = exp((log n0)^{1-eps}),
// g2(n1) = Sum_{d|n1} mu(d)^2 / d^{1/2+eps}. Implied constant not included.
double mean_value_error_envelope(std::uint64_t n, std::uint64_t X, double epsilon,
                                 const SieveTables& tables);

struct MeanValueReport {
    std::uint64_t n = 0;
    std::uint64_t X = 0;
    double exact_sum = 0.0;
    double main_term = 0.0;
    double error_envelope = 0.0;
    double epsilon = 0.0;
};

MeanValueReport mean_value_report(std::uint64_t n, std::uint64_t X, double epsilon,
                                  const SieveTables& tables,
                                  std::uint64_t scan_bound = kDefaultScanBound);

}  // namespace qlab
