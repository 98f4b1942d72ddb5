#pragma once

// Exact integer primitives: spf/Möbius sieve, factorization, squarefree
// parts, the Kronecker symbol and fundamental discriminants.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qlab {

struct PrimePower {
    std::uint64_t prime;
    int exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct SquarefreeParts {
    std::uint64_t n0;  // squarefree part
    std::uint64_t n1;  // n = n0 * n1^2

    friend bool operator==(const SquarefreeParts&, const SquarefreeParts&) = default;
};

inline constexpr std::size_t kDefaultSieveMemoryBudget = std::size_t{2} << 30;

// Smallest-prime-factor, Möbius and prime tables on [0, limit].
// Immutable once built; share freely between threads.
class SieveTables {
public:
    explicit SieveTables(std::uint32_t limit,
                         std::size_t memory_budget = kDefaultSieveMemoryBudget);

    std::uint32_t limit() const noexcept { return limit_; }

    // Throws DomainError for n < 2 or n > limit.
    std::uint32_t spf(std::uint64_t n) const;
    // Throws DomainError for n < 1 or n > limit.
    int mobius(std::uint64_t n) const;

    bool contains(std::uint64_t n) const noexcept { return n >= 1 && n <= limit_; }
    bool is_prime(std::uint64_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

    std::span<const std::uint32_t> primes() const noexcept { return primes_; }
    std::span<const std::uint32_t> spf_table() const noexcept { return spf_; }

    // Primes p with lo <= p <= hi (clipped to the table).
    std::span<const std::uint32_t> primes_between(std::uint64_t lo, std::uint64_t hi) const;

private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::int8_t> mobius_;
    std::vector<std::uint32_t> primes_;
};

SieveTables build_sieve(std::uint32_t limit,
                        std::size_t memory_budget = kDefaultSieveMemoryBudget);

std::vector<PrimePower> factorize(std::uint64_t n, const SieveTables& tables);

// Uses the sieve when n is in range, trial division otherwise.
std::vector<PrimePower> factorize_any(std::uint64_t n, const SieveTables& tables);

SquarefreeParts squarefree_decompose(std::uint64_t n, const SieveTables& tables);

// Largest prime factor, with P+(1) = 1.
std::uint64_t largest_prime_factor(std::uint64_t n, const SieveTables& tables);

// Trial-division helpers for values beyond the sieve.
bool is_squarefree(std::uint64_t n);
bool is_prime_trial(std::uint64_t n);
std::uint64_t isqrt(std::uint64_t n);

// Kronecker symbol (d|n) for |d|, |n| < 2^63.
int kronecker(std::int64_t d, std::int64_t n);

// d = 1 counts as fundamental. Throws DomainError for d = 0.
bool is_fundamental_discriminant(std::int64_t d);

// Default cap on |d| for discriminant scans.
inline constexpr std::uint64_t kDefaultScanBound = 1'000'000'000;

// Enumerates fundamental discriminants with lo < |d| <= hi via a segmented
// squarefree sieve, in (|d|, positive first) order.
class DiscriminantEnumerator {
public:
    explicit DiscriminantEnumerator(std::uint64_t max_abs);

    std::uint64_t max_abs() const noexcept { return max_abs_; }

    void for_each(std::uint64_t lo, std::uint64_t hi,
                  const std::function<void(std::int64_t)>& visit) const;

    std::uint64_t count(std::uint64_t lo, std::uint64_t hi) const;

private:
    std::uint64_t max_abs_;
    std::vector<std::uint32_t> small_primes_;  // primes up to sqrt(max_abs)
};

// Throws DomainError unless lo < hi; ResourceError if hi > scan_bound.
std::vector<std::int64_t> fundamental_discriminants_in(
    std::uint64_t lo, std::uint64_t hi, std::uint64_t scan_bound = kDefaultScanBound);

}  // namespace qlab
