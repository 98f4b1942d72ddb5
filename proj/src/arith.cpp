#include "qlab/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qlab/errors.hpp"

namespace qlab {

SieveTables::SieveTables(std::uint32_t limit, std::size_t memory_budget) : limit_(limit) {
    if (limit < 2) throw DomainError("sieve limit must be at least 2");
    // spf + mobius per entry, plus a generous bound on the prime list.
    const std::size_t entries = std::size_t{limit} + 1;
    const std::size_t need = entries * (sizeof(std::uint32_t) + sizeof(std::int8_t)) +
                             entries / 4 * sizeof(std::uint32_t);
    if (need > memory_budget)
        throw ResourceError("sieve limit " + std::to_string(limit) + " needs " +
                            std::to_string(need) + " bytes, budget is " +
                            std::to_string(memory_budget));

    spf_.assign(entries, 0);
    mobius_.assign(entries, 0);
    mobius_[1] = 1;
    // Linear sieve: every composite is struck exactly once, by its spf.
    for (std::uint32_t n = 2; n <= limit; ++n) {
        if (spf_[n] == 0) {
            spf_[n] = n;
            mobius_[n] = -1;
            primes_.push_back(n);
        }
        for (const std::uint32_t p : primes_) {
            const std::uint64_t m = std::uint64_t{p} * n;
            if (p > spf_[n] || m > limit) break;
            spf_[m] = p;
            mobius_[m] = (p == spf_[n]) ? 0 : static_cast<std::int8_t>(-mobius_[n]);
        }
    }
}

std::uint32_t SieveTables::spf(std::uint64_t n) const {
    if (n < 2 || n > limit_)
        throw DomainError("spf(" + std::to_string(n) + ") outside sieve range [2, " +
                          std::to_string(limit_) + "]");
    return spf_[n];
}

int SieveTables::mobius(std::uint64_t n) const {
    if (!contains(n))
        throw DomainError("mobius(" + std::to_string(n) + ") outside sieve range [1, " +
                          std::to_string(limit_) + "]");
    return mobius_[n];
}

std::span<const std::uint32_t> SieveTables::primes_between(std::uint64_t lo,
                                                           std::uint64_t hi) const {
    auto first = std::lower_bound(primes_.begin(), primes_.end(), lo,
                                  [](std::uint32_t p, std::uint64_t v) { return p < v; });
    auto last = std::upper_bound(primes_.begin(), primes_.end(), hi,
                                 [](std::uint64_t v, std::uint32_t p) { return v < p; });
    if (last < first) last = first;
    return {first, last};
}

SieveTables build_sieve(std::uint32_t limit, std::size_t memory_budget) {
    return SieveTables(limit, memory_budget);
}

std::vector<PrimePower> factorize(std::uint64_t n, const SieveTables& tables) {
    if (!tables.contains(n))
        throw DomainError("factorize(" + std::to_string(n) + ") outside sieve range");
    std::vector<PrimePower> out;
    const auto spf = tables.spf_table();
    while (n > 1) {
        const std::uint32_t p = spf[n];
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    return out;
}

std::vector<PrimePower> factorize_any(std::uint64_t n, const SieveTables& tables) {
    if (n == 0) throw DomainError("cannot factorize 0");
    if (tables.contains(n)) return factorize(n, tables);
    std::vector<PrimePower> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

SquarefreeParts squarefree_decompose(std::uint64_t n, const SieveTables& tables) {
    SquarefreeParts parts{1, 1};
    for (const auto& [p, e] : factorize(n, tables)) {
        if (e % 2) parts.n0 *= p;
        for (int i = 0; i < e / 2; ++i) parts.n1 *= p;
    }
    return parts;
}

std::uint64_t largest_prime_factor(std::uint64_t n, const SieveTables& tables) {
    const auto f = factorize(n, tables);
    return f.empty() ? 1 : f.back().prime;
}

std::uint64_t isqrt(std::uint64_t n) {
    constexpr std::uint64_t kMaxRoot = 0xFFFFFFFFull;
    auto r = std::min(kMaxRoot, static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n))));
    while (r > 0 && r * r > n) --r;
    while (r < kMaxRoot && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return false;
    }
    return true;
}

bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

namespace {

// (2|n) for odd n, indexed by n mod 8.
constexpr int kTwoOver[8] = {0, 1, 0, -1, 0, -1, 0, 1};

int mod8(std::int64_t a) { return static_cast<int>(((a % 8) + 8) % 8); }

// Jacobi symbol (a|b) for 0 <= a < b, b odd.
int jacobi(std::uint64_t a, std::uint64_t b) {
    int k = 1;
    while (a != 0) {
        const int v = std::countr_zero(a);
        a >>= v;
        if ((v & 1) && (b % 8 == 3 || b % 8 == 5)) k = -k;
        if ((a & b & 2) != 0) k = -k;  // both ≡ 3 (mod 4)
        const std::uint64_t r = b % a;
        b = a;
        a = r;
    }
    return b == 1 ? k : 0;
}

}  // namespace

int kronecker(std::int64_t d, std::int64_t n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    if ((d & 1) == 0 && (n & 1) == 0) return 0;

    int k = 1;
    std::uint64_t b = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    if (n < 0 && d < 0) k = -k;

    const int v = std::countr_zero(b);
    b >>= v;
    if (v & 1) k *= kTwoOver[mod8(d)];  // d is odd here since n was even
    if (b == 1) return k;

    // Jacobi symbol is periodic in d modulo odd b.
    const auto bi = static_cast<std::int64_t>(b);
    const auto a = static_cast<std::uint64_t>(((d % bi) + bi) % bi);
    return k * jacobi(a, b);
}

bool is_fundamental_discriminant(std::int64_t d) {
    if (d == 0) throw DomainError("0 is not a discriminant");
    const std::int64_t r = ((d % 4) + 4) % 4;
    if (r == 1) return is_squarefree(static_cast<std::uint64_t>(d < 0 ? -d : d));
    if (r != 0) return false;
    const std::int64_t m = d / 4;
    const std::int64_t mr = ((m % 4) + 4) % 4;
    return (mr == 2 || mr == 3) && is_squarefree(static_cast<std::uint64_t>(m < 0 ? -m : m));
}

DiscriminantEnumerator::DiscriminantEnumerator(std::uint64_t max_abs) : max_abs_(max_abs) {
    const std::uint64_t root = isqrt(max_abs) + 1;
    std::vector<bool> composite(root + 1, false);
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (composite[i]) continue;
        small_primes_.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= root; j += i) composite[j] = true;
    }
}

namespace {

// flags[i] = squarefree(begin + i) for begin >= 1.
void squarefree_flags(std::uint64_t begin, std::uint64_t end,
                      std::span<const std::uint32_t> primes, std::vector<char>& flags) {
    flags.assign(end >= begin ? end - begin + 1 : 0, 1);
    for (const std::uint64_t p : primes) {
        const std::uint64_t sq = p * p;
        if (sq > end) break;
        for (std::uint64_t j = (begin + sq - 1) / sq * sq; j <= end; j += sq) flags[j - begin] = 0;
    }
}

}  // namespace

void DiscriminantEnumerator::for_each(std::uint64_t lo, std::uint64_t hi,
                                      const std::function<void(std::int64_t)>& visit) const {
    if (hi > max_abs_)
        throw ResourceError("discriminant range " + std::to_string(hi) +
                            " exceeds enumerator bound " + std::to_string(max_abs_));
    constexpr std::uint64_t kSegment = std::uint64_t{1} << 16;
    std::vector<char> sqf_a;
    std::vector<char> sqf_m;
    for (std::uint64_t s = lo + 1; s <= hi; s += kSegment) {
        const std::uint64_t e = std::min(hi, s + kSegment - 1);
        squarefree_flags(s, e, small_primes_, sqf_a);
        const std::uint64_t m_lo = std::max<std::uint64_t>(1, s / 4);
        const std::uint64_t m_hi = std::max<std::uint64_t>(1, e / 4);
        squarefree_flags(m_lo, m_hi, small_primes_, sqf_m);
        for (std::uint64_t a = s; a <= e; ++a) {
            const auto d = static_cast<std::int64_t>(a);
            switch (a % 4) {
                case 1:
                    if (sqf_a[a - s]) visit(d);
                    break;
                case 3:
                    if (sqf_a[a - s]) visit(-d);
                    break;
                case 0: {
                    const std::uint64_t m = a / 4;
                    if (!sqf_m[m - m_lo]) break;
                    // +d needs m ≡ 2,3 (mod 4); -d needs -m ≡ 2,3, i.e. m ≡ 1,2.
                    if (m % 4 == 2 || m % 4 == 3) visit(d);
                    if (m % 4 == 1 || m % 4 == 2) visit(-d);
                    break;
                }
                default:
                    break;
            }
        }
    }
}

std::uint64_t DiscriminantEnumerator::count(std::uint64_t lo, std::uint64_t hi) const {
    std::uint64_t total = 0;
    for_each(lo, hi, [&](std::int64_t) { ++total; });
    return total;
}

std::vector<std::int64_t> fundamental_discriminants_in(std::uint64_t lo, std::uint64_t hi,
                                                       std::uint64_t scan_bound) {
    if (lo >= hi) throw DomainError("fundamental_discriminants_in requires lo < hi");
    if (hi > scan_bound)
        throw ResourceError("|d| bound " + std::to_string(hi) + " exceeds scan bound " +
                            std::to_string(scan_bound));
    std::vector<std::int64_t> out;
    DiscriminantEnumerator(hi).for_each(lo, hi, [&](std::int64_t d) { out.push_back(d); });
    return out;
}

}  // namespace qlab
