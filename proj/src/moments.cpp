#include "qlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "qlab/parallel.hpp"

namespace qlab {

CharSumEvaluator::CharSumEvaluator(const CoefficientFunction& f, std::uint64_t x,
                                   const SieveTables& tables)
    : x_(x), f_values_(eval_range(f, x, tables)), spf_(tables.spf_table()) {
    if (x == 0) throw DomainError("character sum length must be positive");
}

Complex CharSumEvaluator::value(std::int64_t d, std::vector<std::int8_t>& chi) const {
    chi.resize(x_ + 1);
    chi[1] = 1;
    Complex sum = f_values_[1];
    for (std::uint64_t n = 2; n <= x_; ++n) {
        const std::uint32_t p = spf_[n];
        chi[n] = (p == n) ? static_cast<std::int8_t>(kronecker(d, static_cast<std::int64_t>(p)))
                          : static_cast<std::int8_t>(chi[p] * chi[n / p]);
        if (chi[n] > 0)
            sum += f_values_[n];
        else if (chi[n] < 0)
            sum -= f_values_[n];
    }
    return sum;
}

CharSumRecord char_sum(std::int64_t d, std::uint64_t x, const CoefficientFunction& f,
                       const SieveTables& tables) {
    std::vector<std::int8_t> scratch;
    return {d, x, CharSumEvaluator(f, x, tables).value(d, scratch)};
}

ResonatorEvaluator::ResonatorEvaluator(const Resonator& R, const CoefficientFunction& f,
                                       const SieveTables& tables) {
    const auto terms = resonator_terms(R);
    std::map<std::uint64_t, std::uint32_t> index_of;
    std::vector<std::vector<PrimePower>> factors;
    factors.reserve(terms.size());
    for (const auto& t : terms) {
        factors.push_back(factorize_any(t.n, tables));
        for (const auto& pp : factors.back()) index_of.emplace(pp.prime, 0);
    }
    for (auto& [p, idx] : index_of) {
        idx = static_cast<std::uint32_t>(pool_.size());
        pool_.push_back(p);
    }
    std::map<std::uint64_t, Complex> prime_values;
    for (const std::uint64_t p : pool_) prime_values.emplace(p, f.prime_value(p));

    for (std::size_t i = 0; i < terms.size(); ++i) {
        factor_begin_.push_back(static_cast<std::uint32_t>(factor_index_.size()));
        Complex fn{1.0, 0.0};
        for (const auto& [p, e] : factors[i]) {
            for (int k = 0; k < e; ++k) {
                fn *= prime_values.at(p);
                factor_index_.push_back(index_of.at(p));
            }
        }
        coeff_.push_back(fn * terms[i].r);
    }
    factor_begin_.push_back(static_cast<std::uint32_t>(factor_index_.size()));
}

Complex ResonatorEvaluator::value(std::int64_t d, std::vector<std::int8_t>& chi) const {
    chi.resize(pool_.size());
    for (std::size_t j = 0; j < pool_.size(); ++j)
        chi[j] = static_cast<std::int8_t>(kronecker(d, static_cast<std::int64_t>(pool_[j])));
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
        int sign = 1;
        for (std::uint32_t k = factor_begin_[i]; k < factor_begin_[i + 1] && sign != 0; ++k)
            sign *= chi[factor_index_[k]];
        if (sign > 0)
            sum += coeff_[i];
        else if (sign < 0)
            sum -= coeff_[i];
    }
    return sum;
}

Complex resonator_value(std::int64_t d, const Resonator& R, const CoefficientFunction& f,
                        const SieveTables& tables) {
    std::vector<std::int8_t> scratch;
    return ResonatorEvaluator(R, f, tables).value(d, scratch);
}

double DyadicScanResult::scan_max() const { return std::sqrt(std::max(0.0, max_norm)); }

namespace {

struct ScanPartial {
    bool done = false;
    std::uint64_t count = 0;
    double M1 = 0.0;
    double M2 = 0.0;
    double max_norm = -1.0;
    std::int64_t argmax_d = 0;
    std::array<std::uint64_t, kHistogramBins> histogram{};
};

}  // namespace

DyadicScanResult dyadic_scan(std::uint64_t X, std::uint64_t x, const CoefficientFunction& f,
                             const Resonator* R, const SieveTables& tables,
                             const ScanOptions& options) {
    if (X == 0) throw DomainError("dyadic scan needs X >= 1");
    if (2 * X > options.scan_bound)
        throw ResourceError("scan range |d| <= " + std::to_string(2 * X) + " exceeds scan bound " +
                            std::to_string(options.scan_bound));
    if (x > tables.limit())
        throw DomainError("x = " + std::to_string(x) + " exceeds sieve limit " +
                          std::to_string(tables.limit()));

    const CharSumEvaluator sums(f, x, tables);
    std::optional<ResonatorEvaluator> resonator;
    if (R) resonator.emplace(*R, f, tables);
    const DiscriminantEnumerator discriminants(2 * X);

    const std::uint64_t chunk = std::max<std::uint64_t>(1, options.chunk_size);
    const std::size_t chunks = static_cast<std::size_t>((X + chunk - 1) / chunk);
    std::vector<ScanPartial> partial(chunks);
    const auto start = std::chrono::steady_clock::now();
    const double xd = static_cast<double>(x);

    parallel_chunks(chunks, options.workers, [&](std::size_t c) {
        if (options.budget && std::chrono::steady_clock::now() - start > *options.budget) return;
        const std::uint64_t lo = X + c * chunk;
        const std::uint64_t hi = std::min(2 * X, lo + chunk);
        ScanPartial& part = partial[c];
        std::vector<std::int8_t> chi_scratch;
        std::vector<std::int8_t> res_scratch;
        discriminants.for_each(lo, hi, [&](std::int64_t d) {
            const double s2 = std::norm(sums.value(d, chi_scratch));
            const double r2 = resonator ? std::norm(resonator->value(d, res_scratch)) : 1.0;
            ++part.count;
            part.M1 += r2;
            part.M2 += s2 * r2;
            if (s2 > part.max_norm) {
                part.max_norm = s2;
                part.argmax_d = d;
            }
            const auto bin = static_cast<std::size_t>(std::sqrt(s2) / xd * kHistogramBins);
            ++part.histogram[std::min(bin, kHistogramBins - 1)];
        });
        part.done = true;
    });

    DyadicScanResult result;
    result.X = X;
    result.x = x;
    result.max_norm = -1.0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> completed;
    bool all_done = true;
    for (std::size_t c = 0; c < chunks; ++c) {
        const ScanPartial& part = partial[c];
        if (!part.done) {
            all_done = false;
            continue;
        }
        const std::uint64_t lo = X + c * chunk;
        if (!completed.empty() && completed.back().second == lo)
            completed.back().second = std::min(2 * X, lo + chunk);
        else
            completed.emplace_back(lo, std::min(2 * X, lo + chunk));
        result.discriminants += part.count;
        result.M1 += part.M1;
        result.M2 += part.M2;
        if (part.count > 0 && part.max_norm > result.max_norm) {
            result.max_norm = part.max_norm;
            result.argmax_d = part.argmax_d;
        }
        for (std::size_t b = 0; b < kHistogramBins; ++b) result.histogram[b] += part.histogram[b];
    }
    if (!all_done) throw ScanBudgetExceeded("scan time budget exceeded", std::move(completed));
    if (result.max_norm < 0.0) result.max_norm = 0.0;
    return result;
}

double moment_m1(const Resonator& R, std::uint64_t X, const CoefficientFunction& f,
                 const SieveTables& tables, const ScanOptions& options) {
    return dyadic_scan(X, 1, f, &R, tables, options).M1;
}

double moment_m2(const Resonator& R, std::uint64_t X, std::uint64_t x,
                 const CoefficientFunction& f, const SieveTables& tables,
                 const ScanOptions& options) {
    return dyadic_scan(X, x, f, &R, tables, options).M2;
}

bool resonance_inequality(const MomentReport& report) {
    if (!(report.M1 > 0.0)) throw DomainError("resonance inequality undefined: M1 = 0 (degenerate)");
    const double bound = report.scan_max * report.scan_max;
    return report.ratio <= bound + kResonanceTolerance * bound;
}

std::uint64_t count_equal_products(std::uint64_t m, std::uint64_t n, std::uint64_t x) {
    if (m == 0 || n == 0) throw DomainError("count_equal_products needs m, n >= 1");
    const std::uint64_t g = std::gcd(m, n);
    return x / std::max(m / g, n / g);
}

std::int64_t mean_value_sum(std::uint64_t n, std::uint64_t X, std::uint64_t scan_bound) {
    if (n == 0) throw DomainError("mean_value_sum needs n >= 1");
    if (X > scan_bound)
        throw ResourceError("X = " + std::to_string(X) + " exceeds scan bound " + std::to_string(scan_bound));
    if (X == 0) return 0;
    std::int64_t total = 0;
    const auto nn = static_cast<std::int64_t>(n);
    DiscriminantEnumerator(X).for_each(0, X, [&](std::int64_t d) { total += kronecker(d, nn); });
    return total;
}

double euler_factor_product(std::uint64_t n, const SieveTables& tables) {
    double product = 1.0;
    for (const auto& pp : factorize(n, tables)) {
        const auto p = static_cast<double>(pp.prime);
        product *= p / (p + 1.0);
    }
    return product;
}

double mean_value_main_term(std::uint64_t n, std::uint64_t X, const SieveTables& tables) {
    const std::uint64_t root = isqrt(n);
    if (root * root != n) {
        if (!tables.contains(n)) throw DomainError("mean_value_main_term: n outside sieve range");
        return 0.0;
    }
    return static_cast<double>(X) / kZeta2 * euler_factor_product(n, tables);
}

double mean_value_error_envelope(std::uint64_t n, std::uint64_t X, double epsilon,
                                 const SieveTables& tables) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
    const auto [n0, n1] = squarefree_decompose(n, tables);
    const double g1 = std::exp(std::pow(std::log(static_cast<double>(n0)), 1.0 - epsilon));
    double g2 = 1.0;  // Sum over squarefree d | n1 = prod_{p|n1} (1 + p^{-1/2-eps})
    for (const auto& pp : factorize(n1, tables))
        g2 *= 1.0 + std::pow(static_cast<double>(pp.prime), -0.5 - epsilon);
    return std::pow(static_cast<double>(X), 0.5 + epsilon) * g1 * g2;
}

MeanValueReport mean_value_report(std::uint64_t n, std::uint64_t X, double epsilon,
                                  const SieveTables& tables, std::uint64_t scan_bound) {
    MeanValueReport report;
    report.n = n;
    report.X = X;
    report.epsilon = epsilon;
    report.main_term = mean_value_main_term(n, X, tables);
    report.error_envelope = mean_value_error_envelope(n, X, epsilon, tables);
    report.exact_sum = static_cast<double>(mean_value_sum(n, X, scan_bound));
    return report;
}

}  // namespace qlab
