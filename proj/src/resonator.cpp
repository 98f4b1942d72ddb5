#include "qlab/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "qlab/errors.hpp"
#include "qlab/parallel.hpp"

namespace qlab {

namespace {

constexpr double kE = 2.718281828459045;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Largest prime factor by trial division; P+(1) = 1.
std::uint64_t largest_prime_factor_trial(std::uint64_t n) {
    std::uint64_t best = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            best = p;
            n /= p;
        }
    }
    return n > 1 ? std::max(best, n) : best;
}

}  // namespace

double HoughParams::X() const { return std::exp(log_X); }
double HoughParams::x() const { return std::exp(log_x); }
double HoughParams::y() const { return std::exp(log_y); }

bool HoughParams::side_condition(double log_N) const {
    return log_N > 3.0 * lambda * std::log(std::log(lambda));
}

HoughParams hough_params_log(double log_X, double log_x, double alpha,
                             const HoughOverrides& overrides) {
    if (!(log_X > kE)) throw DomainError("hough_params: X must exceed e^e");
    // x only enters through y, so a y_cap override also lifts the x >= 2 requirement.
    if (!(log_x >= (overrides.y_cap ? 0.0 : std::log(2.0))))
        throw DomainError("hough_params: x must be at least 2");
    if (!(alpha > 0.0 && alpha < 0.25)) throw DomainError("hough_params: alpha must lie in (0, 1/4)");

    HoughParams p;
    p.log_X = log_X;
    p.log_x = log_x;
    p.alpha = alpha;
    p.overrides = overrides;
    p.formula_log_y = (0.5 - alpha) * log_X - 2.0 * log_x;
    if (overrides.y_cap) {
        if (!(*overrides.y_cap > 0.0)) throw DomainError("hough_params: y_cap must be positive");
        p.log_y = std::log(*overrides.y_cap);
    } else {
        p.log_y = p.formula_log_y;
    }
    if (!(p.log_y > kE))
        throw DomainError("hough_params: y = exp(" + fmt(p.log_y) +
                          ") must exceed e^e for lambda to be defined");
    p.lambda = std::sqrt(p.log_y * std::log(p.log_y));
    const double log_lambda = std::log(p.lambda);
    p.p_lo = overrides.p_lo.value_or(p.lambda * p.lambda);
    p.p_hi = overrides.p_hi.value_or(std::exp(log_lambda * log_lambda));
    return p;
}

HoughParams hough_params(double X, double x, double alpha, const HoughOverrides& overrides) {
    if (!(X > 0.0) || !(x > 0.0)) throw DomainError("hough_params: X and x must be positive");
    return hough_params_log(std::log(X), std::log(x), alpha, overrides);
}

double hough_prime_weight(double lambda, std::uint64_t p) {
    const double pd = static_cast<double>(p);
    return lambda / (std::sqrt(pd) * std::log(pd));
}

WeightedResonator build_weighted_resonator(double lambda, double p_lo, double p_hi,
                                           std::uint64_t bound, const SieveTables& tables) {
    WeightedResonator res;
    res.lambda = lambda;
    res.support.push_back({1, 1.0});
    if (!(p_lo <= p_hi) || bound < 2) {
        res.empty_window = !(p_lo <= p_hi);
        return res;
    }
    const double top = std::min(p_hi, static_cast<double>(bound));
    if (top > tables.limit())
        throw DomainError("resonator window reaches " + fmt(top) + ", beyond sieve limit " +
                          std::to_string(tables.limit()));
    const auto lo = static_cast<std::uint64_t>(std::ceil(std::max(p_lo, 2.0)));
    const auto hi = static_cast<std::uint64_t>(std::floor(top));
    const auto window = tables.primes_between(lo, hi);
    if (window.empty()) {
        res.empty_window = true;
        return res;
    }

    std::vector<double> weight(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) weight[i] = hough_prime_weight(lambda, window[i]);

    // Depth-first over increasing prime indices; products stay <= bound.
    struct Frame {
        std::uint64_t n;
        double r;
        std::size_t next;
    };
    std::vector<Frame> stack{{1, 1.0, 0}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        for (std::size_t i = f.next; i < window.size(); ++i) {
            if (f.n > bound / window[i]) break;
            const std::uint64_t n = f.n * window[i];
            const double r = f.r * weight[i];
            res.support.push_back({n, r});
            stack.push_back({n, r, i + 1});
        }
    }
    std::sort(res.support.begin(), res.support.end(),
              [](const ResonatorTerm& a, const ResonatorTerm& b) { return a.n < b.n; });
    return res;
}

WeightedResonator build_hough_resonator(const HoughParams& params, const SieveTables& tables) {
    const double y = params.y();
    const std::uint64_t bound =
        y >= 9.2e18 ? std::numeric_limits<std::int64_t>::max() : static_cast<std::uint64_t>(std::floor(y));
    return build_weighted_resonator(params.lambda, params.p_lo, params.p_hi, bound, tables);
}

SetResonator build_bt_set(std::size_t N, std::uint64_t y_M, const SieveTables& tables) {
    if (N == 0) throw DomainError("build_bt_set: N must be positive");
    const auto pool = tables.primes_between(2, y_M);
    if (y_M > tables.limit()) throw DomainError("build_bt_set: y_M beyond sieve limit");

    // Beyond the product of the pool there are no squarefree y_M-smooth integers.
    std::uint64_t largest = 1;
    for (const std::uint64_t p : pool) {
        if (largest > std::numeric_limits<std::uint64_t>::max() / 4 / p) {
            largest = std::numeric_limits<std::uint64_t>::max() / 4;
            break;
        }
        largest *= p;
    }
    const std::string hint = " (N = " + std::to_string(N) + ", y_M = " + std::to_string(y_M) +
                             ", " + std::to_string(pool.size()) +
                             " primes in pool); increase y_M or the sieve limit";

    const auto spf = tables.spf_table();
    std::vector<std::pair<int, std::uint64_t>> found;  // (omega, value)
    for (std::uint64_t T = std::max<std::uint64_t>(N, 2);; T *= 2) {
        if (T > largest)
            throw ResourceError("no dyadic window holds enough squarefree smooth integers" + hint);
        if (2 * T - 1 > tables.limit())
            throw ResourceError("dyadic search passed the sieve limit " +
                                std::to_string(tables.limit()) + " at T = " + std::to_string(T) + hint);
        found.clear();
        for (std::uint64_t n = T; n < 2 * T; ++n) {
            std::uint64_t rest = n;
            std::uint32_t prev = 0;
            int omega = 0;
            bool ok = true;
            while (rest > 1) {
                const std::uint32_t p = spf[rest];
                if (p == prev || p > y_M) {
                    ok = false;
                    break;
                }
                prev = p;
                rest /= p;
                ++omega;
            }
            if (ok) found.emplace_back(omega, n);
        }
        if (found.size() < N) continue;

        std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        SetResonator set;
        set.y_M = y_M;
        set.window_start = T;
        set.M.reserve(N);
        for (std::size_t i = 0; i < N; ++i) set.M.push_back(found[i].second);
        std::sort(set.M.begin(), set.M.end());
        return set;
    }
}

std::vector<std::string> set_resonator_violations(const SetResonator& set,
                                                  std::size_t expected_N) {
    std::vector<std::string> issues;
    if (set.N() != expected_N)
        issues.push_back("cardinality " + std::to_string(set.N()) + " != " + std::to_string(expected_N));
    if (set.M.empty()) return issues;
    for (std::size_t i = 1; i < set.M.size(); ++i)
        if (set.M[i - 1] >= set.M[i]) {
            issues.push_back("M not strictly increasing at index " + std::to_string(i));
            break;
        }
    for (const std::uint64_t m : set.M) {
        if (m == 0 || !is_squarefree(m)) {
            issues.push_back(std::to_string(m) + " is not squarefree");
            break;
        }
    }
    for (const std::uint64_t m : set.M) {
        if (largest_prime_factor_trial(m) > set.y_M) {
            issues.push_back(std::to_string(m) + " is not " + std::to_string(set.y_M) + "-smooth");
            break;
        }
    }
    const auto [lo, hi] = std::minmax_element(set.M.begin(), set.M.end());
    if (*hi > 2 * *lo)
        issues.push_back("max M = " + std::to_string(*hi) + " exceeds 2 min M = " + std::to_string(2 * *lo));
    return issues;
}

double gcd_term(std::uint64_t m, std::uint64_t n) {
    const auto g = static_cast<double>(std::gcd(m, n));
    return g / std::sqrt(static_cast<double>(m) * static_cast<double>(n));
}

bool in_gcd_head(std::uint64_t m, std::uint64_t n, double x) {
    const std::uint64_t g = std::gcd(m, n);
    const long double ratio = static_cast<long double>(m / g) * static_cast<long double>(n / g);
    return ratio <= static_cast<long double>(x) * x / 2.0L;
}

namespace {

constexpr std::size_t kRowsPerChunk = 64;

// Row-chunked double sum over ordered pairs; partials folded in chunk order
// so the result does not depend on the worker count.
template <class Term>
std::vector<double> chunked_pair_sums(const std::vector<std::uint64_t>& M, unsigned workers,
                                      std::size_t slots, Term&& term) {
    const std::size_t chunks = (M.size() + kRowsPerChunk - 1) / kRowsPerChunk;
    std::vector<double> partial(chunks * slots, 0.0);
    parallel_chunks(chunks, workers, [&](std::size_t c) {
        const std::size_t end = std::min(M.size(), (c + 1) * kRowsPerChunk);
        double* out = &partial[c * slots];
        for (std::size_t i = c * kRowsPerChunk; i < end; ++i)
            for (const std::uint64_t n : M) term(M[i], n, out);
    });
    std::vector<double> total(slots, 0.0);
    for (std::size_t c = 0; c < chunks; ++c)
        for (std::size_t s = 0; s < slots; ++s) total[s] += partial[c * slots + s];
    return total;
}

}  // namespace

double gcd_sum(const SetResonator& set, unsigned workers) {
    return chunked_pair_sums(set.M, workers, 1, [](std::uint64_t m, std::uint64_t n, double* acc) {
        acc[0] += gcd_term(m, n);
    })[0];
}

GcdSplit gcd_sum_split(const SetResonator& set, double x, unsigned workers) {
    if (!(x >= 2.0)) throw DomainError("gcd_sum_split: x must be at least 2");
    const auto sums = chunked_pair_sums(set.M, workers, 2, [x](std::uint64_t m, std::uint64_t n, double* acc) {
        acc[in_gcd_head(m, n, x) ? 0 : 1] += gcd_term(m, n);
    });
    return {sums[0], sums[1]};
}

double rmrn_ratio(const WeightedResonator& r, std::uint64_t N, std::uint64_t Y) {
    if (N == 0 || Y == 0) throw DomainError("rmrn_ratio: N and Y must be positive");
    std::vector<std::pair<std::uint64_t, double>> by_product;  // (v = m k, r(m))
    double denominator = 0.0;
    for (const auto& [m, weight] : r.support) {
        if (m > Y) continue;
        denominator += weight * weight;
        for (std::uint64_t k = 1; k <= N; ++k) {
            std::uint64_t v = 0;
            if (__builtin_mul_overflow(m, k, &v))
                throw DomainError("rmrn_ratio: product m*k overflows 64 bits");
            by_product.emplace_back(v, weight);
        }
    }
    if (denominator == 0.0) throw DomainError("rmrn_ratio: resonator has no support below Y");
    std::sort(by_product.begin(), by_product.end());
    // Sum over v of (sum of r(m) with m k = v)^2.
    double numerator = 0.0;
    for (std::size_t i = 0; i < by_product.size();) {
        double group = 0.0;
        std::size_t j = i;
        for (; j < by_product.size() && by_product[j].first == by_product[i].first; ++j)
            group += by_product[j].second;
        numerator += group * group;
        i = j;
    }
    return numerator / denominator;
}

double rmrn_reference_log(double log_y, double N) {
    if (!(log_y > kE)) throw DomainError("rmrn_reference: y must exceed e^e");
    return N * std::exp(2.0 * std::sqrt(log_y / std::log(log_y)));
}

double rmrn_reference(double y, double N) {
    if (!(y > 0.0)) throw DomainError("rmrn_reference: y must be positive");
    return rmrn_reference_log(std::log(y), N);
}

void write_resonator(std::ostream& out, const Resonator& r) {
    if (const auto* w = std::get_if<WeightedResonator>(&r)) {
        out << "weighted\n";
        for (const auto& [n, weight] : w->support) out << n << ' ' << fmt(weight) << '\n';
    } else {
        out << "set\n";
        for (const std::uint64_t m : std::get<SetResonator>(r).M) out << m << '\n';
    }
}

Resonator read_resonator(std::istream& in) {
    std::string line;
    std::string header;
    int line_no = 0;
    auto next_content = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first != std::string::npos) {
                line = line.substr(first);
                while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
                return true;
            }
        }
        return false;
    };
    if (!next_content()) throw ParseError("resonator file is empty");
    header = line;
    auto fail = [&](const std::string& why) {
        return ParseError("resonator line " + std::to_string(line_no) + ": " + why);
    };

    if (header == "weighted") {
        WeightedResonator w;
        w.lambda = std::numeric_limits<double>::quiet_NaN();
        while (next_content()) {
            std::istringstream fields(line);
            ResonatorTerm t{};
            std::string extra;
            if (!(fields >> t.n >> t.r) || (fields >> extra) || t.n == 0 || !(t.r > 0.0))
                throw fail("expected 'n r' with n >= 1 and r > 0");
            if (!w.support.empty() && w.support.back().n >= t.n) throw fail("n must be strictly increasing");
            w.support.push_back(t);
        }
        if (w.support.empty()) throw ParseError("weighted resonator has no elements");
        return w;
    }
    if (header == "set") {
        SetResonator s;
        while (next_content()) {
            std::istringstream fields(line);
            std::uint64_t m = 0;
            std::string extra;
            if (!(fields >> m) || (fields >> extra) || m == 0) throw fail("expected a positive integer m");
            if (!s.M.empty() && s.M.back() >= m) throw fail("m must be strictly increasing");
            s.M.push_back(m);
        }
        if (s.M.empty()) throw ParseError("set resonator has no elements");
        for (const std::uint64_t m : s.M) s.y_M = std::max(s.y_M, largest_prime_factor_trial(m));
        s.window_start = s.M.front();
        return s;
    }
    throw ParseError("resonator header must be 'weighted' or 'set', got '" + header + "'");
}

std::string resonator_id(const Resonator& r) {
    if (const auto* w = std::get_if<WeightedResonator>(&r))
        return "weighted(size=" + std::to_string(w->support.size()) + ",lambda=" + fmt(w->lambda) + ")";
    const auto& s = std::get<SetResonator>(r);
    return "set(N=" + std::to_string(s.N()) + ",y_M=" + std::to_string(s.y_M) + ",T=" +
           std::to_string(s.window_start) + ")";
}

std::vector<ResonatorTerm> resonator_terms(const Resonator& r) {
    if (const auto* w = std::get_if<WeightedResonator>(&r)) return w->support;
    std::vector<ResonatorTerm> terms;
    for (const std::uint64_t m : std::get<SetResonator>(r).M) terms.push_back({m, 1.0});
    return terms;
}

}  // namespace qlab
