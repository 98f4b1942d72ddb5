#pragma once

// Completely multiplicative unimodular coefficient functions f, given by
// their values at primes.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/arith.hpp"

namespace qlab {

using Complex = std::complex<double>;

enum class CoefficientKind { ConstantOne, Liouville, FixedAngle, Archimedean, PrimeTable };

class CoefficientFunction {
public:
    static CoefficientFunction constant_one();
    static CoefficientFunction liouville();
    // f(p) = e^{i theta}
    static CoefficientFunction fixed_angle(double theta);
    // f(p) = p^{i alpha}
    static CoefficientFunction archimedean(double alpha);
    // Explicit angles; primes absent from the table take angle 0.
    static CoefficientFunction prime_table(std::string name, std::map<std::uint64_t, double> angles);

    const std::string& name() const noexcept { return name_; }
    CoefficientKind kind() const noexcept { return kind_; }

    // f(p), renormalized to exact unit modulus. Throws DomainError if the raw
    // value is off the circle by more than 1e-12.
    Complex prime_value(std::uint64_t p) const;

    // Angle of f(p) in radians.
    double prime_angle(std::uint64_t p) const;

private:
    CoefficientFunction(std::string name, CoefficientKind kind, double param)
        : name_(std::move(name)), kind_(kind), param_(param) {}

    std::string name_;
    CoefficientKind kind_;
    double param_ = 0.0;
    std::map<std::uint64_t, double> table_;
};

// result[n] = f(n) for 1 <= n <= x; result[0] is 0 and unused.
std::vector<Complex> eval_range(const CoefficientFunction& f, std::uint64_t x,
                                const SieveTables& tables);

// f(n) for a single n within the sieve.
Complex eval_at(const CoefficientFunction& f, std::uint64_t n, const SieveTables& tables);

struct FConditionReport {
    std::uint64_t checked_limit = 0;
    bool passes = true;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;
    double min_pair_cos = 1.0;
};

inline constexpr double kFConditionTolerance = 1e-12;

// Membership of f in the class on [1, L]: every pairwise Re f(n)conj(f(m))
// must be >= -1e-12. O(L log L) via the angular spread of f(1..L).
FConditionReport check_f_condition(const CoefficientFunction& f, std::uint64_t L,
                                   const SieveTables& tables);

// name in {constant_one, liouville, fixed_angle, archimedean, prime_table}.
// prime_table takes a file path instead of a numeric parameter.
CoefficientFunction builtin(const std::string& name, std::optional<double> param = std::nullopt,
                            const std::filesystem::path& table_file = {});

// Parses "name", "name(param)" or "name:param"; params accept "pi/5",
// "2*pi", or plain numbers. "prime_table(FILE)" loads FILE.
CoefficientFunction parse_coefficient(const std::string& text);

// Lines "p theta"; '#' starts a comment.
std::map<std::uint64_t, double> read_prime_table(const std::filesystem::path& file);

double parse_angle(const std::string& text);

}  // namespace qlab
