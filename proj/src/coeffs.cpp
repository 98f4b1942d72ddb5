#include "qlab/coeffs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qlab/errors.hpp"

namespace qlab {

namespace {

std::string format_param(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

CoefficientFunction CoefficientFunction::constant_one() {
    return {"constant_one", CoefficientKind::ConstantOne, 0.0};
}

CoefficientFunction CoefficientFunction::liouville() {
    return {"liouville", CoefficientKind::Liouville, 0.0};
}

CoefficientFunction CoefficientFunction::fixed_angle(double theta) {
    if (!std::isfinite(theta)) throw DomainError("fixed_angle: non-finite angle");
    return {"fixed_angle(" + format_param(theta) + ")", CoefficientKind::FixedAngle, theta};
}

CoefficientFunction CoefficientFunction::archimedean(double alpha) {
    if (!std::isfinite(alpha)) throw DomainError("archimedean: non-finite exponent");
    return {"archimedean(" + format_param(alpha) + ")", CoefficientKind::Archimedean, alpha};
}

CoefficientFunction CoefficientFunction::prime_table(std::string name,
                                                     std::map<std::uint64_t, double> angles) {
    for (const auto& [p, theta] : angles) {
        if (!is_prime_trial(p)) throw ParseError("prime_table: " + std::to_string(p) + " is not prime");
        if (!std::isfinite(theta))
            throw DomainError("prime_table: non-unimodular value at p = " + std::to_string(p));
    }
    CoefficientFunction f(std::move(name), CoefficientKind::PrimeTable, 0.0);
    f.table_ = std::move(angles);
    return f;
}

double CoefficientFunction::prime_angle(std::uint64_t p) const {
    switch (kind_) {
        case CoefficientKind::ConstantOne:
            return 0.0;
        case CoefficientKind::Liouville:
            return std::numbers::pi;
        case CoefficientKind::FixedAngle:
            return param_;
        case CoefficientKind::Archimedean:
            return param_ * std::log(static_cast<double>(p));
        case CoefficientKind::PrimeTable: {
            const auto it = table_.find(p);
            return it == table_.end() ? 0.0 : it->second;
        }
    }
    return 0.0;
}

Complex CoefficientFunction::prime_value(std::uint64_t p) const {
    if (kind_ == CoefficientKind::ConstantOne) return {1.0, 0.0};
    if (kind_ == CoefficientKind::Liouville) return {-1.0, 0.0};
    const Complex z = std::polar(1.0, prime_angle(p));
    const double mod = std::abs(z);
    if (!(std::abs(mod - 1.0) <= 1e-12))
        throw DomainError(name_ + ": |f(" + std::to_string(p) + ")| deviates from 1");
    return z / mod;
}

std::vector<Complex> eval_range(const CoefficientFunction& f, std::uint64_t x,
                                const SieveTables& tables) {
    if (x > tables.limit())
        throw DomainError("eval_range: x = " + std::to_string(x) + " exceeds sieve limit");
    std::vector<Complex> values(x + 1, Complex{0.0, 0.0});
    if (x == 0) return values;
    values[1] = 1.0;
    const auto spf = tables.spf_table();
    for (std::uint64_t n = 2; n <= x; ++n) {
        const std::uint32_t p = spf[n];
        values[n] = (p == n) ? f.prime_value(p) : values[n / p] * values[p];
    }
    return values;
}

Complex eval_at(const CoefficientFunction& f, std::uint64_t n, const SieveTables& tables) {
    Complex v{1.0, 0.0};
    for (const auto& [p, e] : factorize(n, tables)) {
        const Complex fp = f.prime_value(p);
        for (int i = 0; i < e; ++i) v *= fp;
    }
    return v;
}

FConditionReport check_f_condition(const CoefficientFunction& f, std::uint64_t L,
                                   const SieveTables& tables) {
    if (L == 0) throw DomainError("check_f_condition: L must be positive");
    const auto values = eval_range(f, L, tables);
    constexpr double kTwoPi = 2.0 * std::numbers::pi;

    struct Point {
        double angle;
        std::uint64_t n;
    };
    std::vector<Point> pts;
    pts.reserve(L);
    for (std::uint64_t n = 1; n <= L; ++n) {
        double a = std::arg(values[n]);
        if (a < 0) a += kTwoPi;
        if (a >= kTwoPi) a -= kTwoPi;
        pts.push_back({a, n});
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.angle != b.angle ? a.angle < b.angle : a.n < b.n;
    });

    // The pair with the most negative cosine is the one at the largest
    // circular distance; for each point that partner is the neighbour of
    // its antipode in angular order.
    FConditionReport report;
    report.checked_limit = L;
    double best_dist = 0.0;
    std::pair<std::uint64_t, std::uint64_t> best_pair{1, 1};
    const std::size_t size = pts.size();
    for (std::size_t i = 0; i < size; ++i) {
        double target = pts[i].angle + std::numbers::pi;
        if (target >= kTwoPi) target -= kTwoPi;
        const auto it = std::lower_bound(pts.begin(), pts.end(), target,
                                         [](const Point& p, double v) { return p.angle < v; });
        const std::size_t j = static_cast<std::size_t>(it - pts.begin());
        for (const std::size_t k : {(j + size - 1) % size, j % size}) {
            double dist = std::abs(pts[k].angle - pts[i].angle);
            dist = std::min(dist, kTwoPi - dist);
            const std::pair<std::uint64_t, std::uint64_t> pair = std::minmax(pts[i].n, pts[k].n);
            if (dist > best_dist || (dist == best_dist && pair < best_pair)) {
                best_dist = dist;
                best_pair = pair;
            }
        }
    }
    const auto [m, n] = best_pair;
    report.min_pair_cos = (values[n] * std::conj(values[m])).real();
    report.passes = report.min_pair_cos >= -kFConditionTolerance;
    if (!report.passes) report.witness = best_pair;
    return report;
}

double parse_angle(const std::string& raw) {
    std::string text;
    for (const char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text += c;
    if (text.empty()) throw ParseError("empty numeric parameter");
    try {
        const auto pi_pos = text.find("pi");
        if (pi_pos == std::string::npos) {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw ParseError("bad number: " + raw);
            return v;
        }
        double scale = 1.0;
        std::string before = text.substr(0, pi_pos);
        std::string after = text.substr(pi_pos + 2);
        if (!before.empty()) {
            if (before.back() == '*') before.pop_back();
            if (before == "-") {
                scale = -1.0;
            } else if (!before.empty()) {
                std::size_t used = 0;
                scale = std::stod(before, &used);
                if (used != before.size()) throw ParseError("bad number: " + raw);
            }
        }
        if (!after.empty()) {
            if (after[0] != '/') throw ParseError("bad angle: " + raw);
            std::size_t used = 0;
            const double div = std::stod(after.substr(1), &used);
            if (used != after.size() - 1 || div == 0.0) throw ParseError("bad angle: " + raw);
            scale /= div;
        }
        return scale * std::numbers::pi;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad number: " + raw);
    } catch (const std::out_of_range&) {
        throw ParseError("number out of range: " + raw);
    }
}

std::map<std::uint64_t, double> read_prime_table(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open prime table " + file.string());
    std::map<std::uint64_t, double> angles;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string p_text, theta_text, extra;
        if (!(fields >> p_text)) continue;
        const auto where = file.string() + ":" + std::to_string(line_no);
        if (!(fields >> theta_text) || (fields >> extra))
            throw ParseError(where + ": expected 'p theta'");
        std::uint64_t p = 0;
        try {
            std::size_t used = 0;
            p = std::stoull(p_text, &used);
            if (used != p_text.size()) throw std::invalid_argument(p_text);
        } catch (const std::exception&) {
            throw ParseError(where + ": bad prime '" + p_text + "'");
        }
        double theta = 0.0;
        try {
            theta = parse_angle(theta_text);
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!std::isfinite(theta))
            throw DomainError(where + ": non-unimodular entry (angle not finite)");
        if (!is_prime_trial(p)) throw ParseError(where + ": " + p_text + " is not prime");
        if (!angles.emplace(p, theta).second) throw ParseError(where + ": duplicate prime " + p_text);
    }
    return angles;
}

CoefficientFunction builtin(const std::string& name, std::optional<double> param,
                            const std::filesystem::path& table_file) {
    auto need = [&](const char* what) {
        if (!param) throw ParseError(name + " needs a numeric " + what);
        return *param;
    };
    if (name == "constant_one") return CoefficientFunction::constant_one();
    if (name == "liouville") return CoefficientFunction::liouville();
    if (name == "fixed_angle") return CoefficientFunction::fixed_angle(need("angle"));
    if (name == "archimedean") return CoefficientFunction::archimedean(need("exponent"));
    if (name == "prime_table") {
        if (table_file.empty()) throw ParseError("prime_table needs a file");
        return CoefficientFunction::prime_table("prime_table(" + table_file.string() + ")",
                                                read_prime_table(table_file));
    }
    throw ParseError("unknown coefficient function '" + name + "'");
}

CoefficientFunction parse_coefficient(const std::string& text) {
    std::string name = text;
    std::string arg;
    if (const auto open = text.find('('); open != std::string::npos) {
        if (text.back() != ')') throw ParseError("unbalanced parentheses in '" + text + "'");
        name = text.substr(0, open);
        arg = text.substr(open + 1, text.size() - open - 2);
    } else if (const auto colon = text.find(':'); colon != std::string::npos) {
        name = text.substr(0, colon);
        arg = text.substr(colon + 1);
    }
    if (name == "prime_table") return builtin(name, std::nullopt, arg);
    if (arg.empty()) return builtin(name);
    return builtin(name, parse_angle(arg));
}

}  // namespace qlab
