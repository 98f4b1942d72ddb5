#include "qlab/explab.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qlab/errors.hpp"
#include "qlab/parallel.hpp"

namespace qlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_string(const std::string& text, const std::string& origin) {
    Config config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(origin + ":" + std::to_string(line_no) + ": empty key");
        config.values_[key] = trim(line.substr(eq + 1));
    }
    return config;
}

Config Config::from_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open config file " + file.string());
    std::ostringstream text;
    text << in.rdbuf();
    return from_string(text.str(), file.string());
}

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> Config::get_real(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    return parse_real(*v);
}

std::optional<std::uint64_t> Config::get_uint(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    return parse_uint(*v);
}

double parse_real(const std::string& raw) {
    const std::string text = trim(raw);
    try {
        std::size_t used = 0;
        if (text.rfind("e^", 0) == 0) {
            const double k = std::stod(text.substr(2), &used);
            if (used == text.size() - 2) return std::exp(k);
        } else {
            const double v = std::stod(text, &used);
            if (used == text.size()) return v;
        }
    } catch (const std::exception&) {
    }
    throw UsageError("not a number: '" + raw + "'");
}

std::uint64_t parse_uint(const std::string& raw) {
    const std::string text = trim(raw);
    std::uint64_t exact = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), exact);
    if (ec == std::errc{} && end == text.data() + text.size()) return exact;
    const double v = parse_real(raw);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e18)
        throw UsageError("not a non-negative integer: '" + raw + "'");
    return static_cast<std::uint64_t>(v);
}

ScanOptions ExperimentConfig::scan_options() const {
    ScanOptions options;
    options.workers = workers;
    options.scan_bound = scan_bound;
    if (budget_seconds) options.budget = std::chrono::duration<double>(*budget_seconds);
    return options;
}

void validate(const ExperimentConfig& c) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw UsageError(what);
    };
    require(c.workers >= 1, "workers must be at least 1");
    require(c.epsilon > 0.0 && c.epsilon < 0.5, "epsilon must lie in (0, 1/2)");
    switch (c.mode) {
        case Mode::Hough:
        case Mode::Bt:
        case Mode::Scan:
            require(c.X >= 1, "X must be a positive integer");
            require(c.x >= 1, "x must be a positive integer");
            require(2 * c.X <= c.scan_bound, "2X exceeds the scan bound");
            require(c.x <= c.sieve_limit, "x exceeds the sieve limit");
            break;
        case Mode::MeanValue:
            require(c.X >= 1, "X must be a positive integer");
            require(c.X <= c.scan_bound, "X exceeds the scan bound");
            break;
        case Mode::Verify:
            break;
    }
    if (c.mode == Mode::Hough) require(c.alpha > 0.0 && c.alpha < 0.25, "alpha must lie in (0, 1/4)");
    if (c.mode == Mode::Bt) {
        require(c.kappa > 0.0 && c.kappa < 0.5, "kappa must lie in (0, 1/2)");
        require(c.x * c.x <= c.X, "bt mode needs x <= sqrt(X)");
        require(c.max_N >= 1, "max_N must be positive");
    }
}

ExperimentConfig apply_config(ExperimentConfig c, const Config& config) {
    for (const auto& [key, value] : config.values()) {
        if (key == "X") c.X = parse_uint(value);
        else if (key == "x") c.x = parse_uint(value);
        else if (key == "f") c.f_spec = value;
        else if (key == "alpha") c.alpha = parse_real(value);
        else if (key == "p_lo") c.hough_overrides.p_lo = parse_real(value);
        else if (key == "p_hi") c.hough_overrides.p_hi = parse_real(value);
        else if (key == "y_cap") c.hough_overrides.y_cap = parse_real(value);
        else if (key == "kappa") c.kappa = parse_real(value);
        else if (key == "max_N") c.max_N = parse_uint(value);
        else if (key == "ym") c.y_M = parse_uint(value);
        else if (key == "ym_exponent") c.ym_exponent = parse_real(value);
        else if (key == "epsilon") c.epsilon = parse_real(value);
        else if (key == "workers") c.workers = static_cast<unsigned>(parse_uint(value));
        else if (key == "sieve_limit") {
            const auto v = parse_uint(value);
            if (v < 2 || v > 0xFFFFFFFFull) throw UsageError("sieve_limit must lie in [2, 2^32)");
            c.sieve_limit = static_cast<std::uint32_t>(v);
        } else if (key == "scan_bound") c.scan_bound = parse_uint(value);
        else if (key == "budget") c.budget_seconds = parse_real(value);
        // Other keys (out, format, ...) belong to the caller.
    }
    return c;
}

CurveValues curves_log(double log_X, double log_x) {
    CurveValues v;
    v.log_X = log_X;
    v.log_x = log_x;
    const double root_x = std::exp(log_x / 2.0);
    if (log_X > 0.0) {
        const double l2 = std::log(log_X);
        if (l2 > 0.0) v.weighted = root_x * std::exp(std::numbers::sqrt2 / 2.0 * std::sqrt(log_X / l2));
    }
    const double l1 = log_X / 2.0 - log_x;  // log(sqrt(X)/x)
    if (l1 > 0.0) {
        const double l2 = std::log(l1);
        if (l2 > 0.0) {
            const double l3 = std::log(l2);
            if (l3 > 0.0) v.set = root_x * std::exp(std::sqrt(l1 * l3 / l2));
        }
    }
    return v;
}

CurveValues curves(double X, double x) {
    if (!(X > 0.0) || !(x > 0.0)) throw DomainError("curves: X and x must be positive");
    return curves_log(std::log(X), std::log(x));
}

bool weighted_range_ok(double log_X, double log_x, double epsilon) {
    if (!(log_X > 0.0)) return false;
    const double l2 = std::log(log_X);
    if (!(l2 > 0.0)) return false;
    const double lower = 4.0 * std::sqrt(log_X * l2) * std::log(l2);
    return lower <= log_x && log_x <= std::pow(log_X, 0.5 + epsilon);
}

bool set_range_ok(double log_X, double log_x, double epsilon) {
    if (!(log_X > 0.0)) return false;
    return std::pow(log_X, 0.5 + epsilon) < log_x && log_x <= log_X / 2.0;
}

ScanMaxResult scan_max(std::uint64_t X, std::uint64_t x, const CoefficientFunction& f,
                       const SieveTables& tables, const ScanOptions& options) {
    const auto scan = dyadic_scan(X, x, f, nullptr, tables, options);
    return {scan.argmax_d, scan.scan_max(), scan.discriminants, scan.histogram};
}

MomentReport make_moment_report(const DyadicScanResult& scan, const std::string& f_name,
                                const std::string& resonator_id) {
    MomentReport r;
    r.X = scan.X;
    r.x = scan.x;
    r.f_name = f_name;
    r.resonator_id = resonator_id;
    r.M1 = scan.M1;
    r.M2 = scan.M2;
    r.ratio = scan.M1 > 0.0 ? scan.M2 / scan.M1 : 0.0;
    r.scan_max = scan.scan_max();
    r.argmax_d = scan.argmax_d;
    const auto c = curves_log(std::log(static_cast<double>(scan.X)), std::log(static_cast<double>(scan.x)));
    r.curve_weighted = c.weighted;
    r.curve_set = c.set;
    return r;
}

namespace {

bool checked_resonance(const MomentReport& report, bool degenerate) {
    if (degenerate) return true;  // mean <= max is vacuous with no weight
    if (!resonance_inequality(report))
        throw PropertyFailure("resonance inequality violated: ratio " + std::to_string(report.ratio) +
                              " > scan_max^2 " + std::to_string(report.scan_max * report.scan_max));
    return true;
}

}  // namespace

HoughRun run_hough_experiment(const ExperimentConfig& config, const SieveTables& tables) {
    if (config.mode != Mode::Hough) throw UsageError("run_hough_experiment needs hough mode");
    validate(config);
    const auto f = parse_coefficient(config.f_spec);

    HoughRun run;
    run.params = hough_params_log(std::log(static_cast<double>(config.X)),
                                  std::log(static_cast<double>(config.x)), config.alpha,
                                  config.hough_overrides);
    run.resonator = build_hough_resonator(run.params, tables);
    const Resonator R = run.resonator;
    const auto scan = dyadic_scan(config.X, config.x, f, &R, tables, config.scan_options());
    run.report = make_moment_report(scan, f.name(), resonator_id(R));
    run.degenerate = scan.degenerate() || run.resonator.empty_window;
    run.range_ok = weighted_range_ok(run.params.log_X, run.params.log_x, config.epsilon);
    run.resonance_ok = checked_resonance(run.report, scan.degenerate());

    const double y = run.params.y();
    const std::uint64_t Y = y >= 9.0e18 ? std::uint64_t{9'000'000'000'000'000'000ull}
                                        : static_cast<std::uint64_t>(std::floor(y));
    run.equal_product_ratio = rmrn_ratio(run.resonator, config.x, std::max<std::uint64_t>(Y, 1));
    if (run.params.log_y > std::numbers::e)
        run.equal_product_reference = rmrn_reference_log(run.params.log_y, static_cast<double>(config.x));
    return run;
}

std::uint64_t bt_cardinality(std::uint64_t X, std::uint64_t x, double kappa) {
    const double v = std::pow(static_cast<double>(X), 0.5 - kappa) / static_cast<double>(x);
    return v < 1.0 ? 0 : static_cast<std::uint64_t>(std::floor(v));
}

std::uint64_t default_smoothness_bound(std::uint64_t N, double exponent) {
    if (N < 2) return 2;
    return std::max<std::uint64_t>(
        2, static_cast<std::uint64_t>(std::ceil(std::pow(std::log(static_cast<double>(N)), exponent))));
}

std::uint64_t total_equal_products(const SetResonator& set, std::uint64_t x, unsigned workers) {
    constexpr std::size_t kRows = 64;
    const auto& M = set.M;
    const std::size_t chunks = (M.size() + kRows - 1) / kRows;
    std::vector<std::uint64_t> partial(chunks, 0);
    parallel_chunks(chunks, workers, [&](std::size_t c) {
        std::uint64_t acc = 0;
        for (std::size_t i = c * kRows; i < std::min(M.size(), (c + 1) * kRows); ++i)
            for (const std::uint64_t n : M) acc += count_equal_products(M[i], n, x);
        partial[c] = acc;
    });
    std::uint64_t total = 0;
    for (const auto v : partial) total += v;
    return total;
}

BtRun run_bt_experiment(const ExperimentConfig& config, const SieveTables& tables) {
    if (config.mode != Mode::Bt) throw UsageError("run_bt_experiment needs bt mode");
    validate(config);
    const auto f = parse_coefficient(config.f_spec);

    BtRun run;
    run.N_formula = bt_cardinality(config.X, config.x, config.kappa);
    if (run.N_formula == 0) throw DomainError("X^{1/2-kappa}/x < 1: the set resonator would be empty");
    run.N = std::min(run.N_formula, config.max_N);
    run.N_capped = run.N < run.N_formula;
    const std::uint64_t y_M = config.y_M.value_or(default_smoothness_bound(run.N, config.ym_exponent));
    run.set = build_bt_set(run.N, y_M, tables);
    if (const auto issues = set_resonator_violations(run.set, run.N); !issues.empty())
        throw PropertyFailure("set resonator invariant violated: " + issues.front());

    const Resonator R = run.set;
    const auto scan = dyadic_scan(config.X, config.x, f, &R, tables, config.scan_options());
    run.report = make_moment_report(scan, f.name(), resonator_id(R));
    run.degenerate = scan.degenerate();
    run.range_ok = set_range_ok(std::log(static_cast<double>(config.X)),
                                  std::log(static_cast<double>(config.x)), config.epsilon);
    run.resonance_ok = checked_resonance(run.report, run.degenerate);

    run.gcd_sum = gcd_sum(run.set, config.workers);
    const double xd = static_cast<double>(config.x);
    if (config.x >= 2) {
        run.split = gcd_sum_split(run.set, xd, config.workers);
    } else {
        run.split = {0.0, run.gcd_sum};  // threshold 1/2 admits no pair
    }
    run.equal_products = total_equal_products(run.set, config.x, config.workers);
    run.chain_rhs = xd / std::numbers::sqrt2 * run.split.head;
    run.chain_ok = static_cast<double>(run.equal_products) >= run.chain_rhs;
    return run;
}

}  // namespace qlab
