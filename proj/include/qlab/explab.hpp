#pragma once

// Experiment orchestration: configuration, reference curves, dyadic scans
// and the end-to-end weighted (Hough) and set (BT) resonator pipelines.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "qlab/arith.hpp"
#include "qlab/coeffs.hpp"
#include "qlab/moments.hpp"
#include "qlab/resonator.hpp"

namespace qlab {

// Flat key = value settings; '#' starts a comment.
class Config {
public:
    static Config from_file(const std::filesystem::path& file);
    static Config from_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

    std::optional<double> get_real(const std::string& key) const;
    std::optional<std::uint64_t> get_uint(const std::string& key) const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// Accepts plain numbers ("1e6", "250") and "e^k" for exp(k).
double parse_real(const std::string& text);
std::uint64_t parse_uint(const std::string& text);

enum class Mode { Hough, Bt, Scan, MeanValue, Verify };

struct ExperimentConfig {
    Mode mode = Mode::Scan;
    std::uint64_t X = 0;
    std::uint64_t x = 0;
    std::string f_spec = "constant_one";
    double alpha = 0.1;
    HoughOverrides hough_overrides;
    double kappa = 0.1;
    std::uint64_t max_N = 4096;
    std::optional<std::uint64_t> y_M;  // explicit smoothness bound
    double ym_exponent = 1.3;          // y_M = ceil((log N)^exponent) otherwise
    double epsilon = 0.1;
    unsigned workers = 1;
    std::uint32_t sieve_limit = 10'000'000;
    std::uint64_t scan_bound = kDefaultScanBound;
    std::optional<double> budget_seconds;

    ScanOptions scan_options() const;
};

// Mode-specific validation; throws UsageError.
void validate(const ExperimentConfig& config);

// Reads recognised keys (X, x, f, alpha, p_lo, p_hi, y_cap, kappa, max_N,
// ym, ym_exponent, epsilon, workers, sieve_limit, scan_bound, budget) on
// top of `base`.
ExperimentConfig apply_config(ExperimentConfig base, const Config& config);

struct CurveValues {
    double log_X = 0.0;
    double log_x = 0.0;
    // sqrt(x) exp((sqrt 2/2) sqrt(log X / log log X))
    std::optional<double> weighted;
    // sqrt(x) exp(sqrt(log z log_3 z / log_2 z)), z = sqrt(X)/x, when log_3 z > 0
    std::optional<double> set;
};

CurveValues curves(double X, double x);
CurveValues curves_log(double log_X, double log_x);

// exp(4 sqrt(log X log_2 X) log_3 X) <= x <= exp((log X)^{1/2+eps})
bool weighted_range_ok(double log_X, double log_x, double epsilon);
// exp((log X)^{1/2+eps}) < x <= X^{1/2}
bool set_range_ok(double log_X, double log_x, double epsilon);

struct ScanMaxResult {
    std::int64_t argmax_d = 0;
    double max_abs = 0.0;
    std::uint64_t discriminants = 0;
    std::array<std::uint64_t, kHistogramBins> histogram{};
};

ScanMaxResult scan_max(std::uint64_t X, std::uint64_t x, const CoefficientFunction& f,
                       const SieveTables& tables, const ScanOptions& options = {});

MomentReport make_moment_report(const DyadicScanResult& scan, const std::string& f_name,
                                const std::string& resonator_id);

struct HoughRun {
    HoughParams params;
    WeightedResonator resonator;
    MomentReport report;
    bool degenerate = false;
    bool range_ok = false;
    bool resonance_ok = false;
    // Sum_{a,b<=x} Sum_{am=bn} r(m)r(n) / Sum r(m)^2 and its reference curve.
    double equal_product_ratio = 0.0;
    std::optional<double> equal_product_reference;
};

// Throws PropertyFailure if the resonance inequality is violated.
HoughRun run_hough_experiment(const ExperimentConfig& config, const SieveTables& tables);

struct BtRun {
    std::uint64_t N_formula = 0;  // floor(X^{1/2-kappa} / x)
    std::uint64_t N = 0;
    bool N_capped = false;
    SetResonator set;
    MomentReport report;
    bool degenerate = false;
    bool range_ok = false;
    bool resonance_ok = false;
    double gcd_sum = 0.0;
    GcdSplit split;
    std::uint64_t equal_products = 0;  // Sum_{m,n in M} count_equal_products(m, n, x)
    double chain_rhs = 0.0;            // (x / sqrt 2) * split.head
    bool chain_ok = false;
};

std::uint64_t bt_cardinality(std::uint64_t X, std::uint64_t x, double kappa);
std::uint64_t default_smoothness_bound(std::uint64_t N, double exponent);

// Sum over ordered pairs of count_equal_products(m, n, x).
std::uint64_t total_equal_products(const SetResonator& set, std::uint64_t x, unsigned workers = 1);

// Throws PropertyFailure if the resonance inequality is violated.
BtRun run_bt_experiment(const ExperimentConfig& config, const SieveTables& tables);

}  // namespace qlab
