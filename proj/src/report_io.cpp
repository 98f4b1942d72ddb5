#include "qlab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace qlab {

using nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string flag(bool b) { return b ? "true" : "false"; }

}  // namespace

const std::vector<std::string>& moment_report_columns() {
    static const std::vector<std::string> cols{"X",        "x",        "f_name",      "resonator_id",
                                               "M1",       "M2",       "ratio",       "scan_max",
                                               "argmax_d", "curve_weighted", "curve_set"};
    return cols;
}

const std::vector<std::string>& mean_value_report_columns() {
    static const std::vector<std::string> cols{"n",          "X",          "exact_sum",
                                               "main_term", "error_envelope", "epsilon"};
    return cols;
}

void write_csv_header(std::ostream& out, const std::vector<std::string>& columns) {
    write_csv_row(out, columns);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << '\n';
}

std::vector<std::string> csv_fields(const MomentReport& r) {
    return {std::to_string(r.X),   std::to_string(r.x),     r.f_name,
            r.resonator_id,        format_double(r.M1),     format_double(r.M2),
            format_double(r.ratio), format_double(r.scan_max), std::to_string(r.argmax_d),
            opt(r.curve_weighted),    opt(r.curve_set)};
}

std::vector<std::string> csv_fields(const MeanValueReport& r) {
    return {std::to_string(r.n),          std::to_string(r.X),
            format_double(r.exact_sum),   format_double(r.main_term),
            format_double(r.error_envelope), format_double(r.epsilon)};
}

ordered_json to_json(const MomentReport& r) {
    return {{"X", r.X},
            {"x", r.x},
            {"f_name", r.f_name},
            {"resonator_id", r.resonator_id},
            {"M1", r.M1},
            {"M2", r.M2},
            {"ratio", r.ratio},
            {"scan_max", r.scan_max},
            {"argmax_d", r.argmax_d},
            {"curve_weighted", opt_json(r.curve_weighted)},
            {"curve_set", opt_json(r.curve_set)}};
}

ordered_json to_json(const MeanValueReport& r) {
    return {{"n", r.n},
            {"X", r.X},
            {"exact_sum", r.exact_sum},
            {"main_term", r.main_term},
            {"error_envelope", r.error_envelope},
            {"epsilon", r.epsilon}};
}

ordered_json to_json(const CurveValues& c) {
    return {{"log_X", c.log_X}, {"log_x", c.log_x}, {"weighted", opt_json(c.weighted)}, {"set", opt_json(c.set)}};
}

ordered_json to_json(const ScanMaxResult& s) {
    return {{"argmax_d", s.argmax_d},
            {"max_abs", s.max_abs},
            {"discriminants", s.discriminants},
            {"histogram", s.histogram}};
}

ordered_json to_json(const HoughRun& run) {
    const auto& p = run.params;
    return {{"report", to_json(run.report)},
            {"params",
             {{"alpha", p.alpha},
              {"formula_log_y", p.formula_log_y},
              {"log_y", p.log_y},
              {"lambda", p.lambda},
              {"p_lo", p.p_lo},
              {"p_hi", p.p_hi},
              {"overridden", p.overrides.any()}}},
            {"support_size", run.resonator.support.size()},
            {"degenerate", run.degenerate},
            {"range_ok", run.range_ok},
            {"resonance_inequality", run.resonance_ok},
            {"equal_product_ratio", run.equal_product_ratio},
            {"equal_product_reference", opt_json(run.equal_product_reference)}};
}

ordered_json to_json(const BtRun& run) {
    return {{"report", to_json(run.report)},
            {"N_formula", run.N_formula},
            {"N", run.N},
            {"N_capped", run.N_capped},
            {"y_M", run.set.y_M},
            {"window_start", run.set.window_start},
            {"degenerate", run.degenerate},
            {"range_ok", run.range_ok},
            {"resonance_inequality", run.resonance_ok},
            {"gcd_sum", run.gcd_sum},
            {"gcd_head", run.split.head},
            {"gcd_tail", run.split.tail},
            {"equal_products", run.equal_products},
            {"chain_rhs", run.chain_rhs},
            {"chain_ok", run.chain_ok}};
}

std::vector<std::string> hough_run_columns() {
    auto cols = moment_report_columns();
    for (const char* c : {"lambda", "p_lo", "p_hi", "support_size", "degenerate", "range_ok",
                          "resonance_inequality", "equal_product_ratio", "equal_product_reference"})
        cols.emplace_back(c);
    return cols;
}

std::vector<std::string> csv_fields(const HoughRun& run) {
    auto f = csv_fields(run.report);
    for (auto&& v : {format_double(run.params.lambda), format_double(run.params.p_lo),
                     format_double(run.params.p_hi), std::to_string(run.resonator.support.size()),
                     flag(run.degenerate), flag(run.range_ok), flag(run.resonance_ok),
                     format_double(run.equal_product_ratio), opt(run.equal_product_reference)})
        f.push_back(v);
    return f;
}

std::vector<std::string> bt_run_columns() {
    auto cols = moment_report_columns();
    for (const char* c : {"N_formula", "N", "N_capped", "y_M", "window_start", "degenerate", "range_ok",
                          "resonance_inequality", "gcd_sum", "gcd_head", "gcd_tail", "equal_products",
                          "chain_rhs", "chain_ok"})
        cols.emplace_back(c);
    return cols;
}

std::vector<std::string> csv_fields(const BtRun& run) {
    auto f = csv_fields(run.report);
    for (auto&& v : {std::to_string(run.N_formula), std::to_string(run.N), flag(run.N_capped),
                     std::to_string(run.set.y_M), std::to_string(run.set.window_start),
                     flag(run.degenerate), flag(run.range_ok), flag(run.resonance_ok),
                     format_double(run.gcd_sum), format_double(run.split.head),
                     format_double(run.split.tail), std::to_string(run.equal_products),
                     format_double(run.chain_rhs), flag(run.chain_ok)})
        f.push_back(v);
    return f;
}

}  // namespace qlab
