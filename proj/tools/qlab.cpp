// qlab: command-line front end for the experiment library.
//
// Exit codes: 0 success, 1 property failure, 2 usage, 3 resource/budget.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qlab/arith.hpp"
#include "qlab/checks.hpp"
#include "qlab/coeffs.hpp"
#include "qlab/errors.hpp"
#include "qlab/explab.hpp"
#include "qlab/moments.hpp"
#include "qlab/report_io.hpp"
#include "qlab/resonator.hpp"

namespace {

using namespace qlab;
using nlohmann::ordered_json;

enum Exit { kOk = 0, kProperty = 1, kUsage = 2, kResource = 3 };

struct Globals {
    std::optional<unsigned> workers;
    std::string config_file;
    std::string out;
    std::string format = "csv";
};

// Raw flag values; applied on top of the config file so flags win.
struct Flags {
    std::optional<std::string> X, x, f, alpha, p_lo, p_hi, y_cap, kappa, max_N, ym, ym_exponent, epsilon,
        sieve_limit, budget;
    std::optional<std::string> n;
    std::string mode;
    std::string save;
    std::string set_file;
    std::optional<std::uint64_t> N;
    std::string suite;
    std::int64_t kd = 0, kn = 0;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ResourceError("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit(Output& out, const std::string& format, const std::vector<std::string>& columns,
          const std::vector<std::string>& fields, const ordered_json& json) {
    if (format == "json") {
        out.stream() << json.dump(2) << '\n';
    } else {
        write_csv_header(out.stream(), columns);
        write_csv_row(out.stream(), fields);
    }
}

ExperimentConfig build_config(Mode mode, const Globals& g, const Flags& fl) {
    ExperimentConfig base;
    base.mode = mode;
    Config cfg;
    if (!g.config_file.empty()) cfg = Config::from_file(g.config_file);
    auto put = [&cfg](const char* key, const std::optional<std::string>& v) {
        if (v) cfg.set(key, *v);
    };
    put("X", fl.X);
    put("x", fl.x);
    put("f", fl.f);
    put("alpha", fl.alpha);
    put("p_lo", fl.p_lo);
    put("p_hi", fl.p_hi);
    put("y_cap", fl.y_cap);
    put("kappa", fl.kappa);
    put("max_N", fl.max_N);
    put("ym", fl.ym);
    put("ym_exponent", fl.ym_exponent);
    put("epsilon", fl.epsilon);
    put("sieve_limit", fl.sieve_limit);
    put("budget", fl.budget);
    if (g.workers) cfg.set("workers", std::to_string(*g.workers));
    auto c = apply_config(base, cfg);
    validate(c);
    return c;
}

// "e^k" is read as a logarithm directly so huge X stay representable.
double log_of(const std::string& text) {
    if (text.rfind("e^", 0) == 0) return parse_real(text.substr(2));
    const double v = parse_real(text);
    if (!(v > 0.0)) throw UsageError("expected a positive value, got " + text);
    return std::log(v);
}

int cmd_kronecker(const Globals& g, const Flags& fl) {
    Output out(g.out);
    const int k = kronecker(fl.kd, fl.kn);
    emit(out, g.format, {"d", "n", "kronecker"},
         {std::to_string(fl.kd), std::to_string(fl.kn), std::to_string(k)},
         {{"d", fl.kd}, {"n", fl.kn}, {"kronecker", k}});
    return kOk;
}

int cmd_fd_count(const Globals& g, const Flags& fl) {
    if (!fl.X) throw UsageError("fd-count needs X");
    const auto X = parse_uint(*fl.X);
    if (X == 0) throw UsageError("X must be positive");
    const std::uint64_t count = DiscriminantEnumerator(X).count(0, X);
    Output out(g.out);
    const double density = 6.0 * static_cast<double>(X) / (std::numbers::pi * std::numbers::pi);
    emit(out, g.format, {"X", "count", "main_term"},
         {std::to_string(X), std::to_string(count), format_double(density)},
         {{"X", X}, {"count", count}, {"main_term", density}});
    return kOk;
}

int cmd_meanvalue(const Globals& g, const Flags& fl) {
    if (!fl.n) throw UsageError("meanvalue needs --n");
    const auto c = build_config(Mode::MeanValue, g, fl);
    const auto n = parse_uint(*fl.n);
    if (n == 0) throw UsageError("n must be positive");
    const auto tables = build_sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(isqrt(n) + 2, 100)));
    const auto report = mean_value_report(n, c.X, c.epsilon, tables, c.scan_bound);
    Output out(g.out);
    emit(out, g.format, mean_value_report_columns(), csv_fields(report), to_json(report));
    return kOk;
}

int cmd_scan(const Globals& g, const Flags& fl) {
    const auto c = build_config(Mode::Scan, g, fl);
    const auto f = parse_coefficient(c.f_spec);
    const auto tables = build_sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(c.x, 2)));
    const auto s = scan_max(c.X, c.x, f, tables, c.scan_options());
    Output out(g.out);
    if (g.format == "json") {
        auto j = to_json(s);
        j["X"] = c.X;
        j["x"] = c.x;
        j["f_name"] = f.name();
        out.stream() << j.dump(2) << '\n';
        return kOk;
    }
    std::vector<std::string> cols{"X", "x", "f_name", "discriminants", "max_abs", "argmax_d"};
    std::vector<std::string> row{std::to_string(c.X), std::to_string(c.x), f.name(),
                                 std::to_string(s.discriminants), format_double(s.max_abs),
                                 std::to_string(s.argmax_d)};
    for (std::size_t b = 0; b < kHistogramBins; ++b) {
        cols.push_back("bin" + std::to_string(b));
        row.push_back(std::to_string(s.histogram[b]));
    }
    write_csv_header(out.stream(), cols);
    write_csv_row(out.stream(), row);
    return kOk;
}

void save_resonator(const std::string& path, const Resonator& r) {
    if (path.empty()) return;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ResourceError("cannot write resonator to " + path);
    write_resonator(file, r);
}

int cmd_resonate(const Globals& g, const Flags& fl) {
    Output out(g.out);
    if (fl.mode == "hough") {
        const auto c = build_config(Mode::Hough, g, fl);
        const auto tables = build_sieve(c.sieve_limit);
        const auto run = run_hough_experiment(c, tables);
        save_resonator(fl.save, run.resonator);
        emit(out, g.format, hough_run_columns(), csv_fields(run), to_json(run));
        return run.resonance_ok ? kOk : kProperty;
    }
    if (fl.mode == "bt") {
        const auto c = build_config(Mode::Bt, g, fl);
        const auto tables = build_sieve(c.sieve_limit);
        const auto run = run_bt_experiment(c, tables);
        save_resonator(fl.save, run.set);
        emit(out, g.format, bt_run_columns(), csv_fields(run), to_json(run));
        if (!run.chain_ok) std::cerr << "warning: equal-product chain inequality fails on this run\n";
        return run.resonance_ok && run.chain_ok ? kOk : kProperty;
    }
    throw UsageError("--mode must be hough or bt");
}

int cmd_gcdsum(const Globals& g, const Flags& fl) {
    Config cfg;
    if (!g.config_file.empty()) cfg = Config::from_file(g.config_file);
    const unsigned workers = g.workers.value_or(static_cast<unsigned>(cfg.get_uint("workers").value_or(1)));
    SetResonator set;
    if (!fl.set_file.empty()) {
        if (fl.N || fl.ym) throw UsageError("use either --set or --N/--ym");
        std::ifstream in(fl.set_file, std::ios::binary);
        if (!in) throw UsageError("cannot read " + fl.set_file);
        auto r = read_resonator(in);
        if (!std::holds_alternative<SetResonator>(r)) throw UsageError(fl.set_file + " is not a set resonator");
        set = std::get<SetResonator>(r);
    } else {
        if (!fl.N || !fl.ym) throw UsageError("gcdsum needs --set FILE or both --N and --ym");
        const auto yM = parse_uint(*fl.ym);
        const auto limit = cfg.get_uint("sieve_limit").value_or(10'000'000);
        const auto tables = build_sieve(static_cast<std::uint32_t>(limit));
        set = build_bt_set(*fl.N, yM, tables);
        if (const auto issues = set_resonator_violations(set, *fl.N); !issues.empty())
            throw PropertyFailure(issues.front());
    }
    const double total = gcd_sum(set, workers);
    std::optional<GcdSplit> split;
    if (fl.x) split = gcd_sum_split(set, parse_real(*fl.x), workers);
    Output out(g.out);
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
    auto jopt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
    const std::optional<double> head = split ? std::optional<double>(split->head) : std::nullopt;
    const std::optional<double> tail = split ? std::optional<double>(split->tail) : std::nullopt;
    const double N = static_cast<double>(set.N());
    emit(out, g.format, {"N", "y_M", "window_start", "gcd_sum", "log_ratio", "head", "tail"},
         {std::to_string(set.N()), std::to_string(set.y_M), std::to_string(set.window_start),
          format_double(total), format_double(std::log(total / N)), opt(head), opt(tail)},
         {{"N", set.N()},
          {"y_M", set.y_M},
          {"window_start", set.window_start},
          {"gcd_sum", total},
          {"log_ratio", std::log(total / N)},
          {"head", jopt(head)},
          {"tail", jopt(tail)}});
    return kOk;
}

int cmd_curves(const Globals& g, const Flags& fl) {
    if (!fl.X || !fl.x) throw UsageError("curves needs --X and --x");
    const auto c = curves_log(log_of(*fl.X), log_of(*fl.x));
    Output out(g.out);
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
    emit(out, g.format, {"log_X", "log_x", "weighted", "set"},
         {format_double(c.log_X), format_double(c.log_x), opt(c.weighted), opt(c.set)}, to_json(c));
    return kOk;
}

int cmd_verify(const Globals& g, const Flags& fl) {
    const auto summary = checks::verify(fl.suite, g.workers.value_or(1));
    Output out(g.out);
    if (g.format == "json") {
        out.stream() << checks::to_json(summary).dump(2) << '\n';
    } else {
        write_csv_header(out.stream(), {"suite", "name", "passed", "seconds", "detail"});
        for (const auto& r : summary.results)
            write_csv_row(out.stream(), {r.suite, r.name, r.passed ? "true" : "false",
                                         format_double(r.seconds), r.detail});
    }
    return summary.all_passed() ? kOk : kProperty;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadratic character sum experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    Flags fl;
    app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--config", g.config_file, "key = value settings file");
    app.add_option("--out", g.out, "write output here instead of stdout");
    auto* format_opt =
        app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* kr = app.add_subcommand("kronecker", "Kronecker symbol (d|n)");
    kr->add_option("d", fl.kd)->required();
    kr->add_option("n", fl.kn)->required();

    auto* fd = app.add_subcommand("fd-count", "count fundamental discriminants with |d| <= X");
    fd->add_option("X", fl.X)->required();

    auto* mv = app.add_subcommand("meanvalue", "Sum_{|d|<=X} chi_d(n) with main term and envelope");
    mv->add_option("--n", fl.n)->required();
    mv->add_option("--X", fl.X);
    mv->add_option("--epsilon", fl.epsilon);

    auto* sc = app.add_subcommand("scan", "max |S_d(x)| over X < |d| <= 2X");
    sc->add_option("--X", fl.X);
    sc->add_option("--x", fl.x);
    sc->add_option("--f", fl.f);
    sc->add_option("--budget", fl.budget, "seconds");

    auto* rs = app.add_subcommand("resonate", "resonator moment experiment");
    rs->add_option("--mode", fl.mode)->required()->check(CLI::IsMember({"hough", "bt"}));
    rs->add_option("--X", fl.X);
    rs->add_option("--x", fl.x);
    rs->add_option("--f", fl.f);
    rs->add_option("--alpha", fl.alpha);
    rs->add_option("--p-lo", fl.p_lo);
    rs->add_option("--p-hi", fl.p_hi);
    rs->add_option("--y-cap", fl.y_cap);
    rs->add_option("--kappa", fl.kappa);
    rs->add_option("--max-N", fl.max_N);
    rs->add_option("--ym", fl.ym);
    rs->add_option("--ym-exponent", fl.ym_exponent);
    rs->add_option("--epsilon", fl.epsilon);
    rs->add_option("--sieve-limit", fl.sieve_limit);
    rs->add_option("--budget", fl.budget, "seconds");
    rs->add_option("--save", fl.save, "write the resonator to FILE");

    auto* gs = app.add_subcommand("gcdsum", "GCD sum of a set resonator");
    gs->add_option("--set", fl.set_file, "set resonator file");
    gs->add_option("--N", fl.N);
    gs->add_option("--ym", fl.ym);
    gs->add_option("--x", fl.x, "also split at [m,n]/(m,n) <= x^2/2");

    auto* cv = app.add_subcommand("curves", "reference curves");
    cv->add_option("--X", fl.X)->required();
    cv->add_option("--x", fl.x)->required();

    auto* vf = app.add_subcommand("verify", "run invariant suites");
    vf->add_option("suite", fl.suite)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        // The config file may also carry the output settings; flags win.
        if (!g.config_file.empty()) {
            const auto cfg = Config::from_file(g.config_file);
            if (format_opt->count() == 0)
                if (const auto v = cfg.get("format")) g.format = *v;
            if (g.out.empty())
                if (const auto v = cfg.get("out")) g.out = *v;
            if (g.format != "csv" && g.format != "json") throw UsageError("format must be csv or json");
        }
        if (kr->parsed()) return cmd_kronecker(g, fl);
        if (fd->parsed()) return cmd_fd_count(g, fl);
        if (mv->parsed()) return cmd_meanvalue(g, fl);
        if (sc->parsed()) return cmd_scan(g, fl);
        if (rs->parsed()) return cmd_resonate(g, fl);
        if (gs->parsed()) return cmd_gcdsum(g, fl);
        if (cv->parsed()) return cmd_curves(g, fl);
        if (vf->parsed()) return cmd_verify(g, fl);
    } catch (const PropertyFailure& e) {
        std::cerr << "property failure: " << e.what() << '\n';
        return kProperty;
    } catch (const ScanBudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\ncompleted |d| ranges:";
        for (const auto& [lo, hi] : e.completed()) std::cerr << " (" << lo << ", " << hi << ']';
        std::cerr << '\n';
        return kResource;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return kResource;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource error: out of memory\n";
        return kResource;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
