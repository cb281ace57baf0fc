#include "cli.hpp"

#include "fmh/error.hpp"
#include "fmh/export.hpp"
#include "fmh/garch.hpp"
#include "fmh/ingest.hpp"
#include "fmh/liquidity.hpp"
#include "fmh/rolling.hpp"
#include "fmh/scaling.hpp"
#include "fmh/synth.hpp"
#include "fmh/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <thread>

#ifndef FMH_VERSION
#define FMH_VERSION "0.0.0"
#endif

namespace fmh::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kManifestName = "manifest.json";

struct InputOptions {
    std::string path;
    std::string date_column = "date";
    std::string close_column = "close";
    std::string delimiter = ",";

    [[nodiscard]] CsvLayout layout() const {
        if (delimiter.size() != 1) {
            throw InputError("--delimiter must be a single character, got '" + delimiter + "'");
        }
        CsvLayout l;
        l.date_column = date_column;
        l.close_column = close_column;
        l.delimiter = delimiter.front();
        return l;
    }
};

// Everything a subcommand can be told. Each subcommand binds only its own
// fields; the defaults are the library defaults unless noted.
struct Options {
    std::string output_dir = ".";
    InputOptions input;
    RollingConfig config;
    std::string garch_mode{to_string(GarchMode::WholeSample)};
    std::string stamp{to_string(WindowStamp::End)};
    bool quiet = false;

    GeneratorSpec spec = [] {
        GeneratorSpec s;
        s.n = 10000;
        s.sigma = 0.01;  // daily-return scale, so the price path stays finite
        return s;
    }();
    std::string kind{to_string(GeneratorKind::Fgn)};
    std::string format = "prices";
    bool dates = false;
    std::string start = "2000-01-03";
    double start_price = 100.0;
    std::string name = "series.csv";

    std::string rolling_path;
    double threshold = 0.5;

    std::string manifest_path;
};

struct Commands {
    CLI::App* analyze = nullptr;
    CLI::App* roll = nullptr;
    CLI::App* synth = nullptr;
    CLI::App* report = nullptr;
    CLI::App* replay = nullptr;
};

void add_output_dir(CLI::App& cmd, Options& o) {
    cmd.add_option("-o,--output_dir", o.output_dir, "Directory receiving every file written")
        ->envname("FMH_OUTPUT_DIR");
}

void add_input(CLI::App& cmd, InputOptions& in) {
    cmd.add_option("input", in.path, "Price CSV with a header row")->required();
    cmd.add_option("--date_column", in.date_column, "Header name of the date column");
    cmd.add_option("--close_column", in.close_column, "Header name of the closing price column");
    cmd.add_option("--delimiter", in.delimiter, "Field separator");
}

void add_scaling(CLI::App& cmd, RollingConfig& c) {
    cmd.add_option("--s_min", c.s_min, "Smallest segment size");
    cmd.add_option("--s_max", c.s_max, "Largest segment size");
    cmd.add_option("--q_set", c.q_set, "Moments q, comma separated; must contain 2")
        ->delimiter(',');
    cmd.add_option("--detrend_order", c.detrend_order, "Degree of the local detrending polynomial");
    cmd.add_option("--garch_tolerance", c.garch.tolerance,
                   "Simplex stop: spread of log-likelihood values");
    cmd.add_option("--garch_max_iterations", c.garch.max_iterations, "Simplex iteration budget");
    cmd.add_flag("--garch_demean", c.garch.demean, "Subtract the sample mean before fitting");
}

Commands build(CLI::App& app, Options& o) {
    app.name("fmh");
    app.description("Variance-scaling analysis of price series: GARCH(1,1) filtering, "
                    "MF-DFA Hurst exponents and scaling-based liquidity measures.");
    // Help is --help only: --h is the Hurst exponent of synth.
    app.set_help_flag("--help", "Print this help message and exit");
    app.option_defaults()->always_capture_default();
    app.set_version_flag("--version", FMH_VERSION);
    app.require_subcommand(1);

    Commands c;
    c.analyze = app.add_subcommand("analyze", "Whole-series GARCH filter, MF-DFA and indicators");
    add_input(*c.analyze, o.input);
    add_scaling(*c.analyze, o.config);
    add_output_dir(*c.analyze, o);

    c.roll = app.add_subcommand("roll", "Sliding-window Hurst exponent and indicators");
    add_input(*c.roll, o.input);
    c.roll->add_option("--window", o.config.window, "Window length in returns");
    c.roll->add_option("--step", o.config.step, "Offset between consecutive windows");
    add_scaling(*c.roll, o.config);
    c.roll->add_option("--garch_mode", o.garch_mode, "One fit for the whole sample or per window")
        ->check(CLI::IsMember({"whole-sample", "per-window"}));
    c.roll->add_option("--stamp", o.stamp, "Window date used to label each result")
        ->check(CLI::IsMember({"start", "center", "end"}));
    c.roll->add_option("--workers", o.config.workers,
                       "Worker threads (0 uses every hardware thread); output does not depend on it");
    c.roll->add_flag("-q,--quiet", o.quiet, "No progress on standard error");
    add_output_dir(*c.roll, o);

    c.synth = app.add_subcommand("synth", "Write a seeded synthetic series");
    c.synth->add_option("--kind", o.kind, "Generator")
        ->check(CLI::IsMember({"fgn", "gaussian-white", "garch"}));
    c.synth->add_option("--n", o.spec.n, "Number of returns");
    c.synth->add_option("--h,--hurst", o.spec.hurst, "Hurst exponent (fgn)");
    c.synth->add_option("--sigma", o.spec.sigma, "Standard deviation (fgn, gaussian-white)");
    c.synth->add_option("--omega", o.spec.garch.omega, "GARCH constant");
    c.synth->add_option("--alpha", o.spec.garch.alpha, "GARCH shock coefficient");
    c.synth->add_option("--beta", o.spec.garch.beta, "GARCH persistence coefficient");
    c.synth->add_option("--burn_in", o.spec.burn_in, "Discarded leading GARCH draws");
    c.synth->add_option("--seed", o.spec.seed, "Random seed");
    c.synth->add_option("--format", o.format,
                        "prices: date,close path from the returns; returns: the draws themselves")
        ->check(CLI::IsMember({"prices", "returns"}));
    c.synth->add_flag("--dates", o.dates, "Add a weekday date column to the returns format");
    c.synth->add_option("--start", o.start, "First synthetic date (YYYY-MM-DD)");
    c.synth->add_option("--start_price", o.start_price, "Initial price of the prices format");
    c.synth->add_option("--name", o.name, "Output file name inside the output directory");
    add_output_dir(*c.synth, o);

    c.report = app.add_subcommand("report", "Per-indicator CSVs and a regime summary");
    c.report->add_option("input", o.rolling_path, "Rolling CSV written by roll")->required();
    c.report->add_option("--threshold", o.threshold, "Hurst level separating regimes");
    add_output_dir(*c.report, o);

    c.replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    c.replay->add_option("manifest", o.manifest_path, "manifest.json of an earlier run")->required();
    add_output_dir(*c.replay, o);
    return c;
}

void parse(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
}

// Owns the output directory and refuses names that would escape it.
class OutputDir {
public:
    explicit OutputDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        if (name.empty() || name == "." || name == ".." || fs::path(name).filename() != name) {
            throw InputError("output name '" + name + "' must be a plain file name");
        }
        const fs::path target = root_ / name;
        std::ofstream file(target, std::ios::binary | std::ios::trunc);
        if (!file) throw InputError("cannot write '" + target.string() + "'");
        body(file);
        file.flush();
        if (!file) throw InputError("write failed for '" + target.string() + "'");
        if (std::find(written_.begin(), written_.end(), name) == written_.end()) {
            written_.push_back(name);
        }
    }

    void write_json(const std::string& name, const Json& value) {
        write(name, [&](std::ostream& s) { s << value.dump(2) << '\n'; });
    }

    [[nodiscard]] const fs::path& root() const { return root_; }
    [[nodiscard]] const std::vector<std::string>& written() const { return written_; }

private:
    fs::path root_;
    std::vector<std::string> written_;
};

struct Run {
    std::ostream& out;
    std::ostream& err;
    std::string command;
    std::vector<std::string> argv;  // as recorded: command name first
    fs::path cwd;
    std::optional<std::string> replayed_from;

    std::vector<std::string> inputs;
    Json config = Json::object();
    std::vector<std::uint64_t> seeds;
};

void write_manifest(OutputDir& dir, const Run& run, double seconds) {
    Json m;
    m["tool"] = "fmh";
    m["version"] = FMH_VERSION;
    m["command"] = run.command;
    m["argv"] = run.argv;
    m["cwd"] = run.cwd.string();
    m["output_dir"] = fs::absolute(dir.root()).lexically_normal().string();
    m["inputs"] = run.inputs;
    m["config"] = run.config;
    m["seeds"] = run.seeds;
    m["outputs"] = dir.written();
    m["duration_seconds"] = seconds;
    if (run.replayed_from) m["replayed_from"] = *run.replayed_from;
    dir.write_json(kManifestName, m);
}

std::string absolute_input(const std::string& path, const fs::path& cwd) {
    const fs::path p(path);
    return (p.is_absolute() ? p : cwd / p).lexically_normal().string();
}

void require_q2(const RollingConfig& c) {
    if (std::find(c.q_set.begin(), c.q_set.end(), 2.0) == c.q_set.end()) {
        throw InputError("--q_set must contain 2");
    }
}

void analyze(const Options& o, Run& run, OutputDir& dir) {
    const RollingConfig& c = o.config;
    require_q2(c);
    const auto prices = load_prices(run.cwd / o.input.path, o.input.layout());
    const auto returns = log_returns(prices);
    const auto fit = garch_fit(returns, c.garch);
    if (!fit.converged) {
        run.err << "warning: GARCH fit stopped after " << fit.iterations
                << " iterations without converging\n";
    }
    const auto filtered = garch_filter(returns, fit);
    const auto results = mfdfa(filtered.values, c.mfdfa_options());
    const auto& main = results.at(2.0);
    const auto indicators = liquidity_indicators(main.profile, main.fit);

    Json garch = to_json(fit);
    garch["mean"] = fit.mean;
    garch["unconditional_variance"] = fit.params.unconditional_variance();
    dir.write_json("garch.json", garch);
    dir.write("variance_path.csv", [&](std::ostream& s) {
        write_variance_path_csv(s, returns.dates, fit.h);
    });
    for (const auto& [q, result] : results) {
        dir.write("fluctuation_q" + format_double(q) + ".csv",
                  [&](std::ostream& s) { write_fluctuation_csv(s, result.profile); });
    }
    Json scaling = to_json(main.fit);
    scaling["persistence"] = to_string(classify_persistence(main.fit.hurst));
    scaling["observations"] = filtered.values.size();
    Json fits = Json::array();
    for (const auto& [q, result] : results) fits.push_back(to_json(result.fit));
    scaling["fits"] = fits;
    dir.write_json("scaling.json", scaling);
    dir.write_json("indicators.json", to_json(indicators));

    run.inputs = {absolute_input(o.input.path, run.cwd)};
    run.config = {{"s_min", c.s_min},
                  {"s_max", c.s_max},
                  {"q_set", c.q_set},
                  {"detrend_order", c.detrend_order},
                  {"garch",
                   {{"tolerance", c.garch.tolerance},
                    {"max_iterations", c.garch.max_iterations},
                    {"demean", c.garch.demean}}}};

    run.out << "returns      " << returns.size() << '\n'
            << "hurst        " << format_double(main.fit.hurst) << '\n'
            << "r_squared    " << format_double(main.fit.r_squared) << '\n'
            << "f0           " << format_double(indicators.f0) << '\n'
            << "f_sigma      " << format_double(indicators.f_sigma) << '\n'
            << "f_range      " << format_double(indicators.f_range) << '\n'
            << "f_ratio      " << format_double(indicators.f_ratio) << '\n';
}

void roll_command(const Options& o, Run& run, OutputDir& dir) {
    RollingConfig c = o.config;
    c.garch_mode = parse_garch_mode(o.garch_mode);
    c.stamp = parse_window_stamp(o.stamp);
    if (c.workers == 0) c.workers = std::max(1u, std::thread::hardware_concurrency());
    c.validate();
    const auto prices = load_prices(run.cwd / o.input.path, o.input.layout());
    const auto returns = log_returns(prices);
    if (returns.size() < c.window) {
        throw InputError(o.input.path + ": " + std::to_string(returns.size()) +
                         " returns, fewer than the window of " + std::to_string(c.window));
    }

    ProgressCallback progress;
    if (!o.quiet) {
        progress = [&err = run.err, last = std::size_t{0}](std::size_t done,
                                                           std::size_t total) mutable {
            const std::size_t tenth = done * 10 / total;
            if (tenth > last || done == total) {
                last = tenth;
                err << "roll: " << done << '/' << total << " windows\n";
            }
        };
    }
    const auto results = roll(returns, c, progress);
    dir.write("rolling.csv", [&](std::ostream& s) { write_rolling_csv(s, results); });
    dir.write("rolling.jsonl", [&](std::ostream& s) { write_rolling_jsonl(s, results); });

    run.inputs = {absolute_input(o.input.path, run.cwd)};
    run.config = to_json(c);
    const auto unconverged = std::count_if(results.begin(), results.end(),
                                           [](const WindowResult& r) { return !r.garch_converged; });
    if (unconverged > 0) {
        run.err << "warning: GARCH did not converge for " << unconverged << " of "
                << results.size() << " windows\n";
    }
    run.out << "windows " << results.size() << '\n';
}

std::vector<Date> weekday_dates(Date first, std::size_t n) {
    const std::chrono::weekday wd{std::chrono::sys_days{first}};
    if (wd == std::chrono::Saturday || wd == std::chrono::Sunday) first = next_weekday(first);
    std::vector<Date> dates;
    dates.reserve(n);
    if (n > 0) dates.push_back(first);
    while (dates.size() < n) dates.push_back(next_weekday(dates.back()));
    return dates;
}

void synth(const Options& o, Run& run, OutputDir& dir) {
    GeneratorSpec spec = o.spec;
    spec.kind = parse_generator_kind(o.kind);
    const auto values = generate(spec);
    const Date start = parse_date(o.start);

    if (o.format == "prices") {
        if (!(o.start_price > 0.0) || !std::isfinite(o.start_price)) {
            throw InputError("--start_price must be positive");
        }
        const auto dates = weekday_dates(start, values.size() + 1);
        std::vector<double> path{o.start_price};
        double log_level = 0.0;
        for (double r : values) {
            log_level += r;
            const double p = o.start_price * std::exp(log_level);
            if (!std::isfinite(p) || p <= 0.0) {
                throw InputError("price path leaves the floating-point range; lower --sigma "
                                 "or use --format returns");
            }
            path.push_back(p);
        }
        const PriceSeries prices(dates, std::move(path));
        dir.write(o.name, [&](std::ostream& s) { write_prices(s, prices); });
    } else if (o.dates) {
        const auto dates = weekday_dates(start, values.size());
        dir.write(o.name, [&](std::ostream& s) { write_series(s, dates, values, "return"); });
    } else {
        dir.write(o.name, [&](std::ostream& s) {
            s << "return\n";
            for (double v : values) s << format_double(v) << '\n';
        });
    }

    run.config = to_json(spec);
    run.config["format"] = o.format;
    if (o.format == "prices" || o.dates) run.config["start"] = format_date(start);
    if (o.format == "prices") run.config["start_price"] = o.start_price;
    run.seeds = {spec.seed};
    run.out << "wrote " << values.size() << " returns as " << o.format << " to "
            << (dir.root() / o.name).string() << '\n';
}

void report(const Options& o, Run& run, OutputDir& dir) {
    const fs::path source = run.cwd / o.rolling_path;
    std::ifstream in(source);
    if (!in) throw InputError("cannot open rolling file '" + o.rolling_path + "'");
    const auto results = read_rolling_csv(in, o.rolling_path);
    if (results.empty()) throw InputError(o.rolling_path + ": no rows");

    std::vector<Date> dates;
    for (const auto& r : results) dates.push_back(r.date);
    const std::pair<const char*, double WindowResult::*> plain[] = {
        {"hurst", &WindowResult::hurst},
        {"stderr_hurst", &WindowResult::stderr_hurst},
        {"r_squared", &WindowResult::r_squared}};
    for (const auto& [column, member] : plain) {
        std::vector<double> v;
        for (const auto& r : results) v.push_back(r.*member);
        dir.write(std::string(column) + ".csv",
                  [&](std::ostream& s) { write_series(s, dates, v, column); });
    }
    const std::pair<const char*, double LiquidityIndicators::*> measures[] = {
        {"f0", &LiquidityIndicators::f0},
        {"f_sigma", &LiquidityIndicators::f_sigma},
        {"f_range", &LiquidityIndicators::f_range},
        {"f_ratio", &LiquidityIndicators::f_ratio}};
    for (const auto& [column, member] : measures) {
        std::vector<double> v;
        for (const auto& r : results) v.push_back(r.indicators.*member);
        dir.write(std::string(column) + ".csv",
                  [&](std::ostream& s) { write_series(s, dates, v, column); });
    }

    const auto regimes = detect_regimes(results, o.threshold);
    const std::string level = format_double(o.threshold);
    dir.write("regimes.txt", [&](std::ostream& s) {
        s << "regimes " << regimes.size() << " threshold " << level << '\n';
        for (const auto& g : regimes) {
            s << to_string(g.label) << ' ' << level << ' ' << format_date(g.start) << ' '
              << format_date(g.end) << " windows " << g.first_window << '-' << g.last_window
              << '\n';
        }
    });

    run.inputs = {absolute_input(o.rolling_path, run.cwd)};
    run.config = {{"threshold", o.threshold}};
    run.out << "rows " << results.size() << ", regimes " << regimes.size() << '\n';
}

void execute(const Commands& c, const Options& o, Run& run) {
    const auto started = std::chrono::steady_clock::now();
    OutputDir dir(run.cwd / o.output_dir);
    if (c.analyze->parsed()) {
        run.command = "analyze";
        analyze(o, run, dir);
    } else if (c.roll->parsed()) {
        run.command = "roll";
        roll_command(o, run, dir);
    } else if (c.synth->parsed()) {
        run.command = "synth";
        synth(o, run, dir);
    } else {
        run.command = "report";
        report(o, run, dir);
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    write_manifest(dir, run, elapsed.count());
}

// Parses the recorded argv with a fresh option set, resolving relative input
// paths against the recorded working directory, and writes into the output
// directory given to replay.
void replay(const Options& o, Run& run) {
    std::ifstream in(run.cwd / o.manifest_path);
    if (!in) throw InputError("cannot open manifest '" + o.manifest_path + "'");
    Json m;
    try {
        m = Json::parse(in);
        run.argv = m.at("argv").get<std::vector<std::string>>();
        run.cwd = m.at("cwd").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(o.manifest_path + ": not a run manifest (" + e.what() + ")");
    }
    if (run.argv.empty() || run.argv.front() == "replay") {
        throw InputError(o.manifest_path + ": manifest does not record a replayable command");
    }
    CLI::App app;
    Options recorded;
    const Commands c = build(app, recorded);
    try {
        parse(app, run.argv);
    } catch (const CLI::Error& e) {
        throw InputError(o.manifest_path + ": recorded arguments do not parse: " + e.what());
    }
    recorded.output_dir = fs::absolute(o.output_dir).string();
    run.replayed_from = fs::absolute(o.manifest_path).lexically_normal().string();
    execute(c, recorded, run);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app;
    Options options;
    const Commands commands = build(app, options);
    try {
        parse(app, args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    Run run{out, err, {}, args, fs::current_path(), std::nullopt, {}, Json::object(), {}};
    try {
        if (commands.replay->parsed()) {
            replay(options, run);
        } else {
            execute(commands, options, run);
        }
        return 0;
    } catch (const InputError& e) {
        err << "fmh: error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "fmh: error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        err << "fmh: numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "fmh: internal error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace fmh::cli
