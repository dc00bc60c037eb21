#include "cli/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/settings.hpp"
#include "cli/udp_listener.hpp"
#include "flowcap/capacity_analyzer.hpp"
#include "flowcap/capture_file.hpp"
#include "flowcap/errors.hpp"
#include "flowcap/flow_simulator.hpp"
#include "flowcap/interval_aggregator.hpp"
#include "flowcap/kv_config.hpp"
#include "flowcap/netflow_v5.hpp"
#include "flowcap/report_io.hpp"
#include "flowcap/samples_csv.hpp"

namespace flowcap::cli {

namespace {

namespace fs = std::filesystem;

std::atomic<bool> g_interrupted{false};

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const UndefinedMoment& e) {
        err << "error: model moment diverges: " << e.what() << '\n';
        return kExitModelDivergence;
    } catch (const FitError& e) {
        err << "error: fit failed: " << e.what() << '\n';
        return kExitFitFailure;
    } catch (const ConfigError& e) {
        err << "error: configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidParameters& e) {
        err << "error: configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const MalformedRow& e) {
        err << "error: input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

KeyValueConfig load_settings(const CommandSpec& spec) {
    KeyValueConfig config;
    if (spec.config_path) {
        if (!fs::exists(*spec.config_path))
            throw ConfigError("config", "file '" + spec.config_path->string() + "' does not exist");
        config = KeyValueConfig::load(*spec.config_path);
    }
    for (const auto& assignment : spec.overrides)
        config.apply_assignment(assignment);
    require_documented_keys(config);
    return config;
}

fs::path prepare_output(const CommandSpec& spec) {
    std::error_code ec;
    fs::create_directories(spec.output_dir, ec);
    if (ec)
        throw ConfigError("out", "cannot create '" + spec.output_dir.string() + "': " + ec.message());
    return spec.output_dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << text;
}

// Theoretical value of one named moment; divergence is reported against the
// config key that caused it.
double theoretical(const std::string& name, const TrafficModel& model) {
    if (name == "mean_rate") {
        try {
            return mean_rate(model);
        } catch (const UndefinedMoment& e) {
            throw UndefinedMoment(std::string("model.size: ") + e.what());
        }
    }
    if (name == "rate_variance") {
        try {
            (void)model.size_dist.raw_moment(2.0);
        } catch (const UndefinedMoment& e) {
            throw UndefinedMoment(std::string("model.size: E[S^2] diverges: ") + e.what());
        }
        try {
            (void)model.duration_dist.raw_moment(-1.0);
        } catch (const UndefinedMoment& e) {
            throw UndefinedMoment(std::string("model.duration: E[1/D] diverges, rate_variance is undefined: ") +
                                  e.what());
        }
        return rate_variance(model);
    }
    if (name == "mean_active_flows") {
        try {
            return mean_active_flows(model);
        } catch (const UndefinedMoment& e) {
            throw UndefinedMoment(std::string("model.duration: ") + e.what());
        }
    }
    throw ConfigError("report.moments", "unknown moment '" + name + "'");
}

std::vector<std::string> requested_moments(const KeyValueConfig& config) {
    const auto text = config.get("report.moments").value_or("mean_rate,rate_variance,mean_active_flows");
    std::vector<std::string> names;
    std::string current;
    for (char c : text + ",") {
        if (c == ',') {
            if (!current.empty())
                names.push_back(current);
            current.clear();
        } else if (c != ' ' && c != '\t') {
            current += c;
        }
    }
    for (const auto& n : names) {
        if (n != "mean_rate" && n != "rate_variance" && n != "mean_active_flows")
            throw ConfigError("report.moments", "unknown moment '" + n + "'");
    }
    return names;
}

nlohmann::ordered_json moment_entry(double theory, const Estimate& empirical) {
    nlohmann::ordered_json j;
    j["theoretical"] = theory;
    j["empirical"] = empirical.value;
    j["relative_error"] = theory != 0.0 ? (empirical.value - theory) / theory : 0.0;
    if (empirical.ci) {
        j["ci95_low"] = empirical.ci->lower;
        j["ci95_high"] = empirical.ci->upper;
        j["ci95_contains_theoretical"] = empirical.ci->contains(theory);
    }
    return j;
}

std::string metadata_text(const SimulationConfig& sim, const SimulationResult& result) {
    KeyValueConfig effective;
    simulation_config_to(sim, effective);
    std::string text = "# flowcap simulation metadata; loadable as a config file\n";
    text += "# utilization_reference = " + format_double(sim.utilization_reference()) + "\n";
    text += "# arrivals = " + std::to_string(result.arrivals) + "\n";
    text += "# samples = " + std::to_string(result.samples.size()) + "\n";
    text += effective.to_string();
    return text;
}

Direction parse_direction(const std::string& text) {
    if (text == "input")
        return Direction::Input;
    if (text == "output")
        return Direction::Output;
    if (text == "both")
        return Direction::Both;
    throw ConfigError("direction", "expected input, output or both, got '" + text + "'");
}

struct IngestCounters {
    std::size_t datagrams = 0;
    std::size_t records = 0;
    std::size_t parse_errors = 0;
    std::size_t record_errors = 0;
};

// Decodes one datagram into timed flows; malformed input only bumps counters.
template <typename Sink>
void ingest_datagram(std::span<const std::uint8_t> bytes, const IngestConfig& config, IngestCounters& counters,
                     std::ostream& err, Sink&& sink) {
    ++counters.datagrams;
    netflow::V5Datagram dg;
    try {
        dg = netflow::parse_v5_datagram(bytes);
    } catch (const ParseError& e) {
        ++counters.parse_errors;
        err << "warning: datagram " << counters.datagrams << ": " << e.what() << '\n';
        return;
    }
    for (const auto& record : dg.records) {
        ++counters.records;
        try {
            sink(make_timed_flow(dg.header, record, config.apply_sampling_correction));
        } catch (const ParseError& e) {
            ++counters.record_errors;
            err << "warning: datagram " << counters.datagrams << ": " << e.what() << '\n';
        }
    }
}

} // namespace

int run_simulate(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto config = load_settings(spec);
        const auto sim = simulation_config_from(config);
        const auto names = requested_moments(config);
        std::map<std::string, double> theory;
        for (const auto& name : names)
            theory[name] = theoretical(name, sim.model);

        const auto result = simulate(sim);
        const auto dir = prepare_output(spec);
        write_samples_csv(result.samples, dir / kSamplesFile);
        write_text(dir / kMetadataFile, metadata_text(sim, result));

        nlohmann::ordered_json doc;
        doc["mode"] = sim.mode == SimulationMode::ProcessorSharing ? "processor_sharing" : "unconstrained";
        doc["seed"] = sim.seed;
        doc["horizon"] = sim.horizon;
        doc["warmup"] = sim.effective_warmup();
        doc["arrivals"] = result.arrivals;
        doc["stationary_samples"] = result.stationary_samples;
        doc["batches"] = sim.batches;
        nlohmann::ordered_json moments = nlohmann::ordered_json::object();
        for (const auto& name : names) {
            const Estimate& e = name == "mean_rate"       ? result.mean_rate
                                : name == "rate_variance" ? result.rate_variance
                                                          : result.mean_active;
            moments[name] = moment_entry(theory[name], e);
        }
        doc["moments"] = moments;
        write_text(dir / kMomentsFile, doc.dump(2) + "\n");

        out << "simulated " << result.arrivals << " flows, " << result.samples.size() << " samples -> "
            << (dir / kSamplesFile).string() << '\n';
        for (const auto& name : names) {
            out << "  " << name << ": theoretical " << format_double(theory[name]) << ", empirical "
                << format_double(moments[name]["empirical"].get<double>()) << '\n';
        }
        return static_cast<int>(kExitOk);
    });
}

int run_sweep(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto config = load_settings(spec);
        if (const auto mode = config.get("sim.mode"); mode && *mode != "processor_sharing")
            throw ConfigError("sim.mode", "sweep requires processor_sharing, got '" + *mode + "'");
        config.set("sim.mode", "processor_sharing");
        // The sweep supplies lambda itself; a placeholder keeps the model parser happy.
        if (!config.contains("model.lambda"))
            config.set("model.lambda", "0");
        const auto sim = simulation_config_from(config);
        const auto points = load_sweep(sim, spec.lambdas);

        const auto dir = prepare_output(spec);
        std::vector<LinkSample> rows;
        rows.reserve(points.size());
        std::ofstream detail(dir / kSweepPointsFile, std::ios::binary | std::ios::trunc);
        detail << "lambda,mean_utilization_percent,mean_active_flows\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            rows.push_back({static_cast<double>(i), p.mean_utilization,
                            static_cast<std::uint64_t>(std::llround(p.mean_active_flows))});
            detail << format_double(p.lambda) << ',' << format_double(p.mean_utilization) << ','
                   << format_double(p.mean_active_flows) << '\n';
        }
        write_samples_csv(rows, dir / kSweepFile);
        write_text(dir / kMetadataFile, [&] {
            KeyValueConfig effective;
            simulation_config_to(sim, effective);
            std::string lambdas;
            for (const auto& p : points)
                lambdas += (lambdas.empty() ? "" : ",") + format_double(p.lambda);
            return "# flowcap sweep metadata\n# lambdas = " + lambdas + "\n" + effective.to_string();
        }());

        out << "sweep of " << points.size() << " arrival rates -> " << (dir / kSweepFile).string() << '\n';
        for (const auto& p : points) {
            out << "  lambda " << format_double(p.lambda) << ": U " << format_utilization(p.mean_utilization)
                << "%, N " << format_double(p.mean_active_flows) << '\n';
        }
        return static_cast<int>(kExitOk);
    });
}

int run_ingest(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (spec.inputs.empty() == !spec.listen.has_value())
            throw ConfigError("from", "give exactly one of --from FILE... or --listen ADDR:PORT");
        IngestConfig config;
        if (!spec.capacity)
            throw ConfigError("capacity", "link capacity in bits/s is required");
        config.link_capacity = *spec.capacity;
        config.interval = spec.interval;
        config.direction = parse_direction(spec.direction);
        config.apply_sampling_correction = spec.sampling_correction;
        config.lateness_intervals = spec.lateness_intervals;
        if (!spec.interfaces.empty()) {
            std::set<std::uint16_t> filter;
            for (unsigned i : spec.interfaces) {
                if (i > 0xFFFF)
                    throw ConfigError("interfaces", "interface index " + std::to_string(i) + " exceeds 65535");
                filter.insert(static_cast<std::uint16_t>(i));
            }
            config.interface_filter = std::move(filter);
        }
        config.validate();
        for (const auto& path : spec.inputs) {
            if (!fs::is_regular_file(path))
                throw ConfigError("from", "input '" + path.string() + "' does not exist");
        }

        IngestCounters counters;
        std::vector<LinkSample> samples;
        if (!spec.inputs.empty()) {
            std::vector<TimedFlow> flows;
            for (const auto& path : spec.inputs) {
                const auto capture = netflow::read_capture(path);
                for (const auto& d : capture.datagrams)
                    ingest_datagram(d, config, counters, err, [&](const TimedFlow& f) { flows.push_back(f); });
                if (capture.truncated_tail) {
                    ++counters.parse_errors;
                    err << "warning: " << path.string() << ": capture ends inside a frame\n";
                }
            }
            samples = aggregate(flows, config);
        } else {
            UdpListener listener(*spec.listen);
            out << "listening on UDP port " << listener.port() << '\n' << std::flush;
            StreamingAggregator aggregator(config);
            g_interrupted = false;
            auto previous = std::signal(SIGINT, [](int) { g_interrupted = true; });
            const auto start = std::chrono::steady_clock::now();
            while (!g_interrupted) {
                if (spec.max_datagrams && counters.datagrams >= *spec.max_datagrams)
                    break;
                if (spec.listen_seconds &&
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >=
                        *spec.listen_seconds)
                    break;
                if (const auto d = listener.receive(std::chrono::milliseconds(100))) {
                    ingest_datagram(*d, config, counters, err, [&](const TimedFlow& f) { aggregator.add(f); });
                    for (const auto& s : aggregator.drain())
                        samples.push_back(s);
                }
            }
            std::signal(SIGINT, previous);
            for (const auto& s : aggregator.finish())
                samples.push_back(s);
            if (aggregator.late_records() > 0)
                err << "warning: " << aggregator.late_records() << " late record(s) partly dropped\n";
        }

        const auto dir = prepare_output(spec);
        write_samples_csv(samples, dir / kSamplesFile);
        out << "datagrams: " << counters.datagrams << ", records: " << counters.records
            << ", parse errors: " << counters.parse_errors << ", record errors: " << counters.record_errors << '\n';
        out << samples.size() << " samples -> " << (dir / kSamplesFile).string() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int run_analyze(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!spec.samples || !fs::is_regular_file(*spec.samples))
            throw ConfigError("samples", "samples file '" + (spec.samples ? spec.samples->string() : "") +
                                             "' does not exist");
        const auto config = analyzer_config_from(load_settings(spec));
        const auto table = read_samples_csv(*spec.samples);
        if (table.out_of_order_rows > 0)
            err << "warning: " << table.out_of_order_rows << " row(s) out of timestamp order; sorted\n";

        const auto report = analyze(table.samples, config);
        const auto dir = prepare_output(spec);
        write_text(dir / kReportFile, report_to_json(report));
        {
            std::ofstream labeled(dir / kLabeledSamplesFile, std::ios::binary | std::ios::trunc);
            write_labeled_samples_csv(table.samples, report, labeled);
        }
        {
            double max_flows = 0.0;
            for (const auto& s : table.samples)
                max_flows = std::max(max_flows, static_cast<double>(s.active_flows));
            std::ofstream lines(dir / kFittedLinesFile, std::ios::binary | std::ios::trunc);
            write_fitted_lines_csv(report, 1.2 * max_flows, 101, lines);
        }
        out << verdict_line(report) << '\n';
        return static_cast<int>(kExitOk);
    });
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"flowcap: flow-level link capacity analysis"};
    app.require_subcommand(1);
    CommandSpec spec;
    std::string lambdas_text;
    std::string interfaces_text;

    auto* simulate = app.add_subcommand("simulate", "Simulate Poisson flow traffic on one link");
    simulate->add_option("--config", spec.config_path, "key=value config file")->required();
    simulate->add_option("--set", spec.overrides, "override a config key (key=value)");
    simulate->add_option("--out", spec.output_dir, "output directory")->required();

    auto* sweep = app.add_subcommand("sweep", "Processor-sharing load sweep (utilization vs active flows)");
    sweep->add_option("--config", spec.config_path, "key=value config file")->required();
    sweep->add_option("--set", spec.overrides, "override a config key (key=value)");
    sweep->add_option("--lambdas", lambdas_text, "comma-separated arrival rates, flows/s")->required();
    sweep->add_option("--out", spec.output_dir, "output directory")->required();

    auto* ingest = app.add_subcommand("ingest", "Aggregate NetFlow v5 exports into link samples");
    auto* listen_opt = ingest->add_option("--listen", spec.listen, "UDP ADDR:PORT to collect from");
    auto* from_opt = ingest->add_option("--from", spec.inputs, "datagram capture file(s)");
    listen_opt->excludes(from_opt);
    ingest->add_option("--capacity", spec.capacity, "link capacity, bits/s")->required();
    ingest->add_option("--interval", spec.interval, "sample interval, seconds (default 1800)");
    ingest->add_option("--interfaces", interfaces_text, "comma-separated interface indexes to keep");
    ingest->add_option("--direction", spec.direction, "input, output or both (default both)");
    ingest->add_flag("--sampling-correction", spec.sampling_correction,
                     "scale octets by the exporter's sampling rate");
    ingest->add_option("--lateness", spec.lateness_intervals, "live mode: intervals to wait for late records");
    ingest->add_option("--max-datagrams", spec.max_datagrams, "live mode: stop after this many datagrams");
    ingest->add_option("--duration", spec.listen_seconds, "live mode: stop after this many seconds");
    ingest->add_option("--out", spec.output_dir, "output directory")->required();

    auto* analyze_cmd = app.add_subcommand("analyze", "Fit working area and knee to link samples");
    analyze_cmd->add_option("--samples", spec.samples, "samples CSV")->required();
    analyze_cmd->add_option("--config", spec.config_path, "key=value config file with analyzer.* keys");
    analyze_cmd->add_option("--set", spec.overrides, "override an analyzer key (key=value)");
    analyze_cmd->add_option("--out", spec.output_dir, "output directory")->required();

    std::vector<std::string> storage{"flowcap"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : storage)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (sweep->parsed()) {
        spec.subcommand = Subcommand::Sweep;
        try {
            spec.lambdas = parse_double_list(lambdas_text);
        } catch (const InvalidParameters& e) {
            err << "error: configuration: lambdas: " << e.what() << '\n';
            return kExitConfig;
        }
        return run_sweep(spec, out, err);
    }
    if (ingest->parsed()) {
        spec.subcommand = Subcommand::Ingest;
        try {
            for (double v : parse_double_list(interfaces_text)) {
                if (v < 0 || std::trunc(v) != v)
                    throw InvalidParameters("interface index must be a non-negative integer");
                spec.interfaces.push_back(static_cast<unsigned>(v));
            }
        } catch (const InvalidParameters& e) {
            err << "error: configuration: interfaces: " << e.what() << '\n';
            return kExitConfig;
        }
        return run_ingest(spec, out, err);
    }
    if (analyze_cmd->parsed()) {
        spec.subcommand = Subcommand::Analyze;
        return run_analyze(spec, out, err);
    }
    spec.subcommand = Subcommand::Simulate;
    return run_simulate(spec, out, err);
}

} // namespace flowcap::cli
