// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Targets are computed here from first principles, never read back from the
// library under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/commands.hpp"
#include "flowcap/capacity_analyzer.hpp"
#include "flowcap/errors.hpp"
#include "flowcap/flow_simulator.hpp"
#include "flowcap/interval_aggregator.hpp"
#include "flowcap/netflow_v5.hpp"
#include "flowcap/samples_csv.hpp"
#include "support/oracles.hpp"

using namespace flowcap;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel(double value, double target) { return std::abs(value - target) / std::abs(target); }

int run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0)
        std::fprintf(stderr, "%s", err.str().c_str());
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

SimulationConfig unconstrained(double lambda, DistributionSpec size, DistributionSpec duration, double horizon,
                               double warmup) {
    SimulationConfig c;
    c.model.lambda = lambda;
    c.model.size_dist = size;
    c.model.duration_dist = duration;
    c.horizon = horizon;
    c.warmup = warmup;
    c.seed = 1;
    return c;
}

// lambda = 50/s, S = 20 kbit, D = 2 s, horizon 2000 s, warmup 100 s.
constexpr double kLambda = 50.0;
constexpr double kSize = 20000.0;
constexpr double kDuration = 2.0;

struct ShotNoiseRun {
    SimulationResult result;
    double seconds;
};

const ShotNoiseRun& shot_noise_run() {
    static const ShotNoiseRun run = [] {
        const auto start = std::chrono::steady_clock::now();
        auto result = simulate(unconstrained(kLambda, DistributionSpec::deterministic(kSize),
                                             DistributionSpec::deterministic(kDuration), 2000.0, 100.0));
        return ShotNoiseRun{std::move(result), seconds_since(start)};
    }();
    return run;
}

Verdict mean_rate_reproduction() {
    const auto& run = shot_noise_run();
    const double target = kLambda * kSize;
    const double got = run.result.empirical_mean_rate();
    return {rel(got, target) <= 0.02 && run.seconds < 60.0,
            fmt("mean rate %.1f bit/s vs %.1f (%.2f%%), %.2f s", got, target, 100 * rel(got, target), run.seconds)};
}

Verdict rate_variance_reproduction() {
    const auto& run = shot_noise_run();
    // Campbell: each shot contributes (S/D)^2 over D seconds.
    const double target = kLambda * kSize * kSize / kDuration;
    const auto& v = run.result.rate_variance;
    const bool covered = v.ci && v.ci->contains(target);
    return {rel(v.value, target) <= 0.10 && covered,
            fmt("variance %.4g vs %.4g (%.2f%%), 95%% CI [%.4g, %.4g]", v.value, target, 100 * rel(v.value, target),
                v.ci ? v.ci->lower : 0.0, v.ci ? v.ci->upper : 0.0)};
}

Verdict littles_law_insensitivity() {
    const double target = kLambda * 2.0;
    const auto size = DistributionSpec::deterministic(kSize);
    // Pareto with shape 2.5 and mean 2: scale = mean (shape - 1) / shape.
    const auto pareto = DistributionSpec::pareto(2.5, 2.0 * 1.5 / 2.5);
    const auto a = simulate(unconstrained(kLambda, size, DistributionSpec::exponential(2.0), 2000.0, 100.0));
    const auto b = simulate(unconstrained(kLambda, size, pareto, 2000.0, 100.0));
    const double na = a.empirical_mean_active();
    const double nb = b.empirical_mean_active();
    return {rel(na, target) <= 0.03 && rel(nb, target) <= 0.03 && rel(na, nb) <= 0.03,
            fmt("exponential %.3f, pareto %.3f, target %.1f, gap %.2f%%", na, nb, target, 100 * rel(na, nb))};
}

Verdict poisson_marginal() {
    // Deterministic 2 s durations sampled every 2 s: disjoint windows, so the
    // 10^4 post-warmup samples are independent.
    auto c = unconstrained(kLambda, DistributionSpec::deterministic(kSize), DistributionSpec::deterministic(2.0),
                           20200.0, 200.0);
    c.sample_interval = 2.0;
    const auto r = simulate(c);
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
    for (const auto& s : r.samples) {
        if (s.timestamp < 200.0)
            continue;
        const auto x = static_cast<double>(s.active_flows);
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    const double ratio = var / mean;
    return {n >= 10000 && ratio >= 0.9 && ratio <= 1.1,
            fmt("var/mean %.4f over %zu samples (mean %.3f)", ratio, n, mean)};
}

Verdict processor_sharing_shape() {
    // C = 10 Mbit/s, r_peak = 100 kbit/s, E[S] = 1 Mbit: offered load is 10% per flow/s.
    constexpr double capacity = 1e7, peak = 1e5, mean_size = 1e6;
    SimulationConfig base;
    base.mode = SimulationMode::ProcessorSharing;
    base.model.size_dist = DistributionSpec::exponential(mean_size);
    base.model.duration_dist = DistributionSpec::deterministic(1.0);
    base.link_capacity = capacity;
    base.per_flow_peak_rate = peak;
    base.horizon = 1000.0;
    base.warmup = 100.0;
    std::vector<double> lambdas;
    for (double load = 0.1; load <= 1.5 + 1e-9; load += 0.1)
        lambdas.push_back(load * capacity / mean_size);
    const auto points = load_sweep(base, lambdas);

    double ratio_sum = 0.0;
    std::size_t working = 0;
    for (const auto& p : points) {
        if (p.mean_utilization < 40.0) {
            ratio_sum += p.mean_utilization / p.mean_active_flows;
            ++working;
        }
    }
    const double slope = ratio_sum / static_cast<double>(working);
    double worst_linear = 0.0;
    for (const auto& p : points) {
        if (p.mean_utilization < 40.0)
            worst_linear = std::max(worst_linear, rel(slope * p.mean_active_flows, p.mean_utilization));
    }
    double worst_saturation = 0.0, least_excess = INFINITY;
    std::size_t overloaded = 0;
    for (const auto& p : points) {
        if (p.lambda * mean_size <= capacity * (1 + 1e-9))
            continue;
        ++overloaded;
        worst_saturation = std::max(worst_saturation, std::abs(p.mean_utilization - 100.0) / 100.0);
        least_excess = std::min(least_excess, p.mean_active_flows / (p.mean_utilization / slope));
    }
    const bool pass = working >= 3 && worst_linear <= 0.03 && overloaded >= 3 && worst_saturation <= 0.02 &&
                      least_excess >= 2.0;
    return {pass, fmt("%zu working points (max deviation %.2f%%), %zu overload points (max |U-100| %.2f%%, "
                      "N/N_linear >= %.2f)",
                      working, 100 * worst_linear, overloaded, 100 * worst_saturation, least_excess)};
}

Verdict knee_recovery() {
    const auto start = std::chrono::steady_clock::now();
    const auto dir = fs::temp_directory_path() / "flowcap_acceptance_knee";
    fs::create_directories(dir);
    double worst_flows = 0.0, worst_util = 0.0;
    bool ok = true;
    constexpr int seeds = 20;
    for (int seed = 1; seed <= seeds; ++seed) {
        const auto samples = oracle::knee_sweep(static_cast<std::uint64_t>(seed));
        write_samples_csv(samples, dir / "samples.csv");
        if (run_cli({"analyze", "--samples", (dir / "samples.csv").string(), "--out", dir.string()}) != 0) {
            ok = false;
            continue;
        }
        const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
        if (report["knee_flows"].is_null()) {
            ok = false;
            continue;
        }
        worst_flows = std::max(worst_flows, rel(report["knee_flows"].get<double>(), 2500.0));
        worst_util = std::max(worst_util, rel(report["knee_utilization_percent"].get<double>(), 45.0));
    }
    fs::remove_all(dir);
    const double elapsed = seconds_since(start);
    return {ok && worst_flows <= 0.05 && worst_util <= 0.05 && elapsed / seeds < 5.0,
            fmt("%d generator seeds, worst knee error %.2f%% flows / %.2f%% utilization, %.3f s per run", seeds,
                100 * worst_flows, 100 * worst_util, elapsed / seeds)};
}

Verdict estimator_exactness() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> flows(1, 100000);
    double worst = 0.0, worst_residual = 0.0;
    for (double slope : {0.018, 1e-4, 0.5, 3.0 / 7.0}) {
        std::vector<LinkSample> samples;
        while (samples.size() < 50) {
            const auto n = flows(rng);
            const double u = slope * static_cast<double>(n);
            // Keep only points that sit exactly on the ray in double arithmetic.
            if (u <= 40.0 && u / static_cast<double>(n) == slope)
                samples.push_back({0.0, u, n});
        }
        const auto fit = fit_working_line(samples, {});
        worst = std::max(worst, rel(fit.slope, slope));
        worst_residual = std::max(worst_residual, fit.rms_residual);
    }
    return {worst <= 1e-12 && worst_residual == 0.0,
            fmt("max slope error %.3g relative, max rms residual %.3g", worst, worst_residual)};
}

Verdict netflow_round_trip() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    std::size_t identical = 0;
    constexpr std::size_t count = 10000;
    for (std::size_t i = 0; i < count; ++i) {
        const auto bytes = netflow::encode_v5_datagram(oracle::random_datagram(rng));
        identical += netflow::encode_v5_datagram(netflow::parse_v5_datagram(bytes)) == bytes;
    }
    const double elapsed = seconds_since(start);

    auto kind_of = [](std::vector<std::uint8_t> bytes) -> int {
        try {
            netflow::parse_v5_datagram(bytes);
        } catch (const ParseError& e) {
            return static_cast<int>(e.kind());
        }
        return -1;
    };
    const auto valid = netflow::encode_v5_datagram(oracle::random_datagram(rng));
    auto bad_version = valid;
    bad_version[1] = 9;
    auto bad_count = valid;
    bad_count[2] = 0;
    bad_count[3] = 31;
    auto short_length = valid;
    short_length.pop_back();
    const bool errors = kind_of(bad_version) == static_cast<int>(ParseErrorKind::BadVersion) &&
                        kind_of(bad_count) == static_cast<int>(ParseErrorKind::BadCount) &&
                        kind_of(short_length) == static_cast<int>(ParseErrorKind::TruncatedDatagram);
    return {identical == count && errors && elapsed < 5.0,
            fmt("%zu/%zu byte-identical, error kinds %s, %.2f s", identical, count, errors ? "ok" : "WRONG",
                elapsed)};
}

Verdict octet_conservation() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> start(1.6e9, 1.6e9 + 86400.0);
    std::exponential_distribution<double> length(1.0 / 900.0);
    std::uniform_real_distribution<double> width(1.0, 7200.0);
    std::uniform_int_distribution<std::uint32_t> octets(1, 0xFFFFFFFFu);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<TimedFlow> flows(1 + rng() % 2000);
        double expected = 0.0;
        for (auto& f : flows) {
            f.first = start(rng);
            f.last = rng() % 8 == 0 ? f.first : f.first + length(rng);
            f.octets = octets(rng);
            expected += f.octets;
        }
        IngestConfig config;
        config.interval = width(rng);
        config.link_capacity = 1e10;
        double total = 0.0;
        for (const auto& t : attribute(flows, config))
            total += t.octets;
        worst = std::max(worst, rel(total, expected));
    }
    return {worst <= 1e-9, fmt("500 record sets, max relative octet error %.3g", worst)};
}

Verdict end_to_end_determinism() {
    const auto dir = fs::temp_directory_path() / "flowcap_acceptance_e2e";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream conf(dir / "link.conf");
        conf << "model.lambda = 12\n"
                "model.size.family = exponential\nmodel.size.params = 1000000\n"
                "model.duration.family = deterministic\nmodel.duration.params = 1\n"
                "sim.mode = processor_sharing\nsim.capacity = 10000000\nsim.peak_rate = 100000\n"
                "sim.horizon = 300\nsim.warmup = 50\nsim.sample_interval = 0.25\nsim.seed = 2024\n";
    }
    std::string reports[2];
    bool ok = true;
    for (int i = 0; i < 2; ++i) {
        const auto out = dir / ("run" + std::to_string(i));
        ok &= run_cli({"simulate", "--config", (dir / "link.conf").string(), "--out", out.string()}) == 0;
        ok &= run_cli({"analyze", "--samples", (out / cli::kSamplesFile).string(), "--out", out.string()}) == 0;
        reports[i] = slurp(out / cli::kReportFile);
    }
    fs::remove_all(dir);
    const bool same = ok && !reports[0].empty() && reports[0] == reports[1];
    return {same, fmt("two simulate->analyze runs, report.json %zu bytes, %s", reports[0].size(),
                      same ? "identical" : "DIFFERENT")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"AC1 mean rate matches lambda E[S]", mean_rate_reproduction},
        {"AC2 rate variance matches lambda E[S^2/D]", rate_variance_reproduction},
        {"AC3 mean active flows insensitive to duration law", littles_law_insensitivity},
        {"AC4 active-flow marginal is Poisson", poisson_marginal},
        {"AC5 processor-sharing sweep shape", processor_sharing_shape},
        {"AC6 knee recovery on synthetic sweep", knee_recovery},
        {"AC7 working-line estimator exactness", estimator_exactness},
        {"AC8 NetFlow v5 round trip and errors", netflow_round_trip},
        {"AC9 octet conservation", octet_conservation},
        {"AC10 end-to-end determinism", end_to_end_determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
