#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "flowcap/interval_aggregator.hpp"
#include "flowcap/netflow_v5.hpp"

using namespace flowcap;

namespace {

std::vector<std::vector<std::uint8_t>> corpus(std::size_t n) {
    std::mt19937_64 rng(1);
    std::vector<std::vector<std::uint8_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        netflow::V5Datagram dg;
        dg.header.count = netflow::kMaxRecords;
        dg.header.sys_uptime = 50'000'000;
        dg.header.unix_secs = 1'700'000'000;
        for (int r = 0; r < netflow::kMaxRecords; ++r) {
            netflow::V5Record rec;
            rec.first = static_cast<std::uint32_t>(rng() % 40'000'000);
            rec.last = rec.first + static_cast<std::uint32_t>(rng() % 600'000);
            rec.octets = static_cast<std::uint32_t>(rng());
            rec.packets = 1;
            dg.records.push_back(rec);
        }
        out.push_back(netflow::encode_v5_datagram(dg));
    }
    return out;
}

} // namespace

static void BM_ParseV5(benchmark::State& state) {
    const auto data = corpus(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(netflow::parse_v5_datagram(data[i++ & 1023]));
    }
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(data[0].size()));
}
BENCHMARK(BM_ParseV5);

static void BM_Aggregate(benchmark::State& state) {
    std::vector<TimedFlow> flows;
    for (const auto& bytes : corpus(static_cast<std::size_t>(state.range(0)))) {
        const auto dg = netflow::parse_v5_datagram(bytes);
        for (const auto& r : dg.records)
            flows.push_back(make_timed_flow(dg.header, r));
    }
    IngestConfig c;
    c.interval = 300;
    c.link_capacity = 1e10;
    for (auto _ : state)
        benchmark::DoNotOptimize(aggregate(flows, c));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(flows.size()));
}
BENCHMARK(BM_Aggregate)->Arg(100)->Arg(1000);
