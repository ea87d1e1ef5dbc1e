#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latmove/experiment.hpp"
#include "latmove/graph.hpp"
#include "latmove/hardening.hpp"
#include "latmove/segmentation.hpp"
#include "latmove/traces.hpp"

namespace latmove {

// Raw CSV records; id resolution happens at dataset assembly.
using RawEdgeList = std::vector<std::pair<std::string, std::string>>;
using RawFlowList = std::vector<std::array<std::string, 3>>; // src, app, dst

struct RawProbability {
    std::string app;
    std::string host;
    double prob;
};

struct RawPosture {
    std::string host;
    double level;
};

struct RawTraceStep {
    std::string path_id;
    long step;
    std::string src;
    std::string app;
    std::string dst;
};

// Header `user_id,host_id`, one edge per row.
RawEdgeList load_access_csv(const std::filesystem::path& path);
// Header `src_host,app,dst_host`.
RawFlowList load_flows_csv(const std::filesystem::path& path);
// Header `app,host,prob`, prob in [0, 1].
std::vector<RawProbability> load_probabilities_csv(const std::filesystem::path& path);
// Header `host,level`, level in [0, 1].
std::vector<RawPosture> load_posture_csv(const std::filesystem::path& path);
// Header `path_id,step,src_host,app,dst_host`; steps per path must chain.
std::vector<RawTraceStep> load_traces_csv(const std::filesystem::path& path);

// In-memory dataset with one shared index; identifiers are interned in
// first-seen order across access, flows, probabilities, posture, traces.
struct Dataset {
    std::shared_ptr<const EntityIndex> index;
    std::optional<BipartiteAccessGraph> graph;
    std::optional<HostAppFlows> flows;
    std::optional<CompromiseProbabilities> probabilities;
    std::optional<SecurityPosture> posture;
    std::optional<AttackTrace> traces;
};

struct DatasetPaths {
    std::optional<std::filesystem::path> access;
    std::optional<std::filesystem::path> flows;
    std::optional<std::filesystem::path> probabilities;
    std::optional<std::filesystem::path> posture;
    std::optional<std::filesystem::path> traces;
};

Dataset load_dataset(const DatasetPaths& paths);

// Resolved run configuration, echoed into result.json for reproducibility.
// Values are (key, already-rendered JSON value) pairs in insertion order.
struct RunConfig {
    std::vector<std::pair<std::string, std::string>> entries;

    void set_string(const std::string& key, const std::string& value);
    void set_number(const std::string& key, double value);
    void set_integer(const std::string& key, long long value);
    void set_list(const std::string& key, const std::vector<double>& values);
};

// Deterministic serialization: fixed key order, LF endings, doubles with 17
// significant digits so they round-trip exactly.
std::string format_double(double v);

void write_experiment_results(const ExperimentResult& result, const RunConfig& config,
                              const std::filesystem::path& dir);

void write_segmentation_plan(const SegmentationPlan& plan, const EntityIndex& index,
                             const RunConfig& config, const std::filesystem::path& dir);
void write_edge_plan(const EdgeHardeningPlan& plan, const EntityIndex& index,
                     const RunConfig& config, const std::filesystem::path& dir);
void write_node_plan(const NodeHardeningPlan& plan, const EntityIndex& index,
                     const RunConfig& config, const std::filesystem::path& dir);

void write_benchmark_results(const std::map<std::string, std::vector<BenchmarkPoint>>& curves,
                             const RunConfig& config, const std::filesystem::path& dir);

// gen-synthetic output: the four input CSVs (plus traces.csv when a trace
// origin is configured).
void write_synthetic_dataset(const BipartiteAccessGraph& g, const HostAppFlows& flows,
                             const CompromiseProbabilities& p, const SecurityPosture& a,
                             const std::filesystem::path& dir);
void write_traces_csv(const AttackTrace& traces, const EntityIndex& index,
                      const std::filesystem::path& path);

} // namespace latmove
