#include "latmove/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "latmove/errors.hpp"

namespace latmove {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

// Reads and validates one CSV file: exact header, fixed arity, non-empty
// fields. Returns data rows with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(
    const std::filesystem::path& path, const std::string& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file");

    const std::size_t arity = split_fields(expected_header).size();
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != expected_header) {
                throw CsvFormatError(path.string(), 1,
                                     "expected header '" + expected_header + "'");
            }
            continue;
        }
        if (line.empty() && in.eof()) break;
        auto fields = split_fields(line);
        if (fields.size() != arity) {
            throw CsvFormatError(path.string(), line_no,
                                 "expected " + std::to_string(arity) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        for (const auto& f : fields) {
            if (f.empty()) throw CsvFormatError(path.string(), line_no, "empty field");
        }
        rows.emplace_back(line_no, std::move(fields));
    }
    if (line_no == 0) throw CsvFormatError(path.string(), 1, "missing header");
    return rows;
}

double parse_unit_value(const std::string& text, const std::filesystem::path& path,
                        std::size_t line, const char* what) {
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw CsvFormatError(path.string(), line, std::string("malformed ") + what);
    }
    if (!(v >= 0.0 && v <= 1.0)) {
        throw CsvFormatError(path.string(), line, std::string(what) + " outside [0, 1]");
    }
    return v;
}

class FileWriter {
public:
    explicit FileWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw IoError(path.string(), "cannot open for writing");
    }
    ~FileWriter() { out_.flush(); }

    void write(const std::string& s) {
        out_ << s;
        if (!out_) throw IoError(path_.string(), "write failed");
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string config_json(const RunConfig& config, int indent) {
    const std::string pad(indent, ' ');
    std::string out = "{\n";
    for (std::size_t i = 0; i < config.entries.size(); ++i) {
        out += pad + "  \"" + json_escape(config.entries[i].first) +
               "\": " + config.entries[i].second;
        if (i + 1 < config.entries.size()) out += ",";
        out += "\n";
    }
    out += pad + "}";
    return out;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
}

} // namespace

RawEdgeList load_access_csv(const std::filesystem::path& path) {
    RawEdgeList edges;
    for (auto& [line, fields] : read_csv(path, "user_id,host_id")) {
        (void)line;
        edges.emplace_back(std::move(fields[0]), std::move(fields[1]));
    }
    return edges;
}

RawFlowList load_flows_csv(const std::filesystem::path& path) {
    RawFlowList flows;
    for (auto& [line, fields] : read_csv(path, "src_host,app,dst_host")) {
        (void)line;
        flows.push_back({std::move(fields[0]), std::move(fields[1]), std::move(fields[2])});
    }
    return flows;
}

std::vector<RawProbability> load_probabilities_csv(const std::filesystem::path& path) {
    std::vector<RawProbability> probs;
    for (auto& [line, fields] : read_csv(path, "app,host,prob")) {
        const double v = parse_unit_value(fields[2], path, line, "probability");
        probs.push_back({std::move(fields[0]), std::move(fields[1]), v});
    }
    return probs;
}

std::vector<RawPosture> load_posture_csv(const std::filesystem::path& path) {
    std::vector<RawPosture> rows;
    for (auto& [line, fields] : read_csv(path, "host,level")) {
        const double v = parse_unit_value(fields[1], path, line, "hardening level");
        rows.push_back({std::move(fields[0]), v});
    }
    return rows;
}

std::vector<RawTraceStep> load_traces_csv(const std::filesystem::path& path) {
    std::vector<RawTraceStep> steps;
    for (auto& [line, fields] : read_csv(path, "path_id,step,src_host,app,dst_host")) {
        long step = 0;
        try {
            std::size_t used = 0;
            step = std::stol(fields[1], &used);
            if (used != fields[1].size() || step < 0) throw std::invalid_argument(fields[1]);
        } catch (const std::exception&) {
            throw CsvFormatError(path.string(), line, "malformed step number");
        }
        steps.push_back({std::move(fields[0]), step, std::move(fields[2]),
                         std::move(fields[3]), std::move(fields[4])});
    }
    // Steps sorted by (path_id, step); chain constraints checked at dataset
    // assembly where host ids resolve.
    std::stable_sort(steps.begin(), steps.end(), [](const RawTraceStep& a, const RawTraceStep& b) {
        if (a.path_id != b.path_id) return a.path_id < b.path_id;
        return a.step < b.step;
    });
    return steps;
}

Dataset load_dataset(const DatasetPaths& paths) {
    std::optional<RawEdgeList> access;
    std::optional<RawFlowList> flows;
    std::optional<std::vector<RawProbability>> probs;
    std::optional<std::vector<RawPosture>> posture;
    std::optional<std::vector<RawTraceStep>> traces;

    if (paths.access) access = load_access_csv(*paths.access);
    if (paths.flows) flows = load_flows_csv(*paths.flows);
    if (paths.probabilities) probs = load_probabilities_csv(*paths.probabilities);
    if (paths.posture) posture = load_posture_csv(*paths.posture);
    if (paths.traces) traces = load_traces_csv(*paths.traces);

    EntityIndexBuilder builder;
    if (access) {
        for (const auto& [u, h] : *access) {
            builder.intern_user(u);
            builder.intern_host(h);
        }
    }
    if (flows) {
        for (const auto& t : *flows) {
            builder.intern_host(t[0]);
            builder.intern_app(t[1]);
            builder.intern_host(t[2]);
        }
    }
    if (probs) {
        for (const auto& r : *probs) {
            builder.intern_app(r.app);
            builder.intern_host(r.host);
        }
    }
    if (posture) {
        for (const auto& r : *posture) builder.intern_host(r.host);
    }
    if (traces) {
        for (const auto& s : *traces) {
            builder.intern_host(s.src);
            builder.intern_app(s.app);
            builder.intern_host(s.dst);
        }
    }
    if (!access) builder.intern_user("_none");

    Dataset ds;
    ds.index = std::make_shared<const EntityIndex>(builder.build_allow_empty_apps());

    if (access) {
        std::vector<Edge> edges;
        for (const auto& [u, h] : *access) {
            edges.emplace_back(ds.index->user_index(u), ds.index->host_index(h));
        }
        ds.graph.emplace(ds.index, std::move(edges));
    }
    if (flows) {
        std::vector<FlowTriple> triples;
        for (const auto& t : *flows) {
            triples.push_back({ds.index->host_index(t[0]), ds.index->app_index(t[1]),
                               ds.index->host_index(t[2])});
        }
        ds.flows.emplace(ds.index, std::move(triples));
    }
    if (probs) {
        CompromiseProbabilities p(ds.index->app_count(), ds.index->host_count());
        for (const auto& r : *probs) {
            p.set(ds.index->app_index(r.app), ds.index->host_index(r.host), r.prob);
        }
        ds.probabilities = std::move(p);
    }
    if (posture) {
        std::vector<double> levels(ds.index->host_count(), 0.0);
        for (const auto& r : *posture) levels[ds.index->host_index(r.host)] = r.level;
        ds.posture = SecurityPosture(std::move(levels));
    }
    if (traces) {
        AttackTrace at;
        std::vector<FlowTriple> chain;
        std::string current_id;
        long expected_step = 0;
        bool have_origin = false;
        auto flush = [&]() {
            if (!chain.empty()) at.paths.push_back(std::move(chain));
            chain.clear();
        };
        for (const auto& s : *traces) {
            const FlowTriple step{ds.index->host_index(s.src), ds.index->app_index(s.app),
                                  ds.index->host_index(s.dst)};
            if (s.path_id != current_id) {
                flush();
                current_id = s.path_id;
                expected_step = 0;
                if (!have_origin) {
                    at.origin = step[0];
                    have_origin = true;
                } else if (step[0] != at.origin) {
                    throw ValidationError("trace path " + s.path_id +
                                          " does not start at the shared origin");
                }
            }
            if (s.step != expected_step) {
                throw ValidationError("trace path " + s.path_id + " has a gap at step " +
                                      std::to_string(s.step));
            }
            if (!chain.empty() && chain.back()[2] != step[0]) {
                throw ValidationError("trace path " + s.path_id + " breaks the chain at step " +
                                      std::to_string(s.step));
            }
            chain.push_back(step);
            ++expected_step;
        }
        flush();
        ds.traces = std::move(at);
    }
    return ds;
}

void RunConfig::set_string(const std::string& key, const std::string& value) {
    entries.emplace_back(key, "\"" + json_escape(value) + "\"");
}

void RunConfig::set_number(const std::string& key, double value) {
    entries.emplace_back(key, format_double(value));
}

void RunConfig::set_integer(const std::string& key, long long value) {
    entries.emplace_back(key, std::to_string(value));
}

void RunConfig::set_list(const std::string& key, const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += format_double(values[i]);
        if (i + 1 < values.size()) out += ", ";
    }
    out += "]";
    entries.emplace_back(key, out);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_experiment_results(const ExperimentResult& result, const RunConfig& config,
                              const std::filesystem::path& dir) {
    ensure_directory(dir);

    std::ostringstream json;
    json << "{\n";
    json << "  \"config\": " << config_json(config, 2) << ",\n";
    json << "  \"kind\": \"" << json_escape(result.kind) << "\",\n";
    json << "  \"trials\": " << result.trials << ",\n";
    json << "  \"seed\": " << result.seed << ",\n";
    json << "  \"budget_fractions\": [";
    for (std::size_t i = 0; i < result.budget_fractions.size(); ++i) {
        json << format_double(result.budget_fractions[i]);
        if (i + 1 < result.budget_fractions.size()) json << ", ";
    }
    json << "],\n";
    json << "  \"curves\": [";
    for (std::size_t c = 0; c < result.curves.size(); ++c) {
        const auto& curve = result.curves[c];
        json << (c == 0 ? "\n" : ",\n");
        json << "    {\n      \"strategy\": \"" << json_escape(curve.strategy)
             << "\",\n      \"points\": [";
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            const auto& pt = curve.points[i];
            json << (i == 0 ? "\n" : ",\n");
            json << "        {\"budget_fraction\": " << format_double(pt.budget_fraction)
                 << ", \"mean_budget\": " << format_double(pt.mean_budget)
                 << ", \"mean_reachability\": " << format_double(pt.mean_reachability)
                 << ", \"std_reachability\": " << format_double(pt.std_reachability)
                 << ", \"mean_new_account_fraction\": "
                 << format_double(pt.mean_new_account_fraction) << "}";
        }
        json << "\n      ]\n    }";
    }
    json << "\n  ],\n";
    json << "  \"per_trial\": [";
    for (std::size_t c = 0; c < result.per_trial.size(); ++c) {
        json << (c == 0 ? "\n" : ",\n");
        json << "    {\"strategy\": \"" << json_escape(result.curves[c].strategy)
             << "\", \"reachability\": [";
        for (std::size_t b = 0; b < result.per_trial[c].size(); ++b) {
            json << (b == 0 ? "[" : ", [");
            for (std::size_t t = 0; t < result.per_trial[c][b].size(); ++t) {
                json << format_double(result.per_trial[c][b][t]);
                if (t + 1 < result.per_trial[c][b].size()) json << ", ";
            }
            json << "]";
        }
        json << "]}";
    }
    json << "\n  ]\n}\n";

    FileWriter(dir / "result.json").write(json.str());

    std::ostringstream csv;
    csv << "strategy,budget,budget_fraction,mean_reachability,std_reachability\n";
    for (const auto& curve : result.curves) {
        for (const auto& pt : curve.points) {
            csv << curve.strategy << "," << format_double(pt.mean_budget) << ","
                << format_double(pt.budget_fraction) << ","
                << format_double(pt.mean_reachability) << ","
                << format_double(pt.std_reachability) << "\n";
        }
    }
    FileWriter(dir / "curves.csv").write(csv.str());
}

namespace {

void write_plan_json(const RunConfig& config, const std::string& kind,
                     const std::string& actions_json, const std::filesystem::path& dir) {
    std::ostringstream json;
    json << "{\n  \"config\": " << config_json(config, 2) << ",\n";
    json << "  \"kind\": \"" << kind << "\",\n";
    json << "  \"actions\": " << actions_json << "\n}\n";
    FileWriter(dir / "result.json").write(json.str());
}

} // namespace

void write_segmentation_plan(const SegmentationPlan& plan, const EntityIndex& index,
                             const RunConfig& config, const std::filesystem::path& dir) {
    ensure_directory(dir);
    std::ostringstream csv;
    csv << "step,action,user_id,host_id\n";
    std::size_t step = 0;
    std::ostringstream actions;
    actions << "[";
    for (const auto& [i, j] : plan.removed_edges) {
        csv << step << ",segment-edge," << index.user_id(i) << "," << index.host_id(j) << "\n";
        actions << (step == 0 ? "" : ", ") << "{\"action\": \"segment-edge\", \"user\": \""
                << json_escape(index.user_id(i)) << "\", \"host\": \""
                << json_escape(index.host_id(j)) << "\"}";
        ++step;
    }
    const auto& new_index = plan.resulting_graph.index();
    std::uint32_t next_user = static_cast<std::uint32_t>(index.user_count());
    for (const auto& [user, hosts] : plan.new_accounts) {
        (void)user;
        for (std::uint32_t h : hosts) {
            csv << step << ",grant-access," << new_index.user_id(next_user) << ","
                << index.host_id(h) << "\n";
            actions << (step == 0 ? "" : ", ") << "{\"action\": \"grant-access\", \"user\": \""
                    << json_escape(new_index.user_id(next_user)) << "\", \"host\": \""
                    << json_escape(index.host_id(h)) << "\"}";
            ++step;
        }
        ++next_user;
    }
    actions << "]";
    FileWriter(dir / "plan.csv").write(csv.str());
    write_plan_json(config, "segmentation-plan", actions.str(), dir);
}

void write_edge_plan(const EdgeHardeningPlan& plan, const EntityIndex& index,
                     const RunConfig& config, const std::filesystem::path& dir) {
    ensure_directory(dir);
    std::ostringstream csv;
    csv << "step,action,app,host,old_prob,new_prob\n";
    std::ostringstream actions;
    actions << "[";
    for (std::size_t z = 0; z < plan.hardened_edges.size(); ++z) {
        const auto& [k, j] = plan.hardened_edges[z];
        csv << z << ",harden-edge," << index.app_id(k) << "," << index.host_id(j) << ","
            << format_double(plan.old_values[z]) << "," << format_double(plan.epsilons[z])
            << "\n";
        actions << (z == 0 ? "" : ", ") << "{\"action\": \"harden-edge\", \"app\": \""
                << json_escape(index.app_id(k)) << "\", \"host\": \""
                << json_escape(index.host_id(j))
                << "\", \"old_prob\": " << format_double(plan.old_values[z])
                << ", \"new_prob\": " << format_double(plan.epsilons[z]) << "}";
    }
    actions << "]";
    FileWriter(dir / "plan.csv").write(csv.str());
    write_plan_json(config, "edge-hardening-plan", actions.str(), dir);
}

void write_node_plan(const NodeHardeningPlan& plan, const EntityIndex& index,
                     const RunConfig& config, const std::filesystem::path& dir) {
    ensure_directory(dir);
    std::ostringstream csv;
    csv << "step,action,host,old_level,new_level\n";
    std::ostringstream actions;
    actions << "[";
    for (std::size_t z = 0; z < plan.hardened_hosts.size(); ++z) {
        const auto j = plan.hardened_hosts[z];
        csv << z << ",harden-node," << index.host_id(j) << ","
            << format_double(plan.old_levels[z]) << "," << format_double(plan.alphas[z]) << "\n";
        actions << (z == 0 ? "" : ", ") << "{\"action\": \"harden-node\", \"host\": \""
                << json_escape(index.host_id(j))
                << "\", \"old_level\": " << format_double(plan.old_levels[z])
                << ", \"new_level\": " << format_double(plan.alphas[z]) << "}";
    }
    actions << "]";
    FileWriter(dir / "plan.csv").write(csv.str());
    write_plan_json(config, "node-hardening-plan", actions.str(), dir);
}

void write_benchmark_results(const std::map<std::string, std::vector<BenchmarkPoint>>& curves,
                             const RunConfig& config, const std::filesystem::path& dir) {
    ensure_directory(dir);
    std::ostringstream json;
    json << "{\n  \"config\": " << config_json(config, 2) << ",\n";
    json << "  \"kind\": \"trace-benchmark\",\n  \"curves\": [";
    bool first_curve = true;
    std::ostringstream csv;
    csv << "strategy,budget,budget_fraction,mean_reachability,std_reachability\n";
    for (const auto& [name, points] : curves) {
        json << (first_curve ? "\n" : ",\n");
        first_curve = false;
        json << "    {\"strategy\": \"" << json_escape(name) << "\", \"points\": [";
        for (std::size_t i = 0; i < points.size(); ++i) {
            json << (i == 0 ? "" : ", ") << "{\"hardened_edges\": " << points[i].hardened_edges
                 << ", \"hardened_fraction\": " << format_double(points[i].hardened_fraction)
                 << ", \"reachability\": " << format_double(points[i].reachability) << "}";
            csv << name << "," << points[i].hardened_edges << ","
                << format_double(points[i].hardened_fraction) << ","
                << format_double(points[i].reachability) << "," << format_double(0.0) << "\n";
        }
        json << "]}";
    }
    json << "\n  ]\n}\n";
    FileWriter(dir / "result.json").write(json.str());
    FileWriter(dir / "curves.csv").write(csv.str());
}

void write_synthetic_dataset(const BipartiteAccessGraph& g, const HostAppFlows& flows,
                             const CompromiseProbabilities& p, const SecurityPosture& a,
                             const std::filesystem::path& dir) {
    ensure_directory(dir);
    const auto& index = g.index();

    std::ostringstream access;
    access << "user_id,host_id\n";
    for (const auto& [i, j] : g.edges()) {
        access << index.user_id(i) << "," << index.host_id(j) << "\n";
    }
    FileWriter(dir / "access.csv").write(access.str());

    std::ostringstream flows_csv;
    flows_csv << "src_host,app,dst_host\n";
    for (const auto& t : flows.triples()) {
        flows_csv << index.host_id(t[0]) << "," << index.app_id(t[1]) << ","
                  << index.host_id(t[2]) << "\n";
    }
    FileWriter(dir / "flows.csv").write(flows_csv.str());

    std::ostringstream probs;
    probs << "app,host,prob\n";
    for (std::uint32_t k = 0; k < p.app_count(); ++k) {
        for (std::uint32_t j = 0; j < p.host_count(); ++j) {
            if (p.at(k, j) == 0.0) continue;
            probs << index.app_id(k) << "," << index.host_id(j) << ","
                  << format_double(p.at(k, j)) << "\n";
        }
    }
    FileWriter(dir / "probabilities.csv").write(probs.str());

    std::ostringstream posture;
    posture << "host,level\n";
    for (std::uint32_t j = 0; j < a.host_count(); ++j) {
        posture << index.host_id(j) << "," << format_double(a.at(j)) << "\n";
    }
    FileWriter(dir / "posture.csv").write(posture.str());
}

void write_traces_csv(const AttackTrace& traces, const EntityIndex& index,
                      const std::filesystem::path& path) {
    std::ostringstream out;
    out << "path_id,step,src_host,app,dst_host\n";
    for (std::size_t pid = 0; pid < traces.paths.size(); ++pid) {
        for (std::size_t s = 0; s < traces.paths[pid].size(); ++s) {
            const auto& step = traces.paths[pid][s];
            out << "p" << pid << "," << s << "," << index.host_id(step[0]) << ","
                << index.app_id(step[1]) << "," << index.host_id(step[2]) << "\n";
        }
    }
    FileWriter(path).write(out.str());
}

} // namespace latmove
