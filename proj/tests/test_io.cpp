#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <array>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "latmove/io.hpp"
#include "latmove/synthetic.hpp"

using namespace latmove;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("latmove-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& body) {
    const auto p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"latmove"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_SUITE_BEGIN("cli-io");

TEST_CASE("load_access_csv") {
    TempDir tmp;
    SUBCASE("two rows") {
        const auto p = write_file(tmp.path, "a.csv", "user_id,host_id\nu1,h1\nu2,h1\n");
        CHECK(load_access_csv(p).size() == 2);
    }
    SUBCASE("header only") {
        const auto p = write_file(tmp.path, "a.csv", "user_id,host_id\n");
        CHECK(load_access_csv(p).empty());
    }
    SUBCASE("arity error carries the line number") {
        const auto p = write_file(tmp.path, "a.csv", "user_id,host_id\nu1,h1,extra\n");
        try {
            load_access_csv(p);
            FAIL("expected CsvFormatError");
        } catch (const CsvFormatError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("missing header") {
        const auto p = write_file(tmp.path, "a.csv", "uid,hid\nu1,h1\n");
        CHECK_THROWS_AS(load_access_csv(p), CsvFormatError);
    }
    SUBCASE("empty id") {
        const auto p = write_file(tmp.path, "a.csv", "user_id,host_id\n,h1\n");
        CHECK_THROWS_AS(load_access_csv(p), CsvFormatError);
    }
    SUBCASE("missing file is an io error") {
        CHECK_THROWS_AS(load_access_csv(tmp.path / "absent.csv"), IoError);
    }
}

TEST_CASE("load_probabilities_csv validates the range") {
    TempDir tmp;
    const auto p = write_file(tmp.path, "p.csv", "app,host,prob\nssh,h9,1.5\n");
    CHECK_THROWS_AS(load_probabilities_csv(p), CsvFormatError);
}

TEST_CASE("trace loading chains steps") {
    TempDir tmp;
    SUBCASE("one path of length three") {
        const auto t = write_file(tmp.path, "t.csv",
                                  "path_id,step,src_host,app,dst_host\n"
                                  "p0,0,h1,ssh,h2\np0,1,h2,ssh,h3\np0,2,h3,ssh,h1\n");
        const auto f = write_file(tmp.path, "f.csv",
                                  "src_host,app,dst_host\nh1,ssh,h2\nh2,ssh,h3\nh3,ssh,h1\n");
        DatasetPaths paths;
        paths.traces = t;
        paths.flows = f;
        const auto ds = load_dataset(paths);
        REQUIRE(ds.traces.has_value());
        CHECK(ds.traces->paths.size() == 1);
        CHECK(ds.traces->paths[0].size() == 3);
    }
    SUBCASE("broken chain is rejected") {
        const auto t = write_file(tmp.path, "t.csv",
                                  "path_id,step,src_host,app,dst_host\n"
                                  "p0,0,h1,ssh,h2\np0,1,h9,ssh,h3\n");
        DatasetPaths paths;
        paths.traces = t;
        CHECK_THROWS_AS(load_dataset(paths), ValidationError);
    }
    SUBCASE("empty traces file") {
        const auto t = write_file(tmp.path, "t.csv", "path_id,step,src_host,app,dst_host\n");
        const auto f = write_file(tmp.path, "f.csv", "src_host,app,dst_host\nh1,ssh,h2\n");
        DatasetPaths paths;
        paths.traces = t;
        paths.flows = f;
        const auto ds = load_dataset(paths);
        CHECK(ds.traces->paths.empty());
    }
}

TEST_CASE("gen-synthetic round-trips through the loaders") {
    TempDir tmp;
    SyntheticSpec spec;
    spec.users = 30;
    spec.hosts = 25;
    spec.apps = 2;
    spec.user_host_edges = 50;
    spec.flows = 40;
    spec.seed = 77;
    auto [g, flows] = gen_synthetic_tripartite(spec);
    const auto p = gen_random_P(2, 25, 0.2, 77);
    const auto a = gen_random_posture(25, 77);
    write_synthetic_dataset(g, flows, p, a, tmp.path);

    DatasetPaths paths;
    paths.access = tmp.path / "access.csv";
    paths.flows = tmp.path / "flows.csv";
    paths.probabilities = tmp.path / "probabilities.csv";
    paths.posture = tmp.path / "posture.csv";
    const auto ds = load_dataset(paths);

    // Dense indices are assigned in first-seen order, which differs between
    // the generator and the loader; equality is on labeled structures.
    auto edge_ids = [](const BipartiteAccessGraph& graph) {
        std::set<std::pair<std::string, std::string>> out;
        for (const auto& [i, j] : graph.edges()) {
            out.insert({graph.index().user_id(i), graph.index().host_id(j)});
        }
        return out;
    };
    CHECK(edge_ids(*ds.graph) == edge_ids(g));

    auto triple_ids = [](const HostAppFlows& f) {
        std::set<std::array<std::string, 3>> out;
        for (const auto& t : f.triples()) {
            out.insert({f.index().host_id(t[0]), f.index().app_id(t[1]),
                        f.index().host_id(t[2])});
        }
        return out;
    };
    CHECK(triple_ids(*ds.flows) == triple_ids(flows));

    for (std::uint32_t k = 0; k < 2; ++k) {
        for (std::uint32_t j = 0; j < 25; ++j) {
            const auto lk = ds.index->app_index(g.index().app_id(k));
            const auto lj = ds.index->host_index(g.index().host_id(j));
            CHECK(ds.probabilities->at(lk, lj) == p.at(k, j)); // 17-digit round-trip
        }
    }
    for (std::uint32_t j = 0; j < 25; ++j) {
        CHECK(ds.posture->at(ds.index->host_index(g.index().host_id(j))) == a.at(j));
    }
}

TEST_CASE("cli gen-synthetic writes the four input files") {
    TempDir tmp;
    const auto out = (tmp.path / "data").string();
    CHECK(run_cli({"gen-synthetic", "--users", "50", "--hosts", "40", "--apps", "3",
                   "--edges", "80", "--flows", "60", "--seed", "7", "--out", out}) == 0);
    CHECK(fs::exists(tmp.path / "data" / "access.csv"));
    CHECK(fs::exists(tmp.path / "data" / "flows.csv"));
    CHECK(fs::exists(tmp.path / "data" / "probabilities.csv"));
    CHECK(fs::exists(tmp.path / "data" / "posture.csv"));
    int files = 0;
    for (const auto& entry : fs::directory_iterator(tmp.path / "data")) {
        (void)entry;
        ++files;
    }
    CHECK(files == 4);
}

TEST_CASE("cli validation and io exit codes") {
    TempDir tmp;
    const auto out = (tmp.path / "data").string();
    REQUIRE(run_cli({"gen-synthetic", "--users", "10", "--hosts", "10", "--apps", "2",
                     "--edges", "20", "--flows", "15", "--seed", "3", "--out", out}) == 0);
    SUBCASE("q of zero is a validation error") {
        CHECK(run_cli({"segment", "--access", out + "/access.csv", "--q", "0", "--out",
                       (tmp.path / "plan").string()}) == 1);
    }
    SUBCASE("unknown subcommand") {
        CHECK(run_cli({"frobnicate"}) == 1);
    }
    SUBCASE("missing input file") {
        CHECK(run_cli({"segment", "--access", (tmp.path / "absent.csv").string(), "--q", "1",
                       "--out", (tmp.path / "plan").string()}) == 2);
    }
}

TEST_CASE("cli reach prints a fraction in range") {
    TempDir tmp;
    const auto out = (tmp.path / "data").string();
    REQUIRE(run_cli({"gen-synthetic", "--users", "30", "--hosts", "25", "--apps", "2",
                     "--edges", "60", "--flows", "50", "--seed", "5", "--out", out}) == 0);
    CHECK(run_cli({"reach", "--access", out + "/access.csv", "--flows", out + "/flows.csv",
                   "--probs", out + "/probabilities.csv", "--posture", out + "/posture.csv",
                   "--num-seeds", "2", "--seed", "9"}) == 0);
}

TEST_CASE("experiment outputs are byte-identical across reruns") {
    TempDir tmp;
    const auto data = (tmp.path / "data").string();
    REQUIRE(run_cli({"gen-synthetic", "--users", "30", "--hosts", "25", "--apps", "2",
                     "--edges", "60", "--flows", "50", "--seed", "5", "--out", data}) == 0);
    auto run_once = [&](const std::string& out) {
        return run_cli({"experiment", "--access", data + "/access.csv", "--flows",
                        data + "/flows.csv", "--probs", data + "/probabilities.csv",
                        "--posture", data + "/posture.csv", "--kind", "seg", "--budgets",
                        "0,0.1", "--trials", "2", "--seed", "21", "--strategies",
                        "host-first,user-first", "--out", out});
    };
    REQUIRE(run_once((tmp.path / "r1").string()) == 0);
    REQUIRE(run_once((tmp.path / "r2").string()) == 0);
    CHECK(read_file(tmp.path / "r1" / "result.json") ==
          read_file(tmp.path / "r2" / "result.json"));
    CHECK(read_file(tmp.path / "r1" / "curves.csv") ==
          read_file(tmp.path / "r2" / "curves.csv"));
    CHECK(!read_file(tmp.path / "r1" / "curves.csv").empty());

    // Header and row count: 2 strategies x 2 budgets.
    std::istringstream csv(read_file(tmp.path / "r1" / "curves.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "strategy,budget,budget_fraction,mean_reachability,std_reachability");
    int rows = 0;
    while (std::getline(csv, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 4);
}

TEST_CASE("plan subcommands write plan.csv and result.json") {
    TempDir tmp;
    const auto data = (tmp.path / "data").string();
    REQUIRE(run_cli({"gen-synthetic", "--users", "20", "--hosts", "15", "--apps", "2",
                     "--edges", "40", "--flows", "60", "--seed", "13", "--p-fraction", "0.5",
                     "--out", data}) == 0);

    CHECK(run_cli({"segment", "--access", data + "/access.csv", "--q", "3", "--strategy",
                   "host-first", "--out", (tmp.path / "seg").string()}) == 0);
    CHECK(fs::exists(tmp.path / "seg" / "plan.csv"));
    CHECK(fs::exists(tmp.path / "seg" / "result.json"));

    CHECK(run_cli({"harden-edges", "--flows", data + "/flows.csv", "--probs",
                   data + "/probabilities.csv", "--eta", "2", "--strategy", "phi", "--out",
                   (tmp.path / "he").string()}) == 0);
    const auto plan_csv = read_file(tmp.path / "he" / "plan.csv");
    CHECK(plan_csv.rfind("step,action,app,host,old_prob,new_prob", 0) == 0);

    CHECK(run_cli({"harden-nodes", "--flows", data + "/flows.csv", "--probs",
                   data + "/probabilities.csv", "--posture", data + "/posture.csv", "--zeta",
                   "2", "--score", "rho-j", "--out", (tmp.path / "hn").string()}) == 0);
    CHECK(fs::exists(tmp.path / "hn" / "plan.csv"));
}

TEST_CASE("cli benchmark on generated traces") {
    TempDir tmp;
    const auto data = (tmp.path / "data").string();
    REQUIRE(run_cli({"gen-synthetic", "--users", "5", "--hosts", "40", "--apps", "2",
                     "--edges", "10", "--flows", "300", "--seed", "41", "--trace-origin",
                     "h00", "--out", data}) == 0);
    REQUIRE(fs::exists(tmp.path / "data" / "traces.csv"));
    CHECK(run_cli({"benchmark", "--flows", data + "/flows.csv", "--traces",
                   data + "/traces.csv", "--budgets", "0,0.1,0.5", "--out",
                   (tmp.path / "bench").string()}) == 0);
    CHECK(fs::exists(tmp.path / "bench" / "result.json"));
    CHECK(fs::exists(tmp.path / "bench" / "curves.csv"));
}

TEST_SUITE_END();
