#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "backhaul/cli.hpp"
#include "backhaul/json_io.hpp"

using namespace backhaul;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / name;
}

struct EnvGuard {
    explicit EnvGuard(const char* n) : name(n) { unsetenv(n); }
    ~EnvGuard() { unsetenv(name); }
    const char* name;
};

}  // namespace

TEST_CASE("bare allocate resolves to the builtin defaults") {
    EnvGuard guard("BACKHAUL_SEED");
    const Command cmd = parse_args({"allocate"});
    CHECK(cmd.subcommand == Subcommand::Allocate);
    CHECK(cmd.scenario_path == "builtin");
    CHECK(cmd.config.topology.links().size() == 9);
    CHECK(cmd.config.qos.rate_mbps == 8.0);
    CHECK(cmd.config.qos.max_delay_ms == 30.0);
    CHECK(cmd.config.routing.m_initial == 4.0);
    CHECK(cmd.config.routing.m_step == 1.0);
    CHECK(cmd.config.routing.min_fragment_mbps == 0.2);
    CHECK(cmd.config.trials == 5000);
    CHECK(cmd.config.seed == 0);
    CHECK(cmd.config.source == 1);
    CHECK(cmd.config.destination == 4);
    CHECK(cmd.config.sample_occupations);
}

TEST_CASE("sweep flags expand profiles and m ranges") {
    EnvGuard guard("BACKHAUL_SEED");
    const Command cmd =
        parse_args({"msweep", "--profile", "p1", "--m", "0:8:1", "--trials", "5000"});
    CHECK(cmd.subcommand == Subcommand::Msweep);
    CHECK(cmd.config.qos.rate_mbps == 8.0);
    CHECK(cmd.config.qos.max_delay_ms == 30.0);
    CHECK(cmd.config.trials == 5000);
    REQUIRE(cmd.config.m_sweep.size() == 9);
    CHECK(cmd.config.m_sweep.front() == 0.0);
    CHECK(cmd.config.m_sweep.back() == 8.0);

    const Command p2 = parse_args({"allocate", "--profile", "p2"});
    CHECK(p2.config.qos.rate_mbps == 30.0);
    CHECK(p2.config.qos.max_delay_ms == 50.0);
}

TEST_CASE("usage errors are reported for bad flags and values") {
    CHECK_THROWS_AS(parse_args({"allocate", "--profile", "p9"}), UsageError);
    CHECK_THROWS_AS(parse_args({"frobnicate"}), UsageError);
    CHECK_THROWS_AS(parse_args({}), UsageError);
    CHECK_THROWS_AS(parse_args({"allocate", "--no-such-flag"}), UsageError);
    CHECK_THROWS_AS(parse_args({"allocate", "--m", "0:8:1"}), UsageError);
    CHECK_THROWS_AS(parse_args({"allocate", "--trials", "0"}), UsageError);
    CHECK_THROWS_AS(parse_args({"failure"}), UsageError);  // no failed link given
    CHECK_THROWS_AS(parse_args({"failure", "--fail", "whoops"}), UsageError);
    CHECK_THROWS_AS(parse_args({"--help"}), HelpRequested);
    CHECK_THROWS_AS(parse_args({"allocate", "--help"}), HelpRequested);
}

TEST_CASE("m specifications parse singles and inclusive ranges") {
    CHECK(parse_m_spec("4") == std::vector<double>{4.0});
    CHECK(parse_m_spec("0:3") == std::vector<double>{0.0, 1.0, 2.0, 3.0});
    CHECK(parse_m_spec("0:8:2") == std::vector<double>{0.0, 2.0, 4.0, 6.0, 8.0});
    CHECK(parse_m_spec("2:2") == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_m_spec(""), UsageError);
    CHECK_THROWS_AS(parse_m_spec("banana"), UsageError);
    CHECK_THROWS_AS(parse_m_spec("8:0:1"), UsageError);
    CHECK_THROWS_AS(parse_m_spec("0:8:0"), UsageError);
    CHECK_THROWS_AS(parse_m_spec("0:8:1:2"), UsageError);
    CHECK_THROWS_AS(parse_m_spec("-1:3"), UsageError);
}

TEST_CASE("failed links accept compact and comma forms") {
    EnvGuard guard("BACKHAUL_SEED");
    const Command a = parse_args({"failure", "--fail", "123"});
    REQUIRE(a.config.failed_links.size() == 1);
    CHECK(a.config.failed_links[0] == LinkId(1, 2, 3));

    const Command b = parse_args({"failure", "--fail", "1,2,3", "--fail", "3,4,2"});
    REQUIRE(b.config.failed_links.size() == 2);
    CHECK(b.config.failed_links[0] == LinkId(1, 2, 3));
    CHECK(b.config.failed_links[1] == LinkId(3, 4, 2));

    CHECK_THROWS_AS(parse_args({"failure", "--fail", "129"}), UsageError);  // no such link
}

TEST_CASE("seed resolution: flag beats file beats environment beats default") {
    EnvGuard guard("BACKHAUL_SEED");

    CHECK(parse_args({"allocate"}).config.seed == 0);

    setenv("BACKHAUL_SEED", "555", 1);
    CHECK(parse_args({"allocate"}).config.seed == 555);
    CHECK(parse_args({"allocate", "--seed", "7"}).config.seed == 7);

    const fs::path scenario = temp_file("seed_scenario.json");
    std::ofstream(scenario) << R"({"experiment": {"seed": 888}})";
    CHECK(parse_args({"allocate", scenario.string()}).config.seed == 888);
    CHECK(parse_args({"allocate", scenario.string(), "--seed", "9"}).config.seed == 9);

    setenv("BACKHAUL_SEED", "not-a-number", 1);
    CHECK_THROWS_AS(parse_args({"allocate"}), UsageError);
}

TEST_CASE("scenario files feed the config and flags still win") {
    EnvGuard guard("BACKHAUL_SEED");
    const fs::path scenario = temp_file("cli_scenario.json");
    std::ofstream(scenario) << R"({
        "topology": "builtin",
        "experiment": {
            "type": "allocate",
            "trials": 123,
            "seed": 5,
            "m": 2.5,
            "alpha": 1.0,
            "beta": 3.0,
            "profile": "p2",
            "sample_occupations": false
        }
    })";

    const Command cmd = parse_args({"allocate", scenario.string()});
    CHECK(cmd.config.trials == 123);
    CHECK(cmd.config.seed == 5);
    CHECK(cmd.config.routing.m_initial == 2.5);
    CHECK(cmd.config.occupation_params.alpha == 1.0);
    CHECK(cmd.config.occupation_params.beta == 3.0);
    CHECK(cmd.config.qos.rate_mbps == 30.0);
    CHECK_FALSE(cmd.config.sample_occupations);

    const Command over = parse_args({"allocate", scenario.string(), "--trials", "7",
                                     "--profile", "p1", "--alpha", "2"});
    CHECK(over.config.trials == 7);
    CHECK(over.config.qos.rate_mbps == 8.0);
    CHECK(over.config.occupation_params.alpha == 2.0);
    CHECK(over.config.occupation_params.beta == 3.0);  // file value survives
}

TEST_CASE("allocation CSV carries link rows plus the two summary rows") {
    const Topology topo = build_reference_topology();
    TrialStats stats;
    for (const auto& [id, link] : topo.links())
        stats.per_link_mean_traffic_mbps[id] = 0.0;
    stats.per_link_mean_traffic_mbps[LinkId(1, 2, 3)] = 8.0;
    stats.per_link_mean_traffic_mbps[LinkId(3, 4, 2)] = 0.123456789;
    stats.infeasible_fraction = 0.25;
    stats.blocked_load_mbps = 2.0;

    const std::string expected =
        "link_i,link_j,link_k,technology,mean_traffic_mbps\n"
        "1,2,1,xDSL,0\n"
        "1,2,2,Sub6GHz,0\n"
        "1,2,3,MmWave,8\n"
        "1,3,1,xDSL,0\n"
        "2,3,1,Fiber,0\n"
        "2,3,2,MmWave,0\n"
        "2,4,1,Sub6GHz,0\n"
        "3,4,1,Sub6GHz,0\n"
        "3,4,2,Fiber,0.123457\n"
        "infeasible_fraction,0.25\n"
        "blocked_load_mbps,2\n";
    CHECK(format_allocation_csv(topo, stats) == expected);
}

TEST_CASE("sweep CSV prints six significant digits") {
    const std::vector<SweepPoint> points{
        {0.0, 0.001, 1.5},
        {2.0, 0.0625, 2.0},
        {4.0, 0.123456789, 3.14159265},
    };
    const std::string expected =
        "m,violation_probability,mean_iterations\n"
        "0,0.001,1.5\n"
        "2,0.0625,2\n"
        "4,0.123457,3.14159\n";
    CHECK(format_sweep_csv(points) == expected);
}

TEST_CASE("scenario JSON normalizes and round-trips to an equivalent config") {
    ScenarioConfig cfg;
    cfg.topology = build_reference_topology();
    cfg.topology.link_at(LinkId(1, 2, 1)).occupation = 0.125;
    cfg.qos = {30.0, 50.0};
    cfg.routing = {6.0, 0.5, 0.4};
    cfg.occupation_params = {1.0, 3.0};
    cfg.delay_params = {5.0, 5.0};
    cfg.trials = 42;
    cfg.seed = 17;
    cfg.sample_occupations = false;
    cfg.failed_links = {LinkId(1, 2, 3)};
    cfg.m_sweep = {0.0, 1.0, 2.0};

    const nlohmann::json j = scenario_to_json(cfg);
    const ScenarioConfig back = scenario_from_json(j);

    CHECK(back.qos.rate_mbps == cfg.qos.rate_mbps);
    CHECK(back.qos.max_delay_ms == cfg.qos.max_delay_ms);
    CHECK(back.routing.m_initial == cfg.routing.m_initial);
    CHECK(back.routing.m_step == cfg.routing.m_step);
    CHECK(back.routing.min_fragment_mbps == cfg.routing.min_fragment_mbps);
    CHECK(back.occupation_params.alpha == cfg.occupation_params.alpha);
    CHECK(back.occupation_params.beta == cfg.occupation_params.beta);
    CHECK(back.trials == cfg.trials);
    CHECK(back.seed == cfg.seed);
    CHECK(back.sample_occupations == cfg.sample_occupations);
    CHECK(back.failed_links == cfg.failed_links);
    CHECK(back.m_sweep == cfg.m_sweep);
    CHECK(topology_to_json(back.topology) == topology_to_json(cfg.topology));
    // Normalized output is a fixed point.
    CHECK(scenario_to_json(back) == j);
}

TEST_CASE("run_command writes CSV files and validate normalizes scenarios") {
    EnvGuard guard("BACKHAUL_SEED");
    const fs::path csv = temp_file("alloc_out.csv");
    fs::remove(csv);

    Command cmd = parse_args({"allocate", "--trials", "3", "--seed", "1",
                              "-o", csv.string()});
    CHECK(run_command(cmd) == 0);
    REQUIRE(fs::exists(csv));
    const std::string text = slurp(csv);
    CHECK(text.rfind("link_i,link_j,link_k,technology,mean_traffic_mbps\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);  // header + 9 + 2

    const fs::path norm = temp_file("normalized.json");
    fs::remove(norm);
    Command val = parse_args({"validate", "--normalize", norm.string()});
    CHECK(run_command(val) == 0);
    REQUIRE(fs::exists(norm));
    const ScenarioConfig parsed = load_scenario_file(norm.string());
    CHECK(parsed.topology.links().size() == 9);
    CHECK(parsed.trials == 5000);
}

TEST_CASE("the binary entry point maps failures to exit codes") {
    EnvGuard guard("BACKHAUL_SEED");
    auto run = [](std::vector<std::string> args) {
        std::vector<const char*> argv{"backhaul"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli_main(static_cast<int>(argv.size()), argv.data());
    };

    CHECK(run({"frobnicate"}) == 2);
    CHECK(run({"allocate", "--profile", "p9"}) == 2);
    CHECK(run({"--help"}) == 0);
    CHECK(run({"allocate", "/no/such/scenario.json"}) == 1);
    CHECK(run({"allocate", "--trials", "2", "--seed", "3"}) == 0);
    CHECK(run({"route"}) == 0);
    const fs::path csv = temp_file("msweep_out.csv");
    CHECK(run({"msweep", "--trials", "2", "--m", "0:2", "-o", csv.string()}) == 0);
    CHECK(run({"allocate", "--trials", "1", "-o", "/no/such/dir/out.csv"}) == 1);
}
