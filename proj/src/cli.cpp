#include "backhaul/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "backhaul/json_io.hpp"
#include "backhaul/routing.hpp"
#include "backhaul/stochastic.hpp"

namespace backhaul {

namespace {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double parse_real(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw UsageError(what + ": bad number \"" + text + "\"");
        return v;
    } catch (const std::invalid_argument&) {
        throw UsageError(what + ": bad number \"" + text + "\"");
    } catch (const std::out_of_range&) {
        throw UsageError(what + ": number out of range \"" + text + "\"");
    }
}

// Accepts "ijk" (three digits) or "i,j,k".
LinkId parse_link_spec(const std::string& text) {
    const auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)); };
    if (text.size() == 3 && digit(text[0]) && digit(text[1]) && digit(text[2]))
        return LinkId(text[0] - '0', text[1] - '0', text[2] - '0');
    int i = 0, j = 0, k = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d,%d,%d%c", &i, &j, &k, &extra) == 3)
        return LinkId(i, j, k);
    throw UsageError("--fail: cannot parse link \"" + text + "\" (use \"123\" or \"1,2,3\")");
}

std::optional<std::uint64_t> seed_from_environment() {
    const char* env = std::getenv("BACKHAUL_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0' || env[0] == '-')
        throw UsageError("BACKHAUL_SEED must be a non-negative integer, got \"" +
                         std::string(env) + "\"");
    return static_cast<std::uint64_t>(v);
}

Subcommand subcommand_from_name(const std::string& name) {
    if (name == "allocate") return Subcommand::Allocate;
    if (name == "msweep") return Subcommand::Msweep;
    if (name == "failure") return Subcommand::Failure;
    if (name == "route") return Subcommand::Route;
    return Subcommand::Validate;
}

}  // namespace

QosProfile profile_from_name(const std::string& name) {
    if (name == "p1") return {8.0, 30.0};
    if (name == "p2") return {30.0, 50.0};
    throw UsageError("unknown traffic profile \"" + name + "\" (use p1 or p2)");
}

std::vector<double> parse_m_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    if (parts.size() > 3) throw UsageError("--m: expected START[:END[:STEP]], got \"" + spec + "\"");
    std::vector<double> values;
    values.reserve(parts.size());
    for (const std::string& p : parts) values.push_back(parse_real(p, "--m"));

    if (values.size() == 1) {
        if (values[0] < 0.0) throw UsageError("--m: exponent must be >= 0");
        return {values[0]};
    }
    const double start = values[0];
    const double end = values[1];
    const double step = values.size() == 3 ? values[2] : 1.0;
    if (start < 0.0) throw UsageError("--m: range start must be >= 0");
    if (end < start) throw UsageError("--m: range end must not be below its start");
    if (step <= 0.0) throw UsageError("--m: range step must be positive");
    std::vector<double> sweep;
    for (double v = start; v <= end + 1e-9; v += step) sweep.push_back(v);
    return sweep;
}

Command parse_args(const std::vector<std::string>& args) {
    CLI::App app{"QoS routing and Monte Carlo experiments for hybrid backhaul networks"};
    app.require_subcommand(1);

    std::string scenario = "builtin";
    std::string profile, m_spec, output, normalize;
    std::vector<std::string> fail_specs;
    int trials = 0, source = 0, destination = 0;
    std::uint64_t seed = 0;
    double alpha = 0, beta = 0, delay_alpha = 0, delay_beta = 0;
    double m_step = 0, min_fragment = 0;
    bool fixed_occupations = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("scenario", scenario, "scenario JSON file, or \"builtin\"");
        sub->add_option("--profile", profile, "traffic profile: p1 (8 Mbps / 30 ms) or p2 (30 Mbps / 50 ms)");
        sub->add_option("--m", m_spec, "occupation exponent; msweep also accepts START:END[:STEP]");
        sub->add_option("--m-step", m_step, "exponent decrement per relaxation");
        sub->add_option("--min-fragment", min_fragment, "smallest routable fragment rate, Mbps");
        sub->add_option("--trials", trials, "Monte Carlo trial count");
        sub->add_option("--seed", seed, "master RNG seed");
        sub->add_option("--alpha", alpha, "occupation Beta shape alpha");
        sub->add_option("--beta", beta, "occupation Beta shape beta");
        sub->add_option("--delay-alpha", delay_alpha, "instantaneous delay Beta shape alpha");
        sub->add_option("--delay-beta", delay_beta, "instantaneous delay Beta shape beta");
        sub->add_option("--source", source, "source node id");
        sub->add_option("--dest", destination, "destination node id");
        sub->add_flag("--fixed-occupations", fixed_occupations,
                      "keep stored occupations instead of sampling per trial");
        sub->add_option("-o,--output", output, "also write the result to this file");
    };

    add_common(app.add_subcommand("allocate", "mean per-link traffic over sampled occupations"));
    add_common(app.add_subcommand("msweep", "delay-violation probability and iteration cost per exponent"));
    CLI::App* failure = app.add_subcommand("failure", "reallocate a failed link's load as unit flows");
    add_common(failure);
    failure->add_option("--fail", fail_specs, "failed link as \"ijk\" or \"i,j,k\" (repeatable)");
    add_common(app.add_subcommand("route", "route one demand and print the fragments"));
    CLI::App* validate = app.add_subcommand("validate", "check a scenario file and optionally normalize it");
    add_common(validate);
    validate->add_option("--normalize", normalize, "write the fully-populated scenario JSON here");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("backhaul");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto parsed = app.get_subcommands();
        throw HelpRequested(parsed.empty() ? app.help() : parsed.front()->help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* active = app.get_subcommands().front();
    const auto given = [&](const std::string& name) {
        const CLI::Option* opt = active->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };

    Command cmd;
    cmd.subcommand = subcommand_from_name(active->get_name());
    cmd.scenario_path = scenario;
    cmd.output_path = output;
    cmd.normalize_path = normalize;

    const std::optional<std::uint64_t> env_seed = seed_from_environment();

    // Defaults, then the scenario file; BACKHAUL_SEED slots in between.
    bool file_sets_seed = false;
    if (scenario == "builtin") {
        cmd.config.topology = build_reference_topology();
    } else {
        std::ifstream in(scenario);
        if (!in) throw IoError("cannot read scenario file: " + scenario);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("scenario file " + scenario + ": " + e.what());
        }
        cmd.config = scenario_from_json(j);
        file_sets_seed = j.contains("experiment") && j.at("experiment").is_object() &&
                         j.at("experiment").contains("seed");
    }
    if (env_seed && !file_sets_seed) cmd.config.seed = *env_seed;

    // Explicit flags win over everything.
    ScenarioConfig& config = cmd.config;
    if (given("--profile")) config.qos = profile_from_name(profile);
    if (given("--m")) {
        const std::vector<double> values = parse_m_spec(m_spec);
        if (cmd.subcommand == Subcommand::Msweep) {
            config.m_sweep = values;
        } else if (values.size() == 1) {
            config.routing.m_initial = values.front();
        } else {
            throw UsageError("--m: ranges are only valid for msweep");
        }
    }
    if (given("--m-step")) {
        if (m_step <= 0.0) throw UsageError("--m-step must be positive");
        config.routing.m_step = m_step;
    }
    if (given("--min-fragment")) {
        if (min_fragment <= 0.0) throw UsageError("--min-fragment must be positive");
        config.routing.min_fragment_mbps = min_fragment;
    }
    if (given("--trials")) {
        if (trials < 1) throw UsageError("--trials must be at least 1");
        config.trials = trials;
    }
    if (given("--seed")) config.seed = seed;
    if (given("--alpha")) {
        if (alpha <= 0.0) throw UsageError("--alpha must be positive");
        config.occupation_params.alpha = alpha;
    }
    if (given("--beta")) {
        if (beta <= 0.0) throw UsageError("--beta must be positive");
        config.occupation_params.beta = beta;
    }
    if (given("--delay-alpha")) {
        if (delay_alpha <= 0.0) throw UsageError("--delay-alpha must be positive");
        config.delay_params.alpha = delay_alpha;
    }
    if (given("--delay-beta")) {
        if (delay_beta <= 0.0) throw UsageError("--delay-beta must be positive");
        config.delay_params.beta = delay_beta;
    }
    if (given("--source")) config.source = source;
    if (given("--dest")) config.destination = destination;
    if (fixed_occupations) config.sample_occupations = false;
    if (!fail_specs.empty()) {
        config.failed_links.clear();
        for (const std::string& text : fail_specs) {
            const LinkId id = parse_link_spec(text);
            if (!config.topology.has_link(id))
                throw UsageError("--fail: no such link \"" + text + "\"");
            config.failed_links.push_back(id);
        }
    }

    if (cmd.subcommand == Subcommand::Failure && config.failed_links.empty())
        throw UsageError("failure needs at least one failed link (--fail or scenario file)");
    if (cmd.subcommand == Subcommand::Msweep && config.m_sweep.empty())
        throw UsageError("msweep needs exponents (--m START:END[:STEP] or scenario file)");

    return cmd;
}

std::string format_allocation_csv(const Topology& topo, const TrialStats& stats) {
    std::string out = "link_i,link_j,link_k,technology,mean_traffic_mbps\n";
    for (const auto& [id, link] : topo.links()) {
        const auto it = stats.per_link_mean_traffic_mbps.find(id);
        const double mean = it == stats.per_link_mean_traffic_mbps.end() ? 0.0 : it->second;
        out += std::to_string(id.i) + ',' + std::to_string(id.j) + ',' +
               std::to_string(id.k) + ',' + to_string(link.technology) + ',' +
               format_real(mean) + '\n';
    }
    out += "infeasible_fraction," + format_real(stats.infeasible_fraction) + '\n';
    out += "blocked_load_mbps," + format_real(stats.blocked_load_mbps) + '\n';
    return out;
}

std::string format_sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = "m,violation_probability,mean_iterations\n";
    for (const SweepPoint& p : points)
        out += format_real(p.m) + ',' + format_real(p.violation_probability) + ',' +
               format_real(p.mean_iterations) + '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

namespace {

int run_route(const ScenarioConfig& config) {
    Topology topo = config.topology;
    Rng rng = make_trial_rng(config.seed, 0);
    if (config.sample_occupations) sample_occupations(topo, config.occupation_params, rng);

    const RouteResult result =
        route(topo, config.source, config.destination, config.qos, config.routing);
    std::cout << "demand: " << format_real(config.qos.rate_mbps) << " Mbps from node "
              << config.source << " to node " << config.destination << ", delay bound "
              << format_real(config.qos.max_delay_ms) << " ms\n";
    if (!result.feasible) {
        std::cout << "infeasible after " << result.total_iterations << " iterations\n";
        return 0;
    }
    for (std::size_t n = 0; n < result.fragments.size(); ++n) {
        const Fragment& f = result.fragments[n];
        std::cout << "fragment " << n + 1 << ": " << format_real(f.rate_mbps) << " Mbps via";
        for (const PathHop& hop : f.path) std::cout << ' ' << hop.link_id().str();
        std::cout << ", mean delay " << format_real(f.sum_mean_delay_ms) << " ms (m="
                  << format_real(f.m_used) << ")\n";
    }
    std::cout << "iterations: " << result.total_iterations << '\n';
    return 0;
}

int run_validate(const Command& cmd) {
    cmd.config.validate();
    std::cout << "scenario OK: " << cmd.config.topology.nodes().size() << " nodes, "
              << cmd.config.topology.links().size() << " links, " << cmd.config.trials
              << " trials\n";
    if (!cmd.normalize_path.empty())
        write_text_file(cmd.normalize_path, scenario_to_json(cmd.config).dump(2) + "\n");
    return 0;
}

int emit_csv(const std::string& csv, const std::string& output_path) {
    std::cout << csv;
    if (!output_path.empty()) write_text_file(output_path, csv);
    return 0;
}

}  // namespace

int run_command(const Command& cmd) {
    switch (cmd.subcommand) {
    case Subcommand::Allocate:
        return emit_csv(format_allocation_csv(cmd.config.topology, run_allocation(cmd.config)),
                        cmd.output_path);
    case Subcommand::Failure:
        return emit_csv(format_allocation_csv(cmd.config.topology, run_failure(cmd.config)),
                        cmd.output_path);
    case Subcommand::Msweep:
        return emit_csv(format_sweep_csv(run_m_sweep(cmd.config)), cmd.output_path);
    case Subcommand::Route:
        return run_route(cmd.config);
    case Subcommand::Validate:
        return run_validate(cmd);
    }
    return 1;  // unreachable
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc) - 1 : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        return run_command(parse_args(args));
    } catch (const HelpRequested& help) {
        std::cout << help.what();
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace backhaul
