#include "backhaul/json_io.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace backhaul {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

void require_keys(const json& obj, const char* where,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) bad(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

// Accepts [i, j, k], "ijk" (single-digit components), or "i,j,k".
LinkId link_id_from_json(const json& j) {
    if (j.is_array()) {
        if (j.size() != 3) bad("failed_links: expected [i, j, k]");
        return LinkId(j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>());
    }
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        int i = 0, jj = 0, k = 0;
        if (s.size() == 3 && std::isdigit(static_cast<unsigned char>(s[0])) &&
            std::isdigit(static_cast<unsigned char>(s[1])) &&
            std::isdigit(static_cast<unsigned char>(s[2]))) {
            i = s[0] - '0';
            jj = s[1] - '0';
            k = s[2] - '0';
        } else {
            char c1 = 0, c2 = 0;
            std::istringstream in(s);
            if (!(in >> i >> c1 >> jj >> c2 >> k) || c1 != ',' || c2 != ',' ||
                !(in >> std::ws).eof())
                bad("failed_links: cannot parse link \"" + s + "\"");
        }
        return LinkId(i, jj, k);
    }
    bad("failed_links: expected an array or string");
}

}  // namespace

json topology_to_json(const Topology& topo) {
    json nodes = json::array();
    for (const auto& [id, role] : topo.nodes())
        nodes.push_back({{"id", id}, {"role", to_string(role)}});
    json links = json::array();
    for (const auto& [id, link] : topo.links())
        links.push_back({{"i", id.i},
                         {"j", id.j},
                         {"k", id.k},
                         {"technology", to_string(link.technology)},
                         {"capacity_mbps", link.capacity_mbps},
                         {"occupation", link.occupation},
                         {"mean_delay_ms", link.mean_delay_ms},
                         {"up", link.up}});
    return {{"nodes", nodes}, {"links", links}};
}

Topology topology_from_json(const json& j) {
    try {
        if (!j.is_object()) bad("topology: expected an object");
        require_keys(j, "topology", {"nodes", "links"});
        if (!j.contains("nodes") || !j.at("nodes").is_array() || j.at("nodes").empty())
            bad("topology: needs a non-empty \"nodes\" array");
        if (!j.contains("links") || !j.at("links").is_array())
            bad("topology: needs a \"links\" array");

        Topology topo;
        for (const json& node : j.at("nodes")) {
            require_keys(node, "node", {"id", "role"});
            const std::string role_name = node.at("role").get<std::string>();
            const auto role = node_role_from_string(role_name);
            if (!role) bad("node: unknown role \"" + role_name + "\"");
            topo.add_node(node.at("id").get<int>(), *role);
        }
        for (const json& entry : j.at("links")) {
            require_keys(entry, "link",
                         {"i", "j", "k", "technology", "capacity_mbps", "occupation",
                          "mean_delay_ms", "up"});
            Link link;
            link.id = LinkId(entry.at("i").get<int>(), entry.at("j").get<int>(),
                             entry.at("k").get<int>());
            const std::string tech_name = entry.at("technology").get<std::string>();
            const auto tech = technology_from_string(tech_name);
            if (!tech) bad("link: unknown technology \"" + tech_name + "\"");
            link.technology = *tech;
            link.capacity_mbps = entry.at("capacity_mbps").get<double>();
            link.occupation = entry.value("occupation", 0.0);
            link.mean_delay_ms = entry.at("mean_delay_ms").get<double>();
            link.up = entry.value("up", true);
            topo.add_link(link);
        }
        return topo;
    } catch (const json::exception& e) {
        bad(std::string("topology: ") + e.what());
    }
}

json scenario_to_json(const ScenarioConfig& config) {
    json failed = json::array();
    for (const LinkId& id : config.failed_links)
        failed.push_back({id.i, id.j, id.k});
    json experiment = {{"trials", config.trials},
                       {"seed", config.seed},
                       {"source", config.source},
                       {"destination", config.destination},
                       {"rate_mbps", config.qos.rate_mbps},
                       {"max_delay_ms", config.qos.max_delay_ms},
                       {"m", config.routing.m_initial},
                       {"m_step", config.routing.m_step},
                       {"min_fragment_mbps", config.routing.min_fragment_mbps},
                       {"alpha", config.occupation_params.alpha},
                       {"beta", config.occupation_params.beta},
                       {"delay_alpha", config.delay_params.alpha},
                       {"delay_beta", config.delay_params.beta},
                       {"sample_occupations", config.sample_occupations},
                       {"failed_links", failed},
                       {"m_sweep", config.m_sweep}};
    return {{"topology", topology_to_json(config.topology)},
            {"experiment", experiment}};
}

ScenarioConfig scenario_from_json(const json& j) {
    try {
        if (!j.is_object()) bad("scenario: expected an object");
        require_keys(j, "scenario", {"topology", "experiment"});

        ScenarioConfig config;
        if (!j.contains("topology") ||
            (j.at("topology").is_string() && j.at("topology") == "builtin"))
            config.topology = build_reference_topology();
        else
            config.topology = topology_from_json(j.at("topology"));

        if (!j.contains("experiment")) return config;
        const json& exp = j.at("experiment");
        if (!exp.is_object()) bad("experiment: expected an object");
        require_keys(exp, "experiment",
                     {"type", "trials", "seed", "source", "destination", "profile",
                      "rate_mbps", "max_delay_ms", "m", "m_step", "min_fragment_mbps",
                      "alpha", "beta", "delay_alpha", "delay_beta",
                      "sample_occupations", "failed_links", "m_sweep"});

        if (exp.contains("profile")) {
            const std::string name = exp.at("profile").get<std::string>();
            if (name == "p1")
                config.qos = {8.0, 30.0};
            else if (name == "p2")
                config.qos = {30.0, 50.0};
            else
                bad("experiment: unknown profile \"" + name + "\"");
        }
        config.trials = exp.value("trials", config.trials);
        config.seed = exp.value("seed", config.seed);
        config.source = exp.value("source", config.source);
        config.destination = exp.value("destination", config.destination);
        config.qos.rate_mbps = exp.value("rate_mbps", config.qos.rate_mbps);
        config.qos.max_delay_ms = exp.value("max_delay_ms", config.qos.max_delay_ms);
        config.routing.m_initial = exp.value("m", config.routing.m_initial);
        config.routing.m_step = exp.value("m_step", config.routing.m_step);
        config.routing.min_fragment_mbps =
            exp.value("min_fragment_mbps", config.routing.min_fragment_mbps);
        config.occupation_params.alpha = exp.value("alpha", config.occupation_params.alpha);
        config.occupation_params.beta = exp.value("beta", config.occupation_params.beta);
        config.delay_params.alpha = exp.value("delay_alpha", config.delay_params.alpha);
        config.delay_params.beta = exp.value("delay_beta", config.delay_params.beta);
        config.sample_occupations =
            exp.value("sample_occupations", config.sample_occupations);
        if (exp.contains("failed_links"))
            for (const json& link : exp.at("failed_links"))
                config.failed_links.push_back(link_id_from_json(link));
        if (exp.contains("m_sweep"))
            config.m_sweep = exp.at("m_sweep").get<std::vector<double>>();
        return config;
    } catch (const json::exception& e) {
        bad(std::string("scenario: ") + e.what());
    }
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("scenario file " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace backhaul
