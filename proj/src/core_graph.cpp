#include "backhaul/core_graph.hpp"

#include <algorithm>
#include <utility>

namespace backhaul {

std::string to_string(Technology tech) {
    switch (tech) {
        case Technology::Fiber: return "Fiber";
        case Technology::Xdsl: return "xDSL";
        case Technology::Sub6GHz: return "Sub6GHz";
        case Technology::MmWave: return "MmWave";
        case Technology::Other: break;
    }
    return "Other";
}

std::string to_string(NodeRole role) {
    switch (role) {
        case NodeRole::Rrh: return "RRH";
        case NodeRole::Bbu: return "BBU";
        case NodeRole::Cran: return "CRAN";
        case NodeRole::Other: break;
    }
    return "Other";
}

std::optional<Technology> technology_from_string(const std::string& name) {
    if (name == "Fiber") return Technology::Fiber;
    if (name == "xDSL") return Technology::Xdsl;
    if (name == "Sub6GHz") return Technology::Sub6GHz;
    if (name == "MmWave") return Technology::MmWave;
    if (name == "Other") return Technology::Other;
    return std::nullopt;
}

std::optional<NodeRole> node_role_from_string(const std::string& name) {
    if (name == "RRH") return NodeRole::Rrh;
    if (name == "BBU") return NodeRole::Bbu;
    if (name == "CRAN") return NodeRole::Cran;
    if (name == "Other") return NodeRole::Other;
    return std::nullopt;
}

LinkId::LinkId(int a, int b, int iface) : i(std::min(a, b)), j(std::max(a, b)), k(iface) {}

std::string LinkId::str() const {
    const bool compact = i >= 0 && i <= 9 && j >= 0 && j <= 9 && k >= 0 && k <= 9;
    if (compact) return std::to_string(i) + std::to_string(j) + std::to_string(k);
    return std::to_string(i) + "-" + std::to_string(j) + "-" + std::to_string(k);
}

void Topology::add_node(int id, NodeRole role) {
    if (id <= 0) throw std::invalid_argument("node id must be positive, got " +
                                             std::to_string(id));
    if (!nodes_.emplace(id, role).second)
        throw std::invalid_argument("duplicate node id " + std::to_string(id));
}

void Topology::add_link(Link link) {
    const LinkId& id = link.id;
    if (id.i == id.j)
        throw std::invalid_argument("link " + id.str() + " is a self-loop");
    if (!has_node(id.i) || !has_node(id.j))
        throw std::invalid_argument("link " + id.str() + " names a missing node");
    if (id.k < 1)
        throw std::invalid_argument("link " + id.str() + " has interface index < 1");
    if (!(link.capacity_mbps > 0.0))
        throw std::invalid_argument("link " + id.str() + " needs positive capacity");
    if (!(link.occupation >= 0.0 && link.occupation <= 1.0))
        throw std::invalid_argument("link " + id.str() + " occupation outside [0, 1]");
    if (!(link.mean_delay_ms >= 0.0))
        throw std::invalid_argument("link " + id.str() + " has negative mean delay");
    if (has_link(id))
        throw std::invalid_argument("duplicate link id " + id.str());
    links_.emplace(id, std::move(link));
}

Link& Topology::link_at(const LinkId& id) {
    auto it = links_.find(id);
    if (it == links_.end()) throw UnknownLinkError("no link " + id.str());
    return it->second;
}

const Link& Topology::link_at(const LinkId& id) const {
    auto it = links_.find(id);
    if (it == links_.end()) throw UnknownLinkError("no link " + id.str());
    return it->second;
}

void Topology::set_link_up(const LinkId& id, bool up) { link_at(id).up = up; }

Topology build_reference_topology() {
    Topology topo;
    topo.add_node(1, NodeRole::Rrh);
    topo.add_node(2, NodeRole::Rrh);
    topo.add_node(3, NodeRole::Bbu);
    topo.add_node(4, NodeRole::Cran);

    const auto link = [](int i, int j, int k, Technology tech, double capacity,
                         double delay) {
        Link l;
        l.id = LinkId(i, j, k);
        l.technology = tech;
        l.capacity_mbps = capacity;
        l.mean_delay_ms = delay;
        return l;
    };
    topo.add_link(link(1, 2, 1, Technology::Xdsl, 50.0, 20.0));
    topo.add_link(link(1, 2, 2, Technology::Sub6GHz, 200.0, 40.0));
    topo.add_link(link(1, 2, 3, Technology::MmWave, 1000.0, 5.0));
    topo.add_link(link(1, 3, 1, Technology::Xdsl, 50.0, 20.0));
    topo.add_link(link(2, 3, 1, Technology::Fiber, 2000.0, 5.0));
    topo.add_link(link(2, 3, 2, Technology::MmWave, 1000.0, 5.0));
    topo.add_link(link(2, 4, 1, Technology::Sub6GHz, 200.0, 40.0));
    topo.add_link(link(3, 4, 1, Technology::Sub6GHz, 200.0, 40.0));
    topo.add_link(link(3, 4, 2, Technology::Fiber, 2000.0, 5.0));
    return topo;
}

double residual_capacity(const Link& link) {
    if (!link.up) return 0.0;
    return link.capacity_mbps * (1.0 - link.occupation);
}

void commit_load(Topology& topo, const LinkId& id, double rate_mbps) {
    Link& link = topo.link_at(id);
    if (!link.up)
        throw OverCapacityError("link " + id.str() + " is down");
    if (rate_mbps < 0.0)
        throw OverCapacityError("negative load on link " + id.str());
    if (rate_mbps > residual_capacity(link))
        throw OverCapacityError("link " + id.str() + " cannot take " +
                                std::to_string(rate_mbps) + " Mbps");
    link.occupation = std::clamp(link.occupation + rate_mbps / link.capacity_mbps,
                                 0.0, 1.0);
}

void release_load(Topology& topo, const LinkId& id, double rate_mbps) {
    Link& link = topo.link_at(id);
    if (rate_mbps < 0.0)
        throw OverCapacityError("negative release on link " + id.str());
    link.occupation = std::clamp(link.occupation - rate_mbps / link.capacity_mbps,
                                 0.0, 1.0);
}

}  // namespace backhaul
