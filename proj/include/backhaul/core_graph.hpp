#pragma once

// Multigraph model of a hybrid wired/wireless backhaul: nodes joined by one or
// more interfaces (parallel links), each with its own technology, capacity,
// occupation and mean delay. Link state is value-semantic; a Topology can be
// copied freely for what-if routing.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace backhaul {

enum class Technology { Fiber, Xdsl, Sub6GHz, MmWave, Other };
enum class NodeRole { Rrh, Bbu, Cran, Other };

std::string to_string(Technology tech);
std::string to_string(NodeRole role);
std::optional<Technology> technology_from_string(const std::string& name);
std::optional<NodeRole> node_role_from_string(const std::string& name);

// Identifies one interface between two nodes. Links are undirected, so the
// endpoint pair is kept canonical (i < j); k numbers parallel interfaces
// between the same pair, starting at 1.
struct LinkId {
    int i = 0;
    int j = 0;
    int k = 1;

    LinkId() = default;
    LinkId(int a, int b, int iface);  // canonicalizes endpoint order

    auto operator<=>(const LinkId&) const = default;

    // Compact display form: "123" while all components are single-digit,
    // "10-12-3" otherwise.
    std::string str() const;
};

struct Link {
    LinkId id;
    Technology technology = Technology::Other;
    double capacity_mbps = 0.0;
    double occupation = 0.0;  // fraction of capacity in use, in [0, 1]
    double mean_delay_ms = 0.0;
    bool up = true;
};

// Throughput/latency demand pair for one traffic class.
struct QosProfile {
    double rate_mbps = 0.0;
    double max_delay_ms = 0.0;
    bool valid() const { return rate_mbps > 0.0 && max_delay_ms > 0.0; }
};

class OverCapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownLinkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Topology {
public:
    using NodeMap = std::map<int, NodeRole>;
    using LinkMap = std::map<LinkId, Link>;

    // Throws std::invalid_argument on a non-positive node id or duplicate.
    void add_node(int id, NodeRole role);

    // Validates endpoints exist, k >= 1, capacity > 0, occupation in [0, 1],
    // delay >= 0 and the id is unused; throws std::invalid_argument otherwise.
    void add_link(Link link);

    bool has_node(int id) const { return nodes_.count(id) != 0; }
    bool has_link(const LinkId& id) const { return links_.count(id) != 0; }

    Link& link_at(const LinkId& id);              // throws UnknownLinkError
    const Link& link_at(const LinkId& id) const;  // throws UnknownLinkError

    void set_link_up(const LinkId& id, bool up);  // throws UnknownLinkError

    const NodeMap& nodes() const { return nodes_; }
    const LinkMap& links() const { return links_; }
    LinkMap& links() { return links_; }

private:
    NodeMap nodes_;
    LinkMap links_;
};

// The four-node reference network used throughout: two RRHs, a BBU and a
// C-RAN joined by nine links across fiber, xDSL, sub-6 GHz and mmWave.
Topology build_reference_topology();

// Capacity still available on a link: capacity * (1 - occupation), or 0 for a
// link that is down.
double residual_capacity(const Link& link);

// Adds rate_mbps of traffic to the link, raising its occupation. Requires the
// link to be up and rate_mbps in [0, residual]; throws OverCapacityError
// otherwise (UnknownLinkError if absent). The occupation stays clamped to
// [0, 1] against rounding.
void commit_load(Topology& topo, const LinkId& id, double rate_mbps);

// Reverse of commit_load: removes rate_mbps of traffic. Restores the prior
// occupation exactly up to one unit of floating-point rounding.
void release_load(Topology& topo, const LinkId& id, double rate_mbps);

}  // namespace backhaul
