#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "contagion/rng.hpp"

namespace contagion {

using NodeId = std::int32_t;
using Tie = std::pair<NodeId, NodeId>;

// Undirected simple graph over dense node indices 0..n-1. Ties are stored
// once in canonical (i < j) order. Immutable after construction, so
// concurrent reads are safe.
class Network {
public:
    Network(NodeId node_count, std::vector<Tie> ties);

    static Network complete(NodeId node_count);

    NodeId node_count() const { return node_count_; }
    std::size_t tie_count() const { return ties_.size(); }
    const std::vector<Tie>& ties() const { return ties_; }

    // Neighbors of i, sorted ascending.
    const std::vector<NodeId>& contacts(NodeId i) const;

    bool has_tie(NodeId i, NodeId j) const;

    bool operator==(const Network& other) const {
        return node_count_ == other.node_count_ && ties_ == other.ties_;
    }

private:
    NodeId node_count_ = 0;
    std::vector<Tie> ties_;
    std::vector<std::vector<NodeId>> adjacency_;
};

struct AlterEgoPair {
    NodeId alter = -1;
    NodeId ego = -1;
    int pair_id = -1;
};

// A pair plus every contact of either member.
struct Zone {
    int pair_id = -1;
    std::vector<NodeId> members;  // sorted ascending
};

Zone zone_of(const Network& net, NodeId a, NodeId b, int pair_id = -1);

// num_groups fully connected blocks of group_size nodes each; every
// out-of-group unordered pair is tied independently with out_tie_prob.
Network generate_family_network(int num_groups, int group_size, double out_tie_prob, Rng& rng);

// Randomized greedy maximal selection of tied pairs whose zones are pairwise
// disjoint and non-adjacent (equivalently, pair members at graph distance
// >= 4 from every other selected pair). Alter/ego roles by fair coin.
std::vector<std::pair<AlterEgoPair, Zone>> extract_independent_pairs(const Network& net, Rng& rng);

// Same greedy selection under the weaker requirement that zones are merely
// pairwise disjoint (pair members at distance >= 3). Packs roughly twice as
// many pairs on sparse family networks.
std::vector<std::pair<AlterEgoPair, Zone>> extract_disjoint_pairs(const Network& net, Rng& rng);

// Checker utilities (also used by tests and diagnostics).
bool zones_disjoint_and_nonadjacent(const Network& net, const Zone& a, const Zone& b);
// Shortest graph distance between {a.alter, a.ego} and {b.alter, b.ego},
// capped at `cap` (returns cap if no shorter path exists).
int pair_distance(const Network& net, const AlterEgoPair& a, const AlterEgoPair& b, int cap);
// True if every tie not covered by the selection conflicts with some
// selected zone.
bool selection_is_maximal(const Network& net, const std::vector<std::pair<AlterEgoPair, Zone>>& selection);

// Edge-list text format: first line is the node count, then one "i j" line
// per tie with i < j. Lines starting with '#' are comments.
Network load_edge_list(const std::string& path);
void save_edge_list(const Network& net, const std::string& path);

}  // namespace contagion
