#include "contagion/network.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "contagion/errors.hpp"

namespace contagion {

Network::Network(NodeId node_count, std::vector<Tie> ties)
    : node_count_(node_count), ties_(std::move(ties)) {
    if (node_count_ < 0) throw ValidationError("network: negative node count");
    for (auto& [i, j] : ties_) {
        if (i == j) throw ValidationError("network: self-tie at node " + std::to_string(i));
        if (i < 0 || j < 0 || i >= node_count_ || j >= node_count_)
            throw ValidationError("network: tie index out of range: " + std::to_string(i) + " " +
                                  std::to_string(j));
        if (i > j) std::swap(i, j);
    }
    std::sort(ties_.begin(), ties_.end());
    auto dup = std::adjacent_find(ties_.begin(), ties_.end());
    if (dup != ties_.end())
        throw ValidationError("network: duplicate tie " + std::to_string(dup->first) + " " +
                              std::to_string(dup->second));
    adjacency_.assign(static_cast<std::size_t>(node_count_), {});
    for (const auto& [i, j] : ties_) {
        adjacency_[static_cast<std::size_t>(i)].push_back(j);
        adjacency_[static_cast<std::size_t>(j)].push_back(i);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

Network Network::complete(NodeId node_count) {
    std::vector<Tie> ties;
    ties.reserve(static_cast<std::size_t>(node_count) * (node_count - 1) / 2);
    for (NodeId i = 0; i < node_count; ++i)
        for (NodeId j = i + 1; j < node_count; ++j) ties.emplace_back(i, j);
    return Network(node_count, std::move(ties));
}

const std::vector<NodeId>& Network::contacts(NodeId i) const {
    if (i < 0 || i >= node_count_)
        throw ValidationError("network: node index out of range: " + std::to_string(i));
    return adjacency_[static_cast<std::size_t>(i)];
}

bool Network::has_tie(NodeId i, NodeId j) const {
    const auto& nbrs = contacts(i);
    return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

Zone zone_of(const Network& net, NodeId a, NodeId b, int pair_id) {
    Zone z;
    z.pair_id = pair_id;
    z.members.push_back(a);
    z.members.push_back(b);
    const auto& ca = net.contacts(a);
    const auto& cb = net.contacts(b);
    z.members.insert(z.members.end(), ca.begin(), ca.end());
    z.members.insert(z.members.end(), cb.begin(), cb.end());
    std::sort(z.members.begin(), z.members.end());
    z.members.erase(std::unique(z.members.begin(), z.members.end()), z.members.end());
    return z;
}

Network generate_family_network(int num_groups, int group_size, double out_tie_prob, Rng& rng) {
    if (num_groups <= 0 || group_size <= 0)
        throw ValidationError("generate_family_network: num_groups and group_size must be positive");
    if (out_tie_prob < 0.0 || out_tie_prob > 1.0)
        throw ValidationError("generate_family_network: out_tie_prob must be in [0,1]");

    const std::int64_t n = static_cast<std::int64_t>(num_groups) * group_size;
    std::vector<Tie> ties;
    for (int g = 0; g < num_groups; ++g) {
        const NodeId base = static_cast<NodeId>(g) * group_size;
        for (NodeId i = 0; i < group_size; ++i)
            for (NodeId j = i + 1; j < group_size; ++j) ties.emplace_back(base + i, base + j);
    }

    // Bernoulli scan over all unordered pairs; hits inside a group are
    // already tied and are skipped. Geometric gap sampling keeps this
    // O(expected tie count) instead of O(n^2).
    const std::int64_t total_pairs = n * (n - 1) / 2;
    if (out_tie_prob > 0.0) {
        const double log_q = std::log1p(-out_tie_prob);
        std::int64_t idx = -1;
        while (true) {
            if (out_tie_prob >= 1.0) {
                ++idx;
            } else {
                // gap ~ Geometric(p): number of failures before the next success
                const double u = 1.0 - rng.uniform();  // (0,1]
                const double gap = std::floor(std::log(u) / log_q);
                if (gap > static_cast<double>(total_pairs)) break;
                idx += 1 + static_cast<std::int64_t>(gap);
            }
            if (idx >= total_pairs) break;
            // Unrank pair index: idx = i*n - i*(i+1)/2 + (j - i - 1), i < j.
            const double nd = static_cast<double>(n);
            std::int64_t i = static_cast<std::int64_t>(
                std::floor(nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * static_cast<double>(idx))));
            i = std::clamp<std::int64_t>(i, 0, n - 2);
            while (i > 0 && i * n - i * (i + 1) / 2 > idx) --i;
            while ((i + 1) * n - (i + 1) * (i + 2) / 2 <= idx) ++i;
            const std::int64_t j = idx - (i * n - i * (i + 1) / 2) + i + 1;
            if (i / group_size != j / group_size)
                ties.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
        }
    }
    return Network(static_cast<NodeId>(n), std::move(ties));
}

namespace {

// Greedy selection over shuffled ties. With block_neighbors, accepted zones
// also block their neighbor sets, which enforces zone non-adjacency on top
// of disjointness: a candidate zone is admissible iff it avoids the blocked
// set entirely.
std::vector<std::pair<AlterEgoPair, Zone>> greedy_pair_selection(const Network& net, Rng& rng,
                                                                 bool block_neighbors) {
    std::vector<Tie> order = net.ties();
    rng.shuffle(order);

    std::vector<char> blocked(static_cast<std::size_t>(net.node_count()), 0);
    std::vector<std::pair<AlterEgoPair, Zone>> out;
    for (const auto& [i, j] : order) {
        Zone z = zone_of(net, i, j, static_cast<int>(out.size()));
        bool ok = true;
        for (NodeId m : z.members) {
            if (blocked[static_cast<std::size_t>(m)]) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        AlterEgoPair pair;
        pair.pair_id = z.pair_id;
        if (rng.bernoulli(0.5)) {
            pair.alter = i;
            pair.ego = j;
        } else {
            pair.alter = j;
            pair.ego = i;
        }
        for (NodeId m : z.members) {
            blocked[static_cast<std::size_t>(m)] = 1;
            if (block_neighbors)
                for (NodeId nb : net.contacts(m)) blocked[static_cast<std::size_t>(nb)] = 1;
        }
        out.emplace_back(pair, std::move(z));
    }
    return out;
}

}  // namespace

std::vector<std::pair<AlterEgoPair, Zone>> extract_independent_pairs(const Network& net, Rng& rng) {
    return greedy_pair_selection(net, rng, /*block_neighbors=*/true);
}

std::vector<std::pair<AlterEgoPair, Zone>> extract_disjoint_pairs(const Network& net, Rng& rng) {
    return greedy_pair_selection(net, rng, /*block_neighbors=*/false);
}

bool zones_disjoint_and_nonadjacent(const Network& net, const Zone& a, const Zone& b) {
    std::vector<char> in_b(static_cast<std::size_t>(net.node_count()), 0);
    for (NodeId m : b.members) in_b[static_cast<std::size_t>(m)] = 1;
    for (NodeId m : a.members) {
        if (in_b[static_cast<std::size_t>(m)]) return false;
        for (NodeId nb : net.contacts(m))
            if (in_b[static_cast<std::size_t>(nb)]) return false;
    }
    return true;
}

int pair_distance(const Network& net, const AlterEgoPair& a, const AlterEgoPair& b, int cap) {
    std::vector<int> dist(static_cast<std::size_t>(net.node_count()), -1);
    std::deque<NodeId> frontier;
    for (NodeId s : {a.alter, a.ego}) {
        dist[static_cast<std::size_t>(s)] = 0;
        frontier.push_back(s);
    }
    while (!frontier.empty()) {
        NodeId u = frontier.front();
        frontier.pop_front();
        int du = dist[static_cast<std::size_t>(u)];
        if (u == b.alter || u == b.ego) return du;
        if (du >= cap) continue;
        for (NodeId v : net.contacts(u)) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = du + 1;
                frontier.push_back(v);
            }
        }
    }
    int db_a = dist[static_cast<std::size_t>(b.alter)];
    int db_e = dist[static_cast<std::size_t>(b.ego)];
    int best = cap;
    if (db_a >= 0) best = std::min(best, db_a);
    if (db_e >= 0) best = std::min(best, db_e);
    return best;
}

bool selection_is_maximal(const Network& net,
                          const std::vector<std::pair<AlterEgoPair, Zone>>& selection) {
    std::vector<char> blocked(static_cast<std::size_t>(net.node_count()), 0);
    for (const auto& [pair, zone] : selection) {
        (void)pair;
        for (NodeId m : zone.members) {
            blocked[static_cast<std::size_t>(m)] = 1;
            for (NodeId nb : net.contacts(m)) blocked[static_cast<std::size_t>(nb)] = 1;
        }
    }
    for (const auto& [i, j] : net.ties()) {
        Zone z = zone_of(net, i, j);
        bool conflicts = false;
        for (NodeId m : z.members) {
            if (blocked[static_cast<std::size_t>(m)]) {
                conflicts = true;
                break;
            }
        }
        if (!conflicts) return false;
    }
    return true;
}

Network load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path);
    std::string line;
    long line_no = 0;
    NodeId node_count = -1;
    std::vector<Tie> ties;
    auto fail = [&](const std::string& what) {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        if (node_count < 0) {
            long long n = -1;
            if (!(ss >> n) || n < 0) fail("expected node count");
            std::string rest;
            if (ss >> rest) fail("trailing content after node count");
            node_count = static_cast<NodeId>(n);
            continue;
        }
        long long i = -1, j = -1;
        if (!(ss >> i >> j)) fail("expected tie line \"i j\"");
        std::string rest;
        if (ss >> rest) fail("trailing content after tie");
        if (i == j) fail("self-tie forbidden");
        if (i < 0 || j < 0 || i >= node_count || j >= node_count) fail("node index out of range");
        ties.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
    if (node_count < 0) throw ValidationError(path + ": missing node-count header");
    try {
        return Network(node_count, std::move(ties));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void save_edge_list(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write edge list: " + path);
    out << net.node_count() << "\n";
    for (const auto& [i, j] : net.ties()) out << i << " " << j << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace contagion
