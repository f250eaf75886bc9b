#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mfgnet {

struct EdgeSpec {
    std::string id;
    std::string tail;
    std::string head;
    double length = 0.0;
    double capacity = 0.0;
};

struct NetworkSpec {
    std::vector<std::string> vertices;
    std::vector<EdgeSpec> edges;
    std::string origin;
    std::string destination;
};

struct Edge {
    std::string id;
    int tail = -1;
    int head = -1;
    double length = 0.0;
    double capacity = 0.0;
};

/// Validated acyclic multigraph with a single origin and destination.
///
/// Edges are stored sorted by id using natural ordering ("e2" < "e10"), so an
/// edge index is independent of the order in which edges were declared.
/// Immutable after construction.
class Network {
public:
    const std::vector<std::string>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    int origin() const noexcept { return origin_; }
    int destination() const noexcept { return destination_; }

    int vertex_index(const std::string& name) const;
    std::optional<int> find_edge(const std::string& id) const;
    const std::vector<int>& out_edges(int v) const { return out_edges_.at(static_cast<std::size_t>(v)); }

    /// Vertices in topological order (origin first).
    const std::vector<int>& topological_order() const noexcept { return topo_; }
    int topological_rank(int v) const { return rank_.at(static_cast<std::size_t>(v)); }

    /// Length of the shortest v -> destination route; 0 at the destination.
    double shortest_remaining_length(int v) const { return remaining_.at(static_cast<std::size_t>(v)); }

    double min_length() const;
    double min_capacity() const;

private:
    friend Network build_network(const NetworkSpec& spec);

    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_edges_;
    std::vector<int> topo_;
    std::vector<int> rank_;
    std::vector<double> remaining_;
    int origin_ = -1;
    int destination_ = -1;
};

/// Throws Error{BadEdge | CycleDetected | Unreachable | Validation}.
Network build_network(const NetworkSpec& spec);

/// One (edge, path) incidence: the edge at `position` along `path`.
struct PairRef {
    int edge = -1;
    int path = -1;
    int position = -1;
};

/// Enumerated origin-destination paths with the edge-path incidence structure.
///
/// Pairs are numbered path by path, following the edge order along each path.
class PathSet {
public:
    std::size_t path_count() const noexcept { return paths_.size(); }
    std::size_t pair_count() const noexcept { return pairs_.size(); }
    const std::vector<int>& path(int p) const { return paths_.at(static_cast<std::size_t>(p)); }
    const std::vector<std::vector<int>>& paths() const noexcept { return paths_; }
    const std::vector<PairRef>& pairs() const noexcept { return pairs_; }
    const PairRef& pair(int k) const { return pairs_.at(static_cast<std::size_t>(k)); }

    /// Pair index of the edge at `position` along path p.
    int pair_index(int p, int position) const;
    std::optional<int> find_pair(int edge, int p) const;
    /// Pairs (over all paths) that use edge e.
    const std::vector<int>& pairs_on_edge(int e) const { return edge_pairs_.at(static_cast<std::size_t>(e)); }

    bool incidence(int e, int p) const;

    std::optional<int> prec_edge(int p, int e) const;
    std::optional<int> succ_edge(int p, int e) const;
    int last_edge(int p) const;

    std::string path_label(int p) const { return "p" + std::to_string(p + 1); }

private:
    friend PathSet enumerate_paths(const Network& net, std::size_t limit);

    int position_of(int p, int e) const;

    std::vector<std::vector<int>> paths_;
    std::vector<PairRef> pairs_;
    std::vector<std::vector<int>> pair_offsets_;
    std::vector<std::vector<int>> edge_pairs_;
    std::vector<std::vector<unsigned char>> incidence_;
};

inline constexpr std::size_t kDefaultPathLimit = 10000;

/// All simple origin -> destination paths, ordered by edge count, then
/// lexicographically by edge index. Throws Error{PathLimit} above `limit`.
PathSet enumerate_paths(const Network& net, std::size_t limit = kDefaultPathLimit);

/// Natural string ordering: digit runs compare numerically.
bool natural_less(const std::string& a, const std::string& b);

}  // namespace mfgnet
