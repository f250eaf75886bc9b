#include "mfgnet/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "mfgnet/errors.hpp"

namespace mfgnet {

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    while (i < a.size() && j < b.size()) {
        if (is_digit(a[i]) && is_digit(b[j])) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && is_digit(a[ie])) ++ie;
            while (je < b.size() && is_digit(b[je])) ++je;
            // strip leading zeros before comparing magnitudes
            std::size_t is = i;
            std::size_t js = j;
            while (is + 1 < ie && a[is] == '0') ++is;
            while (js + 1 < je && b[js] == '0') ++js;
            if (ie - is != je - js) return ie - is < je - js;
            const int cmp = a.compare(is, ie - is, b, js, je - js);
            if (cmp != 0) return cmp < 0;
            if (ie - i != je - j) return ie - i < je - j;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

int Network::vertex_index(const std::string& name) const {
    auto it = std::find(vertices_.begin(), vertices_.end(), name);
    if (it == vertices_.end()) throw Error(ErrorCode::Validation, "unknown vertex '" + name + "'");
    return static_cast<int>(it - vertices_.begin());
}

std::optional<int> Network::find_edge(const std::string& id) const {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].id == id) return static_cast<int>(e);
    }
    return std::nullopt;
}

double Network::min_length() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : edges_) m = std::min(m, e.length);
    return m;
}

double Network::min_capacity() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : edges_) m = std::min(m, e.capacity);
    return m;
}

Network build_network(const NetworkSpec& spec) {
    Network net;
    std::map<std::string, int> index;
    for (const auto& v : spec.vertices) {
        if (!index.emplace(v, static_cast<int>(net.vertices_.size())).second) {
            throw Error(ErrorCode::Validation, "duplicate vertex '" + v + "'");
        }
        net.vertices_.push_back(v);
    }
    auto lookup = [&](const std::string& name, const std::string& what) {
        auto it = index.find(name);
        if (it == index.end()) {
            throw Error(ErrorCode::BadEdge, what + " references undeclared vertex '" + name + "'");
        }
        return it->second;
    };
    if (index.find(spec.origin) == index.end()) {
        throw Error(ErrorCode::Validation, "origin '" + spec.origin + "' is not a declared vertex");
    }
    if (index.find(spec.destination) == index.end()) {
        throw Error(ErrorCode::Validation, "destination '" + spec.destination + "' is not a declared vertex");
    }
    net.origin_ = index.at(spec.origin);
    net.destination_ = index.at(spec.destination);
    if (net.origin_ == net.destination_) {
        throw Error(ErrorCode::Validation, "origin and destination coincide");
    }

    std::set<std::string> ids;
    for (const auto& es : spec.edges) {
        if (es.id.empty()) throw Error(ErrorCode::BadEdge, "edge with empty id");
        if (!ids.insert(es.id).second) throw Error(ErrorCode::BadEdge, "duplicate edge id '" + es.id + "'");
        Edge e;
        e.id = es.id;
        e.tail = lookup(es.tail, "edge '" + es.id + "'");
        e.head = lookup(es.head, "edge '" + es.id + "'");
        e.length = es.length;
        e.capacity = es.capacity;
        if (e.tail == e.head) throw Error(ErrorCode::BadEdge, "edge '" + es.id + "' is a self-loop");
        if (!(std::isfinite(e.length) && e.length > 0.0)) {
            throw Error(ErrorCode::BadEdge, "edge '" + es.id + "' has non-positive length");
        }
        if (!(std::isfinite(e.capacity) && e.capacity > 0.0)) {
            throw Error(ErrorCode::BadEdge, "edge '" + es.id + "' has non-positive capacity");
        }
        net.edges_.push_back(std::move(e));
    }
    if (net.edges_.empty()) throw Error(ErrorCode::Unreachable, "network has no edges");
    std::sort(net.edges_.begin(), net.edges_.end(),
              [](const Edge& a, const Edge& b) { return natural_less(a.id, b.id); });

    const std::size_t nv = net.vertices_.size();
    net.out_edges_.assign(nv, {});
    std::vector<std::vector<int>> in_edges(nv);
    std::vector<int> indegree(nv, 0);
    for (std::size_t e = 0; e < net.edges_.size(); ++e) {
        const auto& edge = net.edges_[e];
        net.out_edges_[static_cast<std::size_t>(edge.tail)].push_back(static_cast<int>(e));
        in_edges[static_cast<std::size_t>(edge.head)].push_back(static_cast<int>(e));
        ++indegree[static_cast<std::size_t>(edge.head)];
    }

    // Kahn; the min-heap keeps the order deterministic.
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (std::size_t v = 0; v < nv; ++v) {
        if (indegree[v] == 0) ready.push(static_cast<int>(v));
    }
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        net.topo_.push_back(v);
        for (int e : net.out_edges_[static_cast<std::size_t>(v)]) {
            const auto h = static_cast<std::size_t>(net.edges_[static_cast<std::size_t>(e)].head);
            if (--indegree[h] == 0) ready.push(static_cast<int>(h));
        }
    }
    if (net.topo_.size() != nv) throw Error(ErrorCode::CycleDetected, "network contains a directed cycle");
    net.rank_.assign(nv, 0);
    for (std::size_t r = 0; r < nv; ++r) net.rank_[static_cast<std::size_t>(net.topo_[r])] = static_cast<int>(r);

    std::vector<bool> from_origin(nv, false);
    std::vector<bool> to_destination(nv, false);
    from_origin[static_cast<std::size_t>(net.origin_)] = true;
    for (int v : net.topo_) {
        if (!from_origin[static_cast<std::size_t>(v)]) continue;
        for (int e : net.out_edges_[static_cast<std::size_t>(v)]) {
            from_origin[static_cast<std::size_t>(net.edges_[static_cast<std::size_t>(e)].head)] = true;
        }
    }
    to_destination[static_cast<std::size_t>(net.destination_)] = true;
    for (auto it = net.topo_.rbegin(); it != net.topo_.rend(); ++it) {
        if (!to_destination[static_cast<std::size_t>(*it)]) continue;
        for (int e : in_edges[static_cast<std::size_t>(*it)]) {
            to_destination[static_cast<std::size_t>(net.edges_[static_cast<std::size_t>(e)].tail)] = true;
        }
    }
    for (std::size_t v = 0; v < nv; ++v) {
        if (!from_origin[v]) {
            throw Error(ErrorCode::Unreachable, "vertex '" + net.vertices_[v] + "' is not reachable from the origin");
        }
        if (!to_destination[v]) {
            throw Error(ErrorCode::Unreachable, "destination is not reachable from vertex '" + net.vertices_[v] + "'");
        }
    }

    // Relaxation in reverse topological order.
    net.remaining_.assign(nv, std::numeric_limits<double>::infinity());
    net.remaining_[static_cast<std::size_t>(net.destination_)] = 0.0;
    for (auto it = net.topo_.rbegin(); it != net.topo_.rend(); ++it) {
        const auto v = static_cast<std::size_t>(*it);
        for (int e : net.out_edges_[v]) {
            const auto& edge = net.edges_[static_cast<std::size_t>(e)];
            net.remaining_[v] = std::min(net.remaining_[v], edge.length + net.remaining_[static_cast<std::size_t>(edge.head)]);
        }
    }
    return net;
}

int PathSet::pair_index(int p, int position) const {
    return pair_offsets_.at(static_cast<std::size_t>(p)).at(static_cast<std::size_t>(position));
}

std::optional<int> PathSet::find_pair(int edge, int p) const {
    const auto& path = paths_.at(static_cast<std::size_t>(p));
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (path[k] == edge) return pair_offsets_[static_cast<std::size_t>(p)][k];
    }
    return std::nullopt;
}

bool PathSet::incidence(int e, int p) const {
    return incidence_.at(static_cast<std::size_t>(e)).at(static_cast<std::size_t>(p)) != 0;
}

int PathSet::position_of(int p, int e) const {
    const auto& path = paths_.at(static_cast<std::size_t>(p));
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (path[k] == e) return static_cast<int>(k);
    }
    throw Error(ErrorCode::EdgeNotOnPath,
                "edge index " + std::to_string(e) + " is not on path " + path_label(p));
}

std::optional<int> PathSet::prec_edge(int p, int e) const {
    const int k = position_of(p, e);
    if (k == 0) return std::nullopt;
    return paths_[static_cast<std::size_t>(p)][static_cast<std::size_t>(k - 1)];
}

std::optional<int> PathSet::succ_edge(int p, int e) const {
    const int k = position_of(p, e);
    const auto& path = paths_[static_cast<std::size_t>(p)];
    if (static_cast<std::size_t>(k) + 1 == path.size()) return std::nullopt;
    return path[static_cast<std::size_t>(k + 1)];
}

int PathSet::last_edge(int p) const { return paths_.at(static_cast<std::size_t>(p)).back(); }

PathSet enumerate_paths(const Network& net, std::size_t limit) {
    PathSet set;
    std::vector<int> stack;
    std::vector<bool> visited(net.vertex_count(), false);

    auto dfs = [&](auto&& self, int v) -> void {
        if (v == net.destination()) {
            if (set.paths_.size() >= limit) {
                throw Error(ErrorCode::PathLimit,
                            "more than " + std::to_string(limit) + " origin-destination paths");
            }
            set.paths_.push_back(stack);
            return;
        }
        visited[static_cast<std::size_t>(v)] = true;
        for (int e : net.out_edges(v)) {
            const int h = net.edge(e).head;
            if (visited[static_cast<std::size_t>(h)]) continue;
            stack.push_back(e);
            self(self, h);
            stack.pop_back();
        }
        visited[static_cast<std::size_t>(v)] = false;
    };
    dfs(dfs, net.origin());

    std::sort(set.paths_.begin(), set.paths_.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });

    set.edge_pairs_.assign(net.edge_count(), {});
    set.incidence_.assign(net.edge_count(), std::vector<unsigned char>(set.paths_.size(), 0));
    for (std::size_t p = 0; p < set.paths_.size(); ++p) {
        std::vector<int> offsets;
        for (std::size_t k = 0; k < set.paths_[p].size(); ++k) {
            const int e = set.paths_[p][k];
            offsets.push_back(static_cast<int>(set.pairs_.size()));
            set.edge_pairs_[static_cast<std::size_t>(e)].push_back(static_cast<int>(set.pairs_.size()));
            set.incidence_[static_cast<std::size_t>(e)][p] = 1;
            set.pairs_.push_back(PairRef{e, static_cast<int>(p), static_cast<int>(k)});
        }
        set.pair_offsets_.push_back(std::move(offsets));
    }
    return set;
}

}  // namespace mfgnet
