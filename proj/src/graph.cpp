#include "bmgame/graph.hpp"

#include "bmgame/error.hpp"

#include <algorithm>
#include <sstream>

namespace bmg {

const char* to_string(Player p)
{
    return p == Player::One ? "pl1" : "pl0";
}

FiniteGraph::FiniteGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices))
{
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (!index_.emplace(vertices_[i], i).second) {
            throw Error(ErrorKind::DuplicateVertex, "vertex " + std::to_string(vertices_[i]) + " listed twice");
        }
    }
    const std::size_t n = vertices_.size();
    adjacency_.assign(n * n, 0);
    for (const auto& [a, b] : edges) {
        auto ia = index_.find(a);
        auto ib = index_.find(b);
        if (ia == index_.end() || ib == index_.end()) {
            throw Error(ErrorKind::DanglingEdge,
                        "edge (" + std::to_string(a) + "," + std::to_string(b) + ") references an unknown vertex");
        }
        adjacency_[ia->second * n + ib->second] = 1;
    }
    succ_.resize(n);
    succ_idx_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (adjacency_[i * n + j]) {
                succ_[i].push_back(vertices_[j]);
                succ_idx_[i].push_back(j);
                ++edge_count_;
            }
        }
        if (succ_[i].empty()) {
            throw Error(ErrorKind::SinkVertex, "vertex " + std::to_string(vertices_[i]) + " has no successor");
        }
    }
}

FiniteGraph FiniteGraph::complete(std::vector<Vertex> vertices)
{
    std::vector<Edge> edges;
    for (Vertex a : vertices)
        for (Vertex b : vertices) edges.emplace_back(a, b);
    return FiniteGraph(std::move(vertices), std::move(edges));
}

FiniteGraph FiniteGraph::complete(std::size_t n)
{
    std::vector<Vertex> vs(n);
    for (std::size_t i = 0; i < n; ++i) vs[i] = static_cast<Vertex>(i);
    return complete(std::move(vs));
}

std::vector<Edge> FiniteGraph::edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        for (Vertex w : succ_[i]) out.emplace_back(vertices_[i], w);
    return out;
}

std::size_t FiniteGraph::index_of(Vertex v) const
{
    auto it = index_.find(v);
    if (it == index_.end()) throw Error(ErrorKind::UnknownVertex, "vertex " + std::to_string(v));
    return it->second;
}

bool FiniteGraph::has_edge(Vertex from, Vertex to) const
{
    auto ia = index_.find(from);
    auto ib = index_.find(to);
    if (ia == index_.end() || ib == index_.end()) return false;
    return adjacency_[ia->second * vertices_.size() + ib->second] != 0;
}

bool FiniteGraph::is_path(PathView path) const
{
    if (path.empty() || !contains(path[0])) return false;
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (!has_edge(path[i - 1], path[i])) return false;
    }
    return true;
}

void check_continuation(const FiniteGraph& g, const Continuation& c)
{
    if (c.steps.empty()) throw Error(ErrorKind::InvalidArgument, "a move must have at least one step");
    Vertex prev = c.anchor;
    for (Vertex v : c.steps) {
        if (!g.has_edge(prev, v)) {
            throw Error(ErrorKind::EdgeViolation,
                        "no edge (" + std::to_string(prev) + "," + std::to_string(v) + ")");
        }
        prev = v;
    }
}

PlayPrefix PlayPrefix::from_path(Path path)
{
    if (path.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
    PlayPrefix p(path[0]);
    p.vertices_ = std::move(path);
    return p;
}

Continuation PlayPrefix::move(std::size_t i) const
{
    const std::size_t begin = moves_.at(i).begin;
    const std::size_t end = i + 1 < moves_.size() ? moves_[i + 1].begin : vertices_.size();
    return Continuation(vertices_[begin - 1],
                        std::vector<Vertex>(vertices_.begin() + static_cast<std::ptrdiff_t>(begin),
                                            vertices_.begin() + static_cast<std::ptrdiff_t>(end)));
}

Player PlayPrefix::next_player() const
{
    if (moves_.empty()) return Player::One;
    return opponent(moves_.back().player);
}

std::size_t PlayPrefix::moves_by(Player p) const
{
    return static_cast<std::size_t>(
        std::count_if(moves_.begin(), moves_.end(), [p](const MoveBoundary& m) { return m.player == p; }));
}

void PlayPrefix::append(const Continuation& c)
{
    if (c.anchor != last()) {
        throw Error(ErrorKind::AnchorMismatch,
                    "continuation anchored at " + std::to_string(c.anchor) + " but prefix ends at " +
                        std::to_string(last()));
    }
    if (c.steps.empty()) throw Error(ErrorKind::InvalidArgument, "a move must have at least one step");
    moves_.push_back({vertices_.size(), next_player()});
    vertices_.insert(vertices_.end(), c.steps.begin(), c.steps.end());
}

PlayPrefix PlayPrefix::truncated(std::size_t move_count) const
{
    if (move_count >= moves_.size()) return *this;
    PlayPrefix p(*this);
    p.vertices_.resize(moves_[move_count].begin);
    p.moves_.resize(move_count);
    return p;
}

PlayPrefix concat(PlayPrefix p, const Continuation& c)
{
    p.append(c);
    return p;
}

std::vector<Continuation> enumerate_continuations(const FiniteGraph& g, Vertex v, std::size_t length)
{
    std::vector<Continuation> out;
    if (length == 0) return out;
    std::vector<Vertex> steps;
    steps.reserve(length);
    // Depth-first in successor order yields lexicographic order.
    auto rec = [&](auto&& self, Vertex at) -> void {
        if (steps.size() == length) {
            out.emplace_back(v, steps);
            return;
        }
        for (Vertex w : g.successors(at)) {
            steps.push_back(w);
            self(self, w);
            steps.pop_back();
        }
    };
    rec(rec, v);
    return out;
}

Continuation reverse(const FiniteGraph& g, const Continuation& c, Vertex new_anchor)
{
    Continuation r(new_anchor, std::vector<Vertex>(c.steps.rbegin(), c.steps.rend()));
    check_continuation(g, r);
    return r;
}

bool is_prefix(PathView prefix, PathView path)
{
    return prefix.size() <= path.size() && std::equal(prefix.begin(), prefix.end(), path.begin());
}

Path extend(PathView base, const Continuation& c)
{
    Path out(base.begin(), base.end());
    out.insert(out.end(), c.steps.begin(), c.steps.end());
    return out;
}

Rational Distance::value() const
{
    if (!first_mismatch) return Rational(0);
    return dyadic(static_cast<unsigned>(*first_mismatch));
}

Distance path_distance(PathView a, PathView b)
{
    Distance d;
    d.common_length = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < d.common_length; ++i) {
        if (a[i] != b[i]) {
            d.first_mismatch = i;
            break;
        }
    }
    return d;
}

bool PrefixFreeSet::covers(PathView path) const
{
    // Only prefixes of `path` can cover it; probe each length.
    Path probe;
    probe.reserve(path.size());
    for (Vertex v : path) {
        probe.push_back(v);
        if (items_.count(probe)) return true;
    }
    return false;
}

bool PrefixFreeSet::meets(PathView path) const
{
    if (covers(path)) return true;
    auto it = items_.lower_bound(Path(path.begin(), path.end()));
    return it != items_.end() && is_prefix(path, *it);
}

bool PrefixFreeSet::insert(Path path)
{
    if (path.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
    if (covers(path)) return false;
    // Elements extending `path` are contiguous from lower_bound(path).
    auto it = items_.lower_bound(path);
    while (it != items_.end() && is_prefix(path, *it)) it = items_.erase(it);
    items_.insert(std::move(path));
    return true;
}

PrefixFreeSet PrefixFreeSet::restricted_to(PathView given) const
{
    PrefixFreeSet out;
    if (covers(given)) {
        out.items_.emplace(given.begin(), given.end());
        return out;
    }
    for (auto it = items_.lower_bound(Path(given.begin(), given.end())); it != items_.end() && is_prefix(given, *it);
         ++it) {
        out.items_.insert(*it);
    }
    return out;
}

bool PrefixFreeSet::is_prefix_free() const
{
    for (const auto& a : items_)
        for (const auto& b : items_)
            if (&a != &b && is_prefix(a, b)) return false;
    return true;
}

std::string format_path(PathView path)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i == 1) os << '.';
        else if (i > 1) os << ' ';
        os << path[i];
    }
    return os.str();
}

} // namespace bmg
