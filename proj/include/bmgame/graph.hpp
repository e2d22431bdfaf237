#pragma once

#include "bmgame/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bmg {

using Vertex = std::int32_t;

/// A finite path written out vertex by vertex (the start vertex included).
using Path = std::vector<Vertex>;
using PathView = std::span<const Vertex>;
using Edge = std::pair<Vertex, Vertex>;

enum class Player { One, Zero };

inline Player opponent(Player p) { return p == Player::One ? Player::Zero : Player::One; }
const char* to_string(Player p);

/// Finite directed graph in which every vertex has a successor.
/// Vertex order is the order given at construction and drives every enumeration.
class FiniteGraph {
public:
    FiniteGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

    /// Complete graph (self-loops included) on the given vertices.
    static FiniteGraph complete(std::vector<Vertex> vertices);
    /// Complete graph on {0, ..., n-1}.
    static FiniteGraph complete(std::size_t n);

    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    /// Edges sorted by (source index, target index).
    std::vector<Edge> edges() const;
    std::size_t edge_count() const noexcept { return edge_count_; }

    bool contains(Vertex v) const { return index_.count(v) != 0; }
    std::size_t index_of(Vertex v) const;
    Vertex vertex_at(std::size_t i) const { return vertices_[i]; }

    bool has_edge(Vertex from, Vertex to) const;
    std::span<const Vertex> successors(Vertex v) const { return succ_[index_of(v)]; }
    std::span<const std::size_t> successor_indices(std::size_t i) const { return succ_idx_[i]; }

    /// True iff consecutive vertices are joined by edges (a single vertex is a path).
    bool is_path(PathView path) const;

    friend bool operator==(const FiniteGraph& a, const FiniteGraph& b)
    {
        return a.vertices_ == b.vertices_ && a.adjacency_ == b.adjacency_;
    }

private:
    std::vector<Vertex> vertices_;
    std::unordered_map<Vertex, std::size_t> index_;
    std::vector<char> adjacency_;
    std::vector<std::vector<Vertex>> succ_;
    std::vector<std::vector<std::size_t>> succ_idx_;
    std::size_t edge_count_ = 0;
};

/// A move: a non-empty finite path leaving `anchor`. The anchor is not repeated in `steps`.
struct Continuation {
    Vertex anchor = 0;
    std::vector<Vertex> steps;

    Continuation() = default;
    Continuation(Vertex a, std::vector<Vertex> s) : anchor(a), steps(std::move(s)) {}

    std::size_t length() const noexcept { return steps.size(); }
    Vertex last() const { return steps.empty() ? anchor : steps.back(); }

    friend bool operator==(const Continuation&, const Continuation&) = default;
    friend auto operator<=>(const Continuation&, const Continuation&) = default;
};

/// Throws EdgeViolation / InvalidArgument unless `c` is a valid move of `g`.
void check_continuation(const FiniteGraph& g, const Continuation& c);

struct MoveBoundary {
    std::size_t begin = 0; ///< index (into the vertex sequence) of the move's first step
    Player player = Player::One;

    friend bool operator==(const MoveBoundary&, const MoveBoundary&) = default;
};

/// A finite prefix of a play: the start vertex, the vertices appended so far, and the
/// boundaries of the moves that produced them (Pl.1 first, then alternating).
class PlayPrefix {
public:
    explicit PlayPrefix(Vertex start) : vertices_{start} {}

    /// A bare prefix without move structure (used for cylinders and measures).
    static PlayPrefix from_path(Path path);

    Vertex start() const { return vertices_.front(); }
    Vertex last() const { return vertices_.back(); }
    PathView path() const noexcept { return vertices_; }
    std::span<const Vertex> steps() const { return PathView(vertices_).subspan(1); }
    /// Number of vertices, the start vertex included (position of last()).
    std::size_t length() const noexcept { return vertices_.size(); }
    std::size_t step_count() const noexcept { return vertices_.size() - 1; }

    const std::vector<MoveBoundary>& moves() const noexcept { return moves_; }
    std::size_t move_count() const noexcept { return moves_.size(); }
    /// The i-th move as a continuation anchored at the vertex preceding it.
    Continuation move(std::size_t i) const;
    /// The player who moves next (Pl.1 on an empty prefix).
    Player next_player() const;
    /// Number of completed moves by `p`.
    std::size_t moves_by(Player p) const;

    /// Appends `c` as the next move. Throws AnchorMismatch when c.anchor != last().
    void append(const Continuation& c);

    /// The prefix made of the first `move_count` moves.
    PlayPrefix truncated(std::size_t move_count) const;

    friend bool operator==(const PlayPrefix&, const PlayPrefix&) = default;

private:
    Path vertices_;
    std::vector<MoveBoundary> moves_;
};

/// Functional form of PlayPrefix::append.
PlayPrefix concat(PlayPrefix p, const Continuation& c);

/// Continuations of exactly `length` steps leaving `v`, in lexicographic vertex order.
std::vector<Continuation> enumerate_continuations(const FiniteGraph& g, Vertex v, std::size_t length);

/// The steps of `c` read backwards, re-anchored at `new_anchor`. Throws EdgeViolation.
Continuation reverse(const FiniteGraph& g, const Continuation& c, Vertex new_anchor);

bool is_prefix(PathView prefix, PathView path);

/// Extends `base` by the steps of `c` (no edge check).
Path extend(PathView base, const Continuation& c);

/// Ultrametric distance 2^-k between two plays observed through finite prefixes, k the
/// first (0-based) position where they differ. When the prefixes agree on their common
/// length the true distance is only bounded by 2^-common and `lower_bound_only` is set.
struct Distance {
    std::optional<std::size_t> first_mismatch;
    std::size_t common_length = 0;

    bool lower_bound_only() const { return !first_mismatch.has_value(); }
    /// 2^-k, or 0 in the lower-bound-only case.
    Rational value() const;
};

Distance path_distance(PathView a, PathView b);

/// Set of finite paths none of which is a prefix of another: a canonical finite union of
/// cylinders. Inserting a covered path is a no-op; inserting a covering path evicts the
/// paths it covers.
class PrefixFreeSet {
public:
    using const_iterator = std::set<Path>::const_iterator;

    PrefixFreeSet() = default;

    /// Returns true when the set changed.
    bool insert(Path path);
    /// True iff some element is a prefix of `path` (Cyl(path) lies inside the union).
    bool covers(PathView path) const;
    /// True iff the union meets Cyl(path).
    bool meets(PathView path) const;

    /// Elements of the union restricted to Cyl(given): {given} if covered, else the
    /// elements extending `given`.
    PrefixFreeSet restricted_to(PathView given) const;

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    const_iterator begin() const { return items_.begin(); }
    const_iterator end() const { return items_.end(); }

    /// Pairwise check, for tests.
    bool is_prefix_free() const;

    friend bool operator==(const PrefixFreeSet&, const PrefixFreeSet&) = default;

private:
    std::set<Path> items_;
};

std::string format_path(PathView path);

} // namespace bmg
