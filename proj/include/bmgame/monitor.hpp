#pragma once

#include "bmgame/graph.hpp"
#include "bmgame/measure.hpp"
#include "bmgame/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bmg {

using MonitorState = std::vector<std::int64_t>;

enum class MonitorStatus {
    Open,     ///< neither certified
    Covered,  ///< every extension lies in the set
    Excluded, ///< no extension lies in the set
};

/// Deterministic automaton reading a path vertex by vertex and certifying, for an open set
/// U, whether the cylinder of the prefix read so far lies inside U (Covered) or misses it
/// (Excluded). Both verdicts must be absorbing. The state space may be infinite; only the
/// states actually reached are ever materialized.
class PrefixMonitor {
public:
    virtual ~PrefixMonitor() = default;

    /// State after reading the start vertex.
    virtual MonitorState initial(Vertex start) const = 0;
    virtual MonitorState step(const MonitorState& state, Vertex next) const = 0;
    virtual MonitorStatus status(const MonitorState& state) const = 0;

    MonitorState run(PathView path) const;
    MonitorStatus status_of(PathView path) const { return status(run(path)); }
};

/// A cylinder generalized position-wise: position i (0 = start vertex) admits any vertex in
/// allowed[i]. A plain cylinder has singleton sets. Stands for the finite union of the
/// cylinders it matches.
struct CylinderPattern {
    std::vector<std::vector<Vertex>> allowed;

    static CylinderPattern cylinder(PathView path);

    std::size_t length() const noexcept { return allowed.size(); }
    bool is_plain() const;
    /// The plain cylinder's path (is_plain() required).
    Path as_path() const;
    bool admits(std::size_t position, Vertex v) const;
    /// Every extension of `path` matches.
    bool covers(PathView path) const;
    /// Some extension of `path` matches.
    bool compatible(PathView path) const;

    friend bool operator==(const CylinderPattern&, const CylinderPattern&) = default;
};

/// Monitor for a finite union of patterns: tracks which patterns are still compatible.
/// Covered is reported once one pattern has matched, which can lag behind the exact answer
/// when several patterns only cover a cylinder together (Excluded is exact).
class PatternUnionMonitor final : public PrefixMonitor {
public:
    explicit PatternUnionMonitor(std::vector<CylinderPattern> patterns);

    MonitorState initial(Vertex start) const override;
    MonitorState step(const MonitorState& state, Vertex next) const override;
    MonitorStatus status(const MonitorState& state) const override;

private:
    MonitorState advance(MonitorState state, std::size_t position, Vertex v) const;

    std::vector<CylinderPattern> patterns_;
    std::size_t words_ = 1;
};

/// Mass accounting of the extensions of a base prefix, step by step.
struct CoverProfile {
    /// first_hit[d]: conditional mass of extensions first covered after exactly d steps
    /// (d = 0 means the base itself is covered).
    std::vector<Rational> first_hit;
    /// Number of distinct minimal covered continuations per depth.
    std::vector<BigInt> first_hit_count;
    Rational covered{0};  ///< sum of first_hit
    Rational excluded{0}; ///< mass certified outside within the explored depth
    std::size_t depth = 0; ///< steps explored
    std::size_t peak_states = 0;

    Rational open() const { return Rational(1) - covered - excluded; }
};

/// Exact forward dynamic programme over (vertex, monitor state) from `base`. Stops after
/// `max_steps` steps, or as soon as covered mass reaches `stop_at` when given.
CoverProfile cover_profile(const ReasonableMeasure& m, const PrefixMonitor& mon, PathView base,
                           std::size_t max_steps, std::optional<Rational> stop_at = std::nullopt);

/// Minimal continuations c of `base` with 1 <= |c| <= max_steps whose cylinder base.c is
/// covered (and no shorter prefix of c is), in length-then-lexicographic order, at most `cap`.
std::vector<Continuation> enumerate_cover(const FiniteGraph& g, const PrefixMonitor& mon, PathView base,
                                          std::size_t max_steps, std::size_t cap);

/// True iff `c` is one of the continuations enumerate_cover would produce (without a cap).
bool in_cover(const PrefixMonitor& mon, PathView base, const Continuation& c, std::size_t max_steps);

/// Draws an element of the truncated cover with probability proportional to its cylinder
/// mass (rejection sampling of random walks). Returns nullopt after `max_tries` failures.
std::optional<Continuation> sample_cover(const ReasonableMeasure& m, const PrefixMonitor& mon, PathView base,
                                         std::size_t max_steps, Rng& rng, std::size_t max_tries = 100000);

} // namespace bmg

namespace bmg {

/// Covers a path once, after its first `base_length` vertices, some vertex u written at a
/// later position is immediately followed by the steps of table[u]. Used for offered sets
/// of the form { pi . g(last(pi)) : pi nonempty }.
class ChainedPatternMonitor final : public PrefixMonitor {
public:
    ChainedPatternMonitor(std::map<Vertex, std::vector<Vertex>> table, std::size_t base_length);

    MonitorState initial(Vertex start) const override;
    MonitorState step(const MonitorState& state, Vertex next) const override;
    MonitorStatus status(const MonitorState& state) const override;

private:
    std::map<Vertex, std::vector<Vertex>> table_;
    std::size_t base_length_;
};

} // namespace bmg
