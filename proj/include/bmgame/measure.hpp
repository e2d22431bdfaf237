#pragma once

#include "bmgame/graph.hpp"
#include "bmgame/rational.hpp"

#include <cstdint>
#include <map>
#include <random>

namespace bmg {

/// The generator used everywhere randomness appears. Seeds are recorded in every output header.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

/// Deterministic per-stream seed (SplitMix64 finalizer over seed and stream index), so that
/// trial i of a batch draws the same numbers whichever thread runs it.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0,1) built from the top 53 bits of one draw.
double uniform01(Rng& rng);

using WeightMap = std::map<Edge, Rational>;

/// Probability on infinite paths induced by positive edge weights:
/// p(v,v') = w(v,v') / sum of weights leaving v, and Cyl(v1..vn) has mass p(v1,v2)...p(vn-1,vn).
class ReasonableMeasure {
public:
    ReasonableMeasure(FiniteGraph graph, const WeightMap& weights);

    /// All weights equal to 1.
    static ReasonableMeasure uniform(FiniteGraph graph);

    const FiniteGraph& graph() const noexcept { return graph_; }
    const WeightMap& weights() const noexcept { return weights_; }

    Rational transition(Vertex from, Vertex to) const;
    const Rational& transition_at(std::size_t from_idx, std::size_t succ_pos) const
    {
        return rows_[from_idx][succ_pos];
    }
    /// Smallest positive transition probability.
    Rational min_transition() const;

    /// Successor drawn from the row of `from`.
    Vertex sample_successor(Vertex from, Rng& rng) const;

private:
    FiniteGraph graph_;
    WeightMap weights_;
    std::vector<std::vector<Rational>> rows_;  // aligned with graph_.successor_indices
    std::vector<std::vector<double>> cumulative_;
};

/// Exact cylinder mass; the start vertex carries no factor.
Probability cyl_prob(const ReasonableMeasure& m, PathView path);
inline Probability cyl_prob(const ReasonableMeasure& m, const PlayPrefix& p) { return cyl_prob(m, p.path()); }

/// Mass of the cylinder of `path` conditioned on its first `from` vertices (product of the
/// transitions after position `from`).
Rational cyl_prob_after(const ReasonableMeasure& m, PathView path, std::size_t from);

/// Mass of a finite union of disjoint cylinders.
Probability union_prob(const ReasonableMeasure& m, const PrefixFreeSet& s);

/// P(union of `event` | Cyl(given)).
Probability cond_prob(const ReasonableMeasure& m, const PrefixFreeSet& event, PathView given);

/// A random prefix of `depth` steps from v0.
PlayPrefix sample_path(const ReasonableMeasure& m, Vertex v0, std::size_t depth, Rng& rng);

} // namespace bmg
