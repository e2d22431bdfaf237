#pragma once

// Shared fixtures and naive oracles for the test suites.

#include "bmgame/graph.hpp"
#include "bmgame/measure.hpp"

#include <memory>
#include <random>
#include <vector>

namespace bmg::test {

inline FiniteGraph c01() { return FiniteGraph::complete(2); }
inline FiniteGraph c012() { return FiniteGraph::complete(3); }

inline std::shared_ptr<const ReasonableMeasure> uniform(std::size_t n)
{
    return std::make_shared<const ReasonableMeasure>(ReasonableMeasure::uniform(FiniteGraph::complete(n)));
}

/// Random strongly-sinkless graph on {0..n-1}: every vertex gets 1..n successors.
inline FiniteGraph random_graph(std::size_t n, Rng& rng)
{
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<Vertex>(i));
    std::vector<Edge> es;
    for (Vertex v : vs) {
        std::vector<Vertex> succ = vs;
        std::shuffle(succ.begin(), succ.end(), rng);
        const std::size_t k = 1 + rng() % n;
        for (std::size_t i = 0; i < k; ++i) es.emplace_back(v, succ[i]);
    }
    return FiniteGraph(vs, es);
}

/// Integer weights in 1..9 on every edge.
inline WeightMap random_weights(const FiniteGraph& g, Rng& rng)
{
    WeightMap w;
    for (const auto& e : g.edges()) w[e] = Rational(static_cast<long>(1 + rng() % 9));
    return w;
}

/// Random walk of `steps` steps from v0 (uniform over successors).
inline Path random_walk(const FiniteGraph& g, Vertex v0, std::size_t steps, Rng& rng)
{
    Path p{v0};
    for (std::size_t i = 0; i < steps; ++i) {
        const auto succ = g.successors(p.back());
        p.push_back(succ[rng() % succ.size()]);
    }
    return p;
}

/// Independent cylinder mass: weights re-normalised edge by edge from the raw map.
inline Rational naive_cyl(const FiniteGraph& g, const WeightMap& w, const Path& p)
{
    Rational r(1);
    for (std::size_t i = 1; i < p.size(); ++i) {
        Rational out(0);
        for (Vertex s : g.successors(p[i - 1])) out += w.at({p[i - 1], s});
        r *= w.at({p[i - 1], p[i]}) / out;
    }
    return r;
}

/// Every path of exactly `steps` steps from v0, lexicographic.
inline std::vector<Path> all_paths(const FiniteGraph& g, Vertex v0, std::size_t steps)
{
    std::vector<Path> out{{v0}};
    for (std::size_t i = 0; i < steps; ++i) {
        std::vector<Path> next;
        for (const auto& p : out)
            for (Vertex s : g.successors(p.back())) {
                Path q = p;
                q.push_back(s);
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

} // namespace bmg::test
