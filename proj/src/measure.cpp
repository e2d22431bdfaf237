#include "bmgame/measure.hpp"

#include "bmgame/error.hpp"

#include <algorithm>

namespace bmg {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ReasonableMeasure::ReasonableMeasure(FiniteGraph graph, const WeightMap& weights)
    : graph_(std::move(graph))
{
    const std::size_t n = graph_.size();
    rows_.resize(n);
    cumulative_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex v = graph_.vertex_at(i);
        Rational total(0);
        std::vector<Rational> ws;
        for (std::size_t j : graph_.successor_indices(i)) {
            const Edge e{v, graph_.vertex_at(j)};
            auto it = weights.find(e);
            if (it == weights.end()) {
                throw Error(ErrorKind::MissingWeight,
                            "no weight for edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ")");
            }
            if (it->second <= 0) {
                throw Error(ErrorKind::NonPositiveWeight, "weight " + format_rational(it->second) + " on edge (" +
                                                              std::to_string(e.first) + "," +
                                                              std::to_string(e.second) + ")");
            }
            weights_[e] = it->second;
            ws.push_back(it->second);
            total += it->second;
        }
        double acc = 0.0;
        for (auto& w : ws) {
            Rational p = w / total;
            p.canonicalize();
            acc += p.get_d();
            rows_[i].push_back(p);
            cumulative_[i].push_back(acc);
        }
        cumulative_[i].back() = 1.0;
    }
    for (const auto& [e, w] : weights) {
        if (!graph_.has_edge(e.first, e.second)) {
            throw Error(ErrorKind::DanglingEdge,
                        "weight given for non-edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ")");
        }
    }
}

ReasonableMeasure ReasonableMeasure::uniform(FiniteGraph graph)
{
    WeightMap w;
    for (const auto& e : graph.edges()) w.emplace(e, Rational(1));
    return ReasonableMeasure(std::move(graph), w);
}

Rational ReasonableMeasure::transition(Vertex from, Vertex to) const
{
    if (!graph_.contains(from) || !graph_.contains(to)) return Rational(0);
    const std::size_t i = graph_.index_of(from);
    const std::size_t j = graph_.index_of(to);
    const auto succ = graph_.successor_indices(i);
    auto it = std::lower_bound(succ.begin(), succ.end(), j);
    if (it == succ.end() || *it != j) return Rational(0);
    return rows_[i][static_cast<std::size_t>(it - succ.begin())];
}

Rational ReasonableMeasure::min_transition() const
{
    Rational best(1);
    for (const auto& row : rows_)
        for (const auto& p : row) best = std::min(best, p);
    return best;
}

Vertex ReasonableMeasure::sample_successor(Vertex from, Rng& rng) const
{
    const std::size_t i = graph_.index_of(from);
    const double u = uniform01(rng);
    const auto& cum = cumulative_[i];
    std::size_t k = 0;
    while (k + 1 < cum.size() && u >= cum[k]) ++k;
    return graph_.vertex_at(graph_.successor_indices(i)[k]);
}

Rational cyl_prob_after(const ReasonableMeasure& m, PathView path, std::size_t from)
{
    Rational p(1);
    for (std::size_t i = std::max<std::size_t>(from, 1); i < path.size(); ++i) {
        p *= m.transition(path[i - 1], path[i]);
        if (p == 0) break;
    }
    return p;
}

Probability cyl_prob(const ReasonableMeasure& m, PathView path)
{
    return Probability(cyl_prob_after(m, path, 1));
}

Probability union_prob(const ReasonableMeasure& m, const PrefixFreeSet& s)
{
    Rational total(0);
    for (const auto& p : s) total += cyl_prob_after(m, p, 1);
    return Probability(total);
}

Probability cond_prob(const ReasonableMeasure& m, const PrefixFreeSet& event, PathView given)
{
    if (event.covers(given)) return Probability(Rational(1));
    Rational total(0);
    for (const auto& p : event.restricted_to(given)) total += cyl_prob_after(m, p, given.size());
    return Probability(total);
}

PlayPrefix sample_path(const ReasonableMeasure& m, Vertex v0, std::size_t depth, Rng& rng)
{
    Path path{v0};
    path.reserve(depth + 1);
    for (std::size_t i = 0; i < depth; ++i) path.push_back(m.sample_successor(path.back(), rng));
    return PlayPrefix::from_path(std::move(path));
}

} // namespace bmg
