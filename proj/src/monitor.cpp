#include "bmgame/monitor.hpp"

#include "bmgame/error.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace bmg {

MonitorState PrefixMonitor::run(PathView path) const
{
    if (path.empty()) throw Error(ErrorKind::InvalidArgument, "monitor run on an empty path");
    MonitorState s = initial(path[0]);
    for (std::size_t i = 1; i < path.size(); ++i) s = step(s, path[i]);
    return s;
}

CylinderPattern CylinderPattern::cylinder(PathView path)
{
    CylinderPattern p;
    for (Vertex v : path) p.allowed.push_back({v});
    return p;
}

bool CylinderPattern::is_plain() const
{
    return std::all_of(allowed.begin(), allowed.end(), [](const auto& a) { return a.size() == 1; });
}

Path CylinderPattern::as_path() const
{
    Path out;
    for (const auto& a : allowed) out.push_back(a.front());
    return out;
}

bool CylinderPattern::admits(std::size_t position, Vertex v) const
{
    const auto& a = allowed[position];
    return std::find(a.begin(), a.end(), v) != a.end();
}

bool CylinderPattern::covers(PathView path) const
{
    if (path.size() < allowed.size()) return false;
    for (std::size_t i = 0; i < allowed.size(); ++i)
        if (!admits(i, path[i])) return false;
    return true;
}

bool CylinderPattern::compatible(PathView path) const
{
    const std::size_t n = std::min(path.size(), allowed.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!admits(i, path[i])) return false;
    return true;
}

// State layout: [position, covered, mask words...]
PatternUnionMonitor::PatternUnionMonitor(std::vector<CylinderPattern> patterns) : patterns_(std::move(patterns))
{
    for (const auto& p : patterns_) {
        if (p.allowed.empty()) throw Error(ErrorKind::InvalidArgument, "empty cylinder pattern");
    }
    words_ = std::max<std::size_t>(1, (patterns_.size() + 62) / 63);
}

MonitorState PatternUnionMonitor::advance(MonitorState s, std::size_t position, Vertex v) const
{
    if (s[1]) return s;
    bool any = false;
    for (std::size_t k = 0; k < patterns_.size(); ++k) {
        auto& word = s[2 + k / 63];
        const std::int64_t bit = std::int64_t{1} << (k % 63);
        if (!(word & bit)) continue;
        const auto& p = patterns_[k];
        if (!p.admits(position, v)) {
            word &= ~bit;
            continue;
        }
        any = true;
        if (position + 1 == p.length()) {
            s[1] = 1;
        }
    }
    s[0] = static_cast<std::int64_t>(position + 1);
    if (s[1] || !any) {
        // Absorbing: drop the bookkeeping so equal verdicts share one state.
        return MonitorState{-1, s[1]};
    }
    return s;
}

MonitorState PatternUnionMonitor::initial(Vertex start) const
{
    MonitorState s(2 + words_, 0);
    for (std::size_t k = 0; k < patterns_.size(); ++k) s[2 + k / 63] |= std::int64_t{1} << (k % 63);
    return advance(std::move(s), 0, start);
}

MonitorState PatternUnionMonitor::step(const MonitorState& state, Vertex next) const
{
    if (state[0] < 0) return state;
    return advance(state, static_cast<std::size_t>(state[0]), next);
}

MonitorStatus PatternUnionMonitor::status(const MonitorState& state) const
{
    if (state[0] >= 0) return MonitorStatus::Open;
    return state[1] ? MonitorStatus::Covered : MonitorStatus::Excluded;
}

CoverProfile cover_profile(const ReasonableMeasure& m, const PrefixMonitor& mon, PathView base,
                           std::size_t max_steps, std::optional<Rational> stop_at)
{
    CoverProfile prof;
    prof.first_hit.assign(1, Rational(0));
    prof.first_hit_count.assign(1, BigInt(0));
    const MonitorState s0 = mon.run(base);
    const auto st0 = mon.status(s0);
    if (st0 == MonitorStatus::Excluded) {
        prof.excluded = 1;
        return prof;
    }
    const FiniteGraph& g = m.graph();
    struct Cell {
        Rational mass;
        BigInt count;
    };
    using Key = std::pair<std::size_t, MonitorState>;
    std::map<Key, Cell> layer;
    layer.emplace(Key{g.index_of(base.back()), s0}, Cell{Rational(1), BigInt(1)});
    for (std::size_t d = 1; d <= max_steps && !layer.empty(); ++d) {
        std::map<Key, Cell> next;
        Rational hit(0);
        BigInt hits(0);
        for (const auto& [key, cell] : layer) {
            const auto succ = g.successor_indices(key.first);
            for (std::size_t k = 0; k < succ.size(); ++k) {
                MonitorState s = mon.step(key.second, g.vertex_at(succ[k]));
                Rational mass = cell.mass * m.transition_at(key.first, k);
                switch (mon.status(s)) {
                case MonitorStatus::Covered:
                    hit += mass;
                    hits += cell.count;
                    break;
                case MonitorStatus::Excluded:
                    prof.excluded += mass;
                    break;
                case MonitorStatus::Open: {
                    auto& c = next[Key{succ[k], std::move(s)}];
                    c.mass += mass;
                    c.count += cell.count;
                    break;
                }
                }
            }
        }
        prof.first_hit.push_back(hit);
        prof.first_hit_count.push_back(hits);
        prof.covered += hit;
        prof.depth = d;
        prof.peak_states = std::max(prof.peak_states, next.size());
        layer = std::move(next);
        if (stop_at && prof.covered >= *stop_at) break;
    }
    prof.covered.canonicalize();
    prof.excluded.canonicalize();
    return prof;
}

std::vector<Continuation> enumerate_cover(const FiniteGraph& g, const PrefixMonitor& mon, PathView base,
                                          std::size_t max_steps, std::size_t cap)
{
    std::vector<Continuation> out;
    const MonitorState s0 = mon.run(base);
    if (mon.status(s0) == MonitorStatus::Excluded) return out;
    // Breadth-first keeps length-then-lexicographic order.
    struct Node {
        MonitorState state;
        std::vector<Vertex> steps;
    };
    std::deque<Node> frontier;
    frontier.push_back({s0, {}});
    while (!frontier.empty() && out.size() < cap) {
        Node node = std::move(frontier.front());
        frontier.pop_front();
        const Vertex at = node.steps.empty() ? base.back() : node.steps.back();
        for (Vertex w : g.successors(at)) {
            MonitorState s = mon.step(node.state, w);
            auto steps = node.steps;
            steps.push_back(w);
            const auto st = mon.status(s);
            if (st == MonitorStatus::Covered) {
                out.emplace_back(base.back(), std::move(steps));
                if (out.size() >= cap) break;
            } else if (st == MonitorStatus::Open && steps.size() < max_steps) {
                frontier.push_back({std::move(s), std::move(steps)});
            }
        }
    }
    return out;
}

bool in_cover(const PrefixMonitor& mon, PathView base, const Continuation& c, std::size_t max_steps)
{
    if (c.steps.empty() || c.steps.size() > max_steps || c.anchor != base.back()) return false;
    MonitorState s = mon.run(base);
    if (mon.status(s) == MonitorStatus::Excluded) return false;
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        s = mon.step(s, c.steps[i]);
        const auto st = mon.status(s);
        if (st == MonitorStatus::Excluded) return false;
        if (st == MonitorStatus::Covered) return i + 1 == c.steps.size();
    }
    return false;
}

std::optional<Continuation> sample_cover(const ReasonableMeasure& m, const PrefixMonitor& mon, PathView base,
                                         std::size_t max_steps, Rng& rng, std::size_t max_tries)
{
    const MonitorState s0 = mon.run(base);
    if (mon.status(s0) == MonitorStatus::Excluded) return std::nullopt;
    for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
        MonitorState s = s0;
        std::vector<Vertex> steps;
        Vertex at = base.back();
        while (steps.size() < max_steps) {
            at = m.sample_successor(at, rng);
            steps.push_back(at);
            s = mon.step(s, at);
            const auto st = mon.status(s);
            if (st == MonitorStatus::Covered) return Continuation(base.back(), std::move(steps));
            if (st == MonitorStatus::Excluded) break;
        }
    }
    return std::nullopt;
}

} // namespace bmg

namespace bmg {

// State: [position, covered, then pairs (vertex, matched) of the live partial matches, sorted].
ChainedPatternMonitor::ChainedPatternMonitor(std::map<Vertex, std::vector<Vertex>> table, std::size_t base_length)
    : table_(std::move(table)), base_length_(base_length)
{
    if (base_length_ == 0) throw Error(ErrorKind::InvalidArgument, "base length counts vertices, so >= 1");
    for (const auto& [v, steps] : table_)
        if (steps.empty()) throw Error(ErrorKind::InvalidArgument, "empty chained pattern");
}

MonitorState ChainedPatternMonitor::initial(Vertex) const { return MonitorState{1, 0}; }

MonitorState ChainedPatternMonitor::step(const MonitorState& state, Vertex next) const
{
    if (state[1]) return state;
    const auto pos = static_cast<std::size_t>(state[0]);
    if (pos < base_length_) return MonitorState{static_cast<std::int64_t>(pos + 1), 0};
    std::vector<std::pair<std::int64_t, std::int64_t>> live;
    for (std::size_t i = 2; i + 1 < state.size(); i += 2) {
        const Vertex u = static_cast<Vertex>(state[i]);
        const auto k = static_cast<std::size_t>(state[i + 1]);
        const auto& pat = table_.at(u);
        if (pat[k] != next) continue;
        if (k + 1 == pat.size()) return MonitorState{-1, 1};
        live.emplace_back(u, static_cast<std::int64_t>(k + 1));
    }
    if (table_.count(next)) live.emplace_back(next, 0);
    std::sort(live.begin(), live.end());
    live.erase(std::unique(live.begin(), live.end()), live.end());
    // Positions are irrelevant once past the base, which keeps the state space finite.
    MonitorState s{static_cast<std::int64_t>(base_length_), 0};
    for (const auto& [u, k] : live) {
        s.push_back(u);
        s.push_back(k);
    }
    return s;
}

MonitorStatus ChainedPatternMonitor::status(const MonitorState& state) const
{
    return state[1] ? MonitorStatus::Covered : MonitorStatus::Open;
}

} // namespace bmg
