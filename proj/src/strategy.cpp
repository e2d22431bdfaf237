#include "bmgame/strategy.hpp"

#include "bmgame/analyzer.hpp"
#include "bmgame/error.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <set>

namespace bmg {

const char* to_string(StrategyKind k)
{
    switch (k) {
    case StrategyKind::General: return "general";
    case StrategyKind::Positional: return "positional";
    case StrategyKind::FiniteMemory: return "finite-memory";
    case StrategyKind::MoveCounting: return "move-counting";
    case StrategyKind::LengthCounting: return "length-counting";
    case StrategyKind::LastMove: return "last-move";
    }
    return "?";
}

Strategy Strategy::general(std::function<Continuation(const PlayPrefix&)> fn, std::string name,
                           std::optional<std::size_t> bound)
{
    return Strategy(GeneralRule{std::move(fn)}, std::move(name), bound);
}

Strategy Strategy::positional(std::map<Vertex, Continuation> table, std::string name)
{
    std::size_t b = 0;
    for (const auto& [v, c] : table) b = std::max(b, c.length());
    return Strategy(PositionalRule{std::move(table)}, std::move(name), b);
}

Strategy Strategy::move_counting(std::function<Continuation(Vertex, std::size_t)> fn, std::string name,
                                 std::optional<std::size_t> bound)
{
    return Strategy(MoveCountingRule{std::move(fn)}, std::move(name), bound);
}

Strategy Strategy::length_counting(std::function<Continuation(Vertex, std::size_t)> fn, std::string name,
                                   std::optional<std::size_t> bound)
{
    return Strategy(LengthCountingRule{std::move(fn)}, std::move(name), bound);
}

Strategy Strategy::last_move(std::function<Continuation(PathView)> fn, std::string name,
                             std::optional<std::size_t> bound)
{
    return Strategy(LastMoveRule{std::move(fn)}, std::move(name), bound);
}

Path last_move_word(const PlayPrefix& transcript)
{
    if (transcript.move_count() == 0) {
        throw Error(ErrorKind::MissingTableEntry, "last-move strategy queried before any move");
    }
    const std::size_t i = transcript.move_count() - 1;
    const Continuation c = transcript.move(i);
    Path word;
    if (i == 0) word.push_back(c.anchor);
    word.insert(word.end(), c.steps.begin(), c.steps.end());
    return word;
}

namespace {

struct Responder {
    const PlayPrefix& t;
    std::size_t move_index;

    Continuation operator()(const GeneralRule& r) const { return r.fn(t); }
    Continuation operator()(const PositionalRule& r) const
    {
        auto it = r.table.find(t.last());
        if (it == r.table.end()) {
            throw Error(ErrorKind::MissingTableEntry, "no positional entry for vertex " + std::to_string(t.last()));
        }
        return it->second;
    }
    Continuation operator()(const FiniteMemoryRule& r) const
    {
        std::size_t mem = r.initial;
        for (Vertex v : t.path()) mem = r.update(mem, v);
        return r.output(mem, t.last());
    }
    Continuation operator()(const MoveCountingRule& r) const { return r.fn(t.last(), move_index); }
    Continuation operator()(const LengthCountingRule& r) const { return r.fn(t.last(), t.length()); }
    Continuation operator()(const LastMoveRule& r) const { return r.fn(last_move_word(t)); }
};

} // namespace

Continuation respond(const Strategy& s, const PlayPrefix& transcript, std::size_t move_index)
{
    Continuation c = std::visit(Responder{transcript, move_index}, s.rule());
    if (c.anchor != transcript.last()) {
        throw Error(ErrorKind::AnchorMismatch, "strategy '" + s.name() + "' answered from " +
                                                   std::to_string(c.anchor) + " at " +
                                                   std::to_string(transcript.last()));
    }
    if (c.steps.empty()) throw Error(ErrorKind::InvalidArgument, "strategy '" + s.name() + "' gave an empty move");
    return c;
}

bool is_consistent(const PlayPrefix& t, const Strategy& s, Player role)
{
    std::size_t own = 0;
    for (std::size_t i = 0; i < t.move_count(); ++i) {
        if (t.moves()[i].player != role) continue;
        ++own;
        try {
            if (respond(s, t.truncated(i), own) != t.move(i)) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

bool positional_table_valid(const FiniteGraph& g, const Strategy& s)
{
    const auto* p = s.as<PositionalRule>();
    if (!p) return false;
    for (Vertex v : g.vertices()) {
        auto it = p->table.find(v);
        if (it == p->table.end() || it->second.anchor != v) return false;
        try {
            check_continuation(g, it->second);
        } catch (const Error&) {
            return false;
        }
        if (s.bound() && it->second.length() > *s.bound()) return false;
    }
    return true;
}

// ---- length-counting fold --------------------------------------------------------------

namespace {

struct FoldMemo {
    std::mutex mu;
    std::map<std::pair<Vertex, std::size_t>, Continuation> table;
};

BigInt count_paths(const FiniteGraph& g, Vertex v0, std::size_t steps, Vertex end)
{
    std::vector<BigInt> cnt(g.size());
    cnt[g.index_of(v0)] = 1;
    for (std::size_t d = 0; d < steps; ++d) {
        std::vector<BigInt> next(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (cnt[i] == 0) continue;
            for (std::size_t j : g.successor_indices(i)) next[j] += cnt[i];
        }
        cnt = std::move(next);
    }
    return cnt[g.index_of(end)];
}

} // namespace

Strategy length_counting_from_general(const Strategy& f, const FiniteGraph& g, Vertex v0, std::size_t cap)
{
    auto memo = std::make_shared<FoldMemo>();
    auto fn = [f, g, v0, cap, memo](Vertex v, std::size_t n) -> Continuation {
        {
            std::lock_guard lock(memo->mu);
            auto it = memo->table.find({v, n});
            if (it != memo->table.end()) return it->second;
        }
        if (n == 0) throw Error(ErrorKind::InvalidArgument, "prefix length counts vertices, so n >= 1");
        const BigInt m = count_paths(g, v0, n - 1, v);
        if (m > BigInt(static_cast<unsigned long>(cap))) {
            throw Error(ErrorKind::ExplosionGuard, m.get_str() + " prefixes of length " + std::to_string(n) +
                                                       " end in " + std::to_string(v) + " (cap " +
                                                       std::to_string(cap) + ")");
        }
        if (m == 0) {
            throw Error(ErrorKind::MissingTableEntry, "no prefix of length " + std::to_string(n) + " ends in " +
                                                          std::to_string(v));
        }
        std::vector<Path> prefixes;
        if (n == 1) {
            prefixes.push_back({v0});
        } else {
            for (auto& c : enumerate_continuations(g, v0, n - 1)) {
                if (c.last() != v) continue;
                Path p{v0};
                p.insert(p.end(), c.steps.begin(), c.steps.end());
                prefixes.push_back(std::move(p));
            }
        }
        std::vector<Vertex> acc;
        for (const auto& pi : prefixes) {
            Path q = pi;
            q.insert(q.end(), acc.begin(), acc.end());
            const Continuation out = respond(f, PlayPrefix::from_path(std::move(q)), 1);
            acc.insert(acc.end(), out.steps.begin(), out.steps.end());
        }
        Continuation h(v, std::move(acc));
        std::lock_guard lock(memo->mu);
        memo->table.emplace(std::pair{v, n}, h);
        return h;
    };
    return Strategy::length_counting(std::move(fn), "fold(" + f.name() + ")");
}

std::vector<std::optional<std::size_t>> replay_general(const Strategy& f, const PlayPrefix& play, Player role)
{
    std::vector<std::optional<std::size_t>> found;
    for (std::size_t i = 0; i < play.move_count(); ++i) {
        if (play.moves()[i].player != role) continue;
        const Continuation mv = play.move(i);
        const PathView before = play.path().first(play.moves()[i].begin);
        std::optional<std::size_t> hit;
        for (std::size_t o = 0; o < mv.steps.size() && !hit; ++o) {
            Path q(before.begin(), before.end());
            q.insert(q.end(), mv.steps.begin(), mv.steps.begin() + static_cast<std::ptrdiff_t>(o));
            Continuation out;
            try {
                out = respond(f, PlayPrefix::from_path(std::move(q)), 1);
            } catch (const Error&) {
                continue;
            }
            if (o + out.steps.size() <= mv.steps.size() &&
                std::equal(out.steps.begin(), out.steps.end(), mv.steps.begin() + static_cast<std::ptrdiff_t>(o))) {
                hit = o;
            }
        }
        found.push_back(hit);
    }
    return found;
}

// ---- g_n and families ---------------------------------------------------------------

std::size_t diagonal_phi(std::size_t n)
{
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "phi is indexed from 1");
    // Row r holds indices r(r-1)/2+1 .. r(r+1)/2 and maps them to 1..r.
    std::size_t r = 1;
    while (r * (r + 1) / 2 < n) ++r;
    return n - r * (r - 1) / 2;
}

Strategy move_counting_from_positional_family(std::function<Strategy(std::size_t)> family,
                                              std::function<std::size_t(std::size_t)> phi, std::string name)
{
    auto fn = [family = std::move(family), phi = std::move(phi)](Vertex v, std::size_t n) {
        const Strategy fk = family(phi(n));
        const auto* p = fk.as<PositionalRule>();
        if (!p) throw Error(ErrorKind::InvalidArgument, "family member '" + fk.name() + "' is not positional");
        auto it = p->table.find(v);
        if (it == p->table.end()) {
            throw Error(ErrorKind::MissingTableEntry, "family member '" + fk.name() + "' has no entry for " +
                                                          std::to_string(v));
        }
        return it->second;
    };
    return Strategy::move_counting(std::move(fn), std::move(name));
}

Strategy gn_from_move_counting(const Strategy& h, const FiniteGraph& g, std::size_t n)
{
    const auto* r = h.as<MoveCountingRule>();
    if (!r) throw Error(ErrorKind::InvalidArgument, "g_n needs a move-counting strategy");
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "g_n needs n >= 1");
    std::map<Vertex, Continuation> table;
    for (Vertex v : g.vertices()) {
        Vertex cur = v;
        std::vector<Vertex> steps;
        for (std::size_t k = 1; k <= n; ++k) {
            const Continuation c = r->fn(cur, k);
            if (c.anchor != cur) throw Error(ErrorKind::AnchorMismatch, "h answered from the wrong vertex");
            steps.insert(steps.end(), c.steps.begin(), c.steps.end());
            cur = c.last();
        }
        table.emplace(v, Continuation(v, std::move(steps)));
    }
    return Strategy::positional(std::move(table), "g" + std::to_string(n) + "(" + h.name() + ")");
}

// ---- BSCC conversion ------------------------------------------------------------------------

std::optional<std::vector<Vertex>> shortest_steps(const FiniteGraph& g, Vertex from, const std::vector<Vertex>& targets)
{
    const std::set<Vertex> goal(targets.begin(), targets.end());
    if (goal.count(from)) return std::vector<Vertex>{};
    std::map<Vertex, Vertex> parent;
    std::deque<Vertex> queue{from};
    parent.emplace(from, from);
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : g.successors(u)) {
            if (parent.count(w)) continue;
            parent.emplace(w, u);
            if (goal.count(w)) {
                std::vector<Vertex> steps;
                for (Vertex x = w; x != from; x = parent.at(x)) steps.push_back(x);
                std::reverse(steps.begin(), steps.end());
                return steps;
            }
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

namespace {

// Shortest path between two vertices of one component, staying inside it.
std::vector<Vertex> connector(const FiniteGraph& g, const std::set<Vertex>& comp, Vertex from, Vertex to)
{
    if (from == to) return {};
    std::map<Vertex, Vertex> parent{{from, from}};
    std::deque<Vertex> queue{from};
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : g.successors(u)) {
            if (!comp.count(w) || parent.count(w)) continue;
            parent.emplace(w, u);
            if (w == to) {
                std::vector<Vertex> steps;
                for (Vertex x = w; x != from; x = parent.at(x)) steps.push_back(x);
                std::reverse(steps.begin(), steps.end());
                return steps;
            }
            queue.push_back(w);
        }
    }
    throw Error(ErrorKind::NoBSCCPath, "component is not strongly connected");
}

} // namespace

Strategy bounded_move_counting_to_positional(const FiniteGraph& g, const std::vector<Continuation>& table,
                                             std::string name)
{
    const auto comps = bsccs(g);
    std::map<Vertex, std::size_t> comp_of;
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (Vertex v : comps[i]) comp_of[v] = i;

    std::vector<std::vector<Continuation>> words(comps.size());
    for (const auto& w : table) {
        auto it = comp_of.find(w.anchor);
        if (it == comp_of.end()) continue; // answers outside the bottom components are never needed
        check_continuation(g, w);
        for (Vertex x : w.steps) {
            auto jt = comp_of.find(x);
            if (jt == comp_of.end() || jt->second != it->second) {
                throw Error(ErrorKind::OutputEscapesBSCC, "table word leaves the component of " +
                                                              std::to_string(w.anchor));
            }
        }
        auto& list = words[it->second];
        if (std::find(list.begin(), list.end(), w) == list.end()) list.push_back(w);
    }

    std::vector<Vertex> all_bottom;
    for (const auto& c : comps) all_bottom.insert(all_bottom.end(), c.begin(), c.end());

    std::map<Vertex, Continuation> out;
    for (Vertex v : g.vertices()) {
        auto it = comp_of.find(v);
        std::vector<Vertex> steps;
        if (it == comp_of.end()) {
            auto path = shortest_steps(g, v, all_bottom);
            if (!path) throw Error(ErrorKind::NoBSCCPath, "vertex " + std::to_string(v) + " reaches no bottom SCC");
            steps = std::move(*path);
        } else {
            const std::set<Vertex> comp(comps[it->second].begin(), comps[it->second].end());
            Vertex cur = v;
            for (const auto& w : words[it->second]) {
                auto link = connector(g, comp, cur, w.anchor);
                steps.insert(steps.end(), link.begin(), link.end());
                steps.insert(steps.end(), w.steps.begin(), w.steps.end());
                cur = w.last();
            }
            if (steps.empty()) steps.push_back(g.successors(v).front()); // empty table: any move
        }
        out.emplace(v, Continuation(v, std::move(steps)));
    }
    return Strategy::positional(std::move(out), std::move(name));
}

void check_prop5_table(const FiniteGraph& g, const Strategy& h, const std::vector<Continuation>& table,
                       std::size_t max_index)
{
    const auto* r = h.as<MoveCountingRule>();
    if (!r) throw Error(ErrorKind::InvalidArgument, "the table check needs a move-counting strategy");
    for (const auto& comp : bsccs(g)) {
        for (Vertex v : comp) {
            for (std::size_t n = 1; n <= max_index; ++n) {
                const Continuation c = r->fn(v, n);
                if (std::find(table.begin(), table.end(), c) == table.end()) {
                    throw Error(ErrorKind::TableMismatch, "h(" + std::to_string(v) + "," + std::to_string(n) +
                                                              ") = " + format_path(c.steps) +
                                                              " is missing from the table");
                }
            }
        }
    }
}

// ---- random player -------------------------------------------------------------------

std::uint64_t path_hash(PathView path)
{
    std::uint64_t h = 1469598103934665603ull;
    for (Vertex v : path) {
        auto x = static_cast<std::uint32_t>(v);
        for (int k = 0; k < 4; ++k) {
            h ^= (x >> (8 * k)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

Strategy random_player(const ReasonableMeasure& m, std::uint64_t seed, std::size_t max_len)
{
    if (max_len == 0) throw Error(ErrorKind::InvalidArgument, "random moves need max_len >= 1");
    auto fn = [m, seed, max_len](const PlayPrefix& t) {
        Rng rng(stream_seed(seed, path_hash(t.path())));
        const std::size_t len = 1 + static_cast<std::size_t>(rng() % max_len);
        std::vector<Vertex> steps;
        Vertex at = t.last();
        for (std::size_t i = 0; i < len; ++i) {
            at = m.sample_successor(at, rng);
            steps.push_back(at);
        }
        return Continuation(t.last(), std::move(steps));
    };
    return Strategy::general(std::move(fn), "random(" + std::to_string(seed) + ")", max_len);
}

} // namespace bmg
