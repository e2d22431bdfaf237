#include "bmgame/analyzer.hpp"

#include "bmgame/error.hpp"
#include "bmgame/scc.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace bmg {

std::vector<std::vector<Vertex>> bsccs(const FiniteGraph& g)
{
    auto succ = [&](std::size_t i) {
        auto s = g.successor_indices(i);
        return std::vector<std::size_t>(s.begin(), s.end());
    };
    std::vector<std::vector<Vertex>> out;
    for (const auto& comp : strongly_connected_components(g.size(), succ)) {
        std::vector<char> in(g.size(), 0);
        for (std::size_t i : comp) in[i] = 1;
        bool bottom = true;
        for (std::size_t i : comp)
            for (std::size_t j : g.successor_indices(i)) bottom = bottom && in[j];
        if (!bottom) continue;
        std::vector<Vertex> vs;
        for (std::size_t i : comp) vs.push_back(g.vertex_at(i));
        out.push_back(std::move(vs));
    }
    return out;
}

ProductChain build_product(const ReasonableMeasure& m, const ParityCondition& w, Vertex v0)
{
    const FiniteGraph& g = m.graph();
    if (!(w.graph() == g)) throw Error(ErrorKind::InvalidArgument, "automaton and measure use different graphs");
    ProductChain chain;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
    std::deque<std::size_t> queue;
    auto intern = [&](std::size_t vi, std::size_t q) {
        auto [it, fresh] = id.emplace(std::pair{vi, q}, chain.states.size());
        if (fresh) {
            chain.states.push_back({vi, q});
            chain.rows.emplace_back();
            chain.priority.push_back(w.priority(q));
            queue.push_back(it->second);
        }
        return it->second;
    };
    const std::size_t i0 = g.index_of(v0);
    chain.initial = intern(i0, w.transitions()[w.initial()][i0]);
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        const auto [vi, q] = chain.states[s];
        const auto succ = g.successor_indices(vi);
        std::vector<std::pair<std::size_t, Rational>> row;
        for (std::size_t k = 0; k < succ.size(); ++k) {
            const std::size_t t = intern(succ[k], w.transitions()[q][succ[k]]);
            row.emplace_back(t, m.transition_at(vi, k));
        }
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        // Merge parallel entries (two successors can lead to one product state only if equal).
        std::vector<std::pair<std::size_t, Rational>> merged;
        for (auto& e : row) {
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second += e.second;
            } else {
                merged.push_back(std::move(e));
            }
        }
        chain.rows[s] = std::move(merged);
    }
    return chain;
}

std::vector<std::vector<std::size_t>> bsccs(const ProductChain& chain)
{
    const std::size_t n = chain.states.size();
    auto succ = [&](std::size_t s) {
        std::vector<std::size_t> out;
        for (const auto& e : chain.rows[s]) out.push_back(e.first);
        return out;
    };
    std::vector<std::vector<std::size_t>> out;
    for (auto& comp : strongly_connected_components(n, succ)) {
        std::vector<char> in(n, 0);
        for (std::size_t s : comp) in[s] = 1;
        bool bottom = true;
        for (std::size_t s : comp)
            for (const auto& e : chain.rows[s]) bottom = bottom && in[e.first];
        if (bottom) out.push_back(std::move(comp));
    }
    return out;
}

ProbVerdict ProbVerdict::exact(Rational v)
{
    ProbVerdict p;
    v.canonicalize();
    if (v == 1) {
        p.tag = Tag::One;
    } else if (v == 0) {
        p.tag = Tag::Zero;
    } else {
        p.tag = Tag::Exact;
    }
    p.value = v;
    p.lower = v;
    p.upper = v;
    return p;
}

ProbVerdict ProbVerdict::interval(Rational lo, Rational hi, std::string why)
{
    if (lo > hi) throw Error(ErrorKind::InvalidArgument, "interval with lower > upper");
    ProbVerdict p;
    p.tag = Tag::Interval;
    p.lower = std::move(lo);
    p.upper = std::move(hi);
    p.reason = std::move(why);
    return p;
}

ProbVerdict ProbVerdict::unknown(std::string why)
{
    ProbVerdict p;
    p.tag = Tag::Unknown;
    p.reason = std::move(why);
    return p;
}

const char* to_string(ProbVerdict::Tag t)
{
    switch (t) {
    case ProbVerdict::Tag::Exact: return "Exact";
    case ProbVerdict::Tag::One: return "One";
    case ProbVerdict::Tag::Zero: return "Zero";
    case ProbVerdict::Tag::Interval: return "Interval";
    case ProbVerdict::Tag::Unknown: return "Unknown";
    }
    return "?";
}

// ---- exact linear solve ----------------------------------------------------------------

std::vector<Rational> solve_linear_serial(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) throw Error(ErrorKind::InvalidArgument, "singular system");
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            const Rational factor = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= factor * a[k][j];
            b[i] -= factor * b[k];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

std::vector<Rational> solve_linear_parallel(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    // Gauss-Jordan: every pivot step clears its column in all other rows independently.
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) throw Error(ErrorKind::InvalidArgument, "singular system");
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        const Rational inv = 1 / a[k][k];
        for (std::size_t j = k; j < n; ++j) a[k][j] *= inv;
        b[k] *= inv;
        const auto& pivot = a[k];
        const Rational& bk = b[k];
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            if (i == k || a[i][k] == 0) continue;
            const Rational factor = a[i][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= factor * pivot[j];
            b[i] -= factor * bk;
        }
    }
    return b;
}

// ---- open sets -------------------------------------------------------------------------

Rational prob_open_exact(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0)
{
    if (!w.is_finite()) throw Error(ErrorKind::InvalidArgument, "prob_open_exact needs a finite generator list");
    if (w.all_plain()) {
        Rational total(0);
        for (const auto& p : w.reduced())
            if (p.front() == v0) total += cyl_prob(m, p).value();
        total.canonicalize();
        return total;
    }
    const Path base{v0};
    return cover_profile(m, *w.monitor(), base, std::max<std::size_t>(1, w.max_generator_length())).covered;
}

namespace {

bool covered_directly(const OpenCondition& w, PathView path)
{
    if (w.is_finite()) {
        return std::any_of(w.generators().begin(), w.generators().end(),
                           [&](const CylinderPattern& p) { return p.covers(path); });
    }
    return w.membership(path).verdict == Verdict::In;
}

// Sum over every full word of `depth` steps below `path` (no pruning).
void brute_dfs(const ReasonableMeasure& m, const OpenCondition& w, Path& path, const Rational& mass,
               std::size_t depth, Rational& acc)
{
    if (path.size() == depth + 1) {
        if (covered_directly(w, path)) acc += mass;
        return;
    }
    const FiniteGraph& g = m.graph();
    const std::size_t vi = g.index_of(path.back());
    const auto succ = g.successor_indices(vi);
    for (std::size_t k = 0; k < succ.size(); ++k) {
        path.push_back(g.vertex_at(succ[k]));
        brute_dfs(m, w, path, mass * m.transition_at(vi, k), depth, acc);
        path.pop_back();
    }
}

struct Seed {
    Path path;
    Rational mass;
};

std::vector<Seed> split_words(const ReasonableMeasure& m, Vertex v0, std::size_t depth, std::size_t want)
{
    const FiniteGraph& g = m.graph();
    std::vector<Seed> layer{{{v0}, Rational(1)}};
    while (layer.size() < want && layer.front().path.size() < depth + 1) {
        std::vector<Seed> next;
        for (const auto& s : layer) {
            const std::size_t vi = g.index_of(s.path.back());
            const auto succ = g.successor_indices(vi);
            for (std::size_t k = 0; k < succ.size(); ++k) {
                Seed c{s.path, s.mass * m.transition_at(vi, k)};
                c.path.push_back(g.vertex_at(succ[k]));
                next.push_back(std::move(c));
            }
        }
        layer = std::move(next);
    }
    return layer;
}

} // namespace

Rational brute_force_open_mass_serial(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0,
                                      std::size_t depth)
{
    Rational acc(0);
    Path path{v0};
    brute_dfs(m, w, path, Rational(1), depth, acc);
    acc.canonicalize();
    return acc;
}

Rational brute_force_open_mass_parallel(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0,
                                        std::size_t depth)
{
    const auto seeds = split_words(m, v0, depth, 256);
    std::vector<Rational> partial(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(seeds.size()); ++i) {
        Path path = seeds[static_cast<std::size_t>(i)].path;
        brute_dfs(m, w, path, seeds[static_cast<std::size_t>(i)].mass, depth, partial[static_cast<std::size_t>(i)]);
    }
    Rational acc(0);
    for (const auto& p : partial) acc += p;
    acc.canonicalize();
    return acc;
}

// ---- parity ----------------------------------------------------------------------------

ParitySolution solve_parity(const ReasonableMeasure& m, const ParityCondition& w, Vertex v0, bool parallel)
{
    const ProductChain chain = build_product(m, w, v0);
    const std::size_t n = chain.states.size();
    const auto bottoms = bsccs(chain);
    ParitySolution sol;
    sol.product_states = n;
    sol.bscc_count = bottoms.size();

    std::vector<signed char> fixed(n, -1); // 1: accepting bottom, 0: cannot reach one
    for (const auto& comp : bottoms) {
        unsigned lo = ~0u;
        for (std::size_t s : comp) lo = std::min(lo, chain.priority[s]);
        const bool acc = lo % 2 == 0;
        sol.accepting_bsccs += acc ? 1 : 0;
        for (std::size_t s : comp) fixed[s] = acc ? 1 : 0;
    }
    // States that cannot reach an accepting bottom component have probability 0.
    std::vector<std::vector<std::size_t>> pred(n);
    for (std::size_t s = 0; s < n; ++s)
        for (const auto& e : chain.rows[s]) pred[e.first].push_back(s);
    std::vector<char> reach(n, 0);
    std::vector<std::size_t> work;
    for (std::size_t s = 0; s < n; ++s)
        if (fixed[s] == 1) {
            reach[s] = 1;
            work.push_back(s);
        }
    while (!work.empty()) {
        const std::size_t s = work.back();
        work.pop_back();
        for (std::size_t r : pred[s])
            if (!reach[r]) {
                reach[r] = 1;
                work.push_back(r);
            }
    }
    for (std::size_t s = 0; s < n; ++s)
        if (!reach[s]) fixed[s] = 0;

    if (fixed[chain.initial] >= 0) {
        sol.probability = fixed[chain.initial];
        return sol;
    }
    std::vector<std::size_t> var(n, n);
    std::vector<std::size_t> unknowns;
    for (std::size_t s = 0; s < n; ++s)
        if (fixed[s] < 0) {
            var[s] = unknowns.size();
            unknowns.push_back(s);
        }
    const std::size_t k = unknowns.size();
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
    std::vector<Rational> b(k);
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t s = unknowns[r];
        a[r][r] += 1;
        for (const auto& [t, p] : chain.rows[s]) {
            if (fixed[t] < 0) {
                a[r][var[t]] -= p;
            } else if (fixed[t] == 1) {
                b[r] += p;
            }
        }
    }
    const auto x = parallel ? solve_linear_parallel(std::move(a), std::move(b))
                            : solve_linear_serial(std::move(a), std::move(b));
    sol.probability = x[var[chain.initial]];
    sol.probability.canonicalize();
    return sol;
}

Rational prob_parity_exact(const ReasonableMeasure& m, const ParityCondition& w, Vertex v0)
{
    return solve_parity(m, w, v0).probability;
}

// ---- qualitative -----------------------------------------------------------------------

namespace {

ProbVerdict open_verdict(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0, std::size_t depth)
{
    if (w.is_finite()) return ProbVerdict::exact(prob_open_exact(m, w, v0));
    if (!w.monitor()) return ProbVerdict::unknown("stream-backed generators cannot be summed exactly");
    const Path base{v0};
    if (const auto& cert = w.certificate()) {
        const std::size_t d = std::max<std::size_t>(1, cert->check_depth);
        const auto prof = cover_profile(m, *w.monitor(), base, d);
        if (prof.covered >= 1 - cert->epsilon(d)) {
            ProbVerdict v = ProbVerdict::exact(Rational(1));
            v.lower = prof.covered;
            v.reason = cert->argument;
            return v;
        }
        return ProbVerdict::interval(prof.covered, 1 - prof.excluded, "certificate bound not met at depth " +
                                                                          std::to_string(d));
    }
    const auto prof = cover_profile(m, *w.monitor(), base, depth);
    if (prof.covered == 1) return ProbVerdict::exact(Rational(1));
    if (prof.excluded == 1) return ProbVerdict::exact(Rational(0));
    return ProbVerdict::interval(prof.covered, 1 - prof.excluded,
                                 "mass bounds after " + std::to_string(prof.depth) + " steps");
}

} // namespace

ProbVerdict is_prob_one(const ReasonableMeasure& m, const Condition& w, Vertex v0, std::size_t depth,
                        std::size_t levels)
{
    if (const auto* o = std::get_if<OpenCondition>(&w)) return open_verdict(m, *o, v0, depth);
    if (const auto* p = std::get_if<ParityCondition>(&w)) return ProbVerdict::exact(prob_parity_exact(m, *p, v0));
    if (std::holds_alternative<OracleCondition>(w)) return ProbVerdict::unknown("oracle condition");
    const auto& gd = std::get<GdCondition>(w);
    const std::size_t top = gd.level_count() ? std::min(*gd.level_count(), levels) : levels;
    Rational upper(1);
    bool all_one = true;
    for (std::size_t n = 1; n <= top; ++n) {
        const auto v = open_verdict(m, gd.level(n), v0, depth);
        if (v.tag == ProbVerdict::Tag::Zero) return ProbVerdict::exact(Rational(0));
        if (v.tag == ProbVerdict::Tag::Exact || v.tag == ProbVerdict::Tag::Interval) upper = std::min(upper, v.upper);
        all_one = all_one && v.tag == ProbVerdict::Tag::One;
    }
    const bool exhaustive = gd.level_count() && *gd.level_count() <= levels;
    if (all_one && (gd.levels_certified() || exhaustive)) {
        ProbVerdict v = ProbVerdict::exact(Rational(1));
        v.reason = "levels 1.." + std::to_string(top) + " certified";
        return v;
    }
    return ProbVerdict::interval(Rational(0), upper, "Gd levels not all certified");
}

bool is_large_omega_regular(const ParityCondition& w, const FiniteGraph& g, Vertex v0)
{
    return prob_parity_exact(ReasonableMeasure::uniform(g), w, v0) == 1;
}

bool cross_measure_agrees(const ParityCondition& w, Vertex v0, std::uint64_t seed)
{
    const FiniteGraph& g = w.graph();
    auto klass = [](const Rational& p) { return p == 1 ? 1 : (p == 0 ? 0 : 2); };
    const int ref = klass(prob_parity_exact(ReasonableMeasure::uniform(g), w, v0));
    for (std::uint64_t k = 0; k < 3; ++k) {
        Rng rng(stream_seed(seed, k));
        WeightMap wm;
        for (const auto& e : g.edges()) wm[e] = Rational(static_cast<long>(1 + rng() % 9));
        if (klass(prob_parity_exact(ReasonableMeasure(g, wm), w, v0)) != ref) return false;
    }
    return true;
}

// ---- Monte Carlo -----------------------------------------------------------------------

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z)
{
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "Wilson interval needs n >= 1");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
    const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

struct Trial {
    Verdict verdict = Verdict::Unknown;
    std::vector<char> levels;
};

Trial run_trial(const ReasonableMeasure& m, const Condition& w, Vertex v0, std::size_t depth, std::uint64_t seed,
                std::size_t i, std::size_t levels)
{
    Rng rng(stream_seed(seed, i));
    const PlayPrefix p = sample_path(m, v0, depth, rng);
    Trial t;
    if (const auto* gd = std::get_if<GdCondition>(&w)) {
        const std::size_t top = gd->level_count() ? std::min(*gd->level_count(), levels) : levels;
        for (std::size_t n = 1; n <= top; ++n)
            t.levels.push_back(gd->level(n).membership(p.path()).verdict == Verdict::In ? 1 : 0);
        t.verdict = gd->membership(p.path(), levels).verdict;
    } else {
        t.verdict = membership_at_depth(w, p.path()).verdict;
    }
    return t;
}

MonteCarloResult summarize(const std::vector<Trial>& trials)
{
    MonteCarloResult r;
    for (const auto& t : trials) {
        switch (t.verdict) {
        case Verdict::In: ++r.in; break;
        case Verdict::Out: ++r.out; break;
        case Verdict::Unknown: ++r.unknown; break;
        }
        if (r.level_in.size() < t.levels.size()) r.level_in.resize(t.levels.size(), 0);
        for (std::size_t k = 0; k < t.levels.size(); ++k) r.level_in[k] += static_cast<std::size_t>(t.levels[k]);
    }
    const std::size_t n = trials.size();
    const auto lo = wilson_interval(r.in, n).first;
    const auto hi = wilson_interval(n - r.out, n).second;
    r.interval = ProbVerdict::interval(Rational(lo), Rational(std::max(lo, hi)), "Wilson 99% bounds");
    return r;
}

} // namespace

MonteCarloResult monte_carlo_serial(const ReasonableMeasure& m, const Condition& w, Vertex v0, std::size_t depth,
                                    std::size_t samples, std::uint64_t seed, std::size_t levels)
{
    if (samples == 0) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
    std::vector<Trial> trials;
    trials.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) trials.push_back(run_trial(m, w, v0, depth, seed, i, levels));
    return summarize(trials);
}

MonteCarloResult monte_carlo(const ReasonableMeasure& m, const Condition& w, Vertex v0, std::size_t depth,
                             std::size_t samples, std::uint64_t seed, std::size_t levels)
{
    if (samples == 0) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
    std::vector<Trial> trials(samples);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(samples); ++i) {
        trials[static_cast<std::size_t>(i)] = run_trial(m, w, v0, depth, seed, static_cast<std::size_t>(i), levels);
    }
    return summarize(trials);
}

} // namespace bmg
