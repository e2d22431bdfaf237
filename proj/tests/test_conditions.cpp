#include "support.hpp"

#include "bmgame/conditions.hpp"
#include "bmgame/corpus.hpp"
#include "bmgame/error.hpp"
#include "bmgame/monitor.hpp"

#include <doctest.h>

using namespace bmg;

namespace {

// Naive verdict of a finite pattern union on `path`: look at every extension up to the
// longest pattern.
MonitorStatus naive_status(const FiniteGraph& g, const std::vector<CylinderPattern>& pats, const Path& path)
{
    std::size_t longest = 0;
    for (const auto& p : pats) longest = std::max(longest, p.length());
    const std::size_t extra = longest > path.size() ? longest - path.size() : 0;
    bool all = true, none = true;
    for (auto ext : test::all_paths(g, path.back(), extra)) {
        Path full = path;
        full.insert(full.end(), ext.begin() + 1, ext.end());
        bool hit = false;
        for (const auto& p : pats) {
            if (p.length() > full.size()) continue;
            bool ok = true;
            for (std::size_t i = 0; i < p.length(); ++i) ok = ok && p.admits(i, full[i]);
            hit = hit || ok;
        }
        all = all && hit;
        none = none && !hit;
    }
    if (all) return MonitorStatus::Covered;
    if (none) return MonitorStatus::Excluded;
    return MonitorStatus::Open;
}

CylinderPattern random_pattern(Rng& rng, std::size_t alphabet)
{
    CylinderPattern p;
    const std::size_t len = 1 + rng() % 5;
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<Vertex> allowed;
        for (std::size_t v = 0; v < alphabet; ++v)
            if (rng() % 2) allowed.push_back(static_cast<Vertex>(v));
        if (allowed.empty()) allowed.push_back(static_cast<Vertex>(rng() % alphabet));
        p.allowed.push_back(allowed);
    }
    p.allowed[0] = {0}; // plays start at 0
    return p;
}

// Lasso acceptance by unrolling: every period of the boundary-state sequence is at most
// the number of states, so iterations [S, 2S) contain a full period.
bool naive_lasso(const ParityCondition& w, const Path& stem, const Continuation& loop)
{
    std::size_t q = w.run(stem);
    const std::size_t s = w.state_count();
    unsigned best = ~0u;
    for (std::size_t it = 0; it < 2 * s; ++it) {
        for (Vertex v : loop.steps) {
            q = w.next(q, v);
            if (it >= s) best = std::min(best, w.priority(q));
        }
    }
    return best % 2 == 0;
}

// Hand-built safety automaton for "blocks a a" (w w^R with |w| = 1) over {0,1,2}:
// state 0 = between blocks, 1+a = waiting for a second a, 4 = dead.
ParityCondition hand_w1(std::shared_ptr<const FiniteGraph> g)
{
    std::vector<std::vector<std::size_t>> d(5, std::vector<std::size_t>(3, 4));
    for (std::size_t a = 0; a < 3; ++a) {
        d[0][a] = 1 + a;
        d[1 + a][a] = 0;
    }
    return ParityCondition(g, 5, 0, d, {0, 0, 0, 0, 1}, "hand-w1");
}

} // namespace

TEST_SUITE("conditions") {

TEST_CASE("pattern union monitor is sound, and exact once every pattern is decided")
{
    Rng rng(41);
    const auto g = test::c012();
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<CylinderPattern> pats;
        for (std::size_t i = 0, k = 1 + rng() % 3; i < k; ++i) pats.push_back(random_pattern(rng, 3));
        const PatternUnionMonitor mon(pats);
        for (int probe = 0; probe < 20; ++probe) {
            const auto path = test::random_walk(g, 0, rng() % 6, rng);
            const auto got = mon.status_of(path);
            const auto want = naive_status(g, pats, path);
            if (got == MonitorStatus::Covered) CHECK(want == MonitorStatus::Covered);
            CHECK((got == MonitorStatus::Excluded) == (want == MonitorStatus::Excluded));
            std::size_t longest = 0;
            for (const auto& p : pats) longest = std::max(longest, p.length());
            if (path.size() >= longest) CHECK(got == want);
        }
    }
}

TEST_CASE("property: monitor verdicts are absorbing")
{
    Rng rng(43);
    const auto g = test::c012();
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<CylinderPattern> pats{random_pattern(rng, 3), random_pattern(rng, 3)};
        const PatternUnionMonitor mon(pats);
        const auto path = test::random_walk(g, 0, 10, rng);
        auto state = mon.initial(path[0]);
        MonitorStatus prev = mon.status(state);
        for (std::size_t i = 1; i < path.size(); ++i) {
            state = mon.step(state, path[i]);
            const auto now = mon.status(state);
            if (prev != MonitorStatus::Open) CHECK(now == prev);
            prev = now;
        }
    }
}

TEST_CASE("open condition membership is tri-state")
{
    const auto w = OpenCondition::cylinders({{0, 0, 1}, {0, 1}}, "w");
    CHECK(w.membership(Path{0, 1}).verdict == Verdict::In);
    CHECK(w.membership(Path{0, 0}).verdict == Verdict::Unknown);
    CHECK(w.membership(Path{0, 0, 0}).verdict == Verdict::Out);
    CHECK(w.reduced().size() == 2);
}

TEST_CASE("stream membership honours the budget")
{
    // Generators 0 1^k 0 for k >= 1, infinitely many.
    auto gens = [](std::size_t i) -> std::optional<CylinderPattern> {
        Path p{0};
        for (std::size_t k = 0; k <= i; ++k) p.push_back(1);
        p.push_back(0);
        return CylinderPattern::cylinder(p);
    };
    const auto w = OpenCondition::stream(gens, 50, "ones-then-zero");
    CHECK(w.membership(Path{0, 1, 1, 1, 0}).verdict == Verdict::In);
    const auto long_run = w.membership(Path(60, 1));
    CHECK(long_run.verdict == Verdict::Unknown);
    const auto stuck = w.membership(Path{0, 1, 1});
    CHECK(stuck.verdict == Verdict::Unknown);
    CHECK(stuck.budget_exceeded);
    // A finite stream that runs out decides Out.
    auto two = [](std::size_t i) -> std::optional<CylinderPattern> {
        if (i >= 2) return std::nullopt;
        return CylinderPattern::cylinder(Path{0, static_cast<Vertex>(i)});
    };
    CHECK(OpenCondition::stream(two, 10, "x").membership(Path{1}).verdict == Verdict::Out);
}

TEST_CASE("cover profile mass equals brute-force mass")
{
    Rng rng(47);
    const auto g = test::c012();
    for (int trial = 0; trial < 30; ++trial) {
        const ReasonableMeasure m(g, test::random_weights(g, rng));
        std::vector<CylinderPattern> pats{random_pattern(rng, 3), random_pattern(rng, 3)};
        const PatternUnionMonitor mon(pats);
        const auto prof = cover_profile(m, mon, Path{0}, 6);
        Rational brute(0);
        for (const auto& p : test::all_paths(g, 0, 6))
            if (naive_status(g, pats, p) == MonitorStatus::Covered) brute += cyl_prob(m, p).value();
        CHECK(prof.covered == brute);
        CHECK(prof.open() >= 0);
    }
}

TEST_CASE("Gd levels: first uncertified level and never-In for infinite families")
{
    const auto w = run_length_levels();
    CHECK(w.first_uncertified(Path{0, 1}, 5) == std::size_t{2});
    CHECK(w.first_uncertified(Path{0, 0, 0, 1, 0, 1}, 3) == std::nullopt);
    CHECK(w.membership(Path{0, 0, 0, 0, 0, 0, 0, 1}).verdict != Verdict::In);
    const GdCondition finite([](std::size_t n) { return OpenCondition::cylinders({{0, static_cast<Vertex>(n % 2)}}); },
                             "one-level", 1);
    CHECK(finite.membership(Path{0, 1}).verdict == Verdict::In);
}

TEST_CASE("parity lasso acceptance matches unrolling")
{
    Rng rng(53);
    auto g = std::make_shared<const FiniteGraph>(test::c012());
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t s = 1 + rng() % 4;
        std::vector<std::vector<std::size_t>> d(s, std::vector<std::size_t>(3));
        std::vector<unsigned> pr(s);
        for (std::size_t q = 0; q < s; ++q) {
            for (auto& t : d[q]) t = rng() % s;
            pr[q] = static_cast<unsigned>(rng() % 4);
        }
        const ParityCondition w(g, s, 0, d, pr);
        const auto stem = test::random_walk(*g, 0, rng() % 4, rng);
        const auto lw = test::random_walk(*g, stem.back(), 1 + rng() % 4, rng);
        const Continuation loop(stem.back(), Path(lw.begin() + 1, lw.end()));
        CHECK(lasso_membership(w, stem, loop) == naive_lasso(w, stem, loop));
    }
}

TEST_CASE("lasso must close")
{
    auto g = std::make_shared<const FiniteGraph>(FiniteGraph({0, 1}, {{0, 1}, {1, 0}, {1, 1}}));
    const ParityCondition w(g, 1, 0, {{0, 0}}, {0});
    try {
        lasso_membership(w, Path{0}, Continuation(0, {1, 0}));
        CHECK(true);
        lasso_membership(w, Path{1}, Continuation(1, {0}));
        FAIL("open loop accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::LoopNotClosed);
    }
}

TEST_CASE("block-palindrome automaton: b = 1 agrees with the hand-built oracle")
{
    auto g = std::make_shared<const FiniteGraph>(test::c012());
    const auto built = block_palindrome_dpa(g, 1);
    const auto hand = hand_w1(g);
    // The worked lasso: stem 2.2 then (00)^omega is in, (01)^omega is not.
    CHECK(lasso_membership(built, Path{2, 2}, Continuation(2, {0, 0})));
    CHECK_FALSE(lasso_membership(built, Path{2, 2}, Continuation(2, {0, 1})));
    Rng rng(59);
    for (int trial = 0; trial < 300; ++trial) {
        const auto stem = test::random_walk(*g, 2, rng() % 5, rng);
        const auto lw = test::random_walk(*g, stem.back(), 1 + rng() % 4, rng);
        const Continuation loop(stem.back(), Path(lw.begin() + 1, lw.end()));
        CHECK(lasso_membership(built, stem, loop) == lasso_membership(hand, stem, loop));
    }
    // Biased lassos made of doubled letters hit the accepting side often.
    for (int trial = 0; trial < 100; ++trial) {
        Path stem{2, 2};
        Path steps;
        for (int i = 0, k = 1 + static_cast<int>(rng() % 3); i < k; ++i) {
            const Vertex a = static_cast<Vertex>(rng() % 3);
            steps.push_back(a);
            steps.push_back(a);
        }
        CHECK(lasso_membership(built, stem, Continuation(2, steps)));
        CHECK(lasso_membership(hand, stem, Continuation(2, steps)));
    }
}

TEST_CASE("palindrome-pair decomposition against naive recursion")
{
    std::function<bool(const Path&, std::size_t)> naive = [&](const Path& p, std::size_t from) {
        if (from == p.size()) return true;
        for (std::size_t half = 1; from + 2 * half <= p.size(); ++half) {
            bool pal = true;
            for (std::size_t i = 0; i < 2 * half; ++i) pal = pal && p[from + i] == p[from + 2 * half - 1 - i];
            if (pal && naive(p, from + 2 * half)) return true;
        }
        return false;
    };
    const auto g = test::c012();
    for (std::size_t len = 1; len <= 8; ++len)
        for (const auto& p : test::all_paths(g, 2, len)) CHECK(palindrome_pair_decomposable(p) == naive(p, 0));
}

TEST_CASE("open mass search reaches its target with covered cylinders")
{
    const auto m = test::uniform(2);
    const auto w = triangular_truncation(4);
    const auto found = open_mass_search(*m, w, Path{0}, Rational(3, 4), 10000);
    REQUIRE(found.set);
    Rational mass(0);
    for (const auto& p : *found.set) {
        CHECK(w.membership(p).verdict == Verdict::In);
        mass += cyl_prob(*m, p).value();
    }
    CHECK(mass >= Rational(3, 4));
    // P(W) = 7/8 < 1: asking for everything exhausts the space.
    const auto all = open_mass_search(*m, w, Path{0}, Rational(1), 10000);
    CHECK_FALSE(all.set);
    CHECK(all.space_exhausted);
    CHECK(all.reached == Rational(7, 8));
}

} // TEST_SUITE
