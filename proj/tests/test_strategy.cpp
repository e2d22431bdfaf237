#include "support.hpp"

#include "bmgame/corpus.hpp"
#include "bmgame/engine.hpp"
#include "bmgame/error.hpp"
#include "bmgame/strategy.hpp"

#include <doctest.h>

using namespace bmg;

namespace {

Strategy always(std::vector<Vertex> steps, std::string name)
{
    return Strategy::move_counting([steps](Vertex v, std::size_t) { return Continuation(v, steps); }, name);
}

} // namespace

TEST_SUITE("strategy") {

TEST_CASE("each kind reads only what it is allowed to")
{
    PlayPrefix t(0);
    t.append(Continuation(0, {1, 1}));
    t.append(Continuation(1, {0}));
    t.append(Continuation(0, {0, 1}));

    const auto pos = Strategy::positional({{0, Continuation(0, {1})}, {1, Continuation(1, {0, 0})}}, "p");
    CHECK(respond(pos, t, 2) == Continuation(1, {0, 0}));

    const auto mc = Strategy::move_counting(
        [](Vertex v, std::size_t n) { return Continuation(v, std::vector<Vertex>(n, 1)); }, "1^n");
    CHECK(respond(mc, t, 2).steps == std::vector<Vertex>{1, 1});

    const auto lc = Strategy::length_counting(
        [](Vertex v, std::size_t n) { return Continuation(v, std::vector<Vertex>(n % 3 + 1, 0)); }, "len");
    CHECK(respond(lc, t, 2).steps.size() == t.length() % 3 + 1);

    std::vector<Vertex> seen;
    const auto lm = Strategy::last_move(
        [&seen](PathView w) {
            seen.assign(w.begin(), w.end());
            return Continuation(w.back(), {0});
        },
        "lm");
    respond(lm, t, 2);
    CHECK(seen == std::vector<Vertex>{0, 1}); // steps only after the first move
    respond(lm, t.truncated(1), 1);
    CHECK(seen == std::vector<Vertex>{0, 1, 1}); // the first word carries v0
}

TEST_CASE("partial tables and wrong anchors are errors")
{
    const auto pos = Strategy::positional({{0, Continuation(0, {1})}}, "partial");
    PlayPrefix t(1);
    try {
        respond(pos, t, 1);
        FAIL("missing entry answered");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingTableEntry);
    }
    const auto bad = Strategy::move_counting([](Vertex, std::size_t) { return Continuation(7, {0}); }, "bad");
    CHECK_THROWS_AS(respond(bad, t, 1), Error);
}

TEST_CASE("consistency of a transcript with a strategy")
{
    const auto g = test::c01();
    const auto pl0 = always({1}, "ones");
    const auto pl1 = random_player(*test::uniform(2), 5);
    const auto tr = play_classical(g, 0, pl1, pl0, 6);
    CHECK(is_consistent(tr.play, pl0, Player::Zero));
    CHECK(is_consistent(tr.play, pl1, Player::One));
    CHECK_FALSE(is_consistent(tr.play, always({0}, "zeros"), Player::Zero));
}

TEST_CASE("g_n composes the first n answers")
{
    const auto h = Strategy::move_counting(
        [](Vertex v, std::size_t n) { return Continuation(v, std::vector<Vertex>(n, static_cast<Vertex>(n % 2))); },
        "h");
    const auto g3 = gn_from_move_counting(h, test::c01(), 3);
    // h(.,1) = 1, h(.,2) = 00, h(.,3) = 111.
    CHECK(g3.as<PositionalRule>()->table.at(0).steps == std::vector<Vertex>{1, 0, 0, 1, 1, 1});
}

TEST_CASE("diagonal phi enumerates every index infinitely often")
{
    std::vector<std::size_t> head;
    for (std::size_t n = 1; n <= 10; ++n) head.push_back(diagonal_phi(n));
    CHECK(head == std::vector<std::size_t>{1, 1, 2, 1, 2, 3, 1, 2, 3, 4});
    std::map<std::size_t, std::size_t> hits;
    for (std::size_t n = 1; n <= 5050; ++n) ++hits[diagonal_phi(n)];
    for (std::size_t k = 1; k <= 100; ++k) CHECK(hits[k] == 101 - k);
}

TEST_CASE("length-counting fold: answers are the f-chain over all prefixes")
{
    const auto g = test::c01();
    // f answers with the complement of the last vertex.
    const auto f = Strategy::general([](const PlayPrefix& p) { return Continuation(p.last(), {1 - p.last()}); },
                                     "flip", 1);
    const auto h = length_counting_from_general(f, g, 0);
    // Prefixes of length 3 ending in 1, lexicographic: 001, 011.
    // 001 -> f = 0, then 0010 -> f = 1: total steps 0 1.
    CHECK(respond(h, PlayPrefix::from_path({0, 0, 1}), 1).steps == std::vector<Vertex>{0, 1});
    CHECK(respond(h, PlayPrefix::from_path({0}), 1).steps == std::vector<Vertex>{1});
    CHECK_THROWS_AS(length_counting_from_general(f, g, 0, 4).as<LengthCountingRule>()->fn(0, 10), Error);
}

TEST_CASE("property: every play of the fold replays f inside each move")
{
    const auto b = get_bundle("ex_pos");
    const auto& f = b.strategy("winner");
    const auto h = length_counting_from_general(f, b.graph(), b.v0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        // Plays stop at the In certificate, which keeps the fold's enumeration small.
        const auto tr = play_classical(b.graph(), b.v0, random_player(*b.measure, seed, 2), h, 4, b.condition);
        CHECK(tr.verdict == GameVerdict::In);
        for (const auto& off : replay_general(f, tr.play)) CHECK(off.has_value());
    }
}

TEST_CASE("positional family to move-counting")
{
    auto fam = [](std::size_t k) {
        const Vertex x = static_cast<Vertex>(k % 2);
        return Strategy::positional({{0, Continuation(0, {x})}, {1, Continuation(1, {x})}}, "c");
    };
    const auto h = move_counting_from_positional_family(fam);
    std::vector<Vertex> first;
    for (std::size_t n = 1; n <= 6; ++n) first.push_back(respond(h, PlayPrefix(0), n).steps[0]);
    // phi = 1,1,2,1,2,3 -> parity 1,1,0,1,0,1.
    CHECK(first == std::vector<Vertex>{1, 1, 0, 1, 0, 1});
}

TEST_CASE("BSCC conversion threads the whole table")
{
    // 0 -> 1 only; {1,2} is the bottom component.
    const FiniteGraph g({0, 1, 2}, {{0, 1}, {1, 2}, {2, 1}, {2, 2}});
    const std::vector<Continuation> table{Continuation(1, {2, 2}), Continuation(2, {1})};
    const auto f = bounded_move_counting_to_positional(g, table);
    CHECK(positional_table_valid(g, f));
    const auto& t = f.as<PositionalRule>()->table;
    CHECK(t.at(0).steps.front() == 1);
    // From 1 the answer contains both table words.
    const auto& from1 = t.at(1).steps;
    Path w{1};
    w.insert(w.end(), from1.begin(), from1.end());
    auto contains = [&](const Continuation& c) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] != c.anchor || i + c.steps.size() >= w.size() + 0) continue;
            if (std::equal(c.steps.begin(), c.steps.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 1))) return true;
        }
        return false;
    };
    CHECK(contains(table[0]));
    CHECK(contains(table[1]));
    // A word leaving its component is rejected.
    try {
        bounded_move_counting_to_positional(g, {Continuation(2, {1}), Continuation(1, {0})});
        FAIL("escape accepted");
    } catch (const Error& e) {
        CHECK((e.kind() == ErrorKind::OutputEscapesBSCC || e.kind() == ErrorKind::EdgeViolation));
    }
}

TEST_CASE("table check reports the first missing answer")
{
    const auto g = test::c01();
    const auto h = Strategy::move_counting(
        [](Vertex v, std::size_t n) { return Continuation(v, {static_cast<Vertex>(n > 3 ? 0 : 1)}); }, "h");
    CHECK_NOTHROW(check_prop5_table(g, h, {Continuation(0, {1}), Continuation(1, {1}), Continuation(0, {0}),
                                           Continuation(1, {0})},
                                    8));
    try {
        check_prop5_table(g, h, {Continuation(0, {1}), Continuation(1, {1})}, 8);
        FAIL("mismatch missed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TableMismatch);
    }
}

TEST_CASE("random player is a pure function of seed and transcript")
{
    const auto m = test::uniform(3);
    const auto a = random_player(*m, 9, 3);
    const auto b = random_player(*m, 9, 3);
    PlayPrefix t(1);
    t.append(Continuation(1, {2, 0}));
    CHECK(respond(a, t, 1) == respond(b, t, 1));
    for (int i = 0; i < 50; ++i) {
        t.append(respond(a, t, 1));
        CHECK(t.move(t.move_count() - 1).length() <= 3);
    }
    CHECK(m->graph().is_path(t.path()));
}

} // TEST_SUITE
