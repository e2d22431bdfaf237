#include "support.hpp"

#include "bmgame/error.hpp"

#include <doctest.h>

using namespace bmg;

namespace {

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Parse;
}

} // namespace

TEST_SUITE("graph") {

TEST_CASE("construction rejects malformed graphs")
{
    CHECK(kind_of([] { FiniteGraph({0, 1}, {{0, 1}}); }) == ErrorKind::SinkVertex);
    CHECK(kind_of([] { FiniteGraph({0, 1}, {{0, 1}, {1, 2}}); }) == ErrorKind::DanglingEdge);
    CHECK(kind_of([] { FiniteGraph({0, 0}, {{0, 0}}); }) == ErrorKind::DuplicateVertex);
    CHECK(kind_of([] { test::c01().index_of(7); }) == ErrorKind::UnknownVertex);
}

TEST_CASE("complete graphs and successor order")
{
    const auto g = test::c012();
    CHECK(g.size() == 3);
    CHECK(g.edge_count() == 9);
    const auto s = g.successors(1);
    CHECK(std::vector<Vertex>(s.begin(), s.end()) == std::vector<Vertex>{0, 1, 2});
    // Vertex order follows construction order, not numeric order.
    const FiniteGraph h({5, 2}, {{5, 2}, {2, 5}, {2, 2}});
    const auto t = h.successors(2);
    CHECK(std::vector<Vertex>(t.begin(), t.end()) == std::vector<Vertex>{5, 2});
    CHECK(h.edges() == std::vector<Edge>{{5, 2}, {2, 5}, {2, 2}});
}

TEST_CASE("continuations are checked against the edges")
{
    const FiniteGraph g({0, 1}, {{0, 1}, {1, 0}, {1, 1}});
    CHECK_NOTHROW(check_continuation(g, Continuation(0, {1, 1, 0})));
    CHECK(kind_of([&] { check_continuation(g, Continuation(0, {0})); }) == ErrorKind::EdgeViolation);
    CHECK(kind_of([&] { check_continuation(g, Continuation(0, {})); }) == ErrorKind::InvalidArgument);
    CHECK(g.is_path(Path{1, 1, 0, 1}));
    CHECK_FALSE(g.is_path(Path{0, 0}));
}

TEST_CASE("play prefixes track move boundaries")
{
    PlayPrefix p(0);
    CHECK(p.next_player() == Player::One);
    p.append(Continuation(0, {1, 1}));
    p.append(Continuation(1, {0}));
    p.append(Continuation(0, {0, 1, 0}));
    CHECK(p.length() == 7);
    CHECK(p.move_count() == 3);
    CHECK(p.moves_by(Player::One) == 2);
    CHECK(p.moves_by(Player::Zero) == 1);
    CHECK(p.next_player() == Player::Zero);
    CHECK(p.move(1) == Continuation(1, {0}));
    CHECK(p.move(2) == Continuation(0, {0, 1, 0}));
    const PlayPrefix t = p.truncated(2);
    CHECK(Path(t.path().begin(), t.path().end()) == Path{0, 1, 1, 0});
    CHECK(kind_of([&] { p.append(Continuation(1, {0})); }) == ErrorKind::AnchorMismatch);
}

TEST_CASE("property: truncation then re-append reproduces the prefix")
{
    Rng rng(7);
    const auto g = test::c012();
    for (int trial = 0; trial < 200; ++trial) {
        PlayPrefix p(static_cast<Vertex>(rng() % 3));
        const std::size_t moves = 1 + rng() % 6;
        for (std::size_t i = 0; i < moves; ++i) {
            const auto walk = test::random_walk(g, p.last(), 1 + rng() % 4, rng);
            p.append(Continuation(p.last(), Path(walk.begin() + 1, walk.end())));
        }
        const std::size_t k = rng() % (moves + 1);
        PlayPrefix q = p.truncated(k);
        CHECK(is_prefix(q.path(), p.path()));
        for (std::size_t i = k; i < moves; ++i) q.append(p.move(i));
        CHECK(q == p);
    }
}

TEST_CASE("enumerate_continuations counts and orders")
{
    const auto g = test::c012();
    const auto all = enumerate_continuations(g, 0, 3);
    CHECK(all.size() == 27);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(all.front() == Continuation(0, {0, 0, 0}));
    const FiniteGraph h({0, 1}, {{0, 1}, {1, 0}, {1, 1}});
    // Paths from 0 of 3 steps: 0-1-{0,1}-..; count by hand = 3.
    CHECK(enumerate_continuations(h, 0, 3).size() == 3);
}

TEST_CASE("reverse re-anchors the reversed steps")
{
    const auto g = test::c012();
    CHECK(reverse(g, Continuation(2, {0, 1}), 2) == Continuation(2, {1, 0}));
    const FiniteGraph h({0, 1}, {{0, 1}, {1, 0}, {1, 1}});
    CHECK(kind_of([&] { reverse(h, Continuation(1, {1, 0}), 0); }) == ErrorKind::EdgeViolation);
}

TEST_CASE("path distance is an ultrametric on finite observations")
{
    CHECK(path_distance(Path{0, 1, 1}, Path{0, 1, 0}).value() == dyadic(2));
    const auto d = path_distance(Path{0, 1}, Path{0, 1, 1});
    CHECK(d.lower_bound_only());
    CHECK(d.common_length == 2);
    Rng rng(3);
    const auto g = test::c01();
    for (int i = 0; i < 300; ++i) {
        const auto a = test::random_walk(g, 0, 8, rng);
        const auto b = test::random_walk(g, 0, 8, rng);
        const auto c = test::random_walk(g, 0, 8, rng);
        const auto ab = path_distance(a, b).value();
        const auto bc = path_distance(b, c).value();
        const auto ac = path_distance(a, c).value();
        CHECK(ab == path_distance(b, a).value());
        CHECK(ac <= std::max(ab, bc));
    }
}

TEST_CASE("prefix-free sets keep a canonical antichain")
{
    PrefixFreeSet s;
    CHECK(s.insert({0, 1, 1}));
    CHECK(s.insert({0, 0}));
    CHECK_FALSE(s.insert({0, 1, 1, 0})); // already covered
    CHECK(s.insert({0, 1}));              // evicts {0,1,1}
    CHECK(s.size() == 2);
    CHECK(s.covers(Path{0, 1, 0}));
    CHECK_FALSE(s.covers(Path{0}));
    CHECK(s.meets(Path{0}));

    Rng rng(11);
    const auto g = test::c01();
    for (int trial = 0; trial < 100; ++trial) {
        PrefixFreeSet t;
        std::vector<Path> inserted;
        for (int i = 0; i < 12; ++i) {
            inserted.push_back(test::random_walk(g, 0, 1 + rng() % 5, rng));
            t.insert(inserted.back());
        }
        CHECK(t.is_prefix_free());
        // Same union: a long probe is covered iff some inserted path is its prefix.
        for (const auto& probe : test::all_paths(g, 0, 6)) {
            bool naive = false;
            for (const auto& p : inserted) naive = naive || is_prefix(p, probe);
            CHECK(t.covers(probe) == naive);
        }
    }
}

} // TEST_SUITE
