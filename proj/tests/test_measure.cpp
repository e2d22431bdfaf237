#include "support.hpp"

#include "bmgame/error.hpp"

#include <doctest.h>

using namespace bmg;

TEST_SUITE("measure") {

TEST_CASE("weights are validated")
{
    const auto g = test::c01();
    WeightMap w{{{0, 0}, Rational(1)}, {{0, 1}, Rational(1)}, {{1, 0}, Rational(1)}};
    CHECK_THROWS_AS(ReasonableMeasure(g, w), Error);
    w[{1, 1}] = Rational(0);
    try {
        ReasonableMeasure m(g, w);
        FAIL("zero weight accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonPositiveWeight);
    }
}

TEST_CASE("transition rows sum to one")
{
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = test::random_graph(1 + rng() % 5, rng);
        const ReasonableMeasure m(g, test::random_weights(g, rng));
        for (Vertex v : g.vertices()) {
            Rational sum(0);
            for (Vertex s : g.successors(v)) sum += m.transition(v, s);
            CHECK(sum == 1);
        }
        CHECK(m.min_transition() > 0);
    }
}

TEST_CASE("cylinder mass matches the naive product")
{
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = test::random_graph(2 + rng() % 3, rng);
        const auto w = test::random_weights(g, rng);
        const ReasonableMeasure m(g, w);
        const auto p = test::random_walk(g, g.vertex_at(0), rng() % 10, rng);
        CHECK(cyl_prob(m, p).value() == test::naive_cyl(g, w, p));
    }
    // The start vertex carries no factor.
    const auto u = test::uniform(3);
    CHECK(cyl_prob(*u, Path{2}).value() == 1);
    CHECK(cyl_prob(*u, Path{2, 0, 1}).value() == Rational(1, 9));
}

TEST_CASE("property: additivity over one-step extensions")
{
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = test::random_graph(2 + rng() % 3, rng);
        const ReasonableMeasure m(g, test::random_weights(g, rng));
        const auto p = test::random_walk(g, g.vertex_at(0), rng() % 6, rng);
        Rational children(0);
        for (Vertex s : g.successors(p.back())) {
            Path q = p;
            q.push_back(s);
            children += cyl_prob(m, q).value();
        }
        CHECK(children == cyl_prob(m, p).value());
    }
}

TEST_CASE("union and conditional mass")
{
    const auto m = test::uniform(2);
    PrefixFreeSet s;
    s.insert({0, 0});
    s.insert({0, 1, 1});
    CHECK(union_prob(*m, s).value() == Rational(3, 4));
    CHECK(cond_prob(*m, s, Path{0, 1}).value() == Rational(1, 2));
    CHECK(cond_prob(*m, s, Path{0, 0, 1}).value() == 1);
    CHECK(cyl_prob_after(*m, Path{0, 1, 1, 0}, 2) == Rational(1, 4));
}

TEST_CASE("sampling is seeded and follows the edges")
{
    Rng a(99), b(99);
    const auto g = test::c012();
    const ReasonableMeasure m(g, {{{0, 0}, Rational(1)}, {{0, 1}, Rational(2)}, {{0, 2}, Rational(3)},
                                  {{1, 0}, Rational(1)}, {{1, 1}, Rational(1)}, {{1, 2}, Rational(1)},
                                  {{2, 0}, Rational(5)}, {{2, 1}, Rational(1)}, {{2, 2}, Rational(1)}});
    const auto p = sample_path(m, 0, 40, a);
    const auto q = sample_path(m, 0, 40, b);
    CHECK(p == q);
    CHECK(p.length() == 41);
    CHECK(g.is_path(p.path()));
    CHECK(stream_seed(1, 2) != stream_seed(1, 3));
    CHECK(stream_seed(1, 2) == stream_seed(1, 2));
}

TEST_CASE("empirical step frequencies approach the transition row")
{
    const auto g = test::c01();
    const ReasonableMeasure m(g, {{{0, 0}, Rational(3)}, {{0, 1}, Rational(1)}, {{1, 0}, Rational(1)},
                                  {{1, 1}, Rational(1)}});
    Rng rng(4);
    std::size_t zeros = 0;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i < n; ++i) zeros += m.sample_successor(0, rng) == 0;
    // 3/4 with a generous 5-sigma band (sigma ~ 0.003).
    CHECK(std::abs(static_cast<double>(zeros) / n - 0.75) < 0.016);
}

} // TEST_SUITE
