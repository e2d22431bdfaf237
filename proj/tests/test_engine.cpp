#include "support.hpp"

#include "bmgame/analyzer.hpp"
#include "bmgame/corpus.hpp"
#include "bmgame/engine.hpp"
#include "bmgame/error.hpp"

#include <doctest.h>

using namespace bmg;

namespace {

Strategy constant(std::vector<Vertex> steps, std::string name)
{
    return Strategy::move_counting([steps](Vertex v, std::size_t) { return Continuation(v, steps); }, name,
                                   steps.size());
}

// P(W | Cyl(path)) by enumerating every extension up to the longest generator.
Rational naive_cond(const ReasonableMeasure& m, const OpenCondition& w, const Path& path)
{
    const std::size_t longest = w.max_generator_length();
    const std::size_t extra = longest > path.size() ? longest - path.size() : 0;
    Rational in(0);
    for (const auto& ext : test::all_paths(m.graph(), path.back(), extra)) {
        Path full = path;
        full.insert(full.end(), ext.begin() + 1, ext.end());
        if (w.membership(full).verdict == Verdict::In) in += cyl_prob_after(m, full, path.size());
    }
    return in;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("classical play alternates and stops on a verdict")
{
    const auto g = test::c01();
    const auto w = OpenCondition::cylinders({{0, 0, 1}, {0, 1, 1}}, "w");
    const auto tr = play_classical(g, 0, constant({0}, "z"), constant({1}, "o"), 5, Condition(w));
    CHECK(tr.verdict == GameVerdict::In);
    CHECK(tr.termination == "verdict");
    CHECK(tr.records.size() == 2);
    CHECK(tr.records[0].player == Player::One);
    CHECK(tr.records[1].player == Player::Zero);

    PlayOptions keep;
    keep.stop_on_verdict = false;
    const auto full = play_classical(g, 0, constant({0}, "z"), constant({1}, "o"), 5, Condition(w), keep);
    CHECK(full.play.length() == 11);
    CHECK(full.termination == "rounds");

    PlayOptions cap;
    cap.max_length = 4;
    CHECK(play_classical(g, 0, constant({0}, "z"), constant({0}, "z"), 50, std::nullopt, cap).termination ==
          "length");
}

TEST_CASE("an illegal classical move is an edge violation")
{
    const FiniteGraph g({0, 1}, {{0, 1}, {1, 0}, {1, 1}});
    try {
        play_classical(g, 0, constant({0}, "bad"), constant({1}, "o"), 3);
        FAIL("illegal move accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EdgeViolation);
    }
}

TEST_CASE("singleton lifts replay the classical game")
{
    const auto m = test::uniform(3);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto pl1 = random_player(*m, seed, 3);
        const auto pl0 = random_player(*m, seed + 100, 2);
        const auto classical = play_classical(m->graph(), 0, pl1, pl0, 6);
        GeneralisedGameConfig cfg{m, 0, phi_ball(m->graph()), phi_ball(m->graph()), std::nullopt};
        const auto lifted = play_alpha_game(cfg, lift_to_sets(pl0), lift_to_selector(pl1), 6);
        CHECK(lifted.play.path().size() == classical.play.path().size());
        CHECK(std::equal(lifted.play.path().begin(), lifted.play.path().end(), classical.play.path().begin()));
    }
}

TEST_CASE("phi_alpha validation is exact")
{
    const auto m = test::uniform(2);
    const PlayPrefix p(0);
    const std::vector<Continuation> half{Continuation(0, {1})};
    CHECK(validate_alpha_move(*m, p, half, Rational(1, 2)));
    CHECK_FALSE(validate_alpha_move(*m, p, half, Rational(1, 2) + Rational(1, 1000000)));
    // Overlapping cylinders count once.
    const std::vector<Continuation> overlap{Continuation(0, {1}), Continuation(0, {1, 0})};
    CHECK_FALSE(validate_alpha_move(*m, p, overlap, Rational(3, 4)));
    CHECK_FALSE(validate_alpha_move(*m, p, std::vector<Continuation>{}, Rational(1, 4)));
    CHECK_FALSE(validate_alpha_move(*m, p, std::vector<Continuation>{Continuation(1, {1})}, Rational(1, 4)));
}

TEST_CASE("the referee rejects an under-weight offer")
{
    const auto m = test::uniform(2);
    AlphaStrategy thin{"thin", Rational(1, 2),
                       [](const PlayPrefix& p) { return OfferedSet::list({Continuation(p.last(), {1, 1})}); }};
    const auto cfg = alpha_game_config(m, 0, Rational(1, 2));
    try {
        play_alpha_game(cfg, thin, measure_random_selector(m, 1), 3);
        FAIL("illegal set accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IllegalSetMove);
    }
}

TEST_CASE("offered cover mass equals the brute-force union")
{
    const auto m = test::uniform(2);
    const auto w = triangular_truncation(5);
    const OfferedSet s = OfferedSet::cover(w.monitor() ? w.monitor()
                                                       : std::make_shared<PatternUnionMonitor>(w.generators()),
                                           16);
    const Path base{0};
    Rational brute(0);
    for (const auto& c : s.materialize(m->graph(), base, 100000)) brute += cyl_prob_after(*m, extend(base, c), 1);
    CHECK(s.mass(*m, base) == brute);
    CHECK(s.mass(*m, base) == Rational(15, 16));
}

TEST_CASE("bounded strategies give alpha = min transition ^ b")
{
    const auto m = test::uniform(3);
    const auto [s, alpha] = alpha_from_bounded(constant({0, 1}, "01"), m);
    CHECK(alpha == Rational(1, 9));
    const auto offer = s.rule(PlayPrefix(2));
    CHECK(validate_alpha_move(*m, PlayPrefix(2), offer, alpha));
}

TEST_CASE("conditional probability of open sets against enumeration")
{
    Rng rng(61);
    const auto g = test::c012();
    for (int trial = 0; trial < 30; ++trial) {
        const ReasonableMeasure m(g, test::random_weights(g, rng));
        std::vector<Path> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(test::random_walk(g, 0, 1 + rng() % 3, rng));
        const auto w = OpenCondition::cylinders(gens, "w");
        const auto path = test::random_walk(g, 0, rng() % 3, rng);
        CHECK(cond_prob_open(m, w, path) == naive_cond(m, w, path));
    }
}

TEST_CASE("I_W is the infimum over all prefixes")
{
    const auto m = test::uniform(2);
    const auto w = OpenCondition::cylinders({{0, 0, 0}, {0, 1, 1, 0}}, "w");
    const auto iw = compute_IW(*m, w, 0);
    Rational brute(1);
    for (std::size_t d = 0; d <= 4; ++d)
        for (const auto& p : test::all_paths(m->graph(), 0, d)) brute = std::min(brute, naive_cond(*m, w, p));
    CHECK(iw.value == brute);
    CHECK(iw.value == 0);
}

TEST_CASE("spoiler keeps P(W | prefix) <= P(W) at every selection")
{
    const auto m = test::uniform(2);
    const auto w = OpenCondition::cylinders({{0, 0, 0}}, "cyl");
    const auto [sel, plan] = spoiler_for_open(w, m, 0, Rational(1, 2));
    CHECK(plan.p_w == Rational(1, 4));
    CHECK(opening_condition(plan.i_w, plan.opening_conditional, plan.alpha, plan.p_w));
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto [pl0, a0] = alpha_from_bounded(random_player(*m, seed, 2), m);
        PlayOptions opt;
        opt.track = [m, w](PathView p) { return cond_prob_open(*m, w, p); };
        const auto cfg = alpha_game_config(m, 0, a0, Condition(w));
        const auto tr = play_alpha_game(cfg, pl0, sel, 8, opt);
        CHECK(tr.verdict == GameVerdict::Out);
        for (const auto& r : tr.records)
            if (r.player == Player::One && r.tracked) CHECK(*r.tracked <= plan.p_w);
    }
    CHECK_THROWS_AS(spoiler_for_open(OpenCondition::cylinders({{0, 0}, {0, 1}}), m, 0, Rational(1, 2)), Error);
}

TEST_CASE("Gd alpha strategy certifies the first levels")
{
    const auto m = test::uniform(2);
    const auto w = run_length_levels();
    const auto s = alpha_for_gd_prob_one(w, m, Rational(1, 2), 10000);
    const auto cfg = alpha_game_config(m, 0, Rational(1, 2), Condition(w));
    PlayOptions opt;
    opt.stop = [&w](const PlayPrefix& p) { return !w.first_uncertified(p.path(), 4); };
    const auto tr = play_alpha_game(cfg, s, measure_random_selector(m, 3), 200, opt);
    CHECK(tr.termination == "stop");
    CHECK_THROWS_AS(alpha_for_gd_prob_one(w, m, Rational(1), 10), Error);
}

} // TEST_SUITE
