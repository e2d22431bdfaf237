#include "bmgame/analyzer.hpp"
#include "bmgame/corpus.hpp"
#include "bmgame/error.hpp"
#include "corpus_internal.hpp"

#include <algorithm>
#include <map>

namespace bmg::detail {

namespace {

const Rational kHalf(1, 2);

Strategy positional2(std::vector<Vertex> from0, std::vector<Vertex> from1, std::string name)
{
    return Strategy::positional({{0, Continuation(0, std::move(from0))}, {1, Continuation(1, std::move(from1))}},
                                std::move(name));
}

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
    return out;
}

PlayOptions up_to(std::size_t length)
{
    PlayOptions o;
    o.stop_on_verdict = false;
    o.max_length = length;
    return o;
}

// Opponents with a declared bound, for counter-strategy facts.
struct BoundedOpponent {
    std::size_t bound;
    std::function<Strategy(std::uint64_t seed)> make;
};

} // namespace

// ---- unbounded-strategy example -------------------------------------------------------------

GameBundle make_ex_nobound()
{
    GameBundle b;
    b.name = "ex_nobound";
    b.description = "C01 from 0: W = starts with 0 and has a 1-run longer than the initial 0-run. Pl.0 wins with "
                    "the move-counting strategy 1^n but with no bounded strategy.";
    const auto m = uniform_complete(2);
    b.measure = m;
    b.v0 = 0;
    const OpenCondition w = OpenCondition::monitored(std::make_shared<LongerRunMonitor>(), "longer-one-run");
    b.condition = w;

    const Strategy winner =
        Strategy::move_counting([](Vertex v, std::size_t n) { return Continuation(v, repeat(1, n)); }, "ones(n)");
    auto counter = [](std::size_t bound) {
        return Strategy::general(
            [bound](const PlayPrefix& p) {
                if (p.length() == 1) return Continuation(p.last(), repeat(0, bound));
                return Continuation(p.last(), {0});
            },
            "zeros(" + std::to_string(bound) + ")-then-0");
    };
    b.strategies = {{"winner", winner}, {"counter:2-bounded", counter(2)}};

    const std::vector<BoundedOpponent> opponents = {
        {1, [](std::uint64_t) { return positional2({1}, {1}, "always-1"); }},
        {2, [](std::uint64_t) { return positional2({1, 1}, {0, 1}, "two-steps"); }},
        {3, [m](std::uint64_t s) { return random_player(*m, s, 3); }},
    };

    b.facts.push_back({"winner-in", "the move-counting winner reaches an In certificate against random Pl.1", "In",
                       [m, w, winner](std::uint64_t seed) {
                           const auto t = play_classical(m->graph(), 0, random_player(*m, seed, 3), winner, 50, w);
                           return std::string(to_string(t.verdict));
                       }});
    b.facts.push_back(
        {"counter-block", "against b-bounded Pl.0 the counter keeps every 1-run <= b <= the initial 0-run", "pass",
         [m, w, counter, opponents](std::uint64_t seed) {
             for (const auto& opp : opponents) {
                 const auto t = play_classical(m->graph(), 0, counter(opp.bound), opp.make(seed), 40, w);
                 const auto path = t.play.path();
                 std::size_t a = 0;
                 while (a < path.size() && path[a] == 0) ++a;
                 std::size_t run = 0;
                 std::size_t longest = 0;
                 for (std::size_t i = a; i < path.size(); ++i) {
                     run = path[i] == 1 ? run + 1 : 0;
                     longest = std::max(longest, run);
                 }
                 if (t.verdict == GameVerdict::In || longest > opp.bound || opp.bound > a)
                     return "fail: b=" + std::to_string(opp.bound) + " initial=" + std::to_string(a) +
                            " longest=" + std::to_string(longest);
             }
             return std::string("pass");
         }});
    b.facts.push_back({"movalpha-in",
                       "the alpha-strategy built from the move-counting winner wins its first round (alpha = 1/2)",
                       "In", [m, w, winner](std::uint64_t seed) {
                           const auto pl0 = alpha_from_move_counting(winner, m, kHalf, 4096);
                           const auto cfg = alpha_game_config(m, 0, kHalf, w);
                           const auto t = play_alpha_game(cfg, pl0, measure_random_selector(m, seed, 3), 2);
                           return std::string(to_string(t.verdict));
                       }});
    return b;
}

// ---- move-counting separation ------------------------------------------------------------

namespace {

constexpr std::size_t kRhoHorizon = std::size_t{1} << 16;

bool prefix_of_rho(PathView path)
{
    for (std::size_t i = 0; i < path.size(); ++i)
        if (path[i] != rho_at(i)) return false;
    return true;
}

Strategy rho_walker(const Strategy& h)
{
    const auto* rule = h.as<MoveCountingRule>();
    if (!rule) throw Error(ErrorKind::InvalidArgument, "the rho walker needs a move-counting opponent");
    auto fn = rule->fn;
    return Strategy::general(
        [fn](const PlayPrefix& p) {
            const std::size_t len = p.length();
            const std::size_t k = p.moves_by(Player::Zero) + 1;
            for (std::size_t q = len + 1; q < len + kRhoHorizon; ++q) {
                const Continuation answer = fn(rho_at(q - 1), k);
                bool fits = true;
                for (std::size_t j = 0; j < answer.steps.size() && fits; ++j)
                    fits = answer.steps[j] == rho_at(q + j);
                if (!fits) continue;
                std::vector<Vertex> steps;
                for (std::size_t i = len; i < q; ++i) steps.push_back(rho_at(i));
                return Continuation(p.last(), steps);
            }
            throw Error(ErrorKind::BudgetExceeded, "no factor occurrence within the rho horizon");
        },
        "walk-along-rho");
}

} // namespace

GameBundle make_ex_nomove()
{
    GameBundle b;
    b.name = "ex_nomove";
    b.description = "C01 from 0: W = every play except rho, the concatenation of all binary words. A 1-bounded "
                    "winner exists, no move-counting one.";
    const auto m = uniform_complete(2);
    b.measure = m;
    b.v0 = 0;
    const OpenCondition w = OpenCondition::stream(
        [](std::size_t i) -> std::optional<CylinderPattern> {
            Path p;
            for (std::size_t j = 0; j <= i; ++j) p.push_back(rho_at(j));
            p.push_back(1 - rho_at(i + 1));
            return CylinderPattern::cylinder(p);
        },
        2048, "leave-rho");
    b.condition = w;

    const Strategy winner = Strategy::general(
        [](const PlayPrefix& p) {
            if (prefix_of_rho(p.path())) return Continuation(p.last(), {1 - rho_at(p.length())});
            return Continuation(p.last(), {0});
        },
        "deviate-from-rho", 1);
    const std::vector<Strategy> samples = {
        Strategy::move_counting([](Vertex v, std::size_t) { return Continuation(v, {1}); }, "h=1"),
        Strategy::move_counting([](Vertex v, std::size_t n) { return Continuation(v, repeat(0, n % 3 + 1)); },
                                "h=0^(n mod 3 + 1)"),
        Strategy::move_counting(
            [](Vertex v, std::size_t n) { return Continuation(v, n % 2 ? std::vector<Vertex>{0, 1} : std::vector<Vertex>{1, 1, 0}); },
            "h=01|110"),
    };
    b.strategies = {{"winner", winner}};
    for (const auto& h : samples) b.strategies.push_back({"counter:" + h.name(), rho_walker(h)});

    b.facts.push_back({"winner-in", "the deviating winner is certified In at its first deviation", "In",
                       [m, w, winner](std::uint64_t seed) {
                           const auto t = play_classical(m->graph(), 0, random_player(*m, seed, 3), winner, 3, w);
                           return std::string(to_string(t.verdict));
                       }});
    b.facts.push_back({"counter-stays-on-rho",
                       "against three move-counting strategies the counter-play is a prefix of rho for 1000 steps",
                       "pass",
                       [m, samples](std::uint64_t) {
                           for (const auto& h : samples) {
                               try {
                                   const auto t =
                                       play_classical(m->graph(), 0, rho_walker(h), h, 1000000, std::nullopt, up_to(1000));
                                   if (t.play.length() < 1000 || !prefix_of_rho(t.play.path()))
                                       return "fail: " + h.name() + " left rho";
                               } catch (const Error& e) {
                                   if (e.kind() == ErrorKind::BudgetExceeded) return "undecided: " + h.name();
                                   throw;
                               }
                           }
                           return std::string("pass");
                       },
                       {}, false});
    b.facts.push_back({"bounded-alpha-in",
                       "the 1-bounded winner lifted to an alpha-strategy (alpha = 1/2) wins the alpha-game", "In",
                       [m, w, winner](std::uint64_t seed) {
                           const auto [pl0, alpha] = alpha_from_bounded(winner, m);
                           if (alpha != kHalf) return "alpha " + format_rational(alpha);
                           const auto cfg = alpha_game_config(m, 0, alpha, w);
                           const auto t = play_alpha_game(cfg, pl0, measure_random_selector(m, seed, 3), 5);
                           return std::string(to_string(t.verdict));
                       }});
    return b;
}

// ---- palindrome pairs -----------------------------------------------------------------------

GameBundle make_ex_wwR()
{
    GameBundle b;
    b.name = "ex_wwR";
    b.description = "C012 from 2: W = plays splitting into infinitely many blocks w w^R. Pl.0 wins by mirroring "
                    "Pl.1's last move; P(W) = 0.";
    const auto m = uniform_complete(3);
    const auto g = std::make_shared<const FiniteGraph>(m->graph());
    b.measure = m;
    b.v0 = 2;
    b.condition = OracleCondition("palindrome-pairs", [](PathView) { return Verdict::Unknown; });

    const Strategy winner = Strategy::last_move(
        [](PathView word) { return Continuation(word.back(), std::vector<Vertex>(word.rbegin(), word.rend())); },
        "reverse");
    b.strategies = {{"winner", winner}};

    b.facts.push_back({"decomposition", "winner plays split into blocks w w^R after every Pl.0 move", "pass",
                       [m, winner](std::uint64_t seed) {
                           const auto t = play_classical(m->graph(), 2, random_player(*m, seed, 3), winner, 20);
                           for (std::size_t j = 1; 2 * j <= t.play.move_count(); ++j) {
                               const auto prefix = t.play.truncated(2 * j);
                               if (!palindrome_pair_decomposable(prefix.path()))
                                   return "fail: " + format_path(prefix.path());
                           }
                           return std::string("pass");
                       }});
    for (std::size_t bound : {1, 2}) {
        b.facts.push_back({"block-bound-" + std::to_string(bound) + "-null",
                           "the block-bounded approximation has probability 0", "0",
                           [m, g, bound](std::uint64_t) {
                               return format_rational(prob_parity_exact(*m, block_palindrome_dpa(g, bound), 2));
                           },
                           {}, false});
    }
    b.facts.push_back({"no-alpha-winner", "no winning alpha-strategy exists", "asserted", {},
                       "Pl.0 has a last-move winning strategy but no winning alpha-strategy, as P(W) = 0"});
    return b;
}

// ---- positional separation ------------------------------------------------------------------

namespace {

Strategy triangular_padder(std::function<std::size_t(const PlayPrefix&)> next_bound, std::string name)
{
    return Strategy::general(
        [next_bound](const PlayPrefix& p) {
            const std::size_t len = p.length();
            std::size_t k = std::max<std::size_t>(next_bound(p), 1);
            while (triangular(k) < len + 1) ++k;
            return Continuation(p.last(), repeat(0, triangular(k) - len));
        },
        std::move(name));
}

std::size_t move_counting_next_bound(const Strategy& h, const PlayPrefix& p)
{
    return h.as<MoveCountingRule>()->fn(0, p.moves_by(Player::Zero) + 1).steps.size();
}

} // namespace

GameBundle make_ex_pos()
{
    GameBundle b;
    b.name = "ex_pos";
    b.description = "C01 from 0: W = a 1 at some triangular position a_n, n > 1. Pl.0 wins by length counting, "
                    "not positionally, not by move counting.";
    const auto m = uniform_complete(2);
    b.measure = m;
    b.v0 = 0;
    MassOneCertificate cert{"after d steps the positions a_2..a_k with a_k <= d+1 are all 0 with mass 2^-(k-1)",
                            [](std::size_t d) {
                                std::size_t k = 1;
                                while (triangular(k + 1) <= d + 1) ++k;
                                return dyadic(static_cast<unsigned>(k - 1));
                            },
                            20};
    const OpenCondition w =
        OpenCondition::monitored(std::make_shared<TriangularMonitor>(), "one-at-triangular", std::move(cert));
    b.condition = w;

    const Strategy winner = Strategy::length_counting(
        [](Vertex v, std::size_t len) {
            std::size_t k = 2;
            while (triangular(k) < len + 1) ++k;
            auto steps = repeat(0, triangular(k) - len - 1);
            steps.push_back(1);
            return Continuation(v, steps);
        },
        "pad-to-triangular");
    const Strategy ones_k =
        Strategy::move_counting([](Vertex v, std::size_t k) { return Continuation(v, repeat(1, k)); }, "h=1^k");
    const Strategy zeros_one = Strategy::move_counting(
        [](Vertex v, std::size_t k) {
            auto s = repeat(0, k);
            s.push_back(1);
            return Continuation(v, s);
        },
        "h=0^k1");
    struct Opp {
        std::function<Strategy(std::uint64_t)> make;
        std::function<std::size_t(const PlayPrefix&)> bound;
    };
    const std::vector<Opp> opponents = {
        {[](std::uint64_t) { return positional2({1}, {1}, "always-1"); }, [](const PlayPrefix&) { return 1; }},
        {[](std::uint64_t) { return positional2({0, 1}, {1, 1}, "two-steps"); }, [](const PlayPrefix&) { return 2; }},
        {[m](std::uint64_t s) { return random_player(*m, s, 3); }, [](const PlayPrefix&) { return 3; }},
        {[ones_k](std::uint64_t) { return ones_k; },
         [ones_k](const PlayPrefix& p) { return move_counting_next_bound(ones_k, p); }},
        {[zeros_one](std::uint64_t) { return zeros_one; },
         [zeros_one](const PlayPrefix& p) { return move_counting_next_bound(zeros_one, p); }},
    };
    b.strategies = {{"winner", winner},
                    {"counter:2-bounded", triangular_padder([](const PlayPrefix&) { return 2; }, "pad-past-2")},
                    {"counter:h=1^k", triangular_padder(opponents[3].bound, "pad-past-h")}};

    b.facts.push_back({"prob-An", "P(A_n) for n = 2..10", "1/2 1/4 1/8 1/16 1/32 1/64 1/128 1/256 1/512",
                       [m](std::uint64_t) {
                           std::vector<std::string> out;
                           for (std::size_t n = 2; n <= 10; ++n)
                               out.push_back(format_rational(
                                   prob_open_exact(*m, OpenCondition::patterns({triangular_pattern(n)}), 0)));
                           return join(out);
                       },
                       {}, false});
    b.facts.push_back({"truncation-exact", "P(A_2 u ... u A_6)", "31/32",
                       [m](std::uint64_t) { return format_rational(prob_open_exact(*m, triangular_truncation(6), 0)); },
                       {}, false});
    b.facts.push_back({"truncation-brute-force", "the same mass by enumerating all 2^20 words", "31/32",
                       [m](std::uint64_t) {
                           return format_rational(brute_force_open_mass_parallel(*m, triangular_truncation(6), 0, 20));
                       },
                       {}, false});
    b.facts.push_back({"winner-in", "the length-counting winner is certified In", "In",
                       [m, w, winner](std::uint64_t seed) {
                           const auto t = play_classical(m->graph(), 0, random_player(*m, seed, 3), winner, 10, w);
                           return std::string(to_string(t.verdict));
                       }});
    b.facts.push_back({"counter-index-scan", "against bounded and move-counting Pl.0 every triangular position is 0",
                       "pass",
                       [m, w, opponents](std::uint64_t seed) {
                           for (const auto& opp : opponents) {
                               const Strategy pl0 = opp.make(seed);
                               const auto t = play_classical(m->graph(), 0, triangular_padder(opp.bound, "pad"), pl0, 25, w);
                               if (t.verdict == GameVerdict::In) return "fail: " + pl0.name() + " won";
                               const auto path = t.play.path();
                               for (std::size_t n = 2; triangular(n) <= path.size(); ++n)
                                   if (path[triangular(n) - 1] != 0)
                                       return "fail: " + pl0.name() + " at a_" + std::to_string(n);
                           }
                           return std::string("pass");
                       }});
    b.facts.push_back({"fold-in", "the length-counting fold of the winner wins and replays f on every Pl.0 move",
                       "pass",
                       [m, w, winner](std::uint64_t seed) {
                           const auto h = length_counting_from_general(winner, m->graph(), 0);
                           const auto t = play_classical(m->graph(), 0, random_player(*m, seed, 3), h, 5, w);
                           if (t.verdict != GameVerdict::In) return std::string("fail: not In");
                           for (const auto& off : replay_general(winner, t.play))
                               if (!off) return std::string("fail: no replay offset");
                           return std::string("pass");
                       }});
    b.facts.push_back({"prob-one", "qualitative check of P(W) = 1", "One", [m, w](std::uint64_t) {
                           return std::string(to_string(is_prob_one(*m, w, 0).tag));
                       },
                       {}, false});
    return b;
}

// ---- Gd example ---------------------------------------------------------------------------

GameBundle make_ex_omegaS()
{
    GameBundle b;
    b.name = "ex_omegaS";
    b.description = "C01 from 0: W = zero-runs of unbounded length, as the Gd set of levels \"0^n 1 occurs\". "
                    "Move-counting winner 0^n 1; no bounded winner.";
    const auto m = uniform_complete(2);
    b.measure = m;
    b.v0 = 0;
    const GdCondition gd = run_length_levels();
    b.condition = gd;

    const Strategy winner = Strategy::move_counting(
        [](Vertex v, std::size_t n) {
            auto s = repeat(0, n);
            s.push_back(1);
            return Continuation(v, s);
        },
        "0^n1");
    const Strategy counter =
        Strategy::general([](const PlayPrefix& p) { return Continuation(p.last(), {1}); }, "always-1");
    b.strategies = {{"winner", winner}, {"counter:bounded", counter}};
    const std::vector<BoundedOpponent> opponents = {
        {1, [](std::uint64_t) { return positional2({0}, {0}, "always-0"); }},
        {2, [](std::uint64_t) { return positional2({0, 0}, {0, 0}, "00"); }},
        {3, [m](std::uint64_t s) { return random_player(*m, s, 3); }},
    };

    b.facts.push_back({"winner-levels", "the winner certifies levels 1..5 within 5 moves", "pass",
                       [m, gd, winner](std::uint64_t seed) {
                           const auto t = play_classical(m->graph(), 0, random_player(*m, seed, 3), winner, 5);
                           const auto miss = gd.first_uncertified(t.play.path(), 5);
                           return detail::pass_or(!miss, "level " + std::to_string(miss.value_or(0)));
                       }});
    b.facts.push_back({"counter-stalls", "against b-bounded Pl.0, level b+1 stays uncertified for 100 rounds", "pass",
                       [m, gd, counter, opponents](std::uint64_t seed) {
                           for (const auto& opp : opponents) {
                               const auto t = play_classical(m->graph(), 0, counter, opp.make(seed), 100);
                               if (gd.level(opp.bound + 1).membership(t.play.path()).verdict == Verdict::In)
                                   return "fail: b=" + std::to_string(opp.bound);
                           }
                           return std::string("pass");
                       }});
    b.facts.push_back({"positional-family", "the move-counting strategy built from level-wise positional winners "
                                            "certifies levels 1..3 within 6 moves",
                       "pass", [m, gd](std::uint64_t seed) {
                           auto family = [](std::size_t n) {
                               auto s = repeat(0, n);
                               s.push_back(1);
                               return positional2(s, s, "0^" + std::to_string(n) + "1");
                           };
                           const auto h = move_counting_from_positional_family(family);
                           const auto t = play_classical(m->graph(), 0, random_player(*m, seed, 3), h, 6);
                           return detail::pass_or(!gd.first_uncertified(t.play.path(), 3), "levels missing");
                       }});
    b.facts.push_back({"alpha-levels", "the Gd alpha-strategy (alpha = 1/2) certifies levels 1..4 under live "
                                       "validation",
                       "pass", [m, gd](std::uint64_t seed) {
                           const auto pl0 = alpha_for_gd_prob_one(gd, m, kHalf, 10000);
                           PlayOptions opt;
                           opt.stop = [gd](const PlayPrefix& p) { return !gd.first_uncertified(p.path(), 4); };
                           opt.max_length = 10000;
                           const auto t = play_alpha_game(alpha_game_config(m, 0, kHalf), pl0,
                                                          measure_random_selector(m, seed, 3), 1000, opt);
                           return detail::pass_or(t.termination == "stop", t.termination);
                       }});
    b.facts.push_back({"prob-one", "qualitative check of P(W) = 1", "One", [m, gd](std::uint64_t) {
                           return std::string(to_string(is_prob_one(*m, gd, 0).tag));
                       },
                       {}, false});
    return b;
}

// ---- bounded length-counting without positional ---------------------------------------------

namespace {

Strategy target_dodger(const Strategy& f)
{
    const auto* rule = f.as<PositionalRule>();
    if (!rule) throw Error(ErrorKind::InvalidArgument, "the dodger needs a positional opponent");
    const auto answer = rule->table.at(0).steps;
    return Strategy::general(
        [answer](const PlayPrefix& p) {
            const std::size_t len = p.length();
            for (std::size_t n = len; n < len + kRhoHorizon; ++n) {
                bool ok = rho_target_at(n) == 1;
                for (std::size_t i = 0; i < answer.size() && ok; ++i) ok = answer[i] != rho_target_at(n + 1 + i);
                if (!ok) continue;
                std::vector<Vertex> steps;
                for (std::size_t i = len; i < n; ++i) steps.push_back(1 - rho_target_at(i));
                steps.push_back(0);
                return Continuation(p.last(), steps);
            }
            throw Error(ErrorKind::BudgetExceeded, "no skip position within the horizon");
        },
        "skip-target");
}

} // namespace

GameBundle make_ex_rho_target()
{
    GameBundle b;
    b.name = "ex_rho_target";
    b.description = "C01 from 0: W = infinitely many agreements with rho_target = 0 rho. 1-bounded length-counting "
                    "winner, no positional one.";
    const auto m = uniform_complete(2);
    b.measure = m;
    b.v0 = 0;
    b.condition = GdCondition(
        [](std::size_t n) {
            return OpenCondition::monitored(std::make_shared<TargetMatchMonitor>(n),
                                            "matches>=" + std::to_string(n));
        },
        "infinitely-many-matches");
    const Strategy winner = Strategy::length_counting(
        [](Vertex v, std::size_t len) { return Continuation(v, {rho_target_at(len)}); }, "copy-target", 1);
    const std::vector<Strategy> samples = {positional2({1}, {0}, "f(0)=1"), positional2({0, 1}, {0}, "f(0)=01"),
                                           positional2({1, 1, 0}, {0}, "f(0)=110")};
    b.strategies = {{"winner", winner}};
    for (const auto& f : samples) b.strategies.push_back({"counter:" + f.name(), target_dodger(f)});

    b.facts.push_back({"winner-matches", "every position written by the winner agrees with rho_target", "pass",
                       [m, winner](std::uint64_t seed) {
                           const auto t = play_classical(m->graph(), 0, random_player(*m, seed, 3), winner, 30);
                           for (std::size_t i = 1; i < t.play.move_count(); i += 2) {
                               const std::size_t at = t.play.moves()[i].begin;
                               if (t.play.path()[at] != rho_target_at(at)) return std::string("fail");
                           }
                           return std::string("pass");
                       }});
    b.facts.push_back({"counter-no-matches", "matches after the opening against 3 positional strategies, 1000 steps",
                       "0",
                       [m, samples](std::uint64_t) {
                           std::size_t matches = 0;
                           for (const auto& f : samples) {
                               const auto t =
                                   play_classical(m->graph(), 0, target_dodger(f), f, 1000000, std::nullopt, up_to(1000));
                               const auto path = t.play.path();
                               for (std::size_t i = 1; i < path.size(); ++i) matches += path[i] == rho_target_at(i);
                           }
                           return std::to_string(matches);
                       },
                       {}, false});
    return b;
}

// ---- bounded last-move without positional ----------------------------------------------------

namespace {

constexpr std::size_t kRunSearch = 1 << 14;

// Checks phi(prefix . s_1 .. s_i) != s_{i+1} for every i.
bool dodges(Path x, const std::vector<Vertex>& sigma, Vertex (*phi)(PathView))
{
    for (Vertex s : sigma) {
        if (phi(x) == s) return false;
        x.push_back(s);
    }
    return true;
}

Strategy two_run_dodger(const Strategy& f)
{
    const auto* rule = f.as<PositionalRule>();
    if (!rule) throw Error(ErrorKind::InvalidArgument, "the dodger needs a positional opponent");
    const auto sigma = rule->table.at(2).steps;
    return Strategy::general(
        [sigma](const PlayPrefix& p) {
            Path x(p.path().begin(), p.path().end());
            for (std::size_t k = 1; k < kRunSearch; ++k) {
                x.push_back(2);
                if (dodges(x, sigma, phi_lastmove)) return Continuation(p.last(), repeat(2, k));
            }
            throw Error(ErrorKind::SearchCapReached, "no run of 2s dodges f(2)");
        },
        "run-of-2s");
}

} // namespace

GameBundle make_ex_phi_lastmove()
{
    GameBundle b;
    b.name = "ex_phi_lastmove";
    b.description = "C012 from 2: W = plays of the form pi_1 phi(pi_1) pi_2 phi(pi_2) ...; 1-bounded last-move "
                    "winner phi, no positional one.";
    const auto m = uniform_complete(3);
    b.measure = m;
    b.v0 = 2;
    b.condition = OracleCondition("phi-alternation", [](PathView) { return Verdict::Unknown; });
    const Strategy winner = Strategy::last_move(
        [](PathView word) { return Continuation(word.back(), {phi_lastmove(word)}); }, "phi", 1);
    const std::vector<Strategy> samples = {
        Strategy::positional({{0, Continuation(0, {0})}, {1, Continuation(1, {0})}, {2, Continuation(2, {0})}}, "f(2)=0"),
        Strategy::positional({{0, Continuation(0, {0})}, {1, Continuation(1, {0})}, {2, Continuation(2, {1, 0})}},
                             "f(2)=10"),
        Strategy::positional({{0, Continuation(0, {0})}, {1, Continuation(1, {0})}, {2, Continuation(2, {2, 1, 0})}},
                             "f(2)=210"),
    };
    b.strategies = {{"winner", winner}};
    for (const auto& f : samples) b.strategies.push_back({"counter:" + f.name(), two_run_dodger(f)});

    b.facts.push_back({"winner-alternation", "every Pl.0 move is phi of Pl.1's preceding move", "pass",
                       [m, winner](std::uint64_t seed) {
                           const auto t = play_classical(m->graph(), 2, random_player(*m, seed, 3), winner, 20);
                           for (std::size_t i = 1; i < t.play.move_count(); i += 2) {
                               const auto word = last_move_word(t.play.truncated(i));
                               if (t.play.move(i).steps != std::vector<Vertex>{phi_lastmove(word)})
                                   return std::string("fail");
                           }
                           return std::string("pass");
                       }});
    b.facts.push_back({"counter-checkpoints", "the 2^k counter makes phi miss every letter of f(2), 8 rounds", "pass",
                       [m, samples](std::uint64_t) {
                           for (const auto& f : samples) {
                               const auto sigma = f.as<PositionalRule>()->table.at(2).steps;
                               try {
                                   const auto t = play_classical(m->graph(), 2, two_run_dodger(f), f, 8);
                                   for (std::size_t i = 1; i < t.play.move_count(); i += 2) {
                                       const auto before = t.play.truncated(i);
                                       if (!dodges(Path(before.path().begin(), before.path().end()), sigma, phi_lastmove))
                                           return "fail: " + f.name();
                                   }
                               } catch (const Error& e) {
                                   if (e.kind() == ErrorKind::SearchCapReached) return "undecided: " + f.name();
                                   throw;
                               }
                           }
                           return std::string("pass");
                       },
                       {}, false});
    return b;
}

// ---- bounded without bounded length-counting -----------------------------------------------

namespace {

Strategy checkpoint_dodger(const Strategy& f)
{
    const auto* rule = f.as<LengthCountingRule>();
    if (!rule || !f.bound()) throw Error(ErrorKind::InvalidArgument, "the dodger needs a bounded length-counting opponent");
    auto fn = rule->fn;
    const std::size_t bound = *f.bound();
    return Strategy::general(
        [fn, bound](const PlayPrefix& p) {
            const std::size_t len = p.length();
            std::size_t k = bound;
            while (phi_checkpoint(k) < len) ++k;
            const std::size_t nk = phi_checkpoint(k);
            const auto sigma = fn(2, nk + 2 * k + 1).steps;
            Path base(p.path().begin(), p.path().end());
            base.resize(nk, 2);
            // Exhaustive search over tau in {2,3}^{2k}, in lexicographic order.
            for (std::size_t code = 0; code < (std::size_t{1} << (2 * k)); ++code) {
                Path x = base;
                for (std::size_t i = 0; i < 2 * k; ++i) x.push_back((code >> (2 * k - 1 - i)) & 1U ? 3 : 2);
                x.push_back(2);
                if (!dodges(x, sigma, phi_bounded)) continue;
                return Continuation(p.last(), std::vector<Vertex>(x.begin() + static_cast<std::ptrdiff_t>(len), x.end()));
            }
            throw Error(ErrorKind::SearchCapReached, "no tau dodges the answer");
        },
        "checkpoint-tau");
}

std::size_t phi_matches(PathView path)
{
    std::size_t n = 0;
    for (std::size_t i = 1; i < path.size(); ++i) n += phi_bounded(path.first(i)) == path[i];
    return n;
}

} // namespace

GameBundle make_ex_phi_bounded()
{
    GameBundle b;
    b.name = "ex_phi_bounded";
    b.description = "Complete graph on {0,1,2,3} from 2: W = phi predicts the next letter infinitely often. "
                    "1-bounded winner, no bounded length-counting one.";
    const auto m = uniform_complete(4);
    b.measure = m;
    b.v0 = 2;
    b.condition = OracleCondition("phi-predicts", [](PathView) { return Verdict::Unknown; });
    const Strategy winner = Strategy::general(
        [](const PlayPrefix& p) { return Continuation(p.last(), {phi_bounded(p.path())}); }, "play-phi", 1);
    const std::vector<Strategy> samples = {
        Strategy::length_counting([](Vertex v, std::size_t) { return Continuation(v, {0, 1}); }, "01", 2),
        Strategy::length_counting(
            [](Vertex v, std::size_t len) {
                return Continuation(v, {static_cast<Vertex>(len % 4), static_cast<Vertex>((len / 2) % 4)});
            },
            "len-digits", 2),
        Strategy::length_counting([](Vertex v, std::size_t) { return Continuation(v, {1}); }, "1", 2),
    };
    b.strategies = {{"winner", winner}};
    for (const auto& f : samples) b.strategies.push_back({"counter:" + f.name(), checkpoint_dodger(f)});

    b.facts.push_back({"winner-matches", "every Pl.0 move is a correct prediction", "pass",
                       [m, winner](std::uint64_t seed) {
                           const auto t = play_classical(m->graph(), 2, random_player(*m, seed, 3), winner, 20);
                           for (std::size_t i = 1; i < t.play.move_count(); i += 2) {
                               const std::size_t at = t.play.moves()[i].begin;
                               if (phi_bounded(t.play.path().first(at)) != t.play.path()[at]) return std::string("fail");
                           }
                           return std::string("pass");
                       }});
    b.facts.push_back({"counter-zero-matches", "matches over the first 3 checkpoints against 2-bounded length counting",
                       "0",
                       [m, samples](std::uint64_t) {
                           std::size_t total = 0;
                           for (const auto& f : samples) {
                               const auto t = play_classical(m->graph(), 2, checkpoint_dodger(f), f, 3);
                               total += phi_matches(t.play.path());
                           }
                           return std::to_string(total);
                       },
                       {}, false});
    return b;
}

// ---- bounded move counting to positional --------------------------------------------------

GameBundle make_ex_buchi()
{
    GameBundle b;
    b.name = "ex_buchi";
    b.description = "C01 from 0, Büchi \"1 infinitely often\": the bounded move-counting winner h = 1 turned into a "
                    "positional winner.";
    const auto m = uniform_complete(2);
    const auto g = std::make_shared<const FiniteGraph>(m->graph());
    b.measure = m;
    b.v0 = 0;
    const ParityCondition w = buchi_ones(g);
    b.condition = w;
    const Strategy h =
        Strategy::move_counting([](Vertex v, std::size_t) { return Continuation(v, {1}); }, "h=1", 1);
    const std::vector<Continuation> table = {Continuation(0, {1}), Continuation(1, {1})};
    const Strategy f = bounded_move_counting_to_positional(*g, table);
    b.strategies = {{"winner", f}, {"move-counting", h}};

    b.facts.push_back({"table-matches", "the per-component table lists every answer of h", "pass",
                       [g, h, table](std::uint64_t) {
                           check_prop5_table(*g, h, table, 16);
                           return std::string("pass");
                       },
                       {}, false});
    b.facts.push_back({"positional-table", "the synthesized positional strategy", "0->11 1->011",
                       [f](std::uint64_t) {
                           std::string out;
                           for (const auto& [v, c] : f.as<PositionalRule>()->table) {
                               out += (out.empty() ? "" : " ") + std::to_string(v) + "->";
                               for (Vertex s : c.steps) out += std::to_string(s);
                           }
                           return out;
                       },
                       {}, false});
    b.facts.push_back({"every-lasso-accepts", "all plays against Pl.1 tables with answers of <= 2 steps", "36/36",
                       [g, w, f](std::uint64_t) {
                           std::vector<std::vector<Vertex>> answers = {{0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}};
                           std::size_t total = 0;
                           std::size_t accepting = 0;
                           for (const auto& a0 : answers)
                               for (const auto& a1 : answers) {
                                   const Strategy pl1 = positional2(a0, a1, "pl1");
                                   ++total;
                                   accepting += positional_lasso_accepts(*g, 0, pl1, f, w);
                               }
                           return std::to_string(accepting) + "/" + std::to_string(total);
                       },
                       {}, false});
    b.facts.push_back({"prob", "P(W) under the uniform measure", "1",
                       [m, w](std::uint64_t) { return format_rational(prob_parity_exact(*m, w, 0)); }, {}, false});
    b.facts.push_back({"large", "largeness via the probability-one characterisation", "true",
                       [g, w](std::uint64_t) { return std::string(is_large_omega_regular(w, *g, 0) ? "true" : "false"); },
                       {}, false});
    b.facts.push_back({"cross-measure", "three random weightings agree with the uniform verdict", "true",
                       [w](std::uint64_t seed) { return std::string(cross_measure_agrees(w, 0, seed) ? "true" : "false"); }});
    return b;
}

} // namespace bmg::detail

namespace bmg {

bool positional_lasso_accepts(const FiniteGraph& g, Vertex v0, const Strategy& pl1, const Strategy& pl0,
                              const ParityCondition& w)
{
    // Positional players make the play a function of (vertex, player to move).
    PlayPrefix p(v0);
    std::map<std::pair<Vertex, Player>, std::size_t> seen;
    for (;;) {
        const Player next = p.next_player();
        const auto key = std::make_pair(p.last(), next);
        if (auto it = seen.find(key); it != seen.end()) {
            const auto path = p.path();
            const std::size_t at = it->second;
            const Path stem(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(at));
            const Continuation loop(stem.back(), Path(path.begin() + static_cast<std::ptrdiff_t>(at), path.end()));
            return lasso_membership(w, stem, loop);
        }
        seen.emplace(key, p.length());
        const Strategy& s = next == Player::One ? pl1 : pl0;
        const Continuation c = respond(s, p, p.moves_by(next) + 1);
        check_continuation(g, c);
        p.append(c);
    }
}

} // namespace bmg
