#pragma once

#include "bmgame/conditions.hpp"
#include "bmgame/graph.hpp"
#include "bmgame/measure.hpp"
#include "bmgame/monitor.hpp"
#include "bmgame/strategy.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bmg {

enum class GameVerdict { In, Out, Undecided };
const char* to_string(GameVerdict v);

struct MoveRecord {
    std::size_t turn = 0; ///< 1-based move number in the play
    Player player = Player::One;
    Continuation move;
    std::optional<BigInt> offered_size;   ///< set moves: number of offered continuations
    std::optional<Rational> offered_mass; ///< set moves: conditional mass of the offer
    std::optional<Rational> tracked;      ///< caller-supplied quantity after the move
};

struct PlayTranscript {
    PlayPrefix play{0};
    std::vector<MoveRecord> records;
    GameVerdict verdict = GameVerdict::Undecided;
    std::string termination; ///< "rounds", "verdict", "length" or "stop"
    std::vector<std::string> notes;
};

struct PlayOptions {
    /// Stop as soon as the condition certifies In or Out.
    bool stop_on_verdict = true;
    /// Stop once the play has more vertices than this.
    std::optional<std::size_t> max_length;
    /// Extra stop predicate, checked after every move.
    std::function<bool(const PlayPrefix&)> stop;
    /// Quantity recorded after every move (e.g. P(W | prefix)).
    std::function<Rational(PathView)> track;
};

/// Classical Banach-Mazur play, Pl.1 first. A round is one move of each player.
PlayTranscript play_classical(const FiniteGraph& g, Vertex v0, const Strategy& pl1, const Strategy& pl0,
                              std::size_t rounds, const std::optional<Condition>& condition = std::nullopt,
                              const PlayOptions& opt = {});

// ---- set-valued moves ----------------------------------------------------------------

/// A finite set of continuations of some base prefix: an explicit list, or the truncated
/// cover of a monitor (every minimal covered continuation with at most max_len steps).
class OfferedSet {
public:
    static OfferedSet list(std::vector<Continuation> items);
    static OfferedSet cover(std::shared_ptr<const PrefixMonitor> monitor, std::size_t max_len);

    bool is_cover() const noexcept { return static_cast<bool>(monitor_); }
    const std::vector<Continuation>& items() const noexcept { return items_; }
    const std::shared_ptr<const PrefixMonitor>& monitor() const noexcept { return monitor_; }
    std::size_t max_len() const noexcept { return max_len_; }

    bool contains(PathView base, const Continuation& c) const;
    /// Exact P(union of Cyl(base.c) | Cyl(base)) after prefix-free reduction.
    Rational mass(const ReasonableMeasure& m, PathView base) const;
    /// Number of distinct elements.
    BigInt size(const ReasonableMeasure& m, PathView base) const;
    /// Up to `cap` elements in length-then-lexicographic order.
    std::vector<Continuation> materialize(const FiniteGraph& g, PathView base, std::size_t cap) const;

private:
    std::vector<Continuation> items_;
    std::shared_ptr<const PrefixMonitor> monitor_;
    std::size_t max_len_ = 0;
};

/// phi_alpha legality: non-empty, every element a valid continuation of `prefix`, and
/// conditional mass of the union at least alpha (exact).
bool validate_alpha_move(const ReasonableMeasure& m, const PlayPrefix& prefix,
                         const std::vector<Continuation>& offered, const Rational& alpha);
bool validate_alpha_move(const ReasonableMeasure& m, const PlayPrefix& prefix, const OfferedSet& offered,
                         const Rational& alpha);

using Legality = std::function<bool(const PlayPrefix&, const OfferedSet&)>;

/// Exactly one valid continuation.
Legality phi_ball(const FiniteGraph& g);
Legality phi_alpha(const ReasonableMeasure& m, Rational alpha);

struct AlphaStrategy {
    std::string name;
    Rational alpha;
    std::function<OfferedSet(const PlayPrefix&)> rule;
};

/// Pl.1 in a generalised game: opens with a set, then repeatedly picks an element of Pl.0's
/// set and proposes its own next set.
struct Selector {
    std::string name;
    std::function<OfferedSet(const PlayPrefix&)> opening;
    std::function<std::pair<Continuation, OfferedSet>(const PlayPrefix&, const OfferedSet&)> select;
};

struct GeneralisedGameConfig {
    std::shared_ptr<const ReasonableMeasure> measure;
    Vertex v0 = 0;
    Legality phi0; ///< constraint on Pl.0's sets
    Legality phi1; ///< constraint on Pl.1's sets
    std::optional<Condition> condition;
};

/// Configuration with phi0 = phi_alpha and phi1 = phi_ball.
GeneralisedGameConfig alpha_game_config(std::shared_ptr<const ReasonableMeasure> m, Vertex v0, Rational alpha,
                                        std::optional<Condition> condition = std::nullopt);

/// Generalised game referee. Each of Pl.0's sets is checked against phi0 when offered and
/// each of Pl.1's against phi1; a violation throws IllegalSetMove naming the turn.
PlayTranscript play_alpha_game(const GeneralisedGameConfig& cfg, const AlphaStrategy& pl0, const Selector& pl1,
                               std::size_t rounds, const PlayOptions& opt = {});

/// Singleton lifts of classical strategies (with phi_ball on both sides they replay
/// play_classical exactly).
AlphaStrategy lift_to_sets(const Strategy& pl0);
Selector lift_to_selector(const Strategy& pl1);

/// Picks an element with probability proportional to its cylinder mass and proposes a
/// random move of 1..max_len steps; depends only on (seed, prefix).
Selector measure_random_selector(std::shared_ptr<const ReasonableMeasure> m, std::uint64_t seed,
                                 std::size_t max_len = 3);

// ---- constructions -------------------------------------------------------------------

/// {f(pi)} with alpha = (smallest transition probability)^b.
std::pair<AlphaStrategy, Rational> alpha_from_bounded(const Strategy& f, std::shared_ptr<const ReasonableMeasure> m);

/// f(pi0) = { pi . g_n(last(pi)) } with n = |pi0| (vertices), pi ranging over the shortest
/// horizon whose union reaches alpha. Throws BudgetExceeded past `max_len` steps.
AlphaStrategy alpha_from_move_counting(const Strategy& h, std::shared_ptr<const ReasonableMeasure> m,
                                       Rational alpha, std::size_t max_len);

/// The offer for the least level W_n not yet certified on the prefix: continuations whose
/// cylinders lie in W_n, of conditional mass >= alpha. `budget` caps the search (steps for
/// monitor-backed levels, expanded nodes otherwise). Throws LevelStuck, the message telling
/// a mass cap (P(W_n | prefix) < alpha) from an exhausted budget.
AlphaStrategy alpha_for_gd_prob_one(const GdCondition& w, std::shared_ptr<const ReasonableMeasure> m,
                                    Rational alpha, std::size_t budget);

/// P(W | Cyl(path)) for an open set with finite generators.
Rational cond_prob_open(const ReasonableMeasure& m, const OpenCondition& w, PathView path);

struct InfimumWitness {
    Rational value;
    PlayPrefix witness{0};
};

/// inf over prefixes from v0 of P(W | Cyl(prefix)); attained within the longest generator,
/// so the scan is exhaustive up to that depth (length, then lexicographic order).
InfimumWitness compute_IW(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0);

struct SpoilerPlan {
    Rational p_w;
    Rational i_w;
    Rational alpha;
    Continuation opening;
    Rational opening_conditional;
};

/// Pl.1 strategy winning the alpha-game against every alpha-strategy when P(W) < 1.
/// Throws NotSubProbOne when P(W) = 1, SearchCapReached when no continuation within
/// max(`depth_cap`, longest generator) steps satisfies the opening inequality (best-first search,
/// at most 2^16 expansions), and (during play) SelectionFailure if
/// an offer has no element keeping P(W | prefix) <= P(W).
std::pair<Selector, SpoilerPlan> spoiler_for_open(const OpenCondition& w, std::shared_ptr<const ReasonableMeasure> m,
                                                  Vertex v0, Rational alpha, std::size_t depth_cap = 16);

/// The strict inequality I_W + (x - I_W)/alpha < P(W).
bool opening_condition(const Rational& i_w, const Rational& cond, const Rational& alpha, const Rational& p_w);

} // namespace bmg
