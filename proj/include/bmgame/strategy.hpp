#pragma once

#include "bmgame/graph.hpp"
#include "bmgame/measure.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bmg {

struct GeneralRule {
    std::function<Continuation(const PlayPrefix&)> fn;
};

struct PositionalRule {
    std::map<Vertex, Continuation> table;
};

/// Memory automaton: the memory is updated on every vertex of the prefix (start included),
/// then the output reads (memory, current vertex).
struct FiniteMemoryRule {
    std::size_t states = 1;
    std::size_t initial = 0;
    std::function<std::size_t(std::size_t, Vertex)> update;
    std::function<Continuation(std::size_t, Vertex)> output;
};

/// (current vertex, index of the player's own move, from 1).
struct MoveCountingRule {
    std::function<Continuation(Vertex, std::size_t)> fn;
};

/// (current vertex, prefix length in vertices).
struct LengthCountingRule {
    std::function<Continuation(Vertex, std::size_t)> fn;
};

/// Reads only the opponent's last move, as a word: start vertex plus steps for the very
/// first move of the play, the steps alone afterwards.
struct LastMoveRule {
    std::function<Continuation(PathView)> fn;
};

enum class StrategyKind { General, Positional, FiniteMemory, MoveCounting, LengthCounting, LastMove };
const char* to_string(StrategyKind k);

class Strategy {
public:
    using Rule = std::variant<GeneralRule, PositionalRule, FiniteMemoryRule, MoveCountingRule, LengthCountingRule,
                              LastMoveRule>;

    Strategy(Rule rule, std::string name, std::optional<std::size_t> bound = std::nullopt)
        : rule_(std::move(rule)), name_(std::move(name)), bound_(bound)
    {
    }

    static Strategy general(std::function<Continuation(const PlayPrefix&)> fn, std::string name,
                            std::optional<std::size_t> bound = std::nullopt);
    static Strategy positional(std::map<Vertex, Continuation> table, std::string name);
    static Strategy move_counting(std::function<Continuation(Vertex, std::size_t)> fn, std::string name,
                                  std::optional<std::size_t> bound = std::nullopt);
    static Strategy length_counting(std::function<Continuation(Vertex, std::size_t)> fn, std::string name,
                                    std::optional<std::size_t> bound = std::nullopt);
    static Strategy last_move(std::function<Continuation(PathView)> fn, std::string name,
                              std::optional<std::size_t> bound = std::nullopt);

    StrategyKind kind() const noexcept { return static_cast<StrategyKind>(rule_.index()); }
    const Rule& rule() const noexcept { return rule_; }
    const std::string& name() const noexcept { return name_; }
    /// Declared bound b: every response has at most b steps.
    std::optional<std::size_t> bound() const noexcept { return bound_; }

    template <class R>
    const R* as() const noexcept
    {
        return std::get_if<R>(&rule_);
    }

private:
    Rule rule_;
    std::string name_;
    std::optional<std::size_t> bound_;
};

/// The word a LastMove rule reads after `transcript` (see LastMoveRule).
Path last_move_word(const PlayPrefix& transcript);

/// The strategy's next move. `move_index` is the index (from 1) of the move about to be
/// played among the moving player's own moves. Throws MissingTableEntry for partial tables
/// and AnchorMismatch when a rule answers from the wrong vertex.
Continuation respond(const Strategy& s, const PlayPrefix& transcript, std::size_t move_index);

/// Every move of `role` in `t` equals the strategy's response to the prefix before it.
bool is_consistent(const PlayPrefix& t, const Strategy& s, Player role);

/// Checks a Positional table exhaustively against its declared bound and anchoring.
bool positional_table_valid(const FiniteGraph& g, const Strategy& s);

// ---- Conversions ----------------------------------------------------------------------

/// The length-counting strategy of the prefix-enumerating fold:
/// h(v,n) = f(pi_1) f(pi_2 f(pi_1)) ... folded over the lexicographic enumeration of the
/// prefixes from v0 with n vertices ending in v. Memoized; throws ExplosionGuard when an
/// enumeration would exceed `cap` prefixes.
Strategy length_counting_from_general(const Strategy& f, const FiniteGraph& g, Vertex v0,
                                      std::size_t cap = std::size_t{1} << 20);

/// Offsets into each `role` move of `play` at which `f`, queried on the play so far, writes
/// the next segment of that move. nullopt for a move where no such offset exists.
std::vector<std::optional<std::size_t>> replay_general(const Strategy& f, const PlayPrefix& play,
                                                       Player role = Player::Zero);

/// First coordinate of the diagonal (Cantor) unpairing: 1,1,2,1,2,3,1,2,3,4,...
std::size_t diagonal_phi(std::size_t n);

/// h(v,n) = family(phi(n))(v).
Strategy move_counting_from_positional_family(std::function<Strategy(std::size_t)> family,
                                              std::function<std::size_t(std::size_t)> phi = diagonal_phi,
                                              std::string name = "prop4");

/// g_n(v) = h(v,1) h(last(h(v,1)),2) ... h(.,n) as a positional table over every vertex.
Strategy gn_from_move_counting(const Strategy& h, const FiniteGraph& g, std::size_t n);

/// Positional strategy threading, inside each bottom SCC, every table word (anchored
/// continuations) in table order, joined by shortest connectors; vertices outside the
/// bottom SCCs go straight to the nearest one. Throws OutputEscapesBSCC for words leaving
/// their component.
Strategy bounded_move_counting_to_positional(const FiniteGraph& g, const std::vector<Continuation>& table,
                                             std::string name = "prop5");

/// Compares h(v,n) for v in the bottom SCCs and n <= max_index against the table. Throws
/// TableMismatch naming the first missing answer.
void check_prop5_table(const FiniteGraph& g, const Strategy& h, const std::vector<Continuation>& table,
                       std::size_t max_index);

/// Shortest path (steps only) from `from` to any vertex in `targets`; empty when `from` is
/// already a target, nullopt when unreachable.
std::optional<std::vector<Vertex>> shortest_steps(const FiniteGraph& g, Vertex from,
                                                  const std::vector<Vertex>& targets);

/// Pure random player: the answer to a transcript depends only on (seed, transcript).
/// Move lengths are uniform in 1..max_len and steps follow the measure.
Strategy random_player(const ReasonableMeasure& m, std::uint64_t seed, std::size_t max_len = 3);

/// FNV-1a over the vertex sequence, for deterministic per-transcript streams.
std::uint64_t path_hash(PathView path);

} // namespace bmg
