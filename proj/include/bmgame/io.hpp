#pragma once

#include "bmgame/conditions.hpp"
#include "bmgame/engine.hpp"
#include "bmgame/measure.hpp"
#include "bmgame/strategy.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bmg {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

/// A game as written on disk. Conditions and strategies stay as declarations until
/// resolve_* turns them into objects; see README for the accepted kinds.
struct GameFile {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    Vertex v0 = 0;
    /// Empty means uniform weights.
    std::vector<std::pair<Edge, Rational>> weights;
    Json condition;                       ///< null when absent
    std::map<std::string, Json> strategies; ///< "pl0", "pl1"
    std::vector<std::uint64_t> seeds;
    std::optional<std::size_t> budget;
    std::optional<Rational> alpha;
    std::optional<std::size_t> rounds;
    /// Construction inputs (e.g. "table" for the BSCC conversion).
    std::map<std::string, Json> inputs;
};

/// Throws Error(Parse) on malformed or inconsistent input.
GameFile parse_game_file(const Json& j);
Json to_json(const GameFile& g);

/// Sorted keys, two-space indent, trailing newline: serialize -> parse -> serialize is stable.
std::string canonical_dump(const Json& j);
Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);

/// Output of a synthesis: the construction, the game it was built for, the strategy
/// declaration it produces and the summary of its validation run.
struct StrategyArtifact {
    std::string construction;
    std::string role; ///< "pl0" or "pl1"
    GameFile game;
    Json strategy;
    Json validation;
};

bool is_artifact(const Json& j);
StrategyArtifact parse_artifact(const Json& j);
Json to_json(const StrategyArtifact& a);
/// The artifact's game with its strategy installed under its role.
GameFile game_of(const StrategyArtifact& a);

struct ResolvedGame {
    std::shared_ptr<const ReasonableMeasure> measure;
    Vertex v0 = 0;
    std::optional<Condition> condition;

    const FiniteGraph& graph() const { return measure->graph(); }
};

ResolvedGame resolve_game(const GameFile& f);
Condition resolve_condition(const Json& decl, const ResolvedGame& game);

/// A player as declared: exactly one of the three forms is set.
struct PlayerSpec {
    std::optional<Strategy> classical;
    std::optional<AlphaStrategy> alpha;
    std::optional<Selector> selector;
    std::optional<SpoilerPlan> spoiler;
};

/// `alpha` is the file's alpha (needed by alpha constructions); `budget` caps searches.
PlayerSpec resolve_player(const Json& decl, const ResolvedGame& game, std::uint64_t seed,
                          std::optional<Rational> alpha, std::size_t budget);

/// Positional declaration of a positional strategy.
Json positional_to_json(const Strategy& s);

/// JSON lines for transcripts.
Json move_record_json(const MoveRecord& r);

} // namespace bmg
