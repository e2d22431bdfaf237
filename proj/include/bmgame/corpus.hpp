#pragma once

#include "bmgame/conditions.hpp"
#include "bmgame/engine.hpp"
#include "bmgame/measure.hpp"
#include "bmgame/strategy.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bmg {

/// One expected outcome of a bundle. `run` computes the observed value for a seed; the fact
/// passes when it equals `expected`. Facts without `run` are citations, reported as asserted.
struct Fact {
    std::string id;
    std::string description;
    std::string expected;
    std::function<std::string(std::uint64_t seed)> run;
    std::string citation = {};
    /// Seed-independent facts run once per report.
    bool seeded = true;
};

struct RoleStrategy {
    std::string role; ///< "winner" or "counter:<opponent>"
    Strategy strategy;
};

struct GameBundle {
    std::string name;
    std::string description;
    std::shared_ptr<const ReasonableMeasure> measure;
    Vertex v0 = 0;
    Condition condition;
    std::vector<RoleStrategy> strategies;
    std::vector<Fact> facts;

    const FiniteGraph& graph() const { return measure->graph(); }
    /// Throws InvalidArgument for an unknown role.
    const Strategy& strategy(const std::string& role) const;
};

enum class FactStatus { Pass, Fail, Asserted };
const char* to_string(FactStatus s);

struct FactResult {
    std::string bundle;
    std::string fact;
    std::optional<std::uint64_t> seed;
    FactStatus status = FactStatus::Fail;
    std::string expected;
    std::string observed;
};

struct FactReport {
    std::vector<FactResult> results;

    std::size_t count(FactStatus s) const;
    bool ok() const { return count(FactStatus::Fail) == 0; }
};

/// The seeds every corpus run uses unless told otherwise.
inline const std::vector<std::uint64_t> kCorpusSeeds = {11, 23, 47};

std::vector<std::string> bundle_names();
/// Throws UnknownBundle (with a dedicated message for the infinite-graph example).
GameBundle get_bundle(const std::string& name);

/// Runs every fact (seeded ones once per seed). Exceptions inside a fact become a failing
/// entry whose observed value is the error message.
FactReport run_facts(const GameBundle& bundle, const std::vector<std::uint64_t>& seeds);
/// All bundles, in parallel across bundles; results keep registry order.
FactReport run_all_facts(const std::vector<std::uint64_t>& seeds);

// ---- finite open conditions used for the determinacy check ------------------------------

struct FiniteOpenGame {
    std::string name;
    std::shared_ptr<const ReasonableMeasure> measure;
    Vertex v0 = 0;
    OpenCondition condition;
};

std::vector<FiniteOpenGame> finite_open_catalog();

// ---- building blocks shared with tests and the CLI ------------------------------------

std::shared_ptr<const ReasonableMeasure> uniform_complete(std::size_t n);

/// n(n+1)/2.
std::size_t triangular(std::size_t n);
/// Generator A_n (n >= 2): position 1 is 0, positions a_m (1 < m < n) are 0, a_n is 1.
CylinderPattern triangular_pattern(std::size_t n);
/// A_2 .. A_k as a finite open set.
OpenCondition triangular_truncation(std::size_t k);

/// Vertex at 0-based index i of rho = pi_0 pi_1 ..., the concatenation of all nonempty
/// binary words in length-lexicographic order ("0", "1", "00", ...).
Vertex rho_at(std::size_t i);
/// rho_target = 0 . rho (0-based).
Vertex rho_target_at(std::size_t i);

/// Splits `path` into consecutive blocks w w^R (start vertex included).
bool palindrome_pair_decomposable(PathView path);
/// Safety automaton for plays splitting into blocks w w^R with |w| <= b.
ParityCondition block_palindrome_dpa(std::shared_ptr<const FiniteGraph> g, std::size_t b);

/// The diagonal functions of the two separation examples on {0,1,2} and {0,1,2,3}.
Vertex phi_lastmove(PathView word);
Vertex phi_bounded(PathView word);
/// n_k = 3 + 6 + ... + 3k.
std::size_t phi_checkpoint(std::size_t k);

/// Büchi "1 infinitely often" on the complete graph on {0,1}.
ParityCondition buchi_ones(std::shared_ptr<const FiniteGraph> g);

/// Plays two positional (or otherwise memoryless) strategies until (vertex, player to move)
/// repeats and checks the resulting lasso.
bool positional_lasso_accepts(const FiniteGraph& g, Vertex v0, const Strategy& pl1, const Strategy& pl0,
                              const ParityCondition& w);

/// The Gd set of run lengths: level n = "0^n 1 occurs".
GdCondition run_length_levels();

} // namespace bmg
