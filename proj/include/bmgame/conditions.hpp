#pragma once

#include "bmgame/graph.hpp"
#include "bmgame/measure.hpp"
#include "bmgame/monitor.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bmg {

enum class Verdict { In, Out, Unknown };
const char* to_string(Verdict v);

struct Membership {
    Verdict verdict = Verdict::Unknown;
    /// Set when a stream-backed generator list ran out of budget before deciding.
    bool budget_exceeded = false;

    friend bool operator==(const Membership&, const Membership&) = default;
};

/// Closed-form evidence that an open set has probability 1: for every depth d,
/// P(covered within d steps) >= 1 - epsilon(d), with epsilon(d) -> 0. The analyzer re-checks
/// the bound at `check_depth` by exact computation before trusting it.
struct MassOneCertificate {
    std::string argument;
    std::function<Rational(std::size_t depth)> epsilon;
    std::size_t check_depth = 0;
};

using GeneratorStream = std::function<std::optional<CylinderPattern>(std::size_t index)>;

/// An open set of plays, i.e. a countable union of cylinders. Three backings:
/// a finite generator list, a monitor (corpus sets with infinitely many generators), or a
/// generator stream consulted under an enumeration budget.
class OpenCondition {
public:
    static OpenCondition cylinders(std::vector<Path> generators, std::string name = "open");
    static OpenCondition patterns(std::vector<CylinderPattern> generators, std::string name = "open");
    static OpenCondition monitored(std::shared_ptr<const PrefixMonitor> monitor, std::string name,
                                   std::optional<MassOneCertificate> certificate = std::nullopt);
    static OpenCondition stream(GeneratorStream generators, std::size_t budget, std::string name);

    const std::string& name() const noexcept { return name_; }
    bool is_finite() const noexcept { return finite_; }
    bool is_stream() const noexcept { return static_cast<bool>(stream_); }
    /// Finite backings only.
    const std::vector<CylinderPattern>& generators() const { return generators_; }
    bool all_plain() const;
    /// Maximal generator length in vertices (finite backings).
    std::size_t max_generator_length() const;
    /// Null for stream backings.
    const std::shared_ptr<const PrefixMonitor>& monitor() const noexcept { return monitor_; }
    const std::optional<MassOneCertificate>& certificate() const noexcept { return certificate_; }
    std::size_t budget() const noexcept { return budget_; }

    Membership membership(PathView path) const;
    /// Plain-cylinder generators reduced to a prefix-free set (all_plain() required).
    PrefixFreeSet reduced() const;

private:
    std::string name_;
    bool finite_ = false;
    std::vector<CylinderPattern> generators_;
    std::shared_ptr<const PrefixMonitor> monitor_;
    std::optional<MassOneCertificate> certificate_;
    GeneratorStream stream_;
    std::size_t budget_ = 0;
};

/// Countable intersection of open sets W_1, W_2, ..., accessed lazily by index (from 1).
class GdCondition {
public:
    using LevelFn = std::function<OpenCondition(std::size_t level)>;

    GdCondition(LevelFn levels, std::string name, std::optional<std::size_t> level_count = std::nullopt,
                bool levels_certified = false)
        : levels_(std::move(levels)), name_(std::move(name)), count_(level_count), certified_(levels_certified)
    {
    }

    OpenCondition level(std::size_t n) const { return levels_(n); }
    const std::string& name() const noexcept { return name_; }
    std::optional<std::size_t> level_count() const noexcept { return count_; }
    /// Every level carries a MassOneCertificate (the family is exhaustively checkable).
    bool levels_certified() const noexcept { return certified_; }

    /// Index of the first level whose cylinder certificate fails for `path`, scanning from 1
    /// up to `max_level`; nullopt when all of those are In.
    std::optional<std::size_t> first_uncertified(PathView path, std::size_t max_level) const;

    Membership membership(PathView path, std::size_t level_budget = 32) const;

private:
    LevelFn levels_;
    std::string name_;
    std::optional<std::size_t> count_;
    bool certified_ = false;
};

/// Deterministic parity automaton over the graph's vertices (min-even acceptance). It reads
/// every vertex of a play, the start vertex included.
class ParityCondition {
public:
    ParityCondition(std::shared_ptr<const FiniteGraph> graph, std::size_t states, std::size_t initial,
                    std::vector<std::vector<std::size_t>> transitions, std::vector<unsigned> priorities,
                    std::string name = "parity");

    const FiniteGraph& graph() const noexcept { return *graph_; }
    const std::shared_ptr<const FiniteGraph>& graph_ptr() const noexcept { return graph_; }
    const std::string& name() const noexcept { return name_; }
    std::size_t state_count() const noexcept { return states_; }
    std::size_t initial() const noexcept { return initial_; }
    const std::vector<std::vector<std::size_t>>& transitions() const noexcept { return delta_; }
    const std::vector<unsigned>& priorities() const noexcept { return priority_; }

    std::size_t next(std::size_t state, Vertex v) const { return delta_[state][graph_->index_of(v)]; }
    unsigned priority(std::size_t state) const { return priority_[state]; }
    std::size_t run(PathView path) const;

    Membership membership(PathView path) const;

private:
    std::size_t product_index(std::size_t vertex_idx, std::size_t state) const { return vertex_idx * states_ + state; }
    void analyse();

    std::shared_ptr<const FiniteGraph> graph_;
    std::size_t states_;
    std::size_t initial_;
    std::vector<std::vector<std::size_t>> delta_;
    std::vector<unsigned> priority_;
    std::string name_;
    std::vector<char> may_accept_;
    std::vector<char> may_reject_;
};

/// Condition only known through a tri-state prefix oracle (and optionally a lasso oracle).
class OracleCondition {
public:
    using PrefixOracle = std::function<Verdict(PathView)>;
    using LassoOracle = std::function<bool(PathView stem, const Continuation& loop)>;

    OracleCondition(std::string name, PrefixOracle prefix, LassoOracle lasso = {})
        : name_(std::move(name)), prefix_(std::move(prefix)), lasso_(std::move(lasso))
    {
    }

    const std::string& name() const noexcept { return name_; }
    Membership membership(PathView path) const { return {prefix_(path), false}; }
    bool has_lasso() const noexcept { return static_cast<bool>(lasso_); }
    bool lasso(PathView stem, const Continuation& loop) const { return lasso_(stem, loop); }

private:
    std::string name_;
    PrefixOracle prefix_;
    LassoOracle lasso_;
};

using Condition = std::variant<OpenCondition, GdCondition, ParityCondition, OracleCondition>;

std::string condition_name(const Condition& w);

/// In only when every infinite extension of `path` is in W; Out only when none is.
Membership membership_at_depth(const Condition& w, PathView path);

/// Acceptance of the ultimately periodic play stem . loop^omega. The loop is closed when
/// (last step, first step) is an edge; throws LoopNotClosed otherwise.
bool lasso_membership(const ParityCondition& w, PathView stem, const Continuation& loop);

struct MassSearch {
    std::optional<PrefixFreeSet> set;
    Rational reached{0};       ///< conditional mass accumulated
    bool space_exhausted = false; ///< every extension was classified before reaching the target
    std::size_t expanded = 0;
};

/// Breadth-first (length, then lexicographic) accumulation of continuations π of `given`
/// with Cyl(given.π) inside W until their conditional mass reaches `target`. `budget` bounds
/// the number of expanded nodes.
MassSearch open_mass_search(const ReasonableMeasure& m, const OpenCondition& w, PathView given,
                            const Rational& target, std::size_t budget);

std::optional<PrefixFreeSet> open_mass_reached(const ReasonableMeasure& m, const OpenCondition& w, PathView given,
                                               const Rational& target, std::size_t budget);

} // namespace bmg
