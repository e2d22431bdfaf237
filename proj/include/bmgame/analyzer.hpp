#pragma once

#include "bmgame/conditions.hpp"
#include "bmgame/graph.hpp"
#include "bmgame/measure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bmg {

/// Bottom strongly connected components, each listed in vertex order, ordered by their
/// first vertex.
std::vector<std::vector<Vertex>> bsccs(const FiniteGraph& g);

/// Markov chain of (vertex, automaton state) pairs reachable from the start.
struct ProductChain {
    struct State {
        std::size_t vertex_idx;
        std::size_t automaton_state;
    };
    std::vector<State> states;
    /// rows[i]: (target state, probability), targets in increasing order.
    std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
    std::vector<unsigned> priority;
    std::size_t initial = 0;
};

ProductChain build_product(const ReasonableMeasure& m, const ParityCondition& w, Vertex v0);

/// Bottom SCCs of the chain's transition graph.
std::vector<std::vector<std::size_t>> bsccs(const ProductChain& chain);

struct ProbVerdict {
    enum class Tag { Exact, One, Zero, Interval, Unknown };
    Tag tag = Tag::Unknown;
    Rational value{0}; ///< Exact
    Rational lower{0}; ///< Interval
    Rational upper{1}; ///< Interval
    std::string reason;

    static ProbVerdict exact(Rational v);
    static ProbVerdict interval(Rational lo, Rational hi, std::string why = {});
    static ProbVerdict unknown(std::string why);
};
const char* to_string(ProbVerdict::Tag t);

/// Exact solve of A x = b over the rationals (A square, non-singular). The parallel form
/// distributes the row eliminations of each pivot step over OpenMP threads.
std::vector<Rational> solve_linear_serial(std::vector<std::vector<Rational>> a, std::vector<Rational> b);
std::vector<Rational> solve_linear_parallel(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

/// P(W) for an open set with a finite generator list (plain cylinders: prefix-free
/// reduction; patterns: exact DP up to the longest generator).
Rational prob_open_exact(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0);

/// Mass of all words of exactly `depth` steps from v0 whose cylinder the set covers,
/// by exhaustive enumeration.
Rational brute_force_open_mass_serial(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0,
                                      std::size_t depth);
Rational brute_force_open_mass_parallel(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0,
                                        std::size_t depth);

struct ParitySolution {
    Rational probability{0};
    std::size_t product_states = 0;
    std::size_t bscc_count = 0;
    std::size_t accepting_bsccs = 0;
};

ParitySolution solve_parity(const ReasonableMeasure& m, const ParityCondition& w, Vertex v0,
                            bool parallel = false);
Rational prob_parity_exact(const ReasonableMeasure& m, const ParityCondition& w, Vertex v0);

/// Qualitative P(W) = 1 check. `depth` bounds exact mass accumulation for monitored open
/// sets, `levels` the number of Gd levels inspected.
ProbVerdict is_prob_one(const ReasonableMeasure& m, const Condition& w, Vertex v0, std::size_t depth = 64,
                        std::size_t levels = 5);

/// Largeness of an omega-regular set: P = 1 under the uniform measure.
bool is_large_omega_regular(const ParityCondition& w, const FiniteGraph& g, Vertex v0);

/// One/Zero/other classification under three seeded random weightings; true when all
/// agree with the uniform measure.
bool cross_measure_agrees(const ParityCondition& w, Vertex v0, std::uint64_t seed);

struct MonteCarloResult {
    std::size_t in = 0;
    std::size_t out = 0;
    std::size_t unknown = 0;
    /// For Gd conditions: plays whose prefix is certified in level k (index k-1).
    std::vector<std::size_t> level_in;
    ProbVerdict interval;
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

/// Wilson score bounds for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = kWilsonZ99);

/// Tri-state membership of `samples` random prefixes of `depth` steps. Trial i uses
/// stream_seed(seed, i), so both forms return identical counts.
MonteCarloResult monte_carlo_serial(const ReasonableMeasure& m, const Condition& w, Vertex v0, std::size_t depth,
                                    std::size_t samples, std::uint64_t seed, std::size_t levels = 5);
MonteCarloResult monte_carlo(const ReasonableMeasure& m, const Condition& w, Vertex v0, std::size_t depth,
                             std::size_t samples, std::uint64_t seed, std::size_t levels = 5);

} // namespace bmg
