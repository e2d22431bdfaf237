#include "bmgame/corpus.hpp"

#include "bmgame/error.hpp"
#include "corpus_internal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace bmg {

namespace detail {

std::vector<Vertex> repeat(Vertex v, std::size_t n) { return std::vector<Vertex>(n, v); }

std::string pass_or(bool ok, const std::string& why) { return ok ? "pass" : "fail: " + why; }

// [initial zero run, current one run, phase]; verdicts collapse to a single entry.
MonitorState LongerRunMonitor::initial(Vertex start) const
{
    if (start != 0) return {-2};
    return {1, 0, 0};
}

MonitorState LongerRunMonitor::step(const MonitorState& s, Vertex v) const
{
    if (s.size() == 1) return s;
    const std::int64_t a = s[0];
    std::int64_t r = s[1];
    if (s[2] == 0) {
        if (v == 0) return {a + 1, 0, 0};
        r = 1;
    } else {
        r = v == 1 ? r + 1 : 0;
    }
    if (r > a) return {-1};
    return {a, r, 1};
}

MonitorStatus LongerRunMonitor::status(const MonitorState& s) const
{
    if (s.size() > 1) return MonitorStatus::Open;
    return s[0] == -1 ? MonitorStatus::Covered : MonitorStatus::Excluded;
}

namespace {

bool is_triangular_index(std::int64_t p)
{
    std::int64_t k = 1;
    while (k * (k + 1) / 2 < p) ++k;
    return k * (k + 1) / 2 == p;
}

} // namespace

MonitorState TriangularMonitor::initial(Vertex start) const
{
    if (start != 0) return {-2};
    return {1};
}

MonitorState TriangularMonitor::step(const MonitorState& s, Vertex v) const
{
    if (s[0] < 0) return s;
    const std::int64_t p = s[0] + 1;
    if (v == 1 && is_triangular_index(p)) return {-1};
    return {p};
}

MonitorStatus TriangularMonitor::status(const MonitorState& s) const
{
    if (s[0] >= 0) return MonitorStatus::Open;
    return s[0] == -1 ? MonitorStatus::Covered : MonitorStatus::Excluded;
}

MonitorState RunLengthMonitor::initial(Vertex start) const { return {start == 0 ? std::min<std::int64_t>(1, n_) : 0}; }

MonitorState RunLengthMonitor::step(const MonitorState& s, Vertex v) const
{
    if (s[0] < 0) return s;
    if (v == 0) return {std::min(s[0] + 1, n_)};
    if (s[0] >= n_) return {-1};
    return {0};
}

MonitorStatus RunLengthMonitor::status(const MonitorState& s) const
{
    return s[0] < 0 ? MonitorStatus::Covered : MonitorStatus::Open;
}

MonitorState TargetMatchMonitor::initial(Vertex start) const
{
    const std::int64_t c = start == rho_target_at(0) ? 1 : 0;
    if (c >= n_) return {-1};
    return {1, c};
}

MonitorState TargetMatchMonitor::step(const MonitorState& s, Vertex v) const
{
    if (s[0] < 0) return s;
    const std::int64_t c = s[1] + (v == rho_target_at(static_cast<std::size_t>(s[0])) ? 1 : 0);
    if (c >= n_) return {-1};
    return {s[0] + 1, c};
}

MonitorStatus TargetMatchMonitor::status(const MonitorState& s) const
{
    return s[0] < 0 ? MonitorStatus::Covered : MonitorStatus::Open;
}

} // namespace detail

using detail::repeat;

const Strategy& GameBundle::strategy(const std::string& role) const
{
    for (const auto& rs : strategies)
        if (rs.role == role) return rs.strategy;
    throw Error(ErrorKind::InvalidArgument, "bundle " + name + " has no strategy with role " + role);
}

const char* to_string(FactStatus s)
{
    switch (s) {
    case FactStatus::Pass: return "pass";
    case FactStatus::Fail: return "fail";
    case FactStatus::Asserted: return "asserted";
    }
    return "?";
}

std::size_t FactReport::count(FactStatus s) const
{
    return static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [s](const FactResult& r) { return r.status == s; }));
}

std::shared_ptr<const ReasonableMeasure> uniform_complete(std::size_t n)
{
    return std::make_shared<const ReasonableMeasure>(ReasonableMeasure::uniform(FiniteGraph::complete(n)));
}

std::size_t triangular(std::size_t n) { return n * (n + 1) / 2; }

CylinderPattern triangular_pattern(std::size_t n)
{
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "A_n needs n >= 2");
    CylinderPattern p;
    p.allowed.assign(triangular(n), {0, 1});
    for (std::size_t m = 1; m < n; ++m) p.allowed[triangular(m) - 1] = {0};
    p.allowed[triangular(n) - 1] = {1};
    return p;
}

OpenCondition triangular_truncation(std::size_t k)
{
    std::vector<CylinderPattern> gens;
    for (std::size_t n = 2; n <= k; ++n) gens.push_back(triangular_pattern(n));
    return OpenCondition::patterns(std::move(gens), "triangular-" + std::to_string(k));
}

Vertex rho_at(std::size_t i)
{
    for (std::size_t k = 1;; ++k) {
        const std::size_t block = k << k;
        if (i < block) {
            const std::size_t word = i / k;
            const std::size_t pos = i % k;
            return static_cast<Vertex>((word >> (k - 1 - pos)) & 1U);
        }
        i -= block;
    }
}

Vertex rho_target_at(std::size_t i) { return i == 0 ? 0 : rho_at(i - 1); }

bool palindrome_pair_decomposable(PathView s)
{
    const std::size_t n = s.size();
    // pal[i][j]: s[i..j) is a palindrome, filled by increasing length.
    std::vector<std::vector<char>> pal(n + 1, std::vector<char>(n + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) pal[i][i] = 1;
    for (std::size_t i = 0; i + 1 <= n; ++i) pal[i][i + 1] = 1;
    for (std::size_t len = 2; len <= n; ++len)
        for (std::size_t i = 0; i + len <= n; ++i)
            pal[i][i + len] = s[i] == s[i + len - 1] && pal[i + 1][i + len - 1];
    std::vector<char> ok(n + 1, 0);
    ok[0] = 1;
    for (std::size_t j = 2; j <= n; j += 2)
        for (std::size_t i = 0; i + 2 <= j && !ok[j]; i += 2)
            ok[j] = ok[i] && pal[i][j];
    return ok[n];
}

namespace {

using Buffer = std::vector<Vertex>;

// Some even palindrome of length <= 2b has u as a proper prefix.
bool live_buffer(const Buffer& u, std::size_t b)
{
    for (std::size_t len = std::max<std::size_t>(2, u.size() + 1); len <= 2 * b; len += 1) {
        if (len % 2) continue;
        bool fits = true;
        for (std::size_t i = 0; i < u.size() && fits; ++i) {
            const std::size_t j = len - 1 - i;
            if (j < u.size() && u[i] != u[j]) fits = false;
        }
        if (fits) return true;
    }
    return false;
}

bool even_palindrome(const Buffer& u)
{
    return !u.empty() && u.size() % 2 == 0 && std::equal(u.begin(), u.end(), u.rbegin());
}

} // namespace

ParityCondition block_palindrome_dpa(std::shared_ptr<const FiniteGraph> g, std::size_t b)
{
    if (b == 0) throw Error(ErrorKind::InvalidArgument, "block bound must be >= 1");
    using Subset = std::set<Buffer>;
    std::map<Subset, std::size_t> id;
    std::vector<Subset> states;
    auto intern = [&](const Subset& s) {
        auto [it, fresh] = id.emplace(s, states.size());
        if (fresh) states.push_back(s);
        return it->second;
    };
    intern(Subset{Buffer{}});
    std::vector<std::vector<std::size_t>> delta;
    for (std::size_t q = 0; q < states.size(); ++q) {
        std::vector<std::size_t> row;
        for (Vertex x : g->vertices()) {
            Subset next;
            for (const auto& u : states[q]) {
                Buffer v = u;
                v.push_back(x);
                if (even_palindrome(v)) next.insert(Buffer{});
                if (v.size() < 2 * b && live_buffer(v, b)) next.insert(v);
            }
            row.push_back(intern(next));
        }
        delta.push_back(std::move(row));
    }
    std::vector<unsigned> priority(states.size(), 0);
    for (std::size_t q = 0; q < states.size(); ++q)
        if (states[q].empty()) priority[q] = 1;
    return ParityCondition(std::move(g), states.size(), 0, std::move(delta), std::move(priority),
                           "palindrome-blocks<=" + std::to_string(b));
}

namespace {

// Length-lexicographic enumeration of words over {0,1,2}, the empty word first.
std::vector<Vertex> ternary_word(std::size_t index)
{
    std::size_t len = 0;
    std::size_t count = 1;
    while (index >= count) {
        index -= count;
        ++len;
        count *= 3;
    }
    std::vector<Vertex> w(len);
    for (std::size_t i = len; i-- > 0;) {
        w[i] = static_cast<Vertex>(index % 3);
        index /= 3;
    }
    return w;
}

} // namespace

Vertex phi_lastmove(PathView word)
{
    // Longest maximal run of 2s (the last one on ties).
    std::size_t best_len = 0;
    std::size_t best_end = 0;
    for (std::size_t i = 0; i < word.size();) {
        if (word[i] != 2) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < word.size() && word[j] == 2) ++j;
        if (j - i >= best_len) {
            best_len = j - i;
            best_end = j;
        }
        i = j;
    }
    if (best_len == 0) return 0;
    // Cantor unpairing of best_len - 1; the second coordinate indexes the encoded word, and
    // every index recurs for infinitely many run lengths.
    const std::size_t z = best_len - 1;
    std::size_t w = static_cast<std::size_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
    while (w * (w + 1) / 2 > z) --w;
    while ((w + 1) * (w + 2) / 2 <= z) ++w;
    const std::size_t y = z - w * (w + 1) / 2;
    const auto tau = ternary_word(y);
    const std::size_t r = word.size() - best_end;
    if (r >= tau.size()) return 0;
    return tau[r] == 0 ? 1 : 0;
}

std::size_t phi_checkpoint(std::size_t k) { return 3 * k * (k + 1) / 2; }

Vertex phi_bounded(PathView word)
{
    const std::size_t len = word.size();
    for (std::size_t k = 1; phi_checkpoint(k) + 2 * k + 1 <= len; ++k) {
        const std::size_t nk = phi_checkpoint(k);
        if (len > nk + 3 * k) continue;
        if (word[nk + 2 * k] != 2) return 0;
        const std::size_t i = len - (nk + 2 * k + 1);
        const Vertex hi = word[nk + 2 * i];
        const Vertex lo = word[nk + 2 * i + 1];
        for (std::size_t t = nk; t < nk + 2 * k; ++t)
            if (word[t] != 2 && word[t] != 3) return 0;
        const int letter = 2 * (hi - 2) + (lo - 2);
        return letter == 0 ? 1 : 0;
    }
    return 0;
}

ParityCondition buchi_ones(std::shared_ptr<const FiniteGraph> g)
{
    std::vector<std::vector<std::size_t>> delta(2);
    for (std::size_t q = 0; q < 2; ++q)
        for (Vertex v : g->vertices()) delta[q].push_back(v == 1 ? 1 : 0);
    return ParityCondition(std::move(g), 2, 0, std::move(delta), {1, 0}, "ones-infinitely-often");
}

GdCondition run_length_levels()
{
    return GdCondition(
        [](std::size_t n) {
            MassOneCertificate cert{
                "disjoint windows of n+1 steps each read 0^n 1 with probability 2^-(n+1)",
                [n](std::size_t d) {
                    return pow(Rational(1) - dyadic(static_cast<unsigned>(n + 1)), static_cast<unsigned>(d / (n + 1)));
                },
                4 * (n + 1)};
            return OpenCondition::monitored(std::make_shared<detail::RunLengthMonitor>(n),
                                            "zero-run>=" + std::to_string(n), std::move(cert));
        },
        "unbounded-zero-runs", std::nullopt, true);
}

// ---- registry ----------------------------------------------------------------------------

namespace {

struct Entry {
    const char* name;
    GameBundle (*make)();
};

const std::vector<Entry>& registry()
{
    static const std::vector<Entry> entries = {
        {"ex_nobound", detail::make_ex_nobound},
        {"ex_nomove", detail::make_ex_nomove},
        {"ex_wwR", detail::make_ex_wwR},
        {"ex_pos", detail::make_ex_pos},
        {"ex_omegaS", detail::make_ex_omegaS},
        {"ex_rho_target", detail::make_ex_rho_target},
        {"ex_phi_lastmove", detail::make_ex_phi_lastmove},
        {"ex_phi_bounded", detail::make_ex_phi_bounded},
        {"ex_buchi", detail::make_ex_buchi},
    };
    return entries;
}

} // namespace

std::vector<std::string> bundle_names()
{
    std::vector<std::string> out;
    for (const auto& e : registry()) out.emplace_back(e.name);
    return out;
}

GameBundle get_bundle(const std::string& name)
{
    for (const auto& e : registry())
        if (name == e.name) return e.make();
    if (name == "ex_gnat" || name == "ex_infinite")
        throw Error(ErrorKind::UnknownBundle,
                    name + ": the example lives on the complete graph on the naturals; only finite graphs are supported");
    throw Error(ErrorKind::UnknownBundle, "no bundle named '" + name + "'");
}

FactReport run_facts(const GameBundle& bundle, const std::vector<std::uint64_t>& seeds)
{
    FactReport report;
    for (const auto& f : bundle.facts) {
        if (!f.run) {
            report.results.push_back({bundle.name, f.id, std::nullopt, FactStatus::Asserted, f.expected, f.citation});
            continue;
        }
        std::vector<std::optional<std::uint64_t>> runs;
        if (f.seeded)
            for (auto s : seeds) runs.emplace_back(s);
        else
            runs.emplace_back(std::nullopt);
        for (const auto& seed : runs) {
            FactResult r{bundle.name, f.id, seed, FactStatus::Fail, f.expected, {}};
            try {
                r.observed = f.run(seed.value_or(0));
            } catch (const std::exception& e) {
                r.observed = std::string("error: ") + e.what();
            }
            r.status = r.observed == f.expected ? FactStatus::Pass : FactStatus::Fail;
            report.results.push_back(std::move(r));
        }
    }
    return report;
}

FactReport run_all_facts(const std::vector<std::uint64_t>& seeds)
{
    const auto names = bundle_names();
    std::vector<FactReport> parts(names.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < names.size(); ++i) parts[i] = run_facts(get_bundle(names[i]), seeds);
    FactReport all;
    for (auto& p : parts)
        for (auto& r : p.results) all.results.push_back(std::move(r));
    return all;
}

std::vector<FiniteOpenGame> finite_open_catalog()
{
    const auto c01 = uniform_complete(2);
    const auto c012 = uniform_complete(3);
    std::vector<Path> branch;
    for (std::size_t k = 0; k < 4; ++k) {
        Path p;
        for (std::size_t j = 0; j <= k; ++j) p.push_back(rho_at(j));
        p.push_back(1 - rho_at(k + 1));
        branch.push_back(std::move(p));
    }
    return {
        {"pos_trunc6", c01, 0, triangular_truncation(6)},
        {"cyl_0_00", c01, 0, OpenCondition::cylinders({{0, 0, 0}}, "cyl-0.00")},
        {"nomove_branch4", c01, 0, OpenCondition::cylinders(branch, "branch-off-4")},
        {"c01_first_step", c01, 0, OpenCondition::cylinders({{0, 0}, {0, 1}}, "first-step")},
        {"c012_depth2", c012, 2, OpenCondition::cylinders({{2, 0}, {2, 1}, {2, 2, 0}, {2, 2, 1}, {2, 2, 2}}, "depth-2")},
        {"c01_third_position", c01, 0,
         OpenCondition::patterns({CylinderPattern{{{0}, {0, 1}, {1}}}, CylinderPattern{{{0}, {0, 1}, {0}}}},
                                 "third-position")},
    };
}

} // namespace bmg
