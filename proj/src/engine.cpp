#include "bmgame/engine.hpp"

#include "bmgame/analyzer.hpp"
#include "bmgame/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <queue>

namespace bmg {

const char* to_string(GameVerdict v)
{
    switch (v) {
    case GameVerdict::In: return "In";
    case GameVerdict::Out: return "Out";
    case GameVerdict::Undecided: return "Undecided";
    }
    return "?";
}

namespace {

constexpr std::size_t kSpoilerExpansions = 1u << 16;

GameVerdict verdict_of(const std::optional<Condition>& condition, const PlayPrefix& play)
{
    if (!condition) return GameVerdict::Undecided;
    switch (membership_at_depth(*condition, play.path()).verdict) {
    case Verdict::In: return GameVerdict::In;
    case Verdict::Out: return GameVerdict::Out;
    case Verdict::Unknown: return GameVerdict::Undecided;
    }
    return GameVerdict::Undecided;
}

// Shared bookkeeping of both referees: records a move and decides whether to stop.
struct Referee {
    PlayTranscript& t;
    const std::optional<Condition>& condition;
    const PlayOptions& opt;

    bool after_move(const Continuation& c, std::optional<BigInt> size = std::nullopt,
                    std::optional<Rational> mass = std::nullopt)
    {
        MoveRecord rec;
        rec.turn = t.play.move_count();
        rec.player = t.play.moves().back().player;
        rec.move = c;
        rec.offered_size = std::move(size);
        rec.offered_mass = std::move(mass);
        if (opt.track) rec.tracked = opt.track(t.play.path());
        t.records.push_back(std::move(rec));
        if (condition && opt.stop_on_verdict) {
            const GameVerdict v = verdict_of(condition, t.play);
            if (v != GameVerdict::Undecided) {
                t.termination = "verdict";
                return true;
            }
        }
        if (opt.stop && opt.stop(t.play)) {
            t.termination = "stop";
            return true;
        }
        if (opt.max_length && t.play.length() > *opt.max_length) {
            t.termination = "length";
            return true;
        }
        return false;
    }

    void finish()
    {
        if (t.termination.empty()) t.termination = "rounds";
        t.verdict = verdict_of(condition, t.play);
    }
};

} // namespace

PlayTranscript play_classical(const FiniteGraph& g, Vertex v0, const Strategy& pl1, const Strategy& pl0,
                              std::size_t rounds, const std::optional<Condition>& condition, const PlayOptions& opt)
{
    if (rounds == 0) throw Error(ErrorKind::InvalidArgument, "rounds must be >= 1");
    if (!g.contains(v0)) throw Error(ErrorKind::UnknownVertex, "start vertex " + std::to_string(v0));
    PlayTranscript t;
    t.play = PlayPrefix(v0);
    Referee ref{t, condition, opt};
    for (std::size_t r = 0; r < rounds; ++r) {
        for (Player p : {Player::One, Player::Zero}) {
            const Strategy& s = p == Player::One ? pl1 : pl0;
            const Continuation c = respond(s, t.play, t.play.moves_by(p) + 1);
            check_continuation(g, c);
            t.play.append(c);
            if (ref.after_move(c)) {
                ref.finish();
                return t;
            }
        }
    }
    ref.finish();
    return t;
}

// ---- offered sets ----------------------------------------------------------------------

OfferedSet OfferedSet::list(std::vector<Continuation> items)
{
    OfferedSet s;
    s.items_ = std::move(items);
    return s;
}

OfferedSet OfferedSet::cover(std::shared_ptr<const PrefixMonitor> monitor, std::size_t max_len)
{
    if (!monitor) throw Error(ErrorKind::InvalidArgument, "cover needs a monitor");
    OfferedSet s;
    s.monitor_ = std::move(monitor);
    s.max_len_ = max_len;
    return s;
}

bool OfferedSet::contains(PathView base, const Continuation& c) const
{
    if (monitor_) return in_cover(*monitor_, base, c, max_len_);
    return std::find(items_.begin(), items_.end(), c) != items_.end();
}

Rational OfferedSet::mass(const ReasonableMeasure& m, PathView base) const
{
    if (monitor_) return cover_profile(m, *monitor_, base, max_len_).covered;
    PrefixFreeSet s;
    for (const auto& c : items_) s.insert(extend(base, c));
    return cond_prob(m, s, base).value();
}

BigInt OfferedSet::size(const ReasonableMeasure& m, PathView base) const
{
    if (!monitor_) {
        std::vector<Continuation> u = items_;
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return BigInt(static_cast<unsigned long>(u.size()));
    }
    BigInt total(0);
    for (const auto& c : cover_profile(m, *monitor_, base, max_len_).first_hit_count) total += c;
    return total;
}

std::vector<Continuation> OfferedSet::materialize(const FiniteGraph& g, PathView base, std::size_t cap) const
{
    if (monitor_) return enumerate_cover(g, *monitor_, base, max_len_, cap);
    std::vector<Continuation> out(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(std::min(cap, items_.size())));
    return out;
}

namespace {

bool valid_move(const FiniteGraph& g, const PlayPrefix& prefix, const Continuation& c)
{
    if (c.anchor != prefix.last() || c.steps.empty()) return false;
    try {
        check_continuation(g, c);
    } catch (const Error&) {
        return false;
    }
    return true;
}

} // namespace

bool validate_alpha_move(const ReasonableMeasure& m, const PlayPrefix& prefix, const std::vector<Continuation>& offered,
                         const Rational& alpha)
{
    if (offered.empty()) return false;
    for (const auto& c : offered)
        if (!valid_move(m.graph(), prefix, c)) return false;
    return OfferedSet::list(offered).mass(m, prefix.path()) >= alpha;
}

bool validate_alpha_move(const ReasonableMeasure& m, const PlayPrefix& prefix, const OfferedSet& offered,
                         const Rational& alpha)
{
    if (!offered.is_cover()) return validate_alpha_move(m, prefix, offered.items(), alpha);
    if (offered.max_len() == 0) return false;
    return offered.mass(m, prefix.path()) >= alpha;
}

Legality phi_ball(const FiniteGraph& g)
{
    return [g](const PlayPrefix& prefix, const OfferedSet& s) {
        return !s.is_cover() && s.items().size() == 1 && valid_move(g, prefix, s.items().front());
    };
}

Legality phi_alpha(const ReasonableMeasure& m, Rational alpha)
{
    return [m, alpha](const PlayPrefix& prefix, const OfferedSet& s) { return validate_alpha_move(m, prefix, s, alpha); };
}

GeneralisedGameConfig alpha_game_config(std::shared_ptr<const ReasonableMeasure> m, Vertex v0, Rational alpha,
                                        std::optional<Condition> condition)
{
    if (alpha <= 0 || alpha >= 1) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
    GeneralisedGameConfig cfg;
    cfg.phi0 = phi_alpha(*m, std::move(alpha));
    cfg.phi1 = phi_ball(m->graph());
    cfg.measure = std::move(m);
    cfg.v0 = v0;
    cfg.condition = std::move(condition);
    return cfg;
}

namespace {

Continuation single_element(const FiniteGraph& g, const PlayPrefix& prefix, const OfferedSet& s)
{
    auto items = s.materialize(g, prefix.path(), 1);
    if (items.empty()) throw Error(ErrorKind::IllegalSetMove, "empty set");
    return items.front();
}

} // namespace

PlayTranscript play_alpha_game(const GeneralisedGameConfig& cfg, const AlphaStrategy& pl0, const Selector& pl1,
                               std::size_t rounds, const PlayOptions& opt)
{
    if (rounds == 0) throw Error(ErrorKind::InvalidArgument, "rounds must be >= 1");
    const ReasonableMeasure& m = *cfg.measure;
    const FiniteGraph& g = m.graph();
    PlayTranscript t;
    t.play = PlayPrefix(cfg.v0);
    Referee ref{t, cfg.condition, opt};
    auto turn = [&] { return std::to_string(t.play.move_count() + 1); };

    OfferedSet next = pl1.opening(t.play);
    for (std::size_t r = 0; r < rounds; ++r) {
        if (!cfg.phi1(t.play, next)) {
            throw Error(ErrorKind::IllegalSetMove, "turn " + turn() + ": Pl.1 set rejected (" + pl1.name + ")");
        }
        const Continuation c1 = single_element(g, t.play, next);
        t.play.append(c1);
        if (ref.after_move(c1)) break;

        const OfferedSet offer = pl0.rule(t.play);
        if (!cfg.phi0(t.play, offer)) {
            throw Error(ErrorKind::IllegalSetMove, "turn " + turn() + ": Pl.0 set rejected (" + pl0.name + ")");
        }
        auto [chosen, proposal] = pl1.select(t.play, offer);
        if (!offer.contains(t.play.path(), chosen)) {
            throw Error(ErrorKind::IllegalSetMove, "turn " + turn() + ": selection outside the offered set");
        }
        BigInt size = offer.size(m, t.play.path());
        Rational mass = offer.mass(m, t.play.path());
        t.play.append(chosen);
        if (ref.after_move(chosen, std::move(size), std::move(mass))) break;
        next = std::move(proposal);
    }
    ref.finish();
    return t;
}

AlphaStrategy lift_to_sets(const Strategy& pl0)
{
    return AlphaStrategy{pl0.name(), Rational(0), [pl0](const PlayPrefix& p) {
                             return OfferedSet::list({respond(pl0, p, p.moves_by(Player::Zero) + 1)});
                         }};
}

Selector lift_to_selector(const Strategy& pl1)
{
    Selector s;
    s.name = pl1.name();
    s.opening = [pl1](const PlayPrefix& p) { return OfferedSet::list({respond(pl1, p, p.moves_by(Player::One) + 1)}); };
    s.select = [pl1](const PlayPrefix& p, const OfferedSet& offer) {
        if (offer.is_cover() || offer.items().empty()) {
            throw Error(ErrorKind::SelectionFailure, "lifted selector expects an explicit set");
        }
        const Continuation chosen = offer.items().front();
        const PlayPrefix after = concat(p, chosen);
        return std::pair{chosen, OfferedSet::list({respond(pl1, after, after.moves_by(Player::One) + 1)})};
    };
    return s;
}

Selector measure_random_selector(std::shared_ptr<const ReasonableMeasure> m, std::uint64_t seed, std::size_t max_len)
{
    const Strategy mover = random_player(*m, seed, max_len);
    Selector s;
    s.name = "measure-random(" + std::to_string(seed) + ")";
    s.opening = [mover](const PlayPrefix& p) { return OfferedSet::list({respond(mover, p, 1)}); };
    s.select = [m, mover, seed](const PlayPrefix& p, const OfferedSet& offer) {
        Rng rng(stream_seed(seed ^ 0x9e3779b97f4a7c15ull, path_hash(p.path())));
        Continuation chosen;
        if (offer.is_cover()) {
            auto c = sample_cover(*m, *offer.monitor(), p.path(), offer.max_len(), rng);
            if (!c) throw Error(ErrorKind::SelectionFailure, "rejection sampling found no element of the cover");
            chosen = std::move(*c);
        } else {
            const auto& items = offer.items();
            if (items.empty()) throw Error(ErrorKind::SelectionFailure, "empty offer");
            std::vector<double> cum;
            double total = 0;
            for (const auto& c : items) {
                total += cyl_prob_after(*m, extend(p.path(), c), p.length()).get_d();
                cum.push_back(total);
            }
            const double u = uniform01(rng) * total;
            const auto k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
            chosen = items[std::min(k, items.size() - 1)];
        }
        const PlayPrefix after = concat(p, chosen);
        return std::pair{chosen, OfferedSet::list({respond(mover, after, 1)})};
    };
    return s;
}

// ---- constructions ---------------------------------------------------------------------

namespace {
// Levels scanned for infinite Gd families before treating the prefix as certified.
constexpr std::size_t kLevelScan = 4096;
} // namespace

std::pair<AlphaStrategy, Rational> alpha_from_bounded(const Strategy& f, std::shared_ptr<const ReasonableMeasure> m)
{
    if (!f.bound()) throw Error(ErrorKind::InvalidArgument, "strategy '" + f.name() + "' has no declared bound");
    const Rational alpha = pow(m->min_transition(), static_cast<unsigned>(*f.bound()));
    AlphaStrategy a{"bounded(" + f.name() + ")", alpha, [f](const PlayPrefix& p) {
                        return OfferedSet::list({respond(f, p, p.moves_by(Player::Zero) + 1)});
                    }};
    return {std::move(a), alpha};
}

namespace {

// Error messages stay readable on long plays.
std::string brief_path(PathView path)
{
    if (path.size() <= 24) return format_path(path);
    return "(length " + std::to_string(path.size()) + ") ..." + format_path(path.subspan(path.size() - 12));
}

std::string brief_mass(const Rational& r)
{
    const std::string exact = format_rational(r);
    return exact.size() <= 40 ? exact : "~" + std::to_string(r.get_d());
}

} // namespace

AlphaStrategy alpha_from_move_counting(const Strategy& h, std::shared_ptr<const ReasonableMeasure> m, Rational alpha,
                                       std::size_t max_len)
{
    if (alpha <= 0 || alpha >= 1) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
    if (!h.as<MoveCountingRule>()) throw Error(ErrorKind::InvalidArgument, "needs a move-counting strategy");
    struct Cache {
        std::mutex mu;
        std::map<std::size_t, std::map<Vertex, std::vector<Vertex>>> gn;
    };
    auto cache = std::make_shared<Cache>();
    auto rule = [h, m, alpha, max_len, cache](const PlayPrefix& p) {
        const std::size_t n = p.length();
        std::map<Vertex, std::vector<Vertex>> table;
        {
            std::lock_guard lock(cache->mu);
            auto it = cache->gn.find(n);
            if (it == cache->gn.end()) {
                const Strategy gn = gn_from_move_counting(h, m->graph(), n);
                std::map<Vertex, std::vector<Vertex>> t;
                for (const auto& [v, c] : gn.as<PositionalRule>()->table) t.emplace(v, c.steps);
                it = cache->gn.emplace(n, std::move(t)).first;
            }
            table = it->second;
        }
        auto mon = std::make_shared<ChainedPatternMonitor>(std::move(table), n);
        const auto prof = cover_profile(*m, *mon, p.path(), max_len, alpha);
        if (prof.covered < alpha) {
            throw Error(ErrorKind::BudgetExceeded, "offer mass " + brief_mass(prof.covered) + " < " +
                                                       format_rational(alpha) + " within " +
                                                       std::to_string(max_len) + " steps (n=" + std::to_string(n) +
                                                       ")");
        }
        return OfferedSet::cover(std::move(mon), prof.depth);
    };
    return AlphaStrategy{"movalpha(" + h.name() + ")", alpha, std::move(rule)};
}


AlphaStrategy alpha_for_gd_prob_one(const GdCondition& w, std::shared_ptr<const ReasonableMeasure> m, Rational alpha,
                                    std::size_t budget)
{
    if (alpha <= 0 || alpha >= 1) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
    auto rule = [w, m, alpha, budget](const PlayPrefix& p) {
        const std::size_t top = w.level_count().value_or(kLevelScan);
        const auto n = w.first_uncertified(p.path(), top);
        if (!n) {
            // Every level already holds on the whole cylinder: any full offer will do.
            std::vector<Continuation> all;
            for (Vertex v : m->graph().successors(p.last())) all.emplace_back(p.last(), std::vector<Vertex>{v});
            return OfferedSet::list(std::move(all));
        }
        const OpenCondition level = w.level(*n);
        const std::string where = "level " + std::to_string(*n) + " at " + brief_path(p.path()) + ": ";
        if (const auto& mon = level.monitor()) {
            const auto prof = cover_profile(*m, *mon, p.path(), budget, alpha);
            if (prof.covered >= alpha) return OfferedSet::cover(mon, prof.depth);
            if (prof.open() == 0 || prof.covered + prof.open() < alpha) {
                throw Error(ErrorKind::LevelStuck, where + "mass cap, P(W_n | prefix) <= " +
                                                       format_rational(prof.covered + prof.open()) + " < " +
                                                       format_rational(alpha));
            }
            throw Error(ErrorKind::LevelStuck, where + "budget exhausted after " + std::to_string(budget) +
                                                   " steps with mass " + brief_mass(prof.covered));
        }
        const auto found = open_mass_search(*m, level, p.path(), alpha, budget);
        if (found.set) {
            std::vector<Continuation> items;
            for (const auto& path : *found.set) {
                items.emplace_back(p.last(), std::vector<Vertex>(path.begin() + static_cast<std::ptrdiff_t>(p.length()),
                                                                 path.end()));
            }
            return OfferedSet::list(std::move(items));
        }
        if (found.space_exhausted) {
            throw Error(ErrorKind::LevelStuck, where + "mass cap, P(W_n | prefix) = " +
                                                   format_rational(found.reached) + " < " + format_rational(alpha));
        }
        throw Error(ErrorKind::LevelStuck, where + "budget exhausted after " + std::to_string(budget) +
                                               " expansions with mass " + brief_mass(found.reached));
    };
    return AlphaStrategy{"gd-alpha(" + w.name() + ")", alpha, std::move(rule)};
}

// ---- Pl.1 spoiler ----------------------------------------------------------------------

namespace {

struct OpenEvaluator {
    const ReasonableMeasure& m;
    const OpenCondition& w;
    std::optional<PrefixFreeSet> reduced;

    OpenEvaluator(const ReasonableMeasure& mm, const OpenCondition& ww) : m(mm), w(ww)
    {
        if (!w.is_finite()) throw Error(ErrorKind::InvalidArgument, "needs a finite generator list");
        if (w.all_plain()) reduced = w.reduced();
    }

    Rational operator()(PathView path) const
    {
        if (reduced) return cond_prob(m, *reduced, path).value();
        return cover_profile(m, *w.monitor(), path, std::max<std::size_t>(1, w.max_generator_length())).covered;
    }
};

} // namespace

Rational cond_prob_open(const ReasonableMeasure& m, const OpenCondition& w, PathView path)
{
    return OpenEvaluator(m, w)(path);
}

InfimumWitness compute_IW(const ReasonableMeasure& m, const OpenCondition& w, Vertex v0)
{
    const OpenEvaluator eval(m, w);
    const std::size_t depth = w.max_generator_length() > 0 ? w.max_generator_length() - 1 : 0;
    InfimumWitness best{eval(Path{v0}), PlayPrefix(v0)};
    std::vector<Path> layer{{v0}};
    for (std::size_t d = 1; d <= depth && best.value > 0; ++d) {
        std::vector<Path> next;
        for (const auto& p : layer) {
            for (Vertex v : m.graph().successors(p.back())) {
                Path q = p;
                q.push_back(v);
                const Rational c = eval(q);
                if (c < best.value) best = {c, PlayPrefix::from_path(q)};
                next.push_back(std::move(q));
            }
        }
        layer = std::move(next);
    }
    best.value.canonicalize();
    return best;
}

bool opening_condition(const Rational& i_w, const Rational& cond, const Rational& alpha, const Rational& p_w)
{
    return i_w + (cond - i_w) / alpha < p_w;
}

std::pair<Selector, SpoilerPlan> spoiler_for_open(const OpenCondition& w, std::shared_ptr<const ReasonableMeasure> m,
                                                  Vertex v0, Rational alpha, std::size_t depth_cap)
{
    if (alpha <= 0 || alpha >= 1) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
    if (!w.is_finite()) throw Error(ErrorKind::InvalidArgument, "the spoiler needs a finite generator list");
    SpoilerPlan plan;
    plan.alpha = alpha;
    plan.p_w = prob_open_exact(*m, w, v0);
    if (plan.p_w == 1) throw Error(ErrorKind::NotSubProbOne, "P(W) = 1, Pl.0 wins every alpha-game");
    plan.i_w = compute_IW(*m, w, v0).value;

    // The evaluator refers to *m and *keep_w; the lambdas below keep both alive.
    auto keep_w = std::make_shared<OpenCondition>(w);
    auto eval = std::make_shared<OpenEvaluator>(*m, *keep_w);

    // Best-first: always extend the candidate with the smallest conditional. Conditionals of the
    // children average to the parent's, so this descends toward the infimum quickly.
    const std::size_t cap = std::max(depth_cap, w.max_generator_length());
    auto reset = [m, eval, keep_w, plan, cap](PathView base) {
        using Node = std::pair<Rational, std::vector<Vertex>>;
        auto later = [](const Node& a, const Node& b) {
            if (a.first != b.first) return a.first > b.first;
            if (a.second.size() != b.second.size()) return a.second.size() > b.second.size();
            return a.second > b.second;
        };
        std::priority_queue<Node, std::vector<Node>, decltype(later)> open(later);
        open.push({Rational(0), {}});
        for (std::size_t expanded = 0; !open.empty() && expanded < kSpoilerExpansions; ++expanded) {
            const auto steps = open.top().second;
            open.pop();
            const Vertex at = steps.empty() ? base.back() : steps.back();
            for (Vertex v : m->graph().successors(at)) {
                auto s = steps;
                s.push_back(v);
                Continuation c(base.back(), s);
                Rational x = (*eval)(extend(base, c));
                if (opening_condition(plan.i_w, x, plan.alpha, plan.p_w)) return c;
                if (s.size() < cap) open.push({std::move(x), std::move(s)});
            }
        }
        throw Error(ErrorKind::SearchCapReached, "no continuation within " + std::to_string(cap) +
                                                     " steps satisfies the opening inequality");
    };

    const Path root{v0};
    plan.opening = reset(root);
    plan.opening_conditional = (*eval)(extend(root, plan.opening));

    Selector s;
    s.name = "spoiler(" + w.name() + ")";
    s.opening = [reset](const PlayPrefix& p) { return OfferedSet::list({reset(p.path())}); };
    s.select = [m, eval, plan, reset](const PlayPrefix& p, const OfferedSet& offer) {
        for (const auto& c : offer.materialize(m->graph(), p.path(), 1u << 16)) {
            const Path q = extend(p.path(), c);
            if ((*eval)(q) <= plan.p_w) return std::pair{c, OfferedSet::list({reset(q)})};
        }
        throw Error(ErrorKind::SelectionFailure, "no offered continuation keeps P(W | prefix) <= P(W) at " +
                                                     format_path(p.path()));
    };
    return {std::move(s), std::move(plan)};
}

} // namespace bmg
