// bmgame: command-line front end (play, analyze, synthesize, corpus).

#include "bmgame/analyzer.hpp"
#include "bmgame/corpus.hpp"
#include "bmgame/error.hpp"
#include "bmgame/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace bmg;

namespace {

constexpr std::size_t kDefaultBudget = 10000;

enum Exit { kOk = 0, kFactFailure = 1, kValidation = 2, kRuntime = 3 };

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::SinkVertex:
    case ErrorKind::DanglingEdge:
    case ErrorKind::DuplicateVertex:
    case ErrorKind::UnknownVertex:
    case ErrorKind::NonPositiveWeight:
    case ErrorKind::MissingWeight:
    case ErrorKind::UnknownBundle:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Parse:
    case ErrorKind::LoopNotClosed: return kValidation;
    default: return kRuntime;
    }
}

std::size_t env_budget()
{
    if (const char* s = std::getenv("BMW_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(s));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, std::string("BMW_BUDGET is not a number: ") + s);
        }
    }
    return kDefaultBudget;
}

struct Common {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> budget;
};

std::uint64_t seed_of(const Common& c, const GameFile& f)
{
    if (c.seed) return *c.seed;
    return f.seeds.empty() ? 1 : f.seeds.front();
}

std::size_t budget_of(const Common& c, const GameFile& f)
{
    if (c.budget) return *c.budget;
    if (f.budget) return *f.budget;
    return env_budget();
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

void header(const std::string& command, std::uint64_t seed, std::size_t budget)
{
    emit({{"type", "header"}, {"version", kVersion}, {"command", command}, {"seed", seed}, {"budget", budget},
          {"rng", kRngName}});
}

GameFile load_game(const std::string& path)
{
    const Json j = load_json_file(path);
    if (is_artifact(j)) return game_of(parse_artifact(j));
    return parse_game_file(j);
}

const Json& decl_of(const GameFile& f, const std::string& role)
{
    auto it = f.strategies.find(role);
    if (it == f.strategies.end()) throw Error(ErrorKind::Parse, "strategies." + role + " is missing");
    return it->second;
}

std::optional<OpenCondition> finite_open(const ResolvedGame& g)
{
    if (!g.condition) return std::nullopt;
    const auto* w = std::get_if<OpenCondition>(&*g.condition);
    if (!w || !w->is_finite()) return std::nullopt;
    return *w;
}

// ---- play ----------------------------------------------------------------------------------

struct PlayArgs {
    std::string file;
    std::optional<std::size_t> rounds;
    std::optional<std::size_t> max_length;
    Common common;
};

PlayTranscript run_play(const GameFile& f, const ResolvedGame& game, std::uint64_t seed, std::size_t budget,
                        std::size_t rounds, std::optional<std::size_t> max_length)
{
    PlayOptions opt;
    opt.max_length = max_length;
    const PlayerSpec p0 = resolve_player(decl_of(f, "pl0"), game, seed, f.alpha, budget);
    const PlayerSpec p1 = resolve_player(decl_of(f, "pl1"), game, stream_seed(seed, 1), f.alpha, budget);
    if (!f.alpha) {
        if (!p0.classical || !p1.classical)
            throw Error(ErrorKind::Parse, "set-valued strategies need an alpha in the game file");
        return play_classical(game.graph(), game.v0, *p1.classical, *p0.classical, rounds, game.condition, opt);
    }
    AlphaStrategy pl0 = p0.alpha ? *p0.alpha : lift_to_sets(*p0.classical);
    if (!p0.alpha) pl0.alpha = *f.alpha;
    const Selector pl1 = p1.selector ? *p1.selector : lift_to_selector(*p1.classical);
    if (auto w = finite_open(game)) {
        const auto m = game.measure;
        opt.track = [m, w](PathView path) { return cond_prob_open(*m, *w, path); };
    }
    // Each alpha-strategy is refereed at the alpha it certifies.
    const auto cfg = alpha_game_config(game.measure, game.v0, pl0.alpha, game.condition);
    return play_alpha_game(cfg, pl0, pl1, rounds, opt);
}

int cmd_play(const PlayArgs& a)
{
    const GameFile f = load_game(a.file);
    const ResolvedGame game = resolve_game(f);
    const auto seed = seed_of(a.common, f);
    const auto budget = budget_of(a.common, f);
    const std::size_t rounds = a.rounds.value_or(f.rounds.value_or(20));
    header("play", seed, budget);
    const PlayTranscript t = run_play(f, game, seed, budget, rounds, a.max_length);
    for (const auto& r : t.records) emit(move_record_json(r));
    emit({{"type", "result"},
          {"verdict", to_string(t.verdict)},
          {"termination", t.termination},
          {"length", t.play.length()},
          {"notes", t.notes}});
    return kOk;
}

// ---- analyze -------------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string file;
    std::string mode = "exact";
    std::size_t depth = 64;
    std::size_t samples = 1000;
    std::size_t levels = 5;
    Common common;
};

Json verdict_json(const ProbVerdict& v)
{
    Json j{{"verdict", to_string(v.tag)}};
    if (v.tag == ProbVerdict::Tag::Exact || v.tag == ProbVerdict::Tag::One || v.tag == ProbVerdict::Tag::Zero)
        j["value"] = format_rational(v.value);
    if (v.tag == ProbVerdict::Tag::Interval) {
        j["lower"] = format_rational(v.lower);
        j["upper"] = format_rational(v.upper);
    }
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

int cmd_analyze(const AnalyzeArgs& a)
{
    const GameFile f = load_game(a.file);
    const ResolvedGame game = resolve_game(f);
    if (!game.condition) throw Error(ErrorKind::Parse, "analyze needs a condition");
    const auto seed = seed_of(a.common, f);
    const auto budget = budget_of(a.common, f);
    const auto& m = *game.measure;
    Json out{{"type", "analysis"}, {"mode", a.mode}, {"condition", condition_name(*game.condition)}};
    if (a.mode == "exact") {
        if (auto w = finite_open(game)) {
            out.update(verdict_json(ProbVerdict::exact(prob_open_exact(m, *w, game.v0))));
        } else if (const auto* p = std::get_if<ParityCondition>(&*game.condition)) {
            const auto sol = solve_parity(m, *p, game.v0, true);
            out.update(verdict_json(ProbVerdict::exact(sol.probability)));
            out["product_states"] = sol.product_states;
            out["bsccs"] = sol.bscc_count;
            out["accepting_bsccs"] = sol.accepting_bsccs;
        } else {
            throw Error(ErrorKind::InvalidArgument,
                        "exact mode needs a finite open or parity condition; try --mode qualitative");
        }
    } else if (a.mode == "qualitative") {
        out.update(verdict_json(is_prob_one(m, *game.condition, game.v0, a.depth, a.levels)));
    } else if (a.mode == "montecarlo") {
        if (a.samples == 0) throw Error(ErrorKind::InvalidArgument, "--samples must be at least 1");
        const auto r = monte_carlo(m, *game.condition, game.v0, a.depth, a.samples, seed, a.levels);
        out.update(verdict_json(r.interval));
        out["in"] = r.in;
        out["out"] = r.out;
        out["unknown"] = r.unknown;
        out["samples"] = a.samples;
        out["depth"] = a.depth;
        if (!r.level_in.empty()) out["level_in"] = r.level_in;
    } else if (a.mode == "bruteforce") {
        auto w = finite_open(game);
        if (!w) throw Error(ErrorKind::InvalidArgument, "bruteforce mode needs a finite open condition");
        out.update(verdict_json(ProbVerdict::exact(brute_force_open_mass_parallel(m, *w, game.v0, a.depth))));
        out["depth"] = a.depth;
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown mode " + a.mode);
    }
    header("analyze", seed, budget);
    emit(out);
    return kOk;
}

// ---- synthesize ----------------------------------------------------------------------------

struct SynthArgs {
    std::string file;
    std::string construction;
    std::string out;
    std::optional<std::size_t> games;
    Common common;
};

Json verdict_counts(const std::vector<PlayTranscript>& ts)
{
    std::size_t in = 0, out = 0, undecided = 0;
    for (const auto& t : ts) {
        if (t.verdict == GameVerdict::In) ++in;
        else if (t.verdict == GameVerdict::Out) ++out;
        else ++undecided;
    }
    return {{"games", ts.size()}, {"in", in}, {"out", out}, {"undecided", undecided}};
}

std::vector<Continuation> table_input(const GameFile& f)
{
    auto it = f.inputs.find("table");
    if (it == f.inputs.end())
        throw Error(ErrorKind::Parse, "prop5 needs the per-BSCC table of bounded answers (inputs.table)");
    std::vector<Continuation> table;
    for (const auto& e : it->second) {
        if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::Parse, "inputs.table: entries are [anchor, [steps]]");
        table.emplace_back(e[0].get<Vertex>(), e[1].get<std::vector<Vertex>>());
    }
    return table;
}

Json validate_prop5(const ResolvedGame& game, const Strategy& f)
{
    const auto* w = game.condition ? std::get_if<ParityCondition>(&*game.condition) : nullptr;
    if (!w) return {{"lassos", "skipped: no parity condition"}};
    // Every positional Pl.1 whose answers have at most two steps.
    std::vector<std::vector<Continuation>> options;
    std::size_t combos = 1;
    for (Vertex v : game.graph().vertices()) {
        std::vector<Continuation> opts;
        for (std::size_t len = 1; len <= 2; ++len)
            for (auto& c : enumerate_continuations(game.graph(), v, len)) opts.push_back(c);
        combos *= opts.size();
        if (combos > 100000) return {{"lassos", "skipped: too many Pl.1 tables"}};
        options.push_back(std::move(opts));
    }
    std::size_t accepting = 0;
    std::vector<std::size_t> pick(options.size(), 0);
    for (std::size_t n = 0; n < combos; ++n) {
        std::map<Vertex, Continuation> table;
        for (std::size_t i = 0; i < options.size(); ++i) table[game.graph().vertex_at(i)] = options[i][pick[i]];
        accepting += positional_lasso_accepts(game.graph(), game.v0, Strategy::positional(table, "pl1"), f, *w);
        for (std::size_t i = 0; i < pick.size(); ++i) {
            if (++pick[i] < options[i].size()) break;
            pick[i] = 0;
        }
    }
    return {{"lassos", combos}, {"accepting", accepting}};
}

int cmd_synthesize(const SynthArgs& a)
{
    const GameFile f = load_game(a.file);
    const ResolvedGame game = resolve_game(f);
    const auto seed = seed_of(a.common, f);
    const auto budget = budget_of(a.common, f);
    const std::size_t rounds = f.rounds.value_or(10);
    StrategyArtifact art;
    art.construction = a.construction;
    art.role = "pl0";
    art.game = f;
    Json validation{{"seed", seed}, {"budget", budget}};
    auto random_pl1 = [&](std::size_t i) { return random_player(*game.measure, stream_seed(seed, i), 3); };
    const std::string& c = a.construction;

    if (c == "prop2" || c == "prop4") {
        Json decl{{"kind", "construction"}, {"construction", c}};
        if (c == "prop2") {
            decl["of"] = decl_of(f, "pl0");
        } else {
            auto it = f.inputs.find("family");
            if (it == f.inputs.end()) throw Error(ErrorKind::Parse, "prop4 needs a positional family (inputs.family)");
            decl["family"] = it->second;
        }
        const Strategy s = *resolve_player(decl, game, seed, f.alpha, budget).classical;
        std::vector<PlayTranscript> ts;
        for (std::size_t i = 0; i < a.games.value_or(10); ++i)
            ts.push_back(play_classical(game.graph(), game.v0, random_pl1(i), s, rounds, game.condition));
        validation.update(verdict_counts(ts));
        art.strategy = decl;
    } else if (c == "prop5") {
        const auto table = table_input(f);
        if (auto it = f.strategies.find("pl0"); it != f.strategies.end()) {
            const auto h = resolve_player(it->second, game, seed, f.alpha, budget);
            if (h.classical) check_prop5_table(game.graph(), *h.classical, table, 16);
        }
        const Strategy s = bounded_move_counting_to_positional(game.graph(), table);
        art.strategy = positional_to_json(s);
        validation.update(validate_prop5(game, s));
    } else if (c == "movalpha" || c == "thm4") {
        if (!f.alpha) throw Error(ErrorKind::Parse, c + " needs alpha in the game file");
        Json decl{{"kind", "construction"}, {"construction", c}, {"alpha", format_rational(*f.alpha)}};
        if (c == "movalpha") {
            decl["of"] = decl_of(f, "pl0");
            decl["max_len"] = budget;
        } else {
            decl["budget"] = budget;
        }
        const AlphaStrategy s = *resolve_player(decl, game, seed, f.alpha, budget).alpha;
        const auto cfg = alpha_game_config(game.measure, game.v0, *f.alpha, game.condition);
        std::vector<PlayTranscript> ts;
        PlayOptions opt;
        opt.max_length = budget;
        const auto* gd = game.condition ? std::get_if<GdCondition>(&*game.condition) : nullptr;
        if (gd) opt.stop = [gd](const PlayPrefix& p) { return !gd->first_uncertified(p.path(), 5); };
        std::size_t certified = 0;
        for (std::size_t i = 0; i < a.games.value_or(10); ++i) {
            ts.push_back(play_alpha_game(cfg, s, measure_random_selector(game.measure, stream_seed(seed, i), 3),
                                         gd ? 1000 : rounds, opt));
            certified += ts.back().termination == "stop";
        }
        validation.update(verdict_counts(ts));
        validation["live_validation"] = "every offer passed";
        if (gd) validation["levels_1_to_5_certified"] = certified;
        art.strategy = decl;
    } else if (c == "thm5") {
        if (!f.alpha) throw Error(ErrorKind::Parse, "thm5 needs alpha in the game file");
        Json decl{{"kind", "construction"}, {"construction", "thm5"}, {"alpha", format_rational(*f.alpha)}};
        const PlayerSpec spec = resolve_player(decl, game, seed, f.alpha, budget);
        const auto w = finite_open(game);
        std::vector<PlayTranscript> ts;
        for (std::size_t i = 0; i < a.games.value_or(100); ++i) {
            // Opponents: alpha-strategies lifted from random 2-bounded strategies.
            const auto [pl0, alpha0] = alpha_from_bounded(random_player(*game.measure, stream_seed(seed, i), 2), game.measure);
            const auto cfg = alpha_game_config(game.measure, game.v0, alpha0, game.condition);
            ts.push_back(play_alpha_game(cfg, pl0, *spec.selector, rounds));
        }
        validation.update(verdict_counts(ts));
        const auto& plan = *spec.spoiler;
        validation["p_w"] = format_rational(plan.p_w);
        validation["i_w"] = format_rational(plan.i_w);
        validation["opening"] = plan.opening.steps;
        validation["opening_conditional"] = format_rational(plan.opening_conditional);
        art.role = "pl1";
        art.strategy = decl;
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown construction '" + c + "'");
    }
    art.validation = validation;
    const std::string text = canonical_dump(to_json(art));
    if (a.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream o(a.out);
        if (!o) throw Error(ErrorKind::Parse, "cannot write " + a.out);
        o << text;
        emit({{"type", "artifact"}, {"path", a.out}, {"construction", c}, {"validation", validation}});
    }
    return kOk;
}

// ---- corpus --------------------------------------------------------------------------------

int cmd_corpus_list()
{
    for (const auto& name : bundle_names()) {
        const auto b = get_bundle(name);
        Json roles = Json::array();
        for (const auto& r : b.strategies) roles.push_back(r.role);
        emit({{"type", "bundle"}, {"name", name}, {"description", b.description}, {"facts", b.facts.size()},
              {"strategies", roles}});
    }
    return kOk;
}

int cmd_corpus_run(const std::string& name, std::vector<std::uint64_t> seeds)
{
    if (seeds.empty()) seeds = kCorpusSeeds;
    const FactReport r = name == "all" ? run_all_facts(seeds) : run_facts(get_bundle(name), seeds);
    emit({{"type", "header"}, {"version", kVersion}, {"command", "corpus run"}, {"seeds", seeds}, {"bundle", name}});
    for (const auto& x : r.results) {
        Json j{{"type", "fact"},           {"bundle", x.bundle},     {"fact", x.fact},
               {"status", to_string(x.status)}, {"expected", x.expected}, {"observed", x.observed}};
        if (x.seed) j["seed"] = *x.seed;
        emit(j);
    }
    emit({{"type", "summary"},
          {"pass", r.count(FactStatus::Pass)},
          {"fail", r.count(FactStatus::Fail)},
          {"asserted", r.count(FactStatus::Asserted)}});
    return r.ok() ? kOk : kFactFailure;
}

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--seed", c.seed, "Seed (default: first seed of the file, else 1)");
    cmd->add_option("--budget", c.budget, "Search budget (default: file, then $BMW_BUDGET, then 10000)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Banach-Mazur game workbench on finite graphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    PlayArgs play;
    auto* p = app.add_subcommand("play", "Run a classical or alpha game and print its transcript");
    p->add_option("file", play.file, "Game file or strategy artifact")->required();
    p->add_option("--rounds", play.rounds, "Rounds (a round is one move of each player)");
    p->add_option("--max-length", play.max_length, "Stop once the play has more vertices than this");
    add_common(p, play.common);

    AnalyzeArgs an;
    auto* a = app.add_subcommand("analyze", "Probability of the winning condition");
    a->add_option("file", an.file, "Game file")->required();
    a->add_option("--mode", an.mode, "exact | qualitative | montecarlo | bruteforce")
        ->check(CLI::IsMember({"exact", "qualitative", "montecarlo", "bruteforce"}));
    a->add_option("--depth", an.depth, "Depth (steps) for qualitative, Monte Carlo and brute force");
    a->add_option("--samples", an.samples, "Monte Carlo samples");
    a->add_option("--levels", an.levels, "Gd levels inspected");
    add_common(a, an.common);

    SynthArgs sy;
    auto* s = app.add_subcommand("synthesize", "Build a strategy by one of the constructions");
    s->add_option("file", sy.file, "Game file")->required();
    s->add_option("--construction", sy.construction, "prop2 | prop4 | prop5 | movalpha | thm4 | thm5")->required();
    s->add_option("--out", sy.out, "Write the artifact here instead of stdout");
    s->add_option("--games", sy.games, "Validation games");
    add_common(s, sy.common);

    auto* c = app.add_subcommand("corpus", "Example bundles");
    c->require_subcommand(1);
    c->add_subcommand("list", "List bundles");
    std::string bundle;
    std::vector<std::uint64_t> seeds;
    auto* run = c->add_subcommand("run", "Run a bundle's facts (or all)");
    run->add_option("name", bundle, "Bundle name or 'all'")->required();
    run->add_option("--seed", seeds, "Seed (repeatable; default: the three corpus seeds)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    try {
        if (*p) return cmd_play(play);
        if (*a) return cmd_analyze(an);
        if (*s) return cmd_synthesize(sy);
        if (c->got_subcommand("list")) return cmd_corpus_list();
        return cmd_corpus_run(bundle, seeds);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}
