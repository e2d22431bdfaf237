#include "bmgame/io.hpp"

#include "bmgame/corpus.hpp"
#include "bmgame/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bmg {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& need(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) bad(where + ": missing key '" + key + "'");
    return j.at(key);
}

template <class T>
T as(const Json& j, const std::string& where)
{
    try {
        return j.get<T>();
    } catch (const Json::exception&) {
        bad(where + ": unexpected value " + j.dump());
    }
}

Rational rational_of(const Json& j, const std::string& where)
{
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) bad(where + ": rationals are written as \"p/q\" strings");
    return parse_rational(j.get<std::string>());
}

std::vector<Vertex> steps_of(const Json& j, const std::string& where) { return as<std::vector<Vertex>>(j, where); }

Json steps_json(const std::vector<Vertex>& s) { return Json(s); }

} // namespace

GameFile parse_game_file(const Json& j)
{
    if (!j.is_object()) bad("game file: expected an object");
    GameFile f;
    const Json& graph = need(j, "graph", "game file");
    f.vertices = as<std::vector<Vertex>>(need(graph, "vertices", "graph"), "graph.vertices");
    for (const auto& e : need(graph, "edges", "graph")) {
        const auto pair = as<std::vector<Vertex>>(e, "graph.edges");
        if (pair.size() != 2) bad("graph.edges: each edge is [from, to]");
        f.edges.emplace_back(pair[0], pair[1]);
    }
    f.v0 = as<Vertex>(need(j, "v0", "game file"), "v0");
    if (j.contains("weights")) {
        for (const auto& w : j.at("weights")) {
            if (!w.is_array() || w.size() != 3) bad("weights: each entry is [from, to, \"p/q\"]");
            Rational r = rational_of(w[2], "weights");
            if (r <= 0) throw Error(ErrorKind::NonPositiveWeight, "weight of (" + w[0].dump() + "," + w[1].dump() + ") must be positive");
            f.weights.push_back({{as<Vertex>(w[0], "weights"), as<Vertex>(w[1], "weights")}, r});
        }
    }
    if (j.contains("condition")) f.condition = j.at("condition");
    if (j.contains("strategies")) {
        if (!j.at("strategies").is_object()) bad("strategies: expected an object keyed by role");
        for (const auto& [role, decl] : j.at("strategies").items()) {
            if (role != "pl0" && role != "pl1") bad("strategies: unknown role '" + role + "'");
            f.strategies[role] = decl;
        }
    }
    if (j.contains("seeds")) f.seeds = as<std::vector<std::uint64_t>>(j.at("seeds"), "seeds");
    if (j.contains("budget")) f.budget = as<std::size_t>(j.at("budget"), "budget");
    if (j.contains("alpha")) {
        f.alpha = rational_of(j.at("alpha"), "alpha");
        if (*f.alpha <= 0 || *f.alpha >= 1) bad("alpha must lie strictly between 0 and 1");
    }
    if (j.contains("rounds")) f.rounds = as<std::size_t>(j.at("rounds"), "rounds");
    if (j.contains("inputs")) {
        for (const auto& [k, v] : j.at("inputs").items()) f.inputs[k] = v;
    }
    for (const auto& [key, _] : j.items()) {
        static const std::vector<std::string> known = {"graph",  "v0",    "weights", "condition", "strategies",
                                                       "seeds", "budget", "alpha",   "rounds",    "inputs"};
        if (std::find(known.begin(), known.end(), key) == known.end()) bad("game file: unknown key '" + key + "'");
    }
    return f;
}

Json to_json(const GameFile& f)
{
    Json j;
    Json edges = Json::array();
    for (const auto& [a, b] : f.edges) edges.push_back({a, b});
    j["graph"] = {{"vertices", f.vertices}, {"edges", edges}};
    j["v0"] = f.v0;
    if (!f.weights.empty()) {
        Json w = Json::array();
        for (const auto& [e, r] : f.weights) w.push_back({e.first, e.second, format_rational(r)});
        j["weights"] = w;
    }
    if (!f.condition.is_null()) j["condition"] = f.condition;
    if (!f.strategies.empty()) j["strategies"] = Json(f.strategies);
    if (!f.seeds.empty()) j["seeds"] = f.seeds;
    if (f.budget) j["budget"] = *f.budget;
    if (f.alpha) j["alpha"] = format_rational(*f.alpha);
    if (f.rounds) j["rounds"] = *f.rounds;
    if (!f.inputs.empty()) j["inputs"] = Json(f.inputs);
    return j;
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
}

Json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

bool is_artifact(const Json& j) { return j.is_object() && j.contains("artifact"); }

StrategyArtifact parse_artifact(const Json& j)
{
    if (!is_artifact(j)) bad("not a strategy artifact");
    StrategyArtifact a;
    a.construction = as<std::string>(need(j, "construction", "artifact"), "construction");
    a.role = as<std::string>(need(j, "role", "artifact"), "role");
    if (a.role != "pl0" && a.role != "pl1") bad("artifact: role must be pl0 or pl1");
    a.game = parse_game_file(need(j, "game", "artifact"));
    a.strategy = need(j, "strategy", "artifact");
    if (j.contains("validation")) a.validation = j.at("validation");
    return a;
}

Json to_json(const StrategyArtifact& a)
{
    Json j;
    j["artifact"] = "strategy";
    j["version"] = kVersion;
    j["construction"] = a.construction;
    j["role"] = a.role;
    j["game"] = to_json(a.game);
    j["strategy"] = a.strategy;
    if (!a.validation.is_null()) j["validation"] = a.validation;
    return j;
}

GameFile game_of(const StrategyArtifact& a)
{
    GameFile g = a.game;
    g.strategies[a.role] = a.strategy;
    return g;
}

ResolvedGame resolve_game(const GameFile& f)
{
    ResolvedGame r;
    FiniteGraph g(f.vertices, f.edges);
    if (!g.contains(f.v0)) throw Error(ErrorKind::UnknownVertex, "v0 = " + std::to_string(f.v0));
    if (f.weights.empty()) {
        r.measure = std::make_shared<const ReasonableMeasure>(ReasonableMeasure::uniform(std::move(g)));
    } else {
        WeightMap w;
        for (const auto& [e, x] : f.weights) {
            if (!g.has_edge(e.first, e.second))
                bad("weights: (" + std::to_string(e.first) + "," + std::to_string(e.second) + ") is not an edge");
            w[e] = x;
        }
        r.measure = std::make_shared<const ReasonableMeasure>(std::move(g), w);
    }
    r.v0 = f.v0;
    if (!f.condition.is_null()) r.condition = resolve_condition(f.condition, r);
    return r;
}

namespace {

GameBundle bundle_for(const Json& decl, const ResolvedGame& game, const std::string& where)
{
    const auto name = as<std::string>(need(decl, "bundle", where), where + ".bundle");
    GameBundle b = get_bundle(name);
    if (!(b.graph() == game.graph())) bad(where + ": bundle " + name + " is defined on a different graph");
    return b;
}

} // namespace

Condition resolve_condition(const Json& decl, const ResolvedGame& game)
{
    const auto kind = as<std::string>(need(decl, "kind", "condition"), "condition.kind");
    const std::string name = decl.contains("name") ? as<std::string>(decl.at("name"), "condition.name") : kind;
    if (kind == "cylinders") {
        std::vector<Path> gens;
        for (const auto& p : need(decl, "generators", "condition")) {
            gens.push_back(steps_of(p, "condition.generators"));
            if (!game.graph().is_path(gens.back())) bad("condition: generator is not a path of the graph");
        }
        return OpenCondition::cylinders(std::move(gens), name);
    }
    if (kind == "patterns") {
        std::vector<CylinderPattern> gens;
        for (const auto& p : need(decl, "generators", "condition"))
            gens.push_back(CylinderPattern{as<std::vector<std::vector<Vertex>>>(p, "condition.generators")});
        return OpenCondition::patterns(std::move(gens), name);
    }
    if (kind == "parity") {
        auto g = std::make_shared<const FiniteGraph>(game.graph());
        return ParityCondition(g, as<std::size_t>(need(decl, "states", "condition"), "states"),
                               as<std::size_t>(need(decl, "initial", "condition"), "initial"),
                               as<std::vector<std::vector<std::size_t>>>(need(decl, "transitions", "condition"),
                                                                          "transitions"),
                               as<std::vector<unsigned>>(need(decl, "priorities", "condition"), "priorities"), name);
    }
    if (kind == "corpus") {
        GameBundle b = bundle_for(decl, game, "condition");
        if (decl.contains("truncate")) {
            if (b.name != "ex_pos") bad("condition: truncation is only defined for ex_pos");
            return triangular_truncation(as<std::size_t>(decl.at("truncate"), "truncate"));
        }
        return b.condition;
    }
    if (kind == "catalog") {
        const auto want = as<std::string>(need(decl, "entry", "condition"), "condition.entry");
        for (const auto& e : finite_open_catalog()) {
            if (e.name != want) continue;
            if (!(e.measure->graph() == game.graph())) bad("condition: catalog entry " + want + " uses another graph");
            return e.condition;
        }
        bad("condition: no catalog entry '" + want + "'");
    }
    bad("condition: unknown kind '" + kind + "'");
}

Json positional_to_json(const Strategy& s)
{
    const auto* rule = s.as<PositionalRule>();
    if (!rule) throw Error(ErrorKind::InvalidArgument, "only positional strategies serialize as tables");
    Json table = Json::object();
    for (const auto& [v, c] : rule->table) table[std::to_string(v)] = steps_json(c.steps);
    return {{"kind", "positional"}, {"table", table}, {"name", s.name()}};
}

namespace {

Strategy positional_of(const Json& decl, const std::string& where)
{
    std::map<Vertex, Continuation> table;
    for (const auto& [key, steps] : need(decl, "table", where).items()) {
        Vertex v = 0;
        try {
            v = static_cast<Vertex>(std::stoi(key));
        } catch (const std::exception&) {
            bad(where + ": table keys are vertices");
        }
        table[v] = Continuation(v, steps_of(steps, where + ".table"));
    }
    const std::string name = decl.contains("name") ? as<std::string>(decl.at("name"), where) : "positional";
    return Strategy::positional(std::move(table), name);
}

Strategy classical_of(const Json& decl, const ResolvedGame& game, std::uint64_t seed, std::optional<Rational> alpha,
                      std::size_t budget, const std::string& where)
{
    PlayerSpec p = resolve_player(decl, game, seed, alpha, budget);
    if (!p.classical) bad(where + ": expected a classical strategy");
    return *p.classical;
}

OpenCondition finite_open_of(const ResolvedGame& game, const std::string& construction)
{
    if (!game.condition) bad(construction + " needs a condition");
    const auto* w = std::get_if<OpenCondition>(&*game.condition);
    if (!w || !w->is_finite()) bad(construction + " needs an open condition with a finite generator list");
    return *w;
}

GdCondition gd_of(const ResolvedGame& game)
{
    if (!game.condition) bad("thm4 needs a condition");
    if (const auto* gd = std::get_if<GdCondition>(&*game.condition)) return *gd;
    if (const auto* w = std::get_if<OpenCondition>(&*game.condition)) {
        // An open set is the Gd set with a single level.
        return GdCondition([w = *w](std::size_t) { return w; }, w->name(), 1, w->certificate().has_value());
    }
    bad("thm4 needs an open or Gd condition");
}

Rational alpha_for(const Json& decl, std::optional<Rational> alpha, const std::string& where)
{
    if (decl.contains("alpha")) return rational_of(decl.at("alpha"), where + ".alpha");
    if (!alpha) bad(where + ": no alpha given");
    return *alpha;
}

} // namespace

PlayerSpec resolve_player(const Json& decl, const ResolvedGame& game, std::uint64_t seed,
                          std::optional<Rational> alpha, std::size_t budget)
{
    const std::string where = "strategy";
    const auto kind = as<std::string>(need(decl, "kind", where), where + ".kind");
    PlayerSpec out;
    if (kind == "positional") {
        out.classical = positional_of(decl, where);
        if (!positional_table_valid(game.graph(), *out.classical)) bad(where + ": positional table is not valid");
        return out;
    }
    if (kind == "corpus") {
        const GameBundle b = bundle_for(decl, game, where);
        out.classical = b.strategy(as<std::string>(need(decl, "role", where), where + ".role"));
        return out;
    }
    if (kind == "random") {
        const std::size_t max_len = decl.contains("max_len") ? as<std::size_t>(decl.at("max_len"), where) : 3;
        out.classical = random_player(*game.measure, seed, max_len);
        out.selector = measure_random_selector(game.measure, seed, max_len);
        return out;
    }
    if (kind != "construction") bad(where + ": unknown kind '" + kind + "'");
    const auto c = as<std::string>(need(decl, "construction", where), where + ".construction");
    if (c == "prop2") {
        const Strategy f = classical_of(need(decl, "of", where), game, seed, alpha, budget, where + ".of");
        out.classical = length_counting_from_general(f, game.graph(), game.v0);
    } else if (c == "prop4") {
        std::vector<Strategy> family;
        for (const auto& d : need(decl, "family", where)) family.push_back(positional_of(d, where + ".family"));
        if (family.empty()) bad(where + ": prop4 needs a non-empty family");
        out.classical = move_counting_from_positional_family(
            [family](std::size_t n) { return family[(n - 1) % family.size()]; });
    } else if (c == "movalpha") {
        const Strategy h = classical_of(need(decl, "of", where), game, seed, alpha, budget, where + ".of");
        const std::size_t max_len = decl.contains("max_len") ? as<std::size_t>(decl.at("max_len"), where) : budget;
        out.alpha = alpha_from_move_counting(h, game.measure, alpha_for(decl, alpha, where), max_len);
    } else if (c == "bounded") {
        const Strategy f = classical_of(need(decl, "of", where), game, seed, alpha, budget, where + ".of");
        out.alpha = alpha_from_bounded(f, game.measure).first;
    } else if (c == "thm4") {
        const std::size_t b = decl.contains("budget") ? as<std::size_t>(decl.at("budget"), where) : budget;
        out.alpha = alpha_for_gd_prob_one(gd_of(game), game.measure, alpha_for(decl, alpha, where), b);
    } else if (c == "thm5") {
        const std::size_t cap = decl.contains("depth_cap") ? as<std::size_t>(decl.at("depth_cap"), where) : 16;
        auto [sel, plan] =
            spoiler_for_open(finite_open_of(game, "thm5"), game.measure, game.v0, alpha_for(decl, alpha, where), cap);
        out.selector = std::move(sel);
        out.spoiler = std::move(plan);
    } else {
        bad(where + ": unknown construction '" + c + "'");
    }
    return out;
}

Json move_record_json(const MoveRecord& r)
{
    Json j;
    j["type"] = "move";
    j["turn"] = r.turn;
    j["player"] = to_string(r.player);
    j["anchor"] = r.move.anchor;
    j["steps"] = steps_json(r.move.steps);
    if (r.offered_size) j["offered_size"] = r.offered_size->get_str();
    if (r.offered_mass) j["offered_mass"] = format_rational(*r.offered_mass);
    if (r.tracked) j["tracked"] = format_rational(*r.tracked);
    return j;
}

} // namespace bmg
