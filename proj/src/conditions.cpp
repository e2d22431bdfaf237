#include "bmgame/conditions.hpp"

#include "bmgame/error.hpp"
#include "bmgame/scc.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace bmg {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::In: return "In";
    case Verdict::Out: return "Out";
    case Verdict::Unknown: return "Unknown";
    }
    return "?";
}

OpenCondition OpenCondition::cylinders(std::vector<Path> generators, std::string name)
{
    std::vector<CylinderPattern> ps;
    for (const auto& g : generators) {
        if (g.empty()) throw Error(ErrorKind::InvalidArgument, "empty cylinder generator");
        ps.push_back(CylinderPattern::cylinder(g));
    }
    return patterns(std::move(ps), std::move(name));
}

OpenCondition OpenCondition::patterns(std::vector<CylinderPattern> generators, std::string name)
{
    OpenCondition w;
    w.name_ = std::move(name);
    w.finite_ = true;
    w.generators_ = std::move(generators);
    w.monitor_ = std::make_shared<PatternUnionMonitor>(w.generators_);
    return w;
}

OpenCondition OpenCondition::monitored(std::shared_ptr<const PrefixMonitor> monitor, std::string name,
                                       std::optional<MassOneCertificate> certificate)
{
    OpenCondition w;
    w.name_ = std::move(name);
    w.monitor_ = std::move(monitor);
    w.certificate_ = std::move(certificate);
    return w;
}

OpenCondition OpenCondition::stream(GeneratorStream generators, std::size_t budget, std::string name)
{
    OpenCondition w;
    w.name_ = std::move(name);
    w.stream_ = std::move(generators);
    w.budget_ = budget;
    return w;
}

bool OpenCondition::all_plain() const
{
    return finite_ && std::all_of(generators_.begin(), generators_.end(), [](const auto& p) { return p.is_plain(); });
}

std::size_t OpenCondition::max_generator_length() const
{
    std::size_t d = 0;
    for (const auto& p : generators_) d = std::max(d, p.length());
    return d;
}

PrefixFreeSet OpenCondition::reduced() const
{
    if (!all_plain()) throw Error(ErrorKind::InvalidArgument, "reduced() needs plain cylinder generators");
    PrefixFreeSet s;
    for (const auto& p : generators_) s.insert(p.as_path());
    return s;
}

Membership OpenCondition::membership(PathView path) const
{
    if (monitor_) {
        switch (monitor_->status_of(path)) {
        case MonitorStatus::Covered: return {Verdict::In, false};
        case MonitorStatus::Excluded: return {Verdict::Out, false};
        case MonitorStatus::Open: return {Verdict::Unknown, false};
        }
    }
    bool compatible = false;
    for (std::size_t i = 0; i < budget_; ++i) {
        auto gen = stream_(i);
        if (!gen) return {compatible ? Verdict::Unknown : Verdict::Out, false};
        if (gen->covers(path)) return {Verdict::In, false};
        compatible = compatible || gen->compatible(path);
    }
    return {Verdict::Unknown, true};
}

std::optional<std::size_t> GdCondition::first_uncertified(PathView path, std::size_t max_level) const
{
    const std::size_t top = count_ ? std::min(*count_, max_level) : max_level;
    for (std::size_t n = 1; n <= top; ++n) {
        if (level(n).membership(path).verdict != Verdict::In) return n;
    }
    return std::nullopt;
}

Membership GdCondition::membership(PathView path, std::size_t level_budget) const
{
    const std::size_t top = count_ ? std::min(*count_, level_budget) : level_budget;
    bool all_in = true;
    bool flag = false;
    for (std::size_t n = 1; n <= top; ++n) {
        const auto m = level(n).membership(path);
        flag = flag || m.budget_exceeded;
        if (m.verdict == Verdict::Out) return {Verdict::Out, flag};
        all_in = all_in && m.verdict == Verdict::In;
    }
    // Infinitely many levels can never all be certified by a finite prefix.
    if (all_in && count_ && *count_ <= level_budget) return {Verdict::In, flag};
    return {Verdict::Unknown, flag || (!count_ || *count_ > level_budget)};
}

ParityCondition::ParityCondition(std::shared_ptr<const FiniteGraph> graph, std::size_t states, std::size_t initial,
                                 std::vector<std::vector<std::size_t>> transitions, std::vector<unsigned> priorities,
                                 std::string name)
    : graph_(std::move(graph)),
      states_(states),
      initial_(initial),
      delta_(std::move(transitions)),
      priority_(std::move(priorities)),
      name_(std::move(name))
{
    if (states_ == 0 || initial_ >= states_) throw Error(ErrorKind::InvalidArgument, "bad automaton state count");
    if (delta_.size() != states_ || priority_.size() != states_) {
        throw Error(ErrorKind::InvalidArgument, "transition/priority tables must cover every state");
    }
    for (const auto& row : delta_) {
        if (row.size() != graph_->size()) {
            throw Error(ErrorKind::InvalidArgument, "transition function must be total over the vertex alphabet");
        }
        for (std::size_t q : row)
            if (q >= states_) throw Error(ErrorKind::InvalidArgument, "transition to unknown state");
    }
    analyse();
}

std::size_t ParityCondition::run(PathView path) const
{
    std::size_t q = initial_;
    for (Vertex v : path) q = next(q, v);
    return q;
}

void ParityCondition::analyse()
{
    const std::size_t nv = graph_->size();
    const std::size_t n = nv * states_;
    std::vector<std::vector<std::size_t>> succ(n), pred(n);
    for (std::size_t vi = 0; vi < nv; ++vi) {
        for (std::size_t q = 0; q < states_; ++q) {
            for (std::size_t wi : graph_->successor_indices(vi)) {
                const std::size_t t = product_index(wi, delta_[q][wi]);
                succ[product_index(vi, q)].push_back(t);
                pred[t].push_back(product_index(vi, q));
            }
        }
    }
    may_accept_.assign(n, 0);
    may_reject_.assign(n, 0);
    std::vector<unsigned> prios(priority_.begin(), priority_.end());
    std::sort(prios.begin(), prios.end());
    prios.erase(std::unique(prios.begin(), prios.end()), prios.end());
    for (unsigned p : prios) {
        auto prio_of = [&](std::size_t s) { return priority_[s % states_]; };
        auto restricted = [&](std::size_t s) {
            std::vector<std::size_t> out;
            if (prio_of(s) < p) return out;
            for (std::size_t t : succ[s])
                if (prio_of(t) >= p) out.push_back(t);
            return out;
        };
        auto comps = strongly_connected_components(n, restricted);
        std::vector<char> seed(n, 0);
        for (const auto& comp : comps) {
            if (prio_of(comp.front()) < p) continue;
            bool cyclic = comp.size() > 1;
            if (!cyclic) {
                for (std::size_t t : succ[comp.front()]) cyclic = cyclic || t == comp.front();
            }
            const bool has_p = std::any_of(comp.begin(), comp.end(), [&](std::size_t s) { return prio_of(s) == p; });
            if (cyclic && has_p)
                for (std::size_t s : comp) seed[s] = 1;
        }
        auto& target = (p % 2 == 0) ? may_accept_ : may_reject_;
        std::vector<std::size_t> work;
        for (std::size_t s = 0; s < n; ++s)
            if (seed[s] && !target[s]) {
                target[s] = 1;
                work.push_back(s);
            }
        while (!work.empty()) {
            const std::size_t s = work.back();
            work.pop_back();
            for (std::size_t r : pred[s])
                if (!target[r]) {
                    target[r] = 1;
                    work.push_back(r);
                }
        }
    }
}

Membership ParityCondition::membership(PathView path) const
{
    if (path.empty()) return {};
    const std::size_t s = product_index(graph_->index_of(path.back()), run(path));
    if (!may_reject_[s]) return {Verdict::In, false};
    if (!may_accept_[s]) return {Verdict::Out, false};
    return {Verdict::Unknown, false};
}

std::string condition_name(const Condition& w)
{
    return std::visit([](const auto& c) { return c.name(); }, w);
}

Membership membership_at_depth(const Condition& w, PathView path)
{
    return std::visit([&](const auto& c) { return c.membership(path); }, w);
}

bool lasso_membership(const ParityCondition& w, PathView stem, const Continuation& loop)
{
    const FiniteGraph& g = w.graph();
    if (stem.empty() || !g.is_path(stem)) throw Error(ErrorKind::EdgeViolation, "stem is not a path");
    if (loop.anchor != stem.back()) throw Error(ErrorKind::AnchorMismatch, "loop must be anchored at the stem's end");
    check_continuation(g, loop);
    if (!g.has_edge(loop.steps.back(), loop.steps.front())) {
        throw Error(ErrorKind::LoopNotClosed, "no edge from the loop's last step back to its first step");
    }
    std::size_t q = w.run(stem);
    std::map<std::size_t, std::size_t> seen; // state at iteration start -> iteration
    std::vector<unsigned> iteration_min;
    for (std::size_t it = 0;; ++it) {
        auto [pos, fresh] = seen.emplace(q, it);
        if (!fresh) {
            unsigned best = ~0u;
            for (std::size_t k = pos->second; k < it; ++k) best = std::min(best, iteration_min[k]);
            return best % 2 == 0;
        }
        unsigned m = ~0u;
        for (Vertex v : loop.steps) {
            q = w.next(q, v);
            m = std::min(m, w.priority(q));
        }
        iteration_min.push_back(m);
    }
}

MassSearch open_mass_search(const ReasonableMeasure& m, const OpenCondition& w, PathView given,
                            const Rational& target, std::size_t budget)
{
    MassSearch res;
    const FiniteGraph& g = m.graph();
    const auto* mon = w.monitor().get();
    auto status = [&](const MonitorState& s, PathView path) {
        if (mon) return mon->status(s);
        switch (w.membership(path).verdict) {
        case Verdict::In: return MonitorStatus::Covered;
        case Verdict::Out: return MonitorStatus::Excluded;
        default: return MonitorStatus::Open;
        }
    };
    struct Node {
        MonitorState state;
        Path path;
        Rational mass; // conditional on Cyl(given)
    };
    std::deque<Node> frontier;
    Node root{mon ? mon->run(given) : MonitorState{}, Path(given.begin(), given.end()), Rational(1)};
    PrefixFreeSet acc;
    if (status(root.state, root.path) == MonitorStatus::Excluded) {
        res.space_exhausted = true;
        return res;
    }
    frontier.push_back(std::move(root));
    while (!frontier.empty()) {
        if (res.expanded >= budget) return res;
        Node node = std::move(frontier.front());
        frontier.pop_front();
        ++res.expanded;
        const std::size_t vi = g.index_of(node.path.back());
        const auto succ = g.successor_indices(vi);
        for (std::size_t k = 0; k < succ.size(); ++k) {
            Node child;
            child.path = node.path;
            child.path.push_back(g.vertex_at(succ[k]));
            if (mon) child.state = mon->step(node.state, child.path.back());
            child.mass = node.mass * m.transition_at(vi, k);
            switch (status(child.state, child.path)) {
            case MonitorStatus::Covered:
                res.reached += child.mass;
                acc.insert(child.path);
                if (res.reached >= target) {
                    res.reached.canonicalize();
                    res.set = std::move(acc);
                    return res;
                }
                break;
            case MonitorStatus::Excluded: break;
            case MonitorStatus::Open: frontier.push_back(std::move(child)); break;
            }
        }
    }
    res.space_exhausted = true;
    res.reached.canonicalize();
    return res;
}

std::optional<PrefixFreeSet> open_mass_reached(const ReasonableMeasure& m, const OpenCondition& w, PathView given,
                                               const Rational& target, std::size_t budget)
{
    return open_mass_search(m, w, given, target, budget).set;
}

} // namespace bmg
