#include "shoq/model.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "shoq/logic.hpp"

namespace shoq {

bool Interpretation::has_edge(const Role& r, std::size_t x, std::size_t y) const {
    auto it = roles.find(r);
    return it != roles.end() && it->second.count({x, y}) > 0;
}

// ── Saturation paths ────────────────────────────────────────────────────────

namespace {

bool excluded_status(const Status& s, std::optional<NodeId> wrt) {
    if (s.is(StatusKind::Closed)) return true;
    if (wrt && s.closed_wrt(*wrt)) return true;
    return false;
}

// When the run ended with an open root, resolution stays inside the open
// subgraph: the open-propagation rules certify that open states have open
// testingClosedness successors and a feasible residual with every non-open
// counted successor pinned to zero.
struct WalkPolicy {
    bool open_only = false;
    std::optional<NodeId> wrt;

    bool allowed(const TableauGraph& g, NodeId w) const {
        if (open_only) return g.node(w).status.is(StatusKind::Open);
        return !excluded_status(g.node(w).status, wrt);
    }
    bool terminal(const TableauGraph& g, NodeId w) const;
};

// Nodes from which a path terminal is reachable through allowed statuses.
std::vector<bool> terminal_reach(const TableauGraph& g, const WalkPolicy& policy) {
    std::vector<bool> reaches(g.node_count(), false);
    bool grew = true;
    while (grew) {
        grew = false;
        for (NodeId w = 0; w < static_cast<NodeId>(g.node_count()); ++w) {
            if (reaches[w]) continue;
            if (policy.terminal(g, w)) {
                reaches[w] = true;
                grew = true;
                continue;
            }
            if (g.node(w).is_state() || !policy.allowed(g, w)) continue;
            for (NodeId s : g.successors(w)) {
                if (reaches[s]) {
                    reaches[w] = true;
                    grew = true;
                    break;
                }
            }
        }
    }
    return reaches;
}

bool blocked_like(const TableauGraph& g, NodeId v) {
    const TableauNode& n = g.node(v);
    if (n.is_state()) return false;
    if (n.status.is(StatusKind::Blocked)) return true;
    // A nominal node that was never expanded but had its blocked status
    // overridden by closed-wrt behaves as a blocked terminal.
    if (!g.successors(v).empty()) return false;
    for (const Formula& f : n.label)
        if (f.kind() == FormulaKind::ConceptOnly &&
            f.concept_part().kind() == ConceptKind::Nominal)
            return true;
    return false;
}

bool WalkPolicy::terminal(const TableauGraph& g, NodeId w) const {
    if (!allowed(g, w)) return false;
    if (g.node(w).is_state()) return true;
    return !open_only && wrt.has_value() && blocked_like(g, w);
}

// Deterministic walk: smallest-id allowed successor among those that can
// still reach a terminal.
std::vector<NodeId> walk_path(const TableauGraph& g, NodeId v, const WalkPolicy& policy) {
    SHOQ_CHECK(!g.node(v).is_state());
    SHOQ_CHECK(policy.allowed(g, v));
    std::vector<bool> reaches = terminal_reach(g, policy);

    std::vector<NodeId> path{v};
    std::set<NodeId> seen{v};
    NodeId cur = v;
    while (true) {
        std::optional<NodeId> next;
        for (NodeId w : g.successors(cur)) {  // ascending ids
            if (!policy.allowed(g, w) || !reaches[w]) continue;
            next = w;
            break;
        }
        if (!next) {
            std::ostringstream os;
            os << "saturation path stuck at v" << cur << " (from v" << v << ")";
            throw EngineDefect(os.str());
        }
        path.push_back(*next);
        if (!seen.insert(*next).second) throw EngineDefect("saturation path revisits a node");
        if (policy.terminal(g, *next)) return path;
        cur = *next;
    }
}

}  // namespace

std::vector<NodeId> saturation_path(const TableauGraph& g, NodeId v, std::optional<NodeId> wrt) {
    WalkPolicy policy;
    policy.wrt = wrt;
    return walk_path(g, v, policy);
}

// ── Model extraction ────────────────────────────────────────────────────────

namespace {

std::vector<Concept> substituted_concepts(const FormulaSet& full,
                                          const std::map<Individual, Individual>& repl) {
    std::vector<Concept> out;
    for (const Formula& f : full) {
        SHOQ_CHECK(f.kind() == FormulaKind::ConceptOnly);
        out.push_back(substitute(f.concept_part(), repl));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

ModelGraph extract_model(const TableauGraph& g, const KnowledgeBase& kb, long ilp_node_budget) {
    SHOQ_CHECK(!g.node(g.root()).status.is(StatusKind::Closed));

    // Open-root runs resolve inside the open subgraph; quiescent runs use
    // the closed-wrt machinery relative to the terminal state u.
    WalkPolicy root_policy;
    root_policy.open_only = g.node(g.root()).status.is(StatusKind::Open);
    std::vector<NodeId> root_path = walk_path(g, g.root(), root_policy);
    NodeId u = root_path.back();
    const TableauNode& un = g.node(u);
    SHOQ_CHECK(un.is_state() && un.is_complex());
    const std::map<Individual, Individual>& repl = un.ind_repl;

    ModelGraph m;
    auto element_of = std::map<Individual, std::size_t>{};
    for (const Individual& a : kb.individuals) {
        auto it = repl.find(a);
        if (it != repl.end() && it->second == a) {
            element_of[a] = m.element_names.size();
            m.element_names.push_back(a.name);
            m.concepts.emplace_back();
        }
    }
    SHOQ_CHECK(!m.element_names.empty());
    std::size_t base_size = m.element_names.size();

    for (const Individual& a : kb.individuals) {
        auto it = repl.find(a);
        Individual rep = it != repl.end() ? it->second : kb.individuals.front();
        auto el = element_of.find(rep);
        SHOQ_CHECK(el != element_of.end());
        m.interprets[a] = el->second;
    }

    FormulaSet full_u = g.full_label(u);
    for (const Formula& f : full_u) {
        Formula sf = substitute(f, repl);
        if (sf.kind() == FormulaKind::Instance) {
            auto el = element_of.find(sf.subject());
            SHOQ_CHECK(el != element_of.end());
            m.concepts[el->second].insert(sf.concept_part());
        } else if (sf.kind() == FormulaKind::RoleAssertion) {
            m.edges[sf.role_part()].insert(
                {element_of.at(sf.first()), element_of.at(sf.second())});
        }
    }

    // Resolution: named elements draw successors from u's outgoing edges,
    // created elements from their recorded target state.  Terminal states are
    // pooled so repeated labels are materialized once per multiplicity slot.
    std::vector<NodeId> f_target(m.size(), -1);
    std::map<NodeId, std::vector<std::size_t>> pool;
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < m.size(); ++i) queue.push_back(i);
    WalkPolicy policy;
    policy.open_only = root_policy.open_only;
    if (!policy.open_only) policy.wrt = u;
    std::vector<bool> resolvable = terminal_reach(g, policy);

    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::size_t y = queue[qi];
        NodeId v;
        std::optional<Individual> pi_filter;
        if (y < base_size) {
            v = u;
            pi_filter = Individual{m.element_names[y]};
        } else {
            v = f_target[y];
            SHOQ_CHECK(v >= 0);
        }

        struct Pair {
            NodeId succ;
            EdgeLabel label;
        };
        std::vector<Pair> we;
        for (NodeId w : g.successors(v)) {
            for (const EdgeLabel& e : g.edge_labels(v, w)) {
                if (pi_filter && e.individual != pi_filter) continue;
                if (!pi_filter && y < base_size) continue;
                we.push_back({w, e});
            }
        }
        std::sort(we.begin(), we.end(), [](const Pair& a, const Pair& b) {
            if (a.succ != b.succ) return a.succ < b.succ;
            return a.label < b.label;
        });

        // Pin the counted successors that cannot be resolved: in open mode
        // every non-open one (the open rule's residual), otherwise those
        // closed w.r.t. u and, more generally, those
        // from which no terminal is reachable.
        ilp::Problem problem = g.node(v).ilc.problem;
        for (const Pair& p : we) {
            if (p.label.tag != EdgeTag::CheckingFeasibility) continue;
            if (!resolvable[p.succ]) {
                int idx = g.node(v).ilc.var_index({p.succ, p.label});
                SHOQ_CHECK(idx >= 0);
                problem.add_eq0(idx);
            }
        }
        ilp::Result sol = ilp::check_feasibility(problem, {ilp_node_budget});
        if (!sol.feasible())
            throw EngineDefect("extraction: residual constraint system of v" + std::to_string(v) +
                               " is infeasible");

        std::map<NodeId, std::size_t> offset;  // per terminal state, this element's slots
        for (const Pair& p : we) {
            long count = 1;
            if (p.label.tag == EdgeTag::CheckingFeasibility) {
                int idx = g.node(v).ilc.var_index({p.succ, p.label});
                SHOQ_CHECK(idx >= 0);
                count = sol.witness[idx];
            }
            if (count == 0) continue;

            NodeId terminal;
            if (policy.terminal(g, p.succ)) {
                terminal = p.succ;
            } else {
                terminal = walk_path(g, p.succ, policy).back();
            }

            std::vector<Concept> x = substituted_concepts(g.full_label(terminal), repl);

            if (blocked_like(g, terminal)) {
                // The blocked node stands for the named individual: redirect
                // the edge back into the base and extend that individual's
                // requirements.
                std::vector<Individual> noms;
                for (const Concept& c : x)
                    if (c.kind() == ConceptKind::Nominal) noms.push_back(c.individual());
                SHOQ_CHECK(noms.size() == 1);
                SHOQ_CHECK(count == 1);
                auto el = element_of.find(noms[0]);
                SHOQ_CHECK(el != element_of.end());
                for (const Role& r : p.label.roles) m.edges[r].insert({y, el->second});
                for (const Concept& c : x) m.concepts[el->second].insert(c);
                continue;
            }

            SHOQ_CHECK(g.node(terminal).is_state());
            std::vector<std::size_t>& slots = pool[terminal];
            std::size_t& off = offset[terminal];
            for (long i = 0; i < count; ++i) {
                if (off + i >= slots.size()) {
                    std::size_t z = m.element_names.size();
                    m.element_names.push_back("z" + std::to_string(z));
                    m.concepts.emplace_back(x.begin(), x.end());
                    f_target.push_back(terminal);
                    slots.push_back(z);
                    queue.push_back(z);
                }
                std::size_t z = slots[off + i];
                for (const Role& r : p.label.roles) m.edges[r].insert({y, z});
            }
            off += count;
        }
    }
    bool settled = false;
    while (!settled) {
        settled = true;
        for (std::size_t x = 0; x < m.size(); ++x) {
            std::vector<Concept> work(m.concepts[x].begin(), m.concepts[x].end());
            for (const Concept& c : work) {
                if (c.kind() != ConceptKind::AtMost) continue;
                if (c.sub().kind() != ConceptKind::Nominal) continue;
                const Individual& b = c.sub().individual();
                auto rel = m.edges.find(c.role());
                if (rel == m.edges.end()) continue;
                for (const auto& [xx, y] : rel->second) {
                    if (xx != x) continue;
                    if (m.concepts[y].count(c.sub()) ||
                        m.concepts[y].count(Concept::neg_nominal(b)))
                        continue;
                    auto target = m.interprets.find(b);
                    bool is_b = target != m.interprets.end() && target->second == y;
                    if (m.concepts[y].insert(is_b ? c.sub() : Concept::neg_nominal(b)).second)
                        settled = false;
                }
            }
        }
    }
    return m;
}

// ── Consistency / R-saturation conditions ───────────────────────────────────

std::vector<std::string> check_model_graph(const ModelGraph& m, const RBoxClosure& rbox) {
    std::vector<std::string> bad;
    auto name = [&](std::size_t x) { return m.element_names[x]; };
    auto has = [&](std::size_t x, const Concept& c) { return m.concepts[x].count(c) > 0; };

    for (std::size_t x = 0; x < m.size(); ++x) {
        for (const Concept& c : m.concepts[x]) {
            if (c.kind() == ConceptKind::Bot) bad.push_back("(1) bot at " + name(x));
            if (!c.is_residual() && has(x, negate_nnf(c)))
                bad.push_back("(1) clash pair at " + name(x) + ": " + to_string(c));
            if (c.is_residual())
                bad.push_back("(1) residual concept leaked into nC at " + name(x));
        }
    }
    for (const auto& [r, rel] : m.edges) {
        for (const Role& s : rbox.supers_of(r)) {
            if (s == r) continue;
            for (const auto& [x, y] : rel) {
                auto it = m.edges.find(s);
                if (it == m.edges.end() || !it->second.count({x, y}))
                    bad.push_back("(2) missing superrole edge " + s.name + "(" + name(x) + "," +
                                  name(y) + ")");
            }
        }
    }
    for (std::size_t x = 0; x < m.size(); ++x) {
        for (const Concept& c : m.concepts[x]) {
            switch (c.kind()) {
                case ConceptKind::Nominal: {
                    auto it = m.interprets.find(c.individual());
                    if (it == m.interprets.end() || it->second != x)
                        bad.push_back("(3) nominal " + c.individual().name + " not mapped to " +
                                      name(x));
                    break;
                }
                case ConceptKind::And:
                    if (!has(x, c.lhs()) || !has(x, c.rhs()))
                        bad.push_back("(4) unsplit conjunction at " + name(x));
                    break;
                case ConceptKind::Or:
                    if (!has(x, c.lhs()) && !has(x, c.rhs()))
                        bad.push_back("(5) unresolved disjunction at " + name(x) + ": " +
                                      to_string(c));
                    break;
                case ConceptKind::Forall: {
                    for (const auto& [r, rel] : m.edges) {
                        if (!rbox.subsumes(r, c.role())) continue;
                        if (!has(x, Concept::forall(r, c.sub())))
                            bad.push_back("(6) missing subrole universal at " + name(x));
                        for (const auto& [xx, y] : rel) {
                            if (xx != x) continue;
                            if (r == c.role() && !has(y, c.sub()))
                                bad.push_back("(7) universal not propagated " + name(x) + "->" +
                                              name(y));
                            if (r == c.role() && rbox.is_transitive(r) && !has(y, c))
                                bad.push_back("(8) transitive universal not carried " + name(x) +
                                              "->" + name(y));
                        }
                    }
                    break;
                }
                case ConceptKind::Exists: {
                    bool found = false;
                    auto it = m.edges.find(c.role());
                    if (it != m.edges.end())
                        for (const auto& [xx, y] : it->second)
                            if (xx == x && has(y, c.sub())) found = true;
                    if (!found)
                        bad.push_back("(9) unwitnessed existential at " + name(x) + ": " +
                                      to_string(c));
                    break;
                }
                case ConceptKind::AtLeast:
                case ConceptKind::AtMost: {
                    std::size_t count = 0;
                    auto it = m.edges.find(c.role());
                    if (it != m.edges.end())
                        for (const auto& [xx, y] : it->second) {
                            if (xx != x) continue;
                            if (has(y, c.sub())) ++count;
                            if (c.kind() == ConceptKind::AtMost && !has(y, c.sub()) &&
                                !has(y, negate_nnf(c.sub())))
                                bad.push_back("(12) undecided filler at " + name(y) + " for " +
                                              to_string(c));
                        }
                    if (c.kind() == ConceptKind::AtLeast && count < c.count())
                        bad.push_back("(10) atleast unsatisfied at " + name(x) + ": " +
                                      to_string(c));
                    if (c.kind() == ConceptKind::AtMost && count > c.count())
                        bad.push_back("(11) atmost exceeded at " + name(x) + ": " + to_string(c));
                    break;
                }
                default:
                    break;
            }
        }
    }
    return bad;
}

// ── Corresponding model ─────────────────────────────────────────────────────

Interpretation corresponding_model(const ModelGraph& m, const RBoxClosure& rbox) {
    Interpretation interp;
    interp.domain = m.size();
    interp.element_names = m.element_names;
    for (const auto& [a, x] : m.interprets) interp.individuals[a] = x;
    for (std::size_t x = 0; x < m.size(); ++x) {
        for (const Concept& c : m.concepts[x]) {
            if (c.kind() == ConceptKind::Atomic) {
                auto& mask = interp.concept_ext[c.name()];
                mask.resize(m.size(), false);
                mask[x] = true;
            }
        }
    }
    for (const Role& r : rbox.roles()) interp.roles[r];  // ensure presence
    for (const auto& [r, rel] : m.edges) interp.roles[r].insert(rel.begin(), rel.end());

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [r, rel] : interp.roles) {
            for (const Role& s : rbox.supers_of(r)) {
                if (s == r) continue;
                for (const auto& p : rel)
                    if (interp.roles[s].insert(p).second) changed = true;
            }
            if (rbox.is_transitive(r)) {
                std::vector<std::pair<std::size_t, std::size_t>> add;
                for (const auto& [x, y] : rel)
                    for (const auto& [y2, z] : rel)
                        if (y == y2 && !rel.count({x, z})) add.push_back({x, z});
                for (const auto& p : add) changed |= rel.insert(p).second;
            }
        }
    }
    return interp;
}

// ── Concept evaluation ──────────────────────────────────────────────────────

std::vector<bool> eval_concept(const Concept& c, const Interpretation& interp) {
    const std::size_t n = interp.domain;
    std::vector<bool> out(n, false);
    switch (c.kind()) {
        case ConceptKind::Top:
            out.assign(n, true);
            return out;
        case ConceptKind::Bot:
            return out;
        case ConceptKind::Atomic:
        case ConceptKind::NegAtomic: {
            auto it = interp.concept_ext.find(c.name());
            for (std::size_t x = 0; x < n; ++x) {
                bool member = it != interp.concept_ext.end() && x < it->second.size() &&
                              it->second[x];
                out[x] = c.kind() == ConceptKind::Atomic ? member : !member;
            }
            return out;
        }
        case ConceptKind::Nominal:
        case ConceptKind::NegNominal: {
            auto it = interp.individuals.find(c.individual());
            SHOQ_CHECK(it != interp.individuals.end());
            for (std::size_t x = 0; x < n; ++x)
                out[x] = (x == it->second) == (c.kind() == ConceptKind::Nominal);
            return out;
        }
        case ConceptKind::And:
        case ConceptKind::Or: {
            std::vector<bool> l = eval_concept(c.lhs(), interp);
            std::vector<bool> r = eval_concept(c.rhs(), interp);
            for (std::size_t x = 0; x < n; ++x)
                out[x] = c.kind() == ConceptKind::And ? (l[x] && r[x]) : (l[x] || r[x]);
            return out;
        }
        case ConceptKind::Exists:
        case ConceptKind::Forall: {
            std::vector<bool> sub = eval_concept(c.sub(), interp);
            auto it = interp.roles.find(c.role());
            for (std::size_t x = 0; x < n; ++x) {
                bool ex = false, all = true;
                if (it != interp.roles.end())
                    for (const auto& [xx, y] : it->second) {
                        if (xx != x) continue;
                        if (sub[y]) ex = true;
                        else all = false;
                    }
                out[x] = c.kind() == ConceptKind::Exists ? ex : all;
            }
            return out;
        }
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost: {
            std::vector<bool> sub = eval_concept(c.sub(), interp);
            auto it = interp.roles.find(c.role());
            for (std::size_t x = 0; x < n; ++x) {
                std::size_t count = 0;
                if (it != interp.roles.end())
                    for (const auto& [xx, y] : it->second)
                        if (xx == x && sub[y]) ++count;
                out[x] = c.kind() == ConceptKind::AtLeast ? count >= c.count()
                                                          : count <= c.count();
            }
            return out;
        }
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
        case ConceptKind::Not:
            throw ValidationError("eval_concept: internal form " + to_string(c));
    }
    SHOQ_CHECK(false);
}

// ── Model checking ──────────────────────────────────────────────────────────

CheckResult check_model(const Interpretation& interp, const KnowledgeBase& kb) {
    auto fail = [](const std::string& what) { return CheckResult{false, what}; };
    auto rel = [&](const Role& r) {
        static const std::set<std::pair<std::size_t, std::size_t>> kEmpty;
        auto it = interp.roles.find(r);
        return it == interp.roles.end() ? kEmpty : it->second;
    };

    for (const RBoxAxiom& ax : kb.rbox_axioms) {
        if (ax.kind == RBoxAxiom::Kind::Sub) {
            for (const auto& p : rel(ax.sub))
                if (!rel(ax.super).count(p))
                    return fail("rbox " + ax.sub.name + " sub " + ax.super.name);
        } else {
            const auto& r = rel(ax.sub);
            for (const auto& [x, y] : r)
                for (const auto& [y2, z] : r)
                    if (y == y2 && !r.count({x, z}))
                        return fail("rbox trans " + ax.sub.name);
        }
    }
    for (const Concept& c : kb.tbox) {
        std::vector<bool> ext = eval_concept(c, interp);
        for (std::size_t x = 0; x < interp.domain; ++x)
            if (!ext[x]) return fail("tbox concept " + to_string(c));
    }
    for (const Formula& f : kb.abox) {
        switch (f.kind()) {
            case FormulaKind::Instance: {
                auto it = interp.individuals.find(f.subject());
                if (it == interp.individuals.end()) return fail("unmapped " + f.subject().name);
                if (!eval_concept(f.concept_part(), interp)[it->second])
                    return fail(to_string(f));
                break;
            }
            case FormulaKind::RoleAssertion: {
                auto a = interp.individuals.find(f.first());
                auto b = interp.individuals.find(f.second());
                if (a == interp.individuals.end() || b == interp.individuals.end())
                    return fail(to_string(f));
                if (!interp.has_edge(f.role_part(), a->second, b->second))
                    return fail(to_string(f));
                break;
            }
            case FormulaKind::NotEq: {
                auto a = interp.individuals.find(f.first());
                auto b = interp.individuals.find(f.second());
                if (a == interp.individuals.end() || b == interp.individuals.end() ||
                    a->second == b->second)
                    return fail(to_string(f));
                break;
            }
            default:
                return fail("unsupported ABox assertion " + to_string(f));
        }
    }
    return CheckResult{};
}

// ── Brute-force oracle ──────────────────────────────────────────────────────

namespace {

void collect_concept_names(const Concept& c, std::set<std::string>& out) {
    switch (c.kind()) {
        case ConceptKind::Atomic:
        case ConceptKind::NegAtomic:
            out.insert(c.name());
            return;
        case ConceptKind::And:
        case ConceptKind::Or:
            collect_concept_names(c.lhs(), out);
            collect_concept_names(c.rhs(), out);
            return;
        case ConceptKind::Exists:
        case ConceptKind::Forall:
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
        case ConceptKind::Not:
            collect_concept_names(c.sub(), out);
            return;
        default:
            return;
    }
}

void close_roles(Interpretation& interp, const RBoxClosure& rbox) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [r, rel] : interp.roles) {
            for (const Role& s : rbox.supers_of(r)) {
                if (s == r) continue;
                for (const auto& p : rel)
                    if (interp.roles[s].insert(p).second) changed = true;
            }
            if (rbox.is_transitive(r)) {
                std::vector<std::pair<std::size_t, std::size_t>> add;
                for (const auto& [x, y] : rel)
                    for (const auto& [y2, z] : rel)
                        if (y == y2 && !rel.count({x, z})) add.push_back({x, z});
                for (const auto& p : add) changed |= rel.insert(p).second;
            }
        }
    }
}

}  // namespace

BruteResult brute_force_sat(const KnowledgeBase& kb, std::size_t max_domain, long budget) {
    std::set<std::string> names;
    for (const Concept& c : kb.tbox) collect_concept_names(c, names);
    for (const Formula& f : kb.abox)
        if (f.has_concept()) collect_concept_names(f.concept_part(), names);
    std::vector<std::string> name_list(names.begin(), names.end());
    std::vector<Role> role_list(kb.roles.begin(), kb.roles.end());
    long checks = 0;

    for (std::size_t d = 1; d <= max_domain; ++d) {
        // Odometer over: individual images, concept membership bits, role
        // edge bits.
        std::vector<std::size_t> ind(kb.individuals.size(), 0);
        while (true) {
            std::size_t concept_bits = name_list.size() * d;
            std::size_t role_bits = role_list.size() * d * d;
            std::vector<bool> bits(concept_bits + role_bits, false);
            while (true) {
                if (++checks > budget) return {BruteResult::Kind::Limit, std::nullopt};
                Interpretation interp;
                interp.domain = d;
                for (std::size_t x = 0; x < d; ++x)
                    interp.element_names.push_back("e" + std::to_string(x));
                for (std::size_t i = 0; i < kb.individuals.size(); ++i)
                    interp.individuals[kb.individuals[i]] = ind[i];
                for (std::size_t i = 0; i < name_list.size(); ++i) {
                    auto& mask = interp.concept_ext[name_list[i]];
                    mask.assign(d, false);
                    for (std::size_t x = 0; x < d; ++x) mask[x] = bits[i * d + x];
                }
                for (std::size_t i = 0; i < role_list.size(); ++i) {
                    auto& rel = interp.roles[role_list[i]];
                    for (std::size_t x = 0; x < d; ++x)
                        for (std::size_t y = 0; y < d; ++y)
                            if (bits[concept_bits + i * d * d + x * d + y]) rel.insert({x, y});
                }
                close_roles(interp, kb.rbox);
                if (check_model(interp, kb).ok)
                    return {BruteResult::Kind::Witness, std::move(interp)};

                std::size_t i = 0;
                while (i < bits.size() && bits[i]) bits[i++] = false;
                if (i == bits.size()) break;
                bits[i] = true;
            }
            std::size_t i = 0;
            while (i < ind.size() && ind[i] == d - 1) ind[i++] = 0;
            if (i == ind.size()) break;
            ++ind[i];
        }
    }
    return {BruteResult::Kind::NoModel, std::nullopt};
}

// ── Serialization ───────────────────────────────────────────────────────────

std::string serialize_model(const Interpretation& interp) {
    std::ostringstream os;
    os << "domain " << interp.domain << "\n";
    for (std::size_t x = 0; x < interp.element_names.size(); ++x)
        os << "element " << x << " " << interp.element_names[x] << "\n";
    for (const auto& [name, mask] : interp.concept_ext) {
        os << "concept " << name << " :";
        for (std::size_t x = 0; x < mask.size(); ++x)
            if (mask[x]) os << " " << x;
        os << "\n";
    }
    for (const auto& [r, rel] : interp.roles) {
        os << "role " << r.name << " :";
        for (const auto& [x, y] : rel) os << " (" << x << "," << y << ")";
        os << "\n";
    }
    for (const auto& [a, x] : interp.individuals)
        os << "individual " << a.name << " -> " << x << "\n";
    return os.str();
}

Interpretation parse_model(const std::string& text) {
    Interpretation interp;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "domain") {
            ls >> interp.domain;
        } else if (head == "element") {
            std::size_t idx;
            std::string name;
            ls >> idx >> name;
            interp.element_names.resize(std::max(interp.element_names.size(), idx + 1));
            interp.element_names[idx] = name;
        } else if (head == "concept") {
            std::string name, colon;
            ls >> name >> colon;
            auto& mask = interp.concept_ext[name];
            mask.assign(interp.domain, false);
            std::size_t x;
            while (ls >> x) mask[x] = true;
        } else if (head == "role") {
            std::string name, colon, pair;
            ls >> name >> colon;
            auto& rel = interp.roles[Role{name}];
            while (ls >> pair) {
                std::size_t comma = pair.find(',');
                if (pair.size() < 5 || pair.front() != '(' || pair.back() != ')' ||
                    comma == std::string::npos)
                    throw ParseError(line_no, 0, "bad role pair " + pair);
                rel.insert({std::stoul(pair.substr(1, comma - 1)),
                            std::stoul(pair.substr(comma + 1, pair.size() - comma - 2))});
            }
        } else if (head == "individual") {
            std::string name, arrow;
            std::size_t x;
            ls >> name >> arrow >> x;
            interp.individuals[Individual{name}] = x;
        } else {
            throw ParseError(line_no, 0, "unknown line " + head);
        }
    }
    return interp;
}

}  // namespace shoq
