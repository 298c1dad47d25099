#include "shoq/engine.hpp"

#include <algorithm>
#include <functional>
#include <iostream>
#include <sstream>

#include "shoq/logic.hpp"

namespace shoq {

namespace {

std::string node_name(NodeId v) { return "v" + std::to_string(v); }

std::string succ_mark(const ConnectResult& r) {
    return node_name(r.node) + (r.created ? "[new]" : "[cached]");
}

bool is_at_most(const Formula& f) {
    return f.has_concept() && f.concept_part().kind() == ConceptKind::AtMost;
}

// Collects the individuals b with {s(a,b), b:D} ⊆ full.
std::vector<Individual> named_witnesses(const FormulaSet& full, const Role& s,
                                        const Individual& a, const Concept& d) {
    std::vector<Individual> out;
    for (const Formula& f : full) {
        if (f.kind() != FormulaKind::RoleAssertion) continue;
        if (f.role_part() != s || f.first() != a) continue;
        if (full.contains(Formula::instance(f.second(), d))) out.push_back(f.second());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

Engine::Engine(KnowledgeBase kb, EngineConfig cfg)
    : kb_(std::move(kb)), cfg_(cfg), g_(TableauGraph::init_tableau(kb_)), tbox_(kb_.tbox) {
    trace_line("init " + node_name(g_.root()));
}

void Engine::trace_line(const std::string& line) {
    if (!cfg_.trace) return;
    std::ostream& os = cfg_.trace_out ? *cfg_.trace_out : std::cout;
    os << line << "\n";
}

void Engine::count_step(const char* rule) {
    ++stats_.rule_applications[rule];
    ++stats_.steps;
    if (cfg_.max_steps > 0 && stats_.steps > cfg_.max_steps)
        throw ResourceLimitError("engine step budget exceeded (" +
                                 std::to_string(cfg_.max_steps) + " steps)");
}

void Engine::enqueue_predecessors(NodeId changed) {
    for (NodeId p : g_.predecessors(changed)) prop_queue_.push_back(p);
}

bool Engine::update_status(NodeId v, Status s, const char* rule) {
    if (!g_.set_status(v, s)) return false;
    mark_node_dirty(v);
    trace_line(std::string(rule) + " " + node_name(v) + " | " + to_string(g_.node(v).status));
    count_step(rule);
    enqueue_predecessors(v);
    return true;
}

void Engine::set_status_silent(NodeId v, Status s) {
    if (g_.set_status(v, std::move(s))) {
        mark_node_dirty(v);
        enqueue_predecessors(v);
    }
}

bool Engine::close_wrt(NodeId v, NodeId u, const char* rule) {
    if (!g_.set_closed_wrt(v, u)) return false;
    mark_node_dirty(v);
    trace_line(std::string(rule) + " " + node_name(v) + " | " + to_string(g_.node(v).status));
    count_step(rule);
    enqueue_predecessors(v);
    return true;
}

ConnectResult Engine::connect(std::optional<NodeId> from, NodeType type, NodeSType stype,
                              FormulaSet label, FormulaSet rfmls,
                              std::optional<std::map<Individual, Individual>> ind_repl,
                              std::optional<EdgeLabel> elabel) {
    ConnectResult r = g_.con_to_succ(from, type, stype, std::move(label), std::move(rfmls),
                                     std::move(ind_repl), std::move(elabel));
    if (r.created || r.rfmls_grew) mark_node_dirty(r.node);
    if (from && (r.edge_added || r.elabel_added)) mark_node_dirty(*from);
    return r;
}

// ── ILP plumbing ────────────────────────────────────────────────────────────

std::string Engine::var_name(NodeId state, int var_index) const {
    const StateConstraints& ilc = g_.node(state).ilc;
    const IlpVarKey& key = ilc.vars.at(var_index);
    // Disambiguate parallel edge labels to the same successor.
    int ordinal = 0;
    for (int i = 0; i < var_index; ++i)
        if (ilc.vars[i].succ == key.succ) ++ordinal;
    std::string name = "x(" + node_name(key.succ);
    if (ordinal > 0) name += ":" + std::to_string(ordinal);
    return name + ")";
}

bool Engine::ilc_feasible(NodeId state, const std::vector<int>& extra_zero_vars) {
    ilp::Problem p = g_.node(state).ilc.problem;
    for (int v : extra_zero_vars) p.add_eq0(v);
    ++stats_.ilp_calls;
    return ilp::check_feasibility(p, {cfg_.ilp_node_budget}).feasible();
}

// ── UPS1 ────────────────────────────────────────────────────────────────────

namespace {
// Largest pairwise-inequality clique at least `need` large within `w`.
bool has_inequality_clique(const std::vector<Individual>& w, std::size_t need,
                           const std::function<bool(const Individual&, const Individual&)>& adj) {
    if (need == 0) return true;
    if (w.size() < need) return false;
    std::vector<Individual> chosen;
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (chosen.size() == need) return true;
        if (w.size() - i < need - chosen.size()) return false;
        for (std::size_t j = i; j < w.size(); ++j) {
            bool ok = true;
            for (const Individual& c : chosen)
                if (!adj(c, w[j])) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(w[j]);
            if (go(j + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return go(0);
}
}  // namespace

bool Engine::rule_ups1(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (n.status.settled()) return false;
    if (ups1_clean_.count(v)) return false;

    bool close = false;
    FormulaSet full = g_.full_label(v);

    // (a) α:⊥ in the label, or a complementary pair in the full label.
    for (const Formula& f : n.label) {
        if (f.has_concept() && f.concept_part().kind() == ConceptKind::Bot) {
            close = true;
            break;
        }
    }
    if (!close) {
        for (const Formula& f : full) {
            if (!has_clash_complement(f)) continue;
            if (full.contains(clash_complement(f))) {
                close = true;
                break;
            }
        }
    }
    // (b) a != a.
    if (!close) {
        for (const Formula& f : n.label) {
            if (f.kind() == FormulaKind::NotEq && f.first() == f.second()) {
                close = true;
                break;
            }
        }
    }
    // (c) n+1 pairwise-distinct witnesses against a:(atmost n s.C).
    if (!close && !n.is_state()) {
        for (const Formula& f : n.label) {
            if (f.kind() != FormulaKind::Instance || !is_at_most(f)) continue;
            const Concept& c = f.concept_part();
            std::vector<Individual> w = named_witnesses(full, c.role(), f.subject(), c.sub());
            if (w.size() < static_cast<std::size_t>(c.count()) + 1) continue;
            auto distinct = [&](const Individual& x, const Individual& y) {
                return n.label.contains(Formula::neq(x, y)) ||
                       n.label.contains(Formula::neq(y, x));
            };
            if (has_inequality_clique(w, static_cast<std::size_t>(c.count()) + 1, distinct)) {
                close = true;
                break;
            }
        }
    }
    // (d) closed w.r.t. itself.
    if (!close && n.status.closed_wrt(v)) close = true;

    if (close) return update_status(v, Status{StatusKind::Closed, {}}, "UPS1");

    if (n.is_state() && n.status.is(StatusKind::FExpanded) && g_.successors(v).empty())
        return update_status(v, Status{StatusKind::Open, {}}, "UPS1");
    ups1_clean_.insert(v);
    return false;
}

// ── UPS2 ────────────────────────────────────────────────────────────────────

bool Engine::rule_ups2(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (n.stype != NodeSType::Simple || n.status.settled()) return false;

    auto negs_it = ups2_negs_.find(v);
    if (negs_it == ups2_negs_.end()) {
        // Labels are immutable: the a:C̄ candidates can be computed once.
        std::vector<Formula> negs;
        std::vector<Individual> nominals;
        for (const Formula& f : n.label)
            if (f.concept_part().kind() == ConceptKind::Nominal)
                nominals.push_back(f.concept_part().individual());
        for (const Individual& a : nominals)
            for (const Formula& f : n.label)
                negs.push_back(Formula::instance(a, negate_nnf(f.concept_part())));
        std::sort(negs.begin(), negs.end());
        negs.erase(std::unique(negs.begin(), negs.end()), negs.end());
        negs_it = ups2_negs_.emplace(v, std::move(negs)).first;
    }
    if (negs_it->second.empty()) return false;

    bool changed = false;
    for (NodeId u = 0; u < static_cast<NodeId>(g_.node_count()); ++u) {
        const TableauNode& un = g_.node(u);
        if (!un.is_state() || !un.is_complex()) continue;
        if (g_.node(v).status.closed_wrt(u)) continue;
        if (!g_.may_affect_root(v, u)) continue;
        FormulaSet full_u = g_.full_label(u);
        bool identity = true;
        for (const auto& [from, to] : un.ind_repl)
            if (from != to) identity = false;
        bool inconsistent = false;
        for (const Formula& neg : negs_it->second) {
            if (full_u.contains(identity ? neg : substitute(neg, un.ind_repl))) {
                inconsistent = true;
                break;
            }
        }
        if (inconsistent) changed |= close_wrt(v, u, "UPS2");
        if (g_.node(v).status.settled()) break;
    }
    return changed;
}

// ── UPS3 ────────────────────────────────────────────────────────────────────

bool Engine::rule_ups3(NodeId v) {
    const TableauNode& n = g_.node(v);
    const auto& succs = g_.successors(v);

    // Subrule 1: a non-state is an or-node over its successors.
    if (!n.is_state()) {
        if (n.status.kind == StatusKind::Unexpanded || n.status.settled()) return false;
        if (succs.empty()) return false;
        bool any_open = false, all_closed = true, all_closed_or_wrt = true;
        std::vector<std::vector<NodeId>> wrt_sets;
        for (NodeId w : succs) {
            const Status& ws = g_.node(w).status;
            if (ws.is(StatusKind::Open)) any_open = true;
            if (!ws.is(StatusKind::Closed)) all_closed = false;
            if (ws.is(StatusKind::ClosedWrt))
                wrt_sets.push_back(ws.wrt);
            else if (!ws.is(StatusKind::Closed))
                all_closed_or_wrt = false;
        }
        if (any_open) return update_status(v, Status{StatusKind::Open, {}}, "UPS3");
        if (all_closed) return update_status(v, Status{StatusKind::Closed, {}}, "UPS3");
        if (all_closed_or_wrt && !wrt_sets.empty()) {
            std::vector<NodeId> inter = wrt_sets[0];
            for (std::size_t i = 1; i < wrt_sets.size(); ++i) {
                std::vector<NodeId> next;
                std::set_intersection(inter.begin(), inter.end(), wrt_sets[i].begin(),
                                      wrt_sets[i].end(), std::back_inserter(next));
                inter = std::move(next);
            }
            bool changed = false;
            for (NodeId u : inter) {
                changed |= close_wrt(v, u, "UPS3");
                if (g_.node(v).status.settled()) break;
            }
            return changed;
        }
        return false;
    }

    // States.
    if (n.status.kind == StatusKind::Unexpanded || n.status.settled()) return false;
    bool changed = false;

    // Subrule 2: a closed successor either closes v (testingClosedness) or
    // pins its variables to zero; infeasibility of the accumulated system
    // (including the freshly built one) closes v.
    for (NodeId w : succs) {
        if (!g_.node(w).status.is(StatusKind::Closed)) continue;
        const auto& labels = g_.edge_labels(v, w);
        bool has_tc = false;
        for (const EdgeLabel& e : labels)
            if (e.tag == EdgeTag::TestingClosedness) has_tc = true;
        if (has_tc) return update_status(v, Status{StatusKind::Closed, {}}, "UPS3") || changed;
        for (const EdgeLabel& e : labels) {
            if (e.tag != EdgeTag::CheckingFeasibility) continue;
            int idx = g_.node(v).ilc.var_index({w, e});
            SHOQ_CHECK(idx >= 0);
            if (g_.node_mut(v).ilc.add_eq0({w, e})) {
                trace_line("UPS3 " + node_name(v) + " | add " + var_name(v, idx) + " = 0");
                ilc_dirty_.insert(v);
                changed = true;
            }
        }
    }
    if (ilc_dirty_.count(v)) {
        ilc_dirty_.erase(v);
        if (!ilc_feasible(v, {}))
            return update_status(v, Status{StatusKind::Closed, {}}, "UPS3") || changed;
    }

    // Subrule 3: closed-wrt successors, per member u on a qualifying path.
    std::vector<NodeId> wrt_candidates;
    for (NodeId w : succs) {
        const Status& ws = g_.node(w).status;
        if (ws.is(StatusKind::ClosedWrt))
            for (NodeId u : ws.wrt) wrt_candidates.push_back(u);
    }
    std::sort(wrt_candidates.begin(), wrt_candidates.end());
    wrt_candidates.erase(std::unique(wrt_candidates.begin(), wrt_candidates.end()),
                         wrt_candidates.end());
    for (NodeId u : wrt_candidates) {
        if (g_.node(v).status.settled()) break;
        if (g_.node(v).status.closed_wrt(u)) continue;
        if (!g_.may_affect_root(v, u)) continue;
        bool tc_hit = false;
        std::vector<int> zero_vars;
        for (NodeId w : succs) {
            if (!g_.node(w).status.closed_wrt(u)) continue;
            for (const EdgeLabel& e : g_.edge_labels(v, w)) {
                if (e.tag == EdgeTag::TestingClosedness)
                    tc_hit = true;
                else
                    zero_vars.push_back(g_.node(v).ilc.var_index({w, e}));
            }
        }
        if (tc_hit) {
            changed |= close_wrt(v, u, "UPS3");
            continue;
        }
        if (!zero_vars.empty() && !ilc_feasible(v, zero_vars)) changed |= close_wrt(v, u, "UPS3");
    }

    // Subrule 4: opening a fully expanded state.
    const TableauNode& cur = g_.node(v);
    if (cur.status.is(StatusKind::FExpanded)) {
        bool tc_all_open = true;
        std::vector<int> zero_vars;
        for (NodeId w : succs) {
            const auto& labels = g_.edge_labels(v, w);
            bool has_tc = false;
            for (const EdgeLabel& e : labels)
                if (e.tag == EdgeTag::TestingClosedness) has_tc = true;
            if (has_tc && !g_.node(w).status.is(StatusKind::Open)) tc_all_open = false;
            if (!g_.node(w).status.is(StatusKind::Open)) {
                for (const EdgeLabel& e : labels)
                    if (e.tag == EdgeTag::CheckingFeasibility)
                        zero_vars.push_back(cur.ilc.var_index({w, e}));
            }
        }
        if (tc_all_open) {
            std::pair<std::vector<int>, std::size_t> probe{zero_vars,
                                                           cur.ilc.problem.cons.size()};
            auto last = open_check_.find(v);
            if (last == open_check_.end() || last->second != probe) {
                bool feasible = ilc_feasible(v, zero_vars);
                open_check_[v] = std::move(probe);
                if (feasible)
                    return update_status(v, Status{StatusKind::Open, {}}, "UPS3") || changed;
            }
        }
    }
    return changed;
}

void Engine::drain_ups() {
    bool changed = true;
    while (changed) {
        changed = false;
        while (!prop_queue_.empty()) {
            NodeId v = prop_queue_.front();
            prop_queue_.pop_front();
            changed |= rule_ups3(v);
            if (g_.node(g_.root()).status.is(StatusKind::Closed)) return;
        }
        for (NodeId v = 0; v < static_cast<NodeId>(g_.node_count()); ++v) {
            changed |= rule_ups1(v);
            if (g_.node(g_.root()).status.is(StatusKind::Closed)) return;
            changed |= rule_ups2(v);
            changed |= rule_ups3(v);
            if (g_.node(g_.root()).status.is(StatusKind::Closed)) return;
        }
    }
}

// ── US1 ─────────────────────────────────────────────────────────────────────

bool Engine::rule_us1(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (n.is_state() || !n.status.is(StatusKind::Unexpanded)) return false;

    FormulaSet reduced = n.rfmls;  // X: what this expansion consumes
    std::vector<Formula> adds;

    for (const Formula& f : n.label) {
        if (f.has_concept()) {
            const Concept& c = f.concept_part();
            std::optional<Individual> alpha = f.alpha();
            auto tagged = [&](const Concept& d) {
                return alpha ? Formula::instance(*alpha, d) : Formula::concept_only(d);
            };
            if (c.kind() == ConceptKind::And) {
                reduced.insert(f);
                adds.push_back(tagged(c.lhs()));
                adds.push_back(tagged(c.rhs()));
            } else if (c.kind() == ConceptKind::AtLeast && c.count() == 0) {
                reduced.insert(f);
            } else if (c.kind() == ConceptKind::AtMost && c.count() == 0) {
                reduced.insert(f);
                adds.push_back(tagged(Concept::forall(c.role(), negate_nnf(c.sub()))));
            } else if (c.kind() == ConceptKind::Forall) {
                for (const auto& [lo, hi] : kb_.rbox.sub_pairs())
                    if (hi == c.role() && lo != c.role())
                        adds.push_back(tagged(Concept::forall(lo, c.sub())));
            }
            if (f.kind() == FormulaKind::Instance && c.kind() == ConceptKind::NegNominal) {
                reduced.insert(f);
                adds.push_back(Formula::neq(f.subject(), c.individual()));
            }
        } else if (f.kind() == FormulaKind::RoleAssertion) {
            for (const Role& s : kb_.rbox.supers_of(f.role_part()))
                if (s != f.role_part()) adds.push_back(Formula::role(s, f.first(), f.second()));
            // ∀-propagation over the role assertion.
            for (const Formula& g : n.label) {
                if (g.kind() != FormulaKind::Instance) continue;
                if (g.subject() != f.first()) continue;
                const Concept& c = g.concept_part();
                if (c.kind() != ConceptKind::Forall || c.role() != f.role_part()) continue;
                adds.push_back(Formula::instance(f.second(), c.sub()));
                if (kb_.rbox.is_transitive(c.role()))
                    adds.push_back(Formula::instance(f.second(), c));
            }
        }
    }

    FormulaSet label = n.label;
    for (const Formula& f : adds) label.insert(f);
    label = label.set_minus(reduced);
    if (label.set_minus(n.label).empty()) return false;

    ConnectResult r = connect(v, NodeType::NonState, n.stype, std::move(label), reduced,
                                     n.is_complex() ? std::optional(n.ind_repl) : std::nullopt,
                                     std::nullopt);
    trace_line("US1 " + node_name(v) + " -> " + succ_mark(r));
    set_status_silent(v, Status{StatusKind::FExpanded, {}});
    count_step("US1");
    return true;
}

// ── US2 ─────────────────────────────────────────────────────────────────────

bool Engine::rule_us2(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (!n.status.is(StatusKind::Unexpanded)) return false;

    std::optional<Formula> trigger;
    for (const Formula& f : n.label) {
        if (f.kind() == FormulaKind::Instance &&
            f.concept_part().kind() == ConceptKind::Nominal) {
            trigger = f;
            break;
        }
    }
    if (!trigger) return false;
    SHOQ_CHECK(n.is_complex() && !n.is_state());

    Individual a = trigger->subject();
    Individual b = trigger->concept_part().individual();

    std::vector<Formula> merged;
    for (const Formula& f : n.label) {
        if (f == *trigger) continue;
        merged.push_back(merge_substitute(f, b, a));
    }
    FormulaSet label(std::move(merged));
    label.insert(Formula::eq(a, b));
    label.insert(Formula::eq(b, a));

    std::vector<Formula> rf;
    for (const Formula& f : n.rfmls) rf.push_back(substitute(f, {{b, a}}));
    FormulaSet rfmls(std::move(rf));
    rfmls.insert(Formula::instance(a, Concept::nominal(a)));

    ConnectResult r = connect(v, NodeType::NonState, NodeSType::Complex, std::move(label),
                                     std::move(rfmls), n.ind_repl, std::nullopt);
    auto& repl = g_.node_mut(r.node).ind_repl;
    for (auto& [c, t] : repl)
        if (t == b) t = a;
    repl[b] = a;

    trace_line("US2 " + node_name(v) + " -> " + succ_mark(r) + " | merge " + b.name + " -> " +
               a.name);
    set_status_silent(v, Status{StatusKind::FExpanded, {}});
    count_step("US2");
    return true;
}

// ── US3 ─────────────────────────────────────────────────────────────────────

bool Engine::rule_us3(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (n.is_state() || !n.status.is(StatusKind::Unexpanded)) return false;

    std::vector<Formula> guards;
    if (n.stype == NodeSType::Simple) {
        std::vector<Concept> concepts;
        for (const Formula& f : n.label) concepts.push_back(f.concept_part());
        for (const Concept& c : relevant_atmost_one(tbox_, concepts, kb_.rbox))
            guards.push_back(Formula::concept_only(c));
    } else {
        std::set<Individual> subjects;
        for (const Formula& f : n.label)
            if (f.kind() == FormulaKind::Instance) subjects.insert(f.subject());
        for (const Individual& a : subjects)
            for (const Formula& f : assertion_relevant_atmost_one(tbox_, n.label, a, kb_.rbox))
                // Guards must name representatives; a candidate built from a
                // merged-away individual would smuggle it back into the label.
                guards.push_back(substitute(f, n.ind_repl));
    }

    FormulaSet label = n.label;
    bool grew = false;
    for (const Formula& f : guards) grew |= label.insert(f);
    if (!grew) return false;

    ConnectResult r = connect(v, NodeType::NonState, n.stype, std::move(label), n.rfmls,
                                     n.is_complex() ? std::optional(n.ind_repl) : std::nullopt,
                                     std::nullopt);
    trace_line("US3 " + node_name(v) + " -> " + succ_mark(r));
    // The successor stands in for this node's static expansion; the node
    // counts as expanded so the forming-state rule cannot bypass the guards.
    set_status_silent(v, Status{StatusKind::FExpanded, {}});
    count_step("US3");
    return true;
}

// ── DN ──────────────────────────────────────────────────────────────────────

bool Engine::dn_would_change(NodeId v) const {
    const TableauNode& n = g_.node(v);
    if (n.stype != NodeSType::Simple || n.status.settled()) return false;
    std::optional<Individual> nominal;
    for (const Formula& f : n.label)
        if (f.kind() == FormulaKind::ConceptOnly &&
            f.concept_part().kind() == ConceptKind::Nominal) {
            nominal = f.concept_part().individual();
            break;
        }
    if (!nominal) return false;
    for (NodeId u = 0; u < static_cast<NodeId>(g_.node_count()); ++u) {
        const TableauNode& un = g_.node(u);
        if (!un.is_state() || !un.is_complex()) continue;
        if (n.status.closed_wrt(u)) continue;
        if (!g_.may_affect_root(v, u)) continue;
        FormulaSet full_u = g_.full_label(u);
        for (const Formula& f : n.label) {
            Formula phi = substitute(Formula::instance(*nominal, f.concept_part()), un.ind_repl);
            if (phi.concept_part().kind() == ConceptKind::Nominal &&
                phi.concept_part().individual() == phi.subject())
                continue;
            if (!full_u.contains(phi)) return true;
        }
    }
    return false;
}

bool Engine::rule_dn(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (n.stype != NodeSType::Simple || n.status.settled()) return false;
    std::optional<Individual> nominal;
    for (const Formula& f : n.label)
        if (f.kind() == FormulaKind::ConceptOnly &&
            f.concept_part().kind() == ConceptKind::Nominal) {
            nominal = f.concept_part().individual();
            break;
        }
    if (!nominal) return false;
    SHOQ_CHECK(!n.is_state());

    bool changed = false;
    std::vector<NodeId> states;
    for (NodeId u = 0; u < static_cast<NodeId>(g_.node_count()); ++u)
        if (g_.node(u).is_state() && g_.node(u).is_complex()) states.push_back(u);

    for (NodeId u : states) {
        if (g_.node(v).status.closed_wrt(u)) continue;
        if (!g_.may_affect_root(v, u)) continue;
        const TableauNode& un = g_.node(u);
        FormulaSet full_u = g_.full_label(u);

        // X: the blocked node's requirements transplanted onto the named
        // individual; tautological self-nominal assertions are dropped (they
        // hold in every interpretation and the worked traces omit them).
        std::vector<Formula> x_items;
        for (const Formula& f : g_.node(v).label) {
            Formula phi = substitute(Formula::instance(*nominal, f.concept_part()), un.ind_repl);
            if (phi.concept_part().kind() == ConceptKind::Nominal &&
                phi.concept_part().individual() == phi.subject())
                continue;
            x_items.push_back(phi);
        }
        FormulaSet x(x_items);
        if (x.is_subset_of(full_u)) continue;

        changed = true;
        std::vector<NodeId> preds = g_.predecessors(u);
        for (NodeId u0 : preds) {
            SHOQ_CHECK(g_.successors(u0).size() == 1 && g_.successors(u0)[0] == u);
            g_.delete_edge(u0, u);
            mark_node_dirty(u0);
            mark_node_dirty(u);
            std::string line = "DN " + node_name(v) + " wrt " + node_name(u) + " | delete (" +
                               node_name(u0) + "," + node_name(u) + ") | " + node_name(u0) +
                               " ->";
            const TableauNode& p = g_.node(u0);
            FormulaSet base_label = p.label;
            FormulaSet with_x = base_label;
            std::string adds = "{";
            for (const Formula& f : x) {
                with_x.insert(f);
                if (adds.size() > 1) adds += ", ";
                adds += to_string(f);
            }
            adds += "}";
            ConnectResult r0 = connect(u0, NodeType::NonState, NodeSType::Complex,
                                              std::move(with_x), p.rfmls, p.ind_repl,
                                              std::nullopt);
            line += " " + succ_mark(r0) + "+" + adds;
            for (const Formula& phi : x) {
                if (full_u.contains(phi)) continue;
                FormulaSet branch = base_label;
                Formula neg = negate_formula(phi);
                branch.insert(neg);
                ConnectResult ri = connect(u0, NodeType::NonState, NodeSType::Complex,
                                                  std::move(branch), p.rfmls, p.ind_repl,
                                                  std::nullopt);
                line += " " + succ_mark(ri) + "+{" + to_string(neg) + "}";
            }
            trace_line(line);
        }
    }

    const Status& after = g_.node(v).status;
    if (!after.is(StatusKind::Blocked) && !after.is(StatusKind::ClosedWrt)) {
        set_status_silent(v, Status{StatusKind::Blocked, {}});
        trace_line("DN " + node_name(v) + " | blocked");
        changed = true;
    }
    if (changed) count_step("DN");
    return changed;
}

// ── NUS ─────────────────────────────────────────────────────────────────────

bool Engine::rule_nus(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (n.is_state() || !n.status.is(StatusKind::Unexpanded)) return false;
    FormulaSet full = g_.full_label(v);

    auto finish = [&](const ConnectResult& r1, const ConnectResult& r2, const std::string& sub) {
        trace_line("NUS " + node_name(v) + " -> " + succ_mark(r1) + " " + succ_mark(r2) + " | " +
                   sub);
        set_status_silent(v, Status{StatusKind::FExpanded, {}});
        count_step("NUS");
        return true;
    };
    auto ind_repl = [&]() {
        return n.is_complex() ? std::optional(n.ind_repl) : std::nullopt;
    };

    // Subrule 1: syntactic branching on a disjunction.
    for (const Formula& f : n.label) {
        if (!f.has_concept() || f.concept_part().kind() != ConceptKind::Or) continue;
        const Concept& c = f.concept_part();
        std::optional<Individual> alpha = f.alpha();
        auto tagged = [&](const Concept& d) {
            return alpha ? Formula::instance(*alpha, d) : Formula::concept_only(d);
        };
        if (full.contains(tagged(c.lhs())) || full.contains(tagged(c.rhs()))) continue;
        FormulaSet base = n.label;
        FormulaSet removed;
        removed.insert(f);
        base = base.set_minus(removed);
        FormulaSet y = n.rfmls;
        y.insert(f);
        FormulaSet left = base;
        left.insert(tagged(c.lhs()));
        FormulaSet right = base;
        right.insert(tagged(c.rhs()));
        ConnectResult r1 = connect(v, NodeType::NonState, n.stype, std::move(left), y,
                                          ind_repl(), std::nullopt);
        ConnectResult r2 = connect(v, NodeType::NonState, n.stype, std::move(right), y,
                                          ind_repl(), std::nullopt);
        return finish(r1, r2, "or-split");
    };

    if (n.stype != NodeSType::Complex) return false;

    // Subrule 2: semantic branching on a successor's membership in C.
    for (const Formula& ra : n.label) {
        if (ra.kind() != FormulaKind::RoleAssertion) continue;
        const Role& s = ra.role_part();
        const Individual& a = ra.first();
        const Individual& b = ra.second();
        for (const Formula& f : n.label) {
            if (f.kind() != FormulaKind::Instance || f.subject() != a) continue;
            const Concept& c = f.concept_part();
            bool qualifies = false;
            if ((c.kind() == ConceptKind::AtMost || c.kind() == ConceptKind::AtLeast) &&
                c.role() == s)
                qualifies = true;
            if (c.kind() == ConceptKind::Exists && c.role() == s && kb_.is_numeric(s))
                qualifies = true;
            if (!qualifies) continue;
            Formula pos = Formula::instance(b, c.sub());
            Formula neg = Formula::instance(b, negate_nnf(c.sub()));
            if (full.contains(pos) || full.contains(neg)) continue;
            FormulaSet x1 = n.label;
            x1.insert(pos);
            FormulaSet x2 = n.label;
            x2.insert(neg);
            ConnectResult r1 = connect(v, NodeType::NonState, NodeSType::Complex,
                                              std::move(x1), n.rfmls, n.ind_repl, std::nullopt);
            ConnectResult r2 = connect(v, NodeType::NonState, NodeSType::Complex,
                                              std::move(x2), n.rfmls, n.ind_repl, std::nullopt);
            return finish(r1, r2, "choose " + to_string(pos.concept_part()) + " for " + b.name);
        }
    }

    // Subrule 3: merge-or-distinguish two witnesses of an atmost restriction.
    for (const Formula& f : full) {
        if (f.kind() != FormulaKind::Instance || !is_at_most(f)) continue;
        const Concept& c = f.concept_part();
        std::vector<Individual> w = named_witnesses(full, c.role(), f.subject(), c.sub());
        std::sort(w.begin(), w.end(), [&](const Individual& x, const Individual& y) {
            return kb_.individual_less(x, y);
        });
        for (std::size_t i = 0; i < w.size(); ++i) {
            for (std::size_t j = i + 1; j < w.size(); ++j) {
                const Individual& b = w[i];   // first-occurrence smaller
                const Individual& bp = w[j];
                if (n.label.contains(Formula::neq(b, bp)) ||
                    n.label.contains(Formula::neq(bp, b)))
                    continue;
                FormulaSet x1 = n.label;
                x1.insert(Formula::neq(b, bp));
                x1.insert(Formula::neq(bp, b));
                std::vector<Formula> items;
                for (const Formula& g : n.label) items.push_back(merge_substitute(g, bp, b));
                FormulaSet x2(std::move(items));
                x2.insert(Formula::eq(b, bp));
                x2.insert(Formula::eq(bp, b));
                std::vector<Formula> yi;
                for (const Formula& g : n.rfmls) yi.push_back(substitute(g, {{bp, b}}));
                FormulaSet y(std::move(yi));
                ConnectResult r1 =
                    connect(v, NodeType::NonState, NodeSType::Complex, std::move(x1),
                                   n.rfmls, n.ind_repl, std::nullopt);
                ConnectResult r2 =
                    connect(v, NodeType::NonState, NodeSType::Complex, std::move(x2),
                                   std::move(y), n.ind_repl, std::nullopt);
                auto& repl = g_.node_mut(r2.node).ind_repl;
                for (auto& [cc, t] : repl)
                    if (t == bp) t = b;
                repl[bp] = b;
                return finish(r1, r2, "merge-or-distinguish " + b.name + "/" + bp.name);
            }
        }
    }

    // Subrule 4: decide whether b is an s-successor of a.
    for (const Formula& f : n.label) {
        if (f.kind() != FormulaKind::Instance || !is_at_most(f)) continue;
        const Concept& le = f.concept_part();
        const Individual& a = f.subject();
        for (const Formula& ra : n.label) {
            if (ra.kind() != FormulaKind::RoleAssertion) continue;
            if (ra.role_part() != le.role() || ra.first() != a) continue;
            const Individual& b = ra.second();
            for (const Formula& g : n.label) {
                if (g.kind() != FormulaKind::Instance || g.subject() != a) continue;
                const Concept& c = g.concept_part();
                if (c.kind() != ConceptKind::AtLeast && c.kind() != ConceptKind::Exists) continue;
                if (c.kind() == ConceptKind::AtLeast && c.count() == 0) continue;
                const Role& s = c.role();
                if (!kb_.rbox.subsumes(s, le.role())) continue;
                if (n.label.contains(Formula::role(s, a, b)) ||
                    n.label.contains(Formula::neg_role(s, a, b)))
                    continue;
                FormulaSet x1 = n.label;
                x1.insert(Formula::role(s, a, b));
                FormulaSet x2 = n.label;
                x2.insert(Formula::neg_role(s, a, b));
                ConnectResult r1 = connect(v, NodeType::NonState, NodeSType::Complex,
                                                  std::move(x1), n.rfmls, n.ind_repl,
                                                  std::nullopt);
                ConnectResult r2 = connect(v, NodeType::NonState, NodeSType::Complex,
                                                  std::move(x2), n.rfmls, n.ind_repl,
                                                  std::nullopt);
                return finish(r1, r2, "decide " + s.name + "(" + a.name + "," + b.name + ")");
            }
        }
    }
    return false;
}

// ── FS ──────────────────────────────────────────────────────────────────────

bool Engine::rule_fs(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (n.is_state() || !n.status.is(StatusKind::Unexpanded)) return false;

    if (n.stype == NodeSType::Simple) {
        TableauNode& m = g_.node_mut(v);
        m.type = NodeType::State;
        m.ilc = StateConstraints{};
        trace_line("FS " + node_name(v) + " | to-state");
        count_step("FS");
        return true;
    }

    FormulaSet full = g_.full_label(v);
    FormulaSet x = n.label;
    std::vector<Formula> residuals;
    for (const Formula& f : n.label) {
        if (f.kind() != FormulaKind::Instance) continue;
        const Concept& c = f.concept_part();
        if (c.kind() == ConceptKind::AtMost) {
            std::size_t m = named_witnesses(full, c.role(), f.subject(), c.sub()).size();
            SHOQ_CHECK(m <= c.count());
            Formula res = Formula::instance(
                f.subject(),
                Concept::prec_eq(c.count() - static_cast<std::uint32_t>(m), c.role(), c.sub()));
            if (x.insert(res)) residuals.push_back(res);
        } else if (c.kind() == ConceptKind::AtLeast ||
                   (c.kind() == ConceptKind::Exists && kb_.is_numeric(c.role()))) {
            std::uint32_t need = c.kind() == ConceptKind::Exists ? 1 : c.count();
            std::size_t m = named_witnesses(full, c.role(), f.subject(), c.sub()).size();
            if (need > m) {
                Formula res = Formula::instance(
                    f.subject(),
                    Concept::succ_eq(need - static_cast<std::uint32_t>(m), c.role(), c.sub()));
                if (x.insert(res)) residuals.push_back(res);
            }
        }
    }

    ConnectResult r = connect(v, NodeType::State, NodeSType::Complex, std::move(x),
                                     n.rfmls, n.ind_repl, std::nullopt);
    std::string line = "FS " + node_name(v) + " -> " + succ_mark(r) + " | residuals {";
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (i) line += ", ";
        line += to_string(residuals[i]);
    }
    line += "}";
    trace_line(line);
    set_status_silent(v, Status{StatusKind::FExpanded, {}});
    count_step("FS");
    return true;
}

// ── TP ──────────────────────────────────────────────────────────────────────

bool Engine::rule_tp(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (!n.is_state() || !n.status.is(StatusKind::Unexpanded)) return false;

    std::string line = "TP " + node_name(v);
    std::string succ_part;
    for (const Formula& f : n.label) {
        if (!f.has_concept() || f.concept_part().kind() != ConceptKind::Exists) continue;
        const Concept& c = f.concept_part();
        if (kb_.is_numeric(c.role())) continue;
        std::optional<Individual> alpha = f.alpha();

        std::vector<Concept> y{c.sub()};
        for (const Formula& g : n.label) {
            if (!g.has_concept() || g.alpha() != alpha) continue;
            const Concept& d = g.concept_part();
            if (d.kind() != ConceptKind::Forall) continue;
            if (d.role() == c.role()) y.push_back(d.sub());
            if (kb_.rbox.subsumes(c.role(), d.role()) && kb_.rbox.is_transitive(d.role()))
                y.push_back(d);
        }
        for (const Concept& t : tbox_) y.push_back(t);

        std::vector<Formula> label_items;
        for (const Concept& d : y) label_items.push_back(Formula::concept_only(d));
        EdgeLabel e{EdgeTag::TestingClosedness, kb_.rbox.supers_of(c.role()), alpha};
        ConnectResult r = connect(v, NodeType::NonState, NodeSType::Simple,
                                         FormulaSet(std::move(label_items)), FormulaSet{},
                                         std::nullopt, e);
        succ_part += " " + succ_mark(r);
    }
    if (!succ_part.empty()) line += " ->" + succ_part;
    trace_line(line + " | p-expanded");
    set_status_silent(v, Status{StatusKind::PExpanded, {}});
    count_step("TP");
    return true;
}

// ── TF ──────────────────────────────────────────────────────────────────────

namespace {

struct SuccTuple {
    std::vector<Role> roles;       // X: sorted
    std::vector<Concept> fillers;  // Y: sorted, unique
    std::optional<Individual> alpha;

    bool operator==(const SuccTuple& o) const {
        return roles == o.roles && fillers == o.fillers && alpha == o.alpha;
    }
};

bool contains_tuple(const std::vector<SuccTuple>& e, const SuccTuple& t) {
    return std::find(e.begin(), e.end(), t) != e.end();
}

bool filler_set_has(const std::vector<Concept>& y, const Concept& c) {
    return std::binary_search(y.begin(), y.end(), c);
}

std::vector<Concept> filler_insert(std::vector<Concept> y, const Concept& c) {
    auto it = std::lower_bound(y.begin(), y.end(), c);
    if (it == y.end() || *it != c) y.insert(it, c);
    return y;
}

bool fillers_clash(const std::vector<Concept>& y) {
    for (const Concept& c : y) {
        if (c.kind() == ConceptKind::Bot) return true;
        if (!c.is_residual() && filler_set_has(y, negate_nnf(c))) return true;
    }
    return false;
}

}  // namespace

bool Engine::rule_tf(NodeId v) {
    const TableauNode& n = g_.node(v);
    if (!n.is_state() || !n.status.is(StatusKind::PExpanded)) return false;

    // Step 1: Γ.  Complex states carry their residuals in the label; simple
    // states lift them on the fly.
    std::vector<Formula> gamma(n.label.items().begin(), n.label.items().end());
    if (n.stype == NodeSType::Simple) {
        for (const Formula& f : n.label) {
            const Concept& c = f.concept_part();
            if (c.kind() == ConceptKind::AtMost)
                gamma.push_back(
                    Formula::concept_only(Concept::prec_eq(c.count(), c.role(), c.sub())));
            else if (c.kind() == ConceptKind::AtLeast)
                gamma.push_back(
                    Formula::concept_only(Concept::succ_eq(c.count(), c.role(), c.sub())));
            else if (c.kind() == ConceptKind::Exists && kb_.is_numeric(c.role()))
                gamma.push_back(Formula::concept_only(Concept::succ_eq(1, c.role(), c.sub())));
        }
    }
    std::sort(gamma.begin(), gamma.end());
    gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());

    auto gamma_foralls = [&](const std::optional<Individual>& alpha) {
        std::vector<Concept> out;
        for (const Formula& f : gamma) {
            if (!f.has_concept() || f.alpha() != alpha) continue;
            if (f.concept_part().kind() == ConceptKind::Forall) out.push_back(f.concept_part());
        }
        return out;
    };

    // Steps 2–3: base tuples from the atleast~ requirements.
    std::vector<SuccTuple> e;
    for (const Formula& f : gamma) {
        if (!f.has_concept() || f.concept_part().kind() != ConceptKind::SuccEq) continue;
        const Concept& c = f.concept_part();
        std::optional<Individual> alpha = f.alpha();
        std::vector<Concept> y{c.sub()};
        for (const Concept& d : gamma_foralls(alpha)) {
            if (d.role() == c.role()) y.push_back(d.sub());
            if (kb_.rbox.subsumes(c.role(), d.role()) && kb_.rbox.is_transitive(d.role()))
                y.push_back(d);
        }
        for (const Concept& t : tbox_) y.push_back(t);
        std::sort(y.begin(), y.end());
        y.erase(std::unique(y.begin(), y.end()), y.end());
        SuccTuple t{kb_.rbox.supers_of(c.role()), std::move(y), alpha};
        if (!contains_tuple(e, t)) e.push_back(std::move(t));
    }

    // Step 4: complete each tuple with C or C̄ per atmost~ requirement.
    for (const Formula& f : gamma) {
        if (!f.has_concept() || f.concept_part().kind() != ConceptKind::PrecEq) continue;
        const Concept& c = f.concept_part();
        std::optional<Individual> alpha = f.alpha();
        std::vector<SuccTuple> next;
        for (const SuccTuple& t : e) {
            bool applies = t.alpha == alpha &&
                           std::binary_search(t.roles.begin(), t.roles.end(), c.role()) &&
                           !filler_set_has(t.fillers, c.sub()) &&
                           !filler_set_has(t.fillers, negate_nnf(c.sub()));
            if (!applies) {
                if (!contains_tuple(next, t)) next.push_back(t);
                continue;
            }
            SuccTuple with{t.roles, filler_insert(t.fillers, c.sub()), t.alpha};
            SuccTuple without{t.roles, filler_insert(t.fillers, negate_nnf(c.sub())), t.alpha};
            if (!contains_tuple(next, with)) next.push_back(std::move(with));
            if (!contains_tuple(next, without)) next.push_back(std::move(without));
        }
        e = std::move(next);
    }

    // Step 5: saturate under mergers of tuples sharing a bounded filler.
    bool grew = true;
    while (grew) {
        grew = false;
        for (const Formula& f : gamma) {
            if (!f.has_concept() || f.concept_part().kind() != ConceptKind::PrecEq) continue;
            const Concept& c = f.concept_part();
            std::optional<Individual> alpha = f.alpha();
            std::size_t size_now = e.size();
            for (std::size_t i = 0; i < size_now; ++i) {
                for (std::size_t j = 0; j < size_now; ++j) {
                    const SuccTuple& t1 = e[i];
                    const SuccTuple& t2 = e[j];
                    if (t1.alpha != alpha || t2.alpha != alpha) continue;
                    if (!std::binary_search(t1.roles.begin(), t1.roles.end(), c.role())) continue;
                    if (!std::binary_search(t2.roles.begin(), t2.roles.end(), c.role())) continue;
                    if (!filler_set_has(t1.fillers, c.sub()) ||
                        !filler_set_has(t2.fillers, c.sub()))
                        continue;
                    SuccTuple merged;
                    merged.alpha = alpha;
                    std::set_union(t1.roles.begin(), t1.roles.end(), t2.roles.begin(),
                                   t2.roles.end(), std::back_inserter(merged.roles));
                    std::set_union(t1.fillers.begin(), t1.fillers.end(), t2.fillers.begin(),
                                   t2.fillers.end(), std::back_inserter(merged.fillers));
                    if (contains_tuple(e, merged)) continue;
                    if (fillers_clash(merged.fillers)) continue;
                    e.push_back(std::move(merged));
                    grew = true;
                }
            }
        }
    }

    // Step 6: create/reuse the successors.
    std::string succ_part;
    for (const SuccTuple& t : e) {
        std::vector<Formula> label_items;
        for (const Concept& d : t.fillers) label_items.push_back(Formula::concept_only(d));
        EdgeLabel el{EdgeTag::CheckingFeasibility, t.roles, t.alpha};
        ConnectResult r = connect(v, NodeType::NonState, NodeSType::Simple,
                                         FormulaSet(std::move(label_items)), FormulaSet{},
                                         std::nullopt, el);
        succ_part += " " + succ_mark(r);
    }

    // Step 7: the variable universe x_{w,e} over checkingFeasibility labels.
    StateConstraints ilc;
    for (NodeId w : g_.successors(v))
        for (const EdgeLabel& el : g_.edge_labels(v, w))
            if (el.tag == EdgeTag::CheckingFeasibility) ilc.vars.push_back({w, el});
    std::sort(ilc.vars.begin(), ilc.vars.end());
    ilc.problem.num_vars = static_cast<int>(ilc.vars.size());

    // Step 8: one sum constraint per residual requirement.
    for (const Formula& f : gamma) {
        if (!f.has_concept() || !f.concept_part().is_residual()) continue;
        const Concept& c = f.concept_part();
        std::optional<Individual> alpha = f.alpha();
        std::vector<int> vars;
        for (std::size_t i = 0; i < ilc.vars.size(); ++i) {
            const IlpVarKey& key = ilc.vars[i];
            if (key.label.individual != alpha) continue;
            if (!std::binary_search(key.label.roles.begin(), key.label.roles.end(), c.role()))
                continue;
            if (!g_.node(key.succ).label.contains(Formula::concept_only(c.sub()))) continue;
            vars.push_back(static_cast<int>(i));
        }
        if (c.kind() == ConceptKind::SuccEq)
            ilc.problem.add_ge(vars, c.count());
        else
            ilc.problem.add_le(vars, c.count());
    }
    g_.node_mut(v).ilc = std::move(ilc);
    ilc_dirty_.insert(v);

    std::string line = "TF " + node_name(v);
    if (!succ_part.empty()) line += " ->" + succ_part;
    const StateConstraints& stored = g_.node(v).ilc;
    std::string cons;
    for (std::size_t i = 0; i < stored.vars.size(); ++i) {
        if (!cons.empty()) cons += "; ";
        cons += var_name(v, static_cast<int>(i)) + " >= 0";
    }
    for (const ilp::Constraint& c : stored.problem.cons) {
        if (!cons.empty()) cons += "; ";
        std::string sum;
        for (std::size_t i = 0; i < c.vars.size(); ++i) {
            if (i) sum += " + ";
            sum += var_name(v, c.vars[i]);
        }
        if (c.vars.empty()) sum = "0";
        cons += sum + (c.sense == ilp::Constraint::Sense::Ge ? " >= " : " <= ") +
                std::to_string(c.bound);
    }
    if (!cons.empty()) line += " | " + cons;
    trace_line(line);
    set_status_silent(v, Status{StatusKind::FExpanded, {}});
    count_step("TF");
    return true;
}

// ── Scheduler ───────────────────────────────────────────────────────────────

bool Engine::apply_one_us() {
    for (NodeId v = 0; v < static_cast<NodeId>(g_.node_count()); ++v) {
        if (rule_us1(v)) return true;
        if (rule_us2(v)) return true;
        if (rule_us3(v)) return true;
    }
    return false;
}

std::optional<NodeId> Engine::pick_expansion_candidate(bool relaxed) {
    // Relaxed mode widens the filter from "may affect the root" to plain
    // reachability through non-closed nodes.
    std::vector<bool> reachable;
    if (relaxed) {
        reachable.assign(g_.node_count(), false);
        std::vector<NodeId> work{g_.root()};
        reachable[g_.root()] = true;
        while (!work.empty()) {
            NodeId x = work.back();
            work.pop_back();
            if (g_.node(x).status.is(StatusKind::Closed)) continue;
            for (NodeId w : g_.successors(x))
                if (!reachable[w]) {
                    reachable[w] = true;
                    work.push_back(w);
                }
        }
    }
    for (NodeId v = 0; v < static_cast<NodeId>(g_.node_count()); ++v) {
        const Status& st = g_.node(v).status;
        if (st.is(StatusKind::Unexpanded) || st.is(StatusKind::PExpanded)) {
            if (relaxed ? reachable[v] : g_.may_affect_root(v)) return v;
        } else if (st.is(StatusKind::Blocked) || st.is(StatusKind::ClosedWrt)) {
            // A blocked nominal node is reconsidered when a complex state it
            // has not been checked against appears on a qualifying path.
            if (dn_would_change(v)) return v;
        }
    }
    return std::nullopt;
}

bool Engine::apply_five(NodeId v) {
    if (rule_dn(v)) return true;
    if (rule_nus(v)) return true;
    if (rule_fs(v)) return true;
    if (rule_tp(v)) return true;
    if (rule_tf(v)) return true;
    return false;
}

RunResult Engine::run() {
    while (true) {
        drain_ups();
        if (g_.node(g_.root()).status.settled()) break;
        if (apply_one_us()) continue;
        std::optional<NodeId> v = pick_expansion_candidate(false);
        if (!v) break;  // no more changes can affect the root
        bool applied = apply_five(*v);
        SHOQ_CHECK(applied);
    }
    bool unsat = g_.node(g_.root()).status.is(StatusKind::Closed);
    trace_line(std::string("result ") + (unsat ? "UNSAT" : "SAT"));
    return unsat ? RunResult::Unsat : RunResult::Sat;
}

void Engine::complete_for_extraction() {
    SHOQ_CHECK(!g_.node(g_.root()).status.is(StatusKind::Closed));
    // An open root certifies an all-open resolution chain (extraction walks
    // it directly), and with the root open no node may affect it any more,
    // which would starve the nominal rules on freshly expanded regions.
    while (!g_.node(g_.root()).status.is(StatusKind::Open)) {
        drain_ups();
        SHOQ_CHECK(!g_.node(g_.root()).status.is(StatusKind::Closed));
        if (g_.node(g_.root()).status.is(StatusKind::Open)) break;
        if (apply_one_us()) continue;
        std::optional<NodeId> v = pick_expansion_candidate(true);
        if (!v) break;
        bool applied = apply_five(*v);
        SHOQ_CHECK(applied);
    }
}

}  // namespace shoq
