#include "shoq/graph.hpp"

#include <algorithm>
#include <sstream>

namespace shoq {

// ── Status / EdgeLabel ──────────────────────────────────────────────────────

bool Status::closed_wrt(NodeId u) const {
    return kind == StatusKind::ClosedWrt && std::binary_search(wrt.begin(), wrt.end(), u);
}

std::string to_string(const Status& s) {
    switch (s.kind) {
        case StatusKind::Unexpanded: return "unexpanded";
        case StatusKind::PExpanded: return "p-expanded";
        case StatusKind::FExpanded: return "f-expanded";
        case StatusKind::Closed: return "closed";
        case StatusKind::Open: return "open";
        case StatusKind::Blocked: return "blocked";
        case StatusKind::ClosedWrt: {
            std::string out = "closed-wrt({";
            for (std::size_t i = 0; i < s.wrt.size(); ++i) {
                if (i) out += ",";
                out += "v" + std::to_string(s.wrt[i]);
            }
            return out + "})";
        }
    }
    SHOQ_CHECK(false);
}

bool EdgeLabel::operator<(const EdgeLabel& o) const {
    if (tag != o.tag) return tag < o.tag;
    if (roles != o.roles) return roles < o.roles;
    if (individual.has_value() != o.individual.has_value()) return !individual.has_value();
    if (individual && *individual != *o.individual) return *individual < *o.individual;
    return false;
}

std::string to_string(const EdgeLabel& e) {
    std::string out = e.tag == EdgeTag::TestingClosedness ? "tc" : "cf";
    out += ",{";
    for (std::size_t i = 0; i < e.roles.size(); ++i) {
        if (i) out += ",";
        out += e.roles[i].name;
    }
    out += "},";
    out += e.individual ? e.individual->name : "null";
    return out;
}

int StateConstraints::var_index(const IlpVarKey& key) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), key);
    if (it == vars.end() || !(*it == key)) return -1;
    return static_cast<int>(it - vars.begin());
}

bool StateConstraints::add_eq0(const IlpVarKey& key) {
    int idx = var_index(key);
    SHOQ_CHECK(idx >= 0);
    if (problem.has_eq0(idx)) return false;
    problem.add_eq0(idx);
    return true;
}

// ── Construction ────────────────────────────────────────────────────────────

TableauGraph TableauGraph::init_tableau(const KnowledgeBase& kb) {
    SHOQ_CHECK(kb.validated);
    std::set<Individual> occurring;
    for (const Formula& f : kb.abox) collect_individuals(f, occurring);
    for (const Concept& c : kb.tbox) collect_individuals(c, occurring);

    FormulaSet label = kb.abox;
    for (const Concept& c : kb.tbox)
        for (const Individual& a : occurring) label.insert(Formula::instance(a, c));

    TableauGraph g;
    ConnectResult r = g.con_to_succ(std::nullopt, NodeType::NonState, NodeSType::Complex,
                                    std::move(label), FormulaSet{}, std::nullopt, std::nullopt);
    g.root_ = r.node;
    return g;
}

TableauNode& TableauGraph::node_mut(NodeId v) {
    invalidate_reach_cache();
    full_label_cache_.erase(v);
    return nodes_.at(v);
}

std::size_t TableauGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& s : succ_) n += s.size();
    return n;
}

bool TableauGraph::has_edge(NodeId v, NodeId w) const {
    const auto& s = succ_.at(v);
    return std::binary_search(s.begin(), s.end(), w);
}

const std::vector<EdgeLabel>& TableauGraph::edge_labels(NodeId v, NodeId w) const {
    static const std::vector<EdgeLabel> kEmpty;
    auto it = elabels_.find({v, w});
    return it == elabels_.end() ? kEmpty : it->second;
}

std::optional<NodeId> TableauGraph::cache_lookup(NodeType type, NodeSType stype,
                                                 const FormulaSet& label) const {
    if (stype == NodeSType::Simple) {
        auto it = simple_cache_.find(label);
        if (it != simple_cache_.end()) return it->second;
        return std::nullopt;
    }
    auto it = complex_cache_.find({label, type});
    if (it != complex_cache_.end()) return it->second;
    return std::nullopt;
}

namespace {
void insert_sorted(std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
}
bool label_is_concept_only(const FormulaSet& label) {
    for (const Formula& f : label)
        if (f.kind() != FormulaKind::ConceptOnly) return false;
    return true;
}
}  // namespace

ConnectResult TableauGraph::con_to_succ(std::optional<NodeId> from, NodeType type,
                                        NodeSType stype, FormulaSet label, FormulaSet rfmls,
                                        std::optional<std::map<Individual, Individual>> ind_repl,
                                        std::optional<EdgeLabel> elabel) {
    invalidate_reach_cache();
    // Layer discipline at the call boundary.
    if (stype == NodeSType::Simple)
        SHOQ_CHECK(label_is_concept_only(label));
    else
        SHOQ_CHECK(!label_is_concept_only(label) || label.empty());
    if (from) {
        const TableauNode& src = node(*from);
        SHOQ_CHECK(elabel.has_value() == src.is_state());
        if (elabel) {
            SHOQ_CHECK((elabel->individual == std::nullopt) == (src.stype == NodeSType::Simple));
        }
        if (src.stype == NodeSType::Simple) SHOQ_CHECK(stype == NodeSType::Simple);
        if (stype == NodeSType::Simple && src.stype == NodeSType::Complex)
            SHOQ_CHECK(src.is_state());
    }

    ConnectResult result;
    if (std::optional<NodeId> hit = from ? cache_lookup(type, stype, label) : std::nullopt) {
        NodeId w = *hit;
        result.node = w;
        insert_sorted(succ_[*from], w);
        bool had = std::binary_search(pred_[w].begin(), pred_[w].end(), *from);
        insert_sorted(pred_[w], *from);
        result.edge_added = !had;
        FormulaSet grown = nodes_[w].rfmls.set_union(rfmls);
        if (grown != nodes_[w].rfmls) {
            nodes_[w].rfmls = std::move(grown);
            full_label_cache_.erase(w);
            result.rfmls_grew = true;
        }
        if (node(*from).is_state()) {
            SHOQ_CHECK(elabel);
            auto& labels = elabels_[{*from, w}];
            auto it = std::lower_bound(labels.begin(), labels.end(), *elabel);
            if (it == labels.end() || !(*it == *elabel)) {
                labels.insert(it, *elabel);
                result.elabel_added = true;
            }
        }
        return result;
    }

    TableauNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.type = type;
    n.stype = stype;
    n.status = Status{};
    n.label = std::move(label);
    n.rfmls = std::move(rfmls);
    if (ind_repl) {
        SHOQ_CHECK(stype == NodeSType::Complex);
        n.ind_repl = std::move(*ind_repl);
    } else if (stype == NodeSType::Complex) {
        std::set<Individual> occurring;
        for (const Formula& f : n.label) collect_individuals(f, occurring);
        for (const Individual& a : occurring) n.ind_repl[a] = a;
    }

    if (stype == NodeSType::Simple)
        simple_cache_[n.label] = n.id;
    else
        complex_cache_[{n.label, type}] = n.id;

    result.node = n.id;
    result.created = true;
    nodes_.push_back(std::move(n));
    succ_.emplace_back();
    pred_.emplace_back();

    if (from) {
        insert_sorted(succ_[*from], result.node);
        insert_sorted(pred_[result.node], *from);
        result.edge_added = true;
        if (node(*from).is_state()) {
            SHOQ_CHECK(elabel);
            elabels_[{*from, result.node}] = {*elabel};
            result.elabel_added = true;
        }
    }
    return result;
}

void TableauGraph::delete_edge(NodeId v, NodeId w) {
    invalidate_reach_cache();
    auto& s = succ_.at(v);
    auto it = std::lower_bound(s.begin(), s.end(), w);
    SHOQ_CHECK(it != s.end() && *it == w);
    s.erase(it);
    auto& p = pred_.at(w);
    auto pit = std::lower_bound(p.begin(), p.end(), v);
    SHOQ_CHECK(pit != p.end() && *pit == v);
    p.erase(pit);
    elabels_.erase({v, w});
}

FormulaSet TableauGraph::full_label(NodeId v) const {
    auto it = full_label_cache_.find(v);
    if (it != full_label_cache_.end()) return it->second;
    FormulaSet out = node(v).label.set_union(node(v).rfmls);
    std::vector<Formula> kept;
    for (const Formula& f : out) {
        if (f.has_concept() && f.concept_part().is_residual()) continue;
        kept.push_back(f);
    }
    FormulaSet result(std::move(kept));
    full_label_cache_[v] = result;
    return result;
}

// ── Status updates ──────────────────────────────────────────────────────────

bool TableauGraph::set_status(NodeId v, Status s) {
    TableauNode& n = nodes_.at(v);
    if (n.status == s) return false;
    // Monotonicity: closed and open absorb; blocked can move only to closed
    // or closed-wrt; closed-wrt sets only grow.
    SHOQ_CHECK(!n.status.settled());
    if (n.status.is(StatusKind::Blocked))
        SHOQ_CHECK(s.kind == StatusKind::Closed || s.kind == StatusKind::ClosedWrt);
    if (n.status.is(StatusKind::ClosedWrt) && s.kind == StatusKind::ClosedWrt)
        SHOQ_CHECK(std::includes(s.wrt.begin(), s.wrt.end(), n.status.wrt.begin(),
                                 n.status.wrt.end()));
    if (s.kind == StatusKind::PExpanded) SHOQ_CHECK(n.is_state());
    if (s.kind == StatusKind::ClosedWrt) {
        SHOQ_CHECK(!s.wrt.empty());
        for (NodeId u : s.wrt)
            SHOQ_CHECK(node(u).is_state() && node(u).is_complex());
    }
    n.status = std::move(s);
    invalidate_reach_cache();
    return true;
}

bool TableauGraph::set_closed_wrt(NodeId v, NodeId u) {
    SHOQ_CHECK(node(u).is_state() && node(u).is_complex());
    const Status& cur = node(v).status;
    SHOQ_CHECK(!cur.settled());
    Status next;
    next.kind = StatusKind::ClosedWrt;
    if (cur.is(StatusKind::ClosedWrt)) {
        next.wrt = cur.wrt;
        auto it = std::lower_bound(next.wrt.begin(), next.wrt.end(), u);
        if (it != next.wrt.end() && *it == u) return false;
        next.wrt.insert(it, u);
    } else {
        next.wrt = {u};
    }
    return set_status(v, std::move(next));
}

// ── Reachability ("may affect the status of the root") ─────────────────────

namespace {
bool live(const TableauNode& n) { return !n.status.settled(); }
}  // namespace

// Complex-layer reachability over nonempty paths with live intermediates;
// cached per mutation epoch.
const std::vector<bool>& TableauGraph::complex_reach() const {
    if (complex_reach_cache_) return *complex_reach_cache_;
    std::vector<bool> reach(nodes_.size(), false);
    std::vector<NodeId> work;
    if (live(nodes_[root_])) work.push_back(root_);
    std::vector<bool> expanded(nodes_.size(), false);
    while (!work.empty()) {
        NodeId x = work.back();
        work.pop_back();
        if (expanded[x]) continue;
        expanded[x] = true;
        if (nodes_[x].is_state()) continue;  // states have no complex successors
        for (NodeId w : succ_[x]) {
            if (!nodes_[w].is_complex()) continue;
            reach[w] = true;
            if (live(nodes_[w])) work.push_back(w);
        }
    }
    complex_reach_cache_ = std::move(reach);
    return *complex_reach_cache_;
}

// Simple-layer reachability from a complex state's successors, avoiding
// intermediates closed w.r.t. that state; cached per mutation epoch.
const std::vector<bool>& TableauGraph::suffix_reach(NodeId state) const {
    auto it = suffix_reach_cache_.find(state);
    if (it != suffix_reach_cache_.end()) return it->second;
    std::vector<bool> out(nodes_.size(), false);
    std::vector<NodeId> work;
    for (NodeId w : succ_[state]) {
        if (!out[w]) {
            out[w] = true;
            work.push_back(w);
        }
    }
    while (!work.empty()) {
        NodeId x = work.back();
        work.pop_back();
        const TableauNode& n = nodes_[x];
        if (!live(n) || n.status.closed_wrt(state)) continue;  // dead intermediate
        for (NodeId w : succ_[x]) {
            if (!out[w]) {
                out[w] = true;
                work.push_back(w);
            }
        }
    }
    return suffix_reach_cache_.emplace(state, std::move(out)).first->second;
}

// The two-layer shape makes the side conditions local: a root path is a
// complex prefix, at most one complex state, then a simple suffix (states
// point only into the simple layer, and simple nodes never point back).  The
// closed-wrt sets contain complex states only, so their disjointness
// condition can fire solely between a simple suffix node and the path's one
// complex state.
bool TableauGraph::may_affect_root(NodeId v, std::optional<NodeId> through) const {
    if (through && *through == v && v != root_) through = std::nullopt;  // endpoint counts
    std::pair<NodeId, NodeId> key{v, through.value_or(-1)};
    auto cached = reach_cache_.find(key);
    if (cached != reach_cache_.end()) return cached->second;
    if (v == root_ && !through) return true;  // the empty path

    const std::vector<bool>& creach = complex_reach();

    bool result = false;
    if (nodes_[v].is_complex()) {
        if (!through) {
            result = creach[v];
        } else if (nodes_[*through].is_complex() && !nodes_[*through].is_state()) {
            // through is an intermediate complex node: root -> through -> v.
            result = creach[*through] && live(nodes_[*through]);
            if (result) {
                std::vector<bool> from_through(nodes_.size(), false);
                std::vector<NodeId> work{*through};
                std::vector<bool> expanded(nodes_.size(), false);
                while (!work.empty()) {
                    NodeId x = work.back();
                    work.pop_back();
                    if (expanded[x]) continue;
                    expanded[x] = true;
                    if (nodes_[x].is_state()) continue;
                    for (NodeId w : succ_[x]) {
                        if (!nodes_[w].is_complex()) continue;
                        from_through[w] = true;
                        if (live(nodes_[w])) work.push_back(w);
                    }
                }
                result = from_through[v];
            }
        } else {
            result = false;  // a complex state on the path ends the complex layer
        }
    } else {
        // v simple: enumerate the path's one complex state u*.
        for (NodeId u = 0; u < static_cast<NodeId>(nodes_.size()) && !result; ++u) {
            const TableauNode& un = nodes_[u];
            if (!un.is_state() || !un.is_complex()) continue;
            if (!creach[u] || !live(un)) continue;
            if (through && nodes_[*through].is_complex() && *through != u) continue;
            const std::vector<bool>& suffix = suffix_reach(u);
            if (through && !nodes_[*through].is_complex()) {
                if (!suffix[*through] || !live(nodes_[*through]) ||
                    nodes_[*through].status.closed_wrt(u))
                    continue;
                // Restart the suffix walk at `through`.
                std::vector<bool> tail(nodes_.size(), false);
                std::vector<NodeId> work{*through};
                tail[*through] = true;
                while (!work.empty()) {
                    NodeId x = work.back();
                    work.pop_back();
                    const TableauNode& n = nodes_[x];
                    if (!live(n) || n.status.closed_wrt(u)) continue;
                    for (NodeId w : succ_[x]) {
                        if (!tail[w]) {
                            tail[w] = true;
                            work.push_back(w);
                        }
                    }
                }
                result = tail[v];
            } else {
                result = suffix[v];
            }
        }
    }
    reach_cache_[key] = result;
    return result;
}

// ── Invariants ──────────────────────────────────────────────────────────────

std::vector<std::string> TableauGraph::check_invariants(const ClosureSet* clo) const {
    std::vector<std::string> bad;
    auto complain = [&](const std::string& msg) { bad.push_back(msg); };

    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
            const TableauNode& a = nodes_[i];
            const TableauNode& b = nodes_[j];
            if (a.label != b.label) continue;
            bool both_simple = a.stype == NodeSType::Simple && b.stype == NodeSType::Simple;
            bool same_complex = a.stype == NodeSType::Complex && b.stype == NodeSType::Complex &&
                                a.type == b.type;
            if (both_simple || same_complex)
                complain("cache violation: v" + std::to_string(a.id) + " and v" +
                         std::to_string(b.id) + " share a label");
        }
    }

    for (const TableauNode& n : nodes_) {
        bool concept_only = label_is_concept_only(n.label);
        if (n.stype == NodeSType::Simple && !concept_only)
            complain("simple node v" + std::to_string(n.id) + " carries assertions");
        if (n.stype == NodeSType::Complex && concept_only && !n.label.empty())
            complain("complex node v" + std::to_string(n.id) + " carries bare concepts");
        if (n.status.is(StatusKind::PExpanded) && !n.is_state())
            complain("p-expanded non-state v" + std::to_string(n.id));
        if (n.status.is(StatusKind::Blocked)) {
            bool has_nominal = false;
            for (const Formula& f : n.label)
                if (f.kind() == FormulaKind::ConceptOnly &&
                    f.concept_part().kind() == ConceptKind::Nominal)
                    has_nominal = true;
            if (n.stype != NodeSType::Simple || !has_nominal)
                complain("blocked node v" + std::to_string(n.id) + " is not a nominal simple node");
        }
        if (n.status.is(StatusKind::ClosedWrt)) {
            if (n.status.wrt.empty()) complain("empty closed-wrt set on v" + std::to_string(n.id));
            for (NodeId u : n.status.wrt)
                if (!node(u).is_state() || !node(u).is_complex())
                    complain("closed-wrt member v" + std::to_string(u) + " is not a complex state");
        }
        if (clo) {
            for (const Formula& f : n.label)
                if (!clo->contains(f))
                    complain("label formula outside the closure at v" + std::to_string(n.id) +
                             ": " + to_string(f));
        }
    }

    for (NodeId v = 0; v < static_cast<NodeId>(nodes_.size()); ++v) {
        for (NodeId w : succ_[v]) {
            const TableauNode& a = nodes_[v];
            const TableauNode& b = nodes_[w];
            if (a.stype == NodeSType::Simple && b.stype == NodeSType::Complex)
                complain("edge from simple v" + std::to_string(v) + " to complex v" +
                         std::to_string(w));
            if (a.stype == NodeSType::Complex && b.stype == NodeSType::Simple && !a.is_state())
                complain("complex-to-simple edge from non-state v" + std::to_string(v));
            bool has_labels = elabels_.count({v, w}) && !edge_labels(v, w).empty();
            if (has_labels != a.is_state())
                complain("edge label presence mismatch on (v" + std::to_string(v) + ",v" +
                         std::to_string(w) + ")");
            for (const EdgeLabel& e : edge_labels(v, w)) {
                if ((e.individual == std::nullopt) != (a.stype == NodeSType::Simple))
                    complain("pi_I/null mismatch on (v" + std::to_string(v) + ",v" +
                             std::to_string(w) + ")");
            }
        }
    }
    return bad;
}

// ── DOT export ──────────────────────────────────────────────────────────────

std::string TableauGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph tableau {\n  rankdir=TB;\n";
    for (const TableauNode& n : nodes_) {
        std::string shape = n.is_state() ? "box" : "ellipse";
        std::string fill = "white";
        switch (n.status.kind) {
            case StatusKind::Closed: fill = "lightcoral"; break;
            case StatusKind::Open: fill = "palegreen"; break;
            case StatusKind::Blocked: fill = "lightyellow"; break;
            case StatusKind::ClosedWrt: fill = "lightsalmon"; break;
            default: break;
        }
        os << "  v" << n.id << " [shape=" << shape << ", style=filled, fillcolor=" << fill
           << ", label=\"v" << n.id << " " << (n.is_complex() ? "complex" : "simple") << " "
           << to_string(n.status) << "\\n";
        for (const Formula& f : n.label) {
            std::string t = to_string(f);
            for (char& c : t)
                if (c == '"') c = '\'';
            os << t << "\\n";
        }
        os << "\"];\n";
    }
    for (NodeId v = 0; v < static_cast<NodeId>(nodes_.size()); ++v) {
        for (NodeId w : succ_[v]) {
            os << "  v" << v << " -> v" << w;
            const auto& labels = edge_labels(v, w);
            if (!labels.empty()) {
                os << " [label=\"";
                for (std::size_t i = 0; i < labels.size(); ++i) {
                    if (i) os << "; ";
                    os << to_string(labels[i]);
                }
                os << "\"]";
            }
            os << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace shoq
