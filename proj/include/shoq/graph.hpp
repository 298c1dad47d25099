#ifndef SHOQ_GRAPH_HPP
#define SHOQ_GRAPH_HPP

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shoq/ilp.hpp"
#include "shoq/kb.hpp"
#include "shoq/syntax.hpp"

namespace shoq {

using NodeId = int;

enum class NodeType : std::uint8_t { State, NonState };
enum class NodeSType : std::uint8_t { Complex, Simple };

enum class StatusKind : std::uint8_t {
    Unexpanded,
    PExpanded,
    FExpanded,
    Closed,
    Open,
    Blocked,
    ClosedWrt,
};

struct Status {
    StatusKind kind = StatusKind::Unexpanded;
    std::vector<NodeId> wrt;  // ClosedWrt only; sorted, nonempty

    bool is(StatusKind k) const { return kind == k; }
    bool closed_wrt(NodeId u) const;
    bool settled() const { return kind == StatusKind::Closed || kind == StatusKind::Open; }
    bool operator==(const Status& o) const { return kind == o.kind && wrt == o.wrt; }
    bool operator!=(const Status& o) const { return !(*this == o); }
};

std::string to_string(const Status& s);

enum class EdgeTag : std::uint8_t { TestingClosedness, CheckingFeasibility };

struct EdgeLabel {
    EdgeTag tag;
    std::vector<Role> roles;               // sorted
    std::optional<Individual> individual;  // null iff the source is simple

    bool operator==(const EdgeLabel& o) const {
        return tag == o.tag && roles == o.roles && individual == o.individual;
    }
    bool operator<(const EdgeLabel& o) const;
};

std::string to_string(const EdgeLabel& e);

// One ILP variable x_{w,e} of a state.
struct IlpVarKey {
    NodeId succ;
    EdgeLabel label;
    bool operator==(const IlpVarKey& o) const { return succ == o.succ && label == o.label; }
    bool operator<(const IlpVarKey& o) const {
        if (succ != o.succ) return succ < o.succ;
        return label < o.label;
    }
};

// ILConstraints(v): variables are indexed into `vars`.
struct StateConstraints {
    std::vector<IlpVarKey> vars;  // sorted
    ilp::Problem problem;         // over indices into vars

    int var_index(const IlpVarKey& key) const;      // -1 when absent
    bool add_eq0(const IlpVarKey& key);             // returns true if newly added
};

struct TableauNode {
    NodeId id = -1;
    NodeType type = NodeType::NonState;
    NodeSType stype = NodeSType::Complex;
    Status status;
    FormulaSet label;
    FormulaSet rfmls;
    std::map<Individual, Individual> ind_repl;  // complex nodes only
    StateConstraints ilc;                       // states only

    bool is_state() const { return type == NodeType::State; }
    bool is_complex() const { return stype == NodeSType::Complex; }
};

struct ConnectResult {
    NodeId node = -1;
    bool created = false;
    bool edge_added = false;
    bool rfmls_grew = false;
    bool elabel_added = false;
};

class TableauGraph {
public:
    // Builds the single-node graph for a validated knowledge base: the root
    // label is the ABox plus one a:C per TBox concept and occurring
    // individual.
    static TableauGraph init_tableau(const KnowledgeBase& kb);

    NodeId root() const { return root_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const;
    const TableauNode& node(NodeId v) const { return nodes_.at(v); }
    TableauNode& node_mut(NodeId v);

    const std::vector<NodeId>& successors(NodeId v) const { return succ_.at(v); }
    const std::vector<NodeId>& predecessors(NodeId v) const { return pred_.at(v); }
    bool has_edge(NodeId v, NodeId w) const;
    const std::vector<EdgeLabel>& edge_labels(NodeId v, NodeId w) const;

    // Connect-to-successor: reuse a cache-compatible node when it exists
    // (equal label, and matching type or a simple target), otherwise create
    // one.  `from` may be null only for the root.
    ConnectResult con_to_succ(std::optional<NodeId> from, NodeType type, NodeSType stype,
                              FormulaSet label, FormulaSet rfmls,
                              std::optional<std::map<Individual, Individual>> ind_repl,
                              std::optional<EdgeLabel> elabel);

    // Deletes one edge and its labels (rule DN); nodes stay in place.
    void delete_edge(NodeId v, NodeId w);

    // Label(v) ∪ RFmls(v) minus the residual assertions.
    FormulaSet full_label(NodeId v) const;

    // Status updates.  Both invalidate the reachability cache and enforce
    // monotonicity (closed/open absorbing, blocked only to closed/
    // closed-wrt).
    bool set_status(NodeId v, Status s);
    bool set_closed_wrt(NodeId v, NodeId u);

    // True when a path root .. v exists whose non-final nodes are neither
    // open nor closed and whose closed-wrt sets avoid the path prefix; with
    // `through`, the path must additionally visit it.
    bool may_affect_root(NodeId v, std::optional<NodeId> through = std::nullopt) const;

    // Structural self-checks: cache uniqueness, the two-layer discipline,
    // edge-label placement, and (when a closure is given) label containment.
    // Returns a diagnostic per violation.
    std::vector<std::string> check_invariants(const ClosureSet* closure = nullptr) const;

    std::string to_dot() const;

private:
    std::optional<NodeId> cache_lookup(NodeType type, NodeSType stype,
                                       const FormulaSet& label) const;
    void invalidate_reach_cache() const {
        reach_cache_.clear();
        complex_reach_cache_.reset();
        suffix_reach_cache_.clear();
    }
    const std::vector<bool>& complex_reach() const;
    const std::vector<bool>& suffix_reach(NodeId state) const;

    // Deques: node and adjacency references stay valid while new nodes are
    // created mid-rule.
    std::deque<TableauNode> nodes_;
    std::deque<std::vector<NodeId>> succ_, pred_;
    std::map<std::pair<NodeId, NodeId>, std::vector<EdgeLabel>> elabels_;
    std::map<FormulaSet, NodeId> simple_cache_;
    std::map<std::pair<FormulaSet, NodeType>, NodeId> complex_cache_;
    NodeId root_ = -1;

    mutable std::map<std::pair<NodeId, NodeId>, bool> reach_cache_;  // (v, through+1)
    mutable std::optional<std::vector<bool>> complex_reach_cache_;
    mutable std::map<NodeId, std::vector<bool>> suffix_reach_cache_;  // per complex state
    mutable std::map<NodeId, FormulaSet> full_label_cache_;
};

}  // namespace shoq

#endif  // SHOQ_GRAPH_HPP
