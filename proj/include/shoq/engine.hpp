#ifndef SHOQ_ENGINE_HPP
#define SHOQ_ENGINE_HPP

#include <deque>
#include <iosfwd>
#include <map>
#include <set>
#include <optional>
#include <string>

#include "shoq/graph.hpp"
#include "shoq/ilp.hpp"
#include "shoq/kb.hpp"

namespace shoq {

struct EngineConfig {
    bool trace = false;
    std::ostream* trace_out = nullptr;  // defaults to std::cout when tracing
    long ilp_node_budget = 1000000;
    long max_steps = 0;  // 0 = unlimited; exceeding raises ResourceLimitError
};

struct EngineStats {
    std::map<std::string, long> rule_applications;
    long ilp_calls = 0;
    long steps = 0;
};

enum class RunResult { Sat, Unsat };

// The tableau engine: priority scheduling over the seven rule groups.
// UPS rules are drained to a fixed point first (event queue plus a verifying
// sweep), then the unary static rules fire wherever applicable, then one of
// DN/NUS/FS/TP/TF is applied to the first candidate node in creation order
// that may affect the root's status.
class Engine {
public:
    explicit Engine(KnowledgeBase kb, EngineConfig cfg = {});

    RunResult run();

    // Expands every node still reachable through non-closed paths (the
    // scheduler's may-affect filter skips work that cannot change the
    // verdict, but model extraction walks those regions).  Call after a
    // non-closed run(); the root status cannot change.
    void complete_for_extraction();

    const TableauGraph& graph() const { return g_; }
    TableauGraph& graph_mut() { return g_; }
    const EngineStats& stats() const { return stats_; }
    const KnowledgeBase& kb() const { return kb_; }

    // Individual rules, public so tests can drive them.  Each returns
    // whether the graph changed.
    bool rule_ups1(NodeId v);
    bool rule_ups2(NodeId v);
    bool rule_ups3(NodeId v);
    bool rule_us1(NodeId v);
    bool rule_us2(NodeId v);
    bool rule_us3(NodeId v);
    bool rule_dn(NodeId v);
    bool rule_nus(NodeId v);
    bool rule_fs(NodeId v);
    bool rule_tp(NodeId v);
    bool rule_tf(NodeId v);

    // Drains UPS1-3 to quiescence.
    void drain_ups();

private:
    bool apply_one_us();
    std::optional<NodeId> pick_expansion_candidate(bool relaxed);
    bool dn_would_change(NodeId v) const;
    bool apply_five(NodeId v);

    bool update_status(NodeId v, Status s, const char* rule);
    void set_status_silent(NodeId v, Status s);
    bool close_wrt(NodeId v, NodeId u, const char* rule);
    void enqueue_predecessors(NodeId changed);
    void count_step(const char* rule);

    bool ilc_feasible(NodeId state, const std::vector<int>& extra_zero_vars);
    std::string var_name(NodeId state, int var_index) const;

    void trace_line(const std::string& line);

    KnowledgeBase kb_;  // kept by value: engines outlive caller temporaries
    EngineConfig cfg_;
    TableauGraph g_;
    EngineStats stats_;
    std::deque<NodeId> prop_queue_;  // UPS3 re-evaluation tasks
    std::set<NodeId> ilc_dirty_;     // states whose constraint system changed
    std::set<NodeId> ups1_clean_;    // nodes where UPS1 found nothing, still valid
    std::map<NodeId, std::vector<Formula>> ups2_negs_;  // per node: a:C̄ candidates
    std::map<NodeId, std::pair<std::vector<int>, std::size_t>> open_check_;
    std::vector<Concept> tbox_;      // cached, sorted

    void mark_node_dirty(NodeId v) { ups1_clean_.erase(v); }
    ConnectResult connect(std::optional<NodeId> from, NodeType type, NodeSType stype,
                          FormulaSet label, FormulaSet rfmls,
                          std::optional<std::map<Individual, Individual>> ind_repl,
                          std::optional<EdgeLabel> elabel);
};

}  // namespace shoq

#endif  // SHOQ_ENGINE_HPP
