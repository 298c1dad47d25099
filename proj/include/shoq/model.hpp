#ifndef SHOQ_MODEL_HPP
#define SHOQ_MODEL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shoq/graph.hpp"
#include "shoq/kb.hpp"

namespace shoq {

// ── Model graphs (Hintikka-style) ───────────────────────────────────────────

struct ModelGraph {
    std::vector<std::string> element_names;            // Δ = indices
    std::map<Individual, std::size_t> interprets;      // nI
    std::vector<std::set<Concept>> concepts;           // nC
    std::map<Role, std::set<std::pair<std::size_t, std::size_t>>> edges;  // nE

    std::size_t size() const { return element_names.size(); }
};

// ── Interpretations ─────────────────────────────────────────────────────────

struct Interpretation {
    std::size_t domain = 0;
    std::vector<std::string> element_names;                 // optional display names
    std::map<std::string, std::vector<bool>> concept_ext;   // concept name -> mask
    std::map<Role, std::set<std::pair<std::size_t, std::size_t>>> roles;
    std::map<Individual, std::size_t> individuals;

    bool has_edge(const Role& r, std::size_t x, std::size_t y) const;
};

struct CheckResult {
    bool ok = true;
    std::string violation;  // first failing item when !ok
};

// ── Operations ──────────────────────────────────────────────────────────────

// Deterministic saturation path: from a non-state v along smallest-id
// non-closed successors to a state (or, with `wrt`, to a state or blocked
// node, avoiding closed-wrt-u statuses).  Throws EngineDefect when stuck.
std::vector<NodeId> saturation_path(const TableauGraph& g, NodeId v,
                                    std::optional<NodeId> wrt = std::nullopt);

// Reads a finite model graph off an open tableau: named individuals from
// the terminal state's merge fixpoints, counted successors materialized
// per the fixed feasibility witness, blocked targets redirected back.  Requires the run to have ended with a non-closed root.
ModelGraph extract_model(const TableauGraph& g, const KnowledgeBase& kb,
                         long ilp_node_budget = 1000000);

// Checks the consistency / R-saturation conditions; one diagnostic per
// violated condition instance.
std::vector<std::string> check_model_graph(const ModelGraph& m, const RBoxClosure& rbox);

// The R-model corresponding to a model graph: least role relations extending
// nE under subrole containment and transitivity.
Interpretation corresponding_model(const ModelGraph& m, const RBoxClosure& rbox);

// The extension of an NNF concept; rejects residual forms.
std::vector<bool> eval_concept(const Concept& c, const Interpretation& interp);

// Every RBox axiom, every TBox concept at every element, every ABox
// assertion.
CheckResult check_model(const Interpretation& interp, const KnowledgeBase& kb);

// ── Brute-force satisfiability oracle ───────────────────────────────────────

struct BruteResult {
    enum class Kind { Witness, NoModel, Limit } kind;
    std::optional<Interpretation> model;  // set for Witness
};

// Enumerates interpretations over domains of size 1..max_domain (roles closed
// under the RBox before checking); stops at the first model.  `budget` caps
// the number of full model checks.
BruteResult brute_force_sat(const KnowledgeBase& kb, std::size_t max_domain,
                            long budget = 200000);

// ── Serialization ───────────────────────────────────────────────────────────

std::string serialize_model(const Interpretation& interp);
Interpretation parse_model(const std::string& text);

}  // namespace shoq

#endif  // SHOQ_MODEL_HPP
