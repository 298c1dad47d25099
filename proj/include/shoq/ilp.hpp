#ifndef SHOQ_ILP_HPP
#define SHOQ_ILP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "shoq/support.hpp"

namespace shoq::ilp {

// A 0/1-coefficient integer feasibility system: for each constraint, the sum
// of the listed variables compared against a nonnegative bound.  Variables
// range over the natural numbers (x >= 0 is implicit).  Eq0 pins a single
// variable to zero.
struct Constraint {
    enum class Sense { Ge, Le, Eq0 } sense;
    std::vector<int> vars;  // sorted, duplicate-free variable indices
    long bound = 0;
};

struct Problem {
    int num_vars = 0;
    std::vector<Constraint> cons;

    void add_ge(std::vector<int> vars, long bound);
    void add_le(std::vector<int> vars, long bound);
    void add_eq0(int var);
    bool has_eq0(int var) const;
};

enum class Feasibility { Feasible, Infeasible };

struct Result {
    Feasibility outcome;
    // Valid witness when feasible: one value per variable, each satisfying
    // every constraint by substitution.
    std::vector<long> witness;
    bool feasible() const { return outcome == Feasibility::Feasible; }
};

struct Budget {
    long max_nodes = 1000000;  // branch-and-bound assignments before giving up
};

// In a minimal solution every variable is bounded by the largest Ge bound
// (0 when there are none): clamping any solution to that cap preserves
// feasibility.
long minimal_solution_cap(const Problem& p);

// Connected components of the variable/constraint incidence graph.
// Feasible iff every component is feasible; variables occurring in no
// constraint form singleton components.
struct Component {
    std::vector<int> vars;  // original indices, sorted
    Problem problem;        // re-indexed over vars
};
std::vector<Component> decompose(const Problem& p);

// Decomposition + presolve + depth-first branch and bound.  Sound and
// complete; the witness is the lexicographically smallest vector found under
// the branching order (descending constraint participation, ties by index).
// Throws ResourceLimitError when the node budget runs out.
Result check_feasibility(const Problem& p, const Budget& budget = {});

// Exhaustive scan of [0,cap]^n.  Ground truth for small instances.
Feasibility oracle_enumerate(const Problem& p, long cap);

// Deterministic exhaustive versions of the two bounded-counter decision
// procedures: each bounded constraint distributes its units over its
// members in every possible way.  oracle_all_bounds_small requires every
// bound <= n; oracle_le_bounds_small requires every Le bound <= n.  Both
// throw ValidationError when the precondition fails.
Feasibility oracle_all_bounds_small(const Problem& p, long n);
Feasibility oracle_le_bounds_small(const Problem& p, long n);

// Debug text format: one constraint per line, e.g. "x1 + x3 >= 2", "x2 = 0".
// Variables are x1..xm; the problem size is the largest index mentioned.
Problem parse_problem(const std::string& text);
std::string to_string(const Problem& p);

}  // namespace shoq::ilp

#endif  // SHOQ_ILP_HPP
