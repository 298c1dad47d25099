#ifndef SHOQ_LOGIC_HPP
#define SHOQ_LOGIC_HPP

#include <map>
#include <vector>

#include "shoq/rbox.hpp"
#include "shoq/syntax.hpp"

namespace shoq {

// ── Negation normal form ────────────────────────────────────────────────────

// True when negation appears only as NegAtomic/NegNominal (no Not nodes).
bool is_nnf(const Concept& c);

// Pushes general negation inward.  Total on well-formed trees; idempotent on
// NNF input.  Rejects residual forms under a negation.
Concept nnf(const Concept& c);

// NNF negation of an NNF input.  An involution.  Throws
// ValidationError on residual (PrecEq/SuccEq) input, which has no negation.
Concept negate_nnf(const Concept& c);

// φ̄ for φ = a:C or null:C; rejects role assertions and (in)equalities.
Formula negate_formula(const Formula& f);

// Complement used by the clash check: defined for every formula kind except
// those containing a residual concept.  a:C ↔ a:C̄, r(a,b) ↔ ¬r(a,b),
// a=b ↔ a!=b.
Formula clash_complement(const Formula& f);
bool has_clash_complement(const Formula& f);

// ── Individual substitution ────────────────────────────────────────────────

// Replaces every occurrence of an individual per `repl` (applied pointwise,
// not iterated), everywhere including nominals and role-assertion arguments.
Concept substitute(const Concept& c, const std::map<Individual, Individual>& repl);
Formula substitute(const Formula& f, const std::map<Individual, Individual>& repl);

// The merge form used by the replacement technique: substitutes b by a
// everywhere except inside = expressions (the merge records stay intact).
Formula merge_substitute(const Formula& f, const Individual& from, const Individual& to);

// ── Positive occurrence at modal depth 0 ───────────────────────────────────
// phi occurs in some member of X outside the scope of negation and of all
// modal/number operators.  Inputs are NNF.

bool occurs_positively_depth0(const Concept& phi, const std::vector<Concept>& X);

// ── Relevant ≤1 r.{a} concepts ─────────────────────────────────────────────
// The interaction guard between number restrictions and nominals: exactly the
// concepts atmost 1 r (one a) relevant w.r.t. the TBox and X.

std::vector<Concept> relevant_atmost_one(const std::vector<Concept>& tbox,
                                         const std::vector<Concept>& X,
                                         const RBoxClosure& rbox);

// Assertion variant: projects {C | a:C ∈ X} and wraps results as
// a : atmost 1 r (one b).
std::vector<Formula> assertion_relevant_atmost_one(const std::vector<Concept>& tbox,
                                                   const FormulaSet& X, const Individual& a,
                                                   const RBoxClosure& rbox);

}  // namespace shoq

#endif  // SHOQ_LOGIC_HPP
