#ifndef SHOQ_KB_HPP
#define SHOQ_KB_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "shoq/logic.hpp"
#include "shoq/rbox.hpp"
#include "shoq/syntax.hpp"

namespace shoq {

// One parsed TBox line, kept for pretty-printing; the reasoner works on the
// encoded global-assumption concepts only.
struct TBoxAxiom {
    enum class Kind { Sub, Equiv } kind;
    Concept lhs;
    Concept rhs;
};

class KnowledgeBase {
public:
    std::vector<RBoxAxiom> rbox_axioms;  // as parsed, deduplicated
    std::vector<TBoxAxiom> tbox_axioms;  // as parsed
    RBoxClosure rbox;
    std::vector<Concept> tbox;  // encoded global assumptions, NNF, sorted
    FormulaSet abox;            // NNF, canonical

    // First-occurrence orders; this is the linear order used to orient merges.
    std::vector<Individual> individuals;
    std::vector<Role> roles;

    bool validated = false;

    std::size_t individual_index(const Individual& a) const;
    bool individual_less(const Individual& a, const Individual& b) const;
    bool is_numeric(const Role& r) const;

    // Size parameter for the closure bound: length of the canonical
    // serialization.
    std::size_t serialized_size() const;

private:
    friend void validate(KnowledgeBase& kb);
    std::map<Role, bool> numeric_;
};

// ── Parsing and validation ─────────────────────────────────────────────────

// Parses the textual KB format.  Throws ParseError.  The result is not yet
// validated.
KnowledgeBase parse_kb(const std::string& text);

// Checks the simple-role side condition on number restrictions, augments an
// empty ABox with aux:top, and precomputes the numeric-role classification.
// Throws ValidationError.
void validate(KnowledgeBase& kb);

// parse + validate.
KnowledgeBase load_kb(const std::string& text);
KnowledgeBase load_kb_file(const std::string& path);

// Canonical text form; parse(pretty_print(kb)) reproduces kb.
std::string pretty_print(const KnowledgeBase& kb);

// ── Closure ─────────────────────────────────────────────────────────────────
// The closure set: a superset of every label the engine can produce.  For
// tests and diagnostics.

struct ClosureSet {
    FormulaSet formulas;
    bool contains(const Formula& f) const { return formulas.contains(f); }
    std::size_t size() const { return formulas.size(); }
};

ClosureSet closure(const KnowledgeBase& kb);

}  // namespace shoq

#endif  // SHOQ_KB_HPP
