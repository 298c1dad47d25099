#ifndef SHOQ_SYNTAX_HPP
#define SHOQ_SYNTAX_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shoq/support.hpp"

namespace shoq {

// ── Names ───────────────────────────────────────────────────────────────────
// Roles and individuals are plain interned-by-value names.  Equality and the
// canonical order are by name; first-occurrence order (needed for merge
// orientation) lives on the KnowledgeBase, not here.

struct Role {
    std::string name;
    bool operator==(const Role& o) const { return name == o.name; }
    bool operator!=(const Role& o) const { return name != o.name; }
    bool operator<(const Role& o) const { return name < o.name; }
};

struct Individual {
    std::string name;
    bool operator==(const Individual& o) const { return name == o.name; }
    bool operator!=(const Individual& o) const { return name != o.name; }
    bool operator<(const Individual& o) const { return name < o.name; }
};

// ── Concepts ────────────────────────────────────────────────────────────────
//
// NNF syntax plus two extras:
//   * Not        — general negation, produced by the parser only; nnf()
//                  eliminates it and nothing downstream accepts it.
//   * PrecEq / SuccEq — the residual number restrictions that ignore
//                  already-witnessed named individuals.  Internal only:
//                  never parsed, never negated, filtered out of FullLabel.
//
// The enum order is the canonical order of variants.

enum class ConceptKind : std::uint8_t {
    Top,
    Bot,
    Atomic,
    NegAtomic,
    Nominal,
    NegNominal,
    And,
    Or,
    Exists,
    Forall,
    AtLeast,
    AtMost,
    PrecEq,
    SuccEq,
    Not,  // parser-only
};

class Concept {
public:
    Concept() = default;

    static Concept top();
    static Concept bot();
    static Concept atomic(std::string name);
    static Concept neg_atomic(std::string name);
    static Concept nominal(Individual a);
    static Concept neg_nominal(Individual a);
    static Concept conj(Concept lhs, Concept rhs);
    static Concept disj(Concept lhs, Concept rhs);
    static Concept exists(Role r, Concept sub);
    static Concept forall(Role r, Concept sub);
    static Concept at_least(std::uint32_t n, Role s, Concept sub);
    static Concept at_most(std::uint32_t n, Role s, Concept sub);
    static Concept prec_eq(std::uint32_t n, Role s, Concept sub);   // internal
    static Concept succ_eq(std::uint32_t n, Role s, Concept sub);   // internal
    static Concept negation(Concept sub);                           // parser-only

    bool valid() const { return node_ != nullptr; }
    ConceptKind kind() const;
    const std::string& name() const;       // Atomic / NegAtomic
    const Individual& individual() const;  // Nominal / NegNominal
    const Role& role() const;              // Exists .. SuccEq
    std::uint32_t count() const;           // AtLeast .. SuccEq
    const Concept& lhs() const;            // And / Or
    const Concept& rhs() const;            // And / Or
    const Concept& sub() const;            // Exists .. SuccEq, Not

    bool is_residual() const;  // PrecEq or SuccEq at the top

    std::size_t hash() const;
    bool operator==(const Concept& o) const { return compare(*this, o) == 0; }
    bool operator!=(const Concept& o) const { return compare(*this, o) != 0; }
    bool operator<(const Concept& o) const { return compare(*this, o) < 0; }

    static int compare(const Concept& a, const Concept& b);

    struct Node;  // implementation detail, public for the factory functions

private:
    explicit Concept(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// ── Formulas ────────────────────────────────────────────────────────────────
// A formula is a bare concept (subjectless), an instance assertion, a
// (possibly negated) role assertion, or an (in)equality between individuals.

enum class FormulaKind : std::uint8_t {
    ConceptOnly,
    Instance,
    RoleAssertion,
    NegRoleAssertion,
    Eq,
    NotEq,
};

class Formula {
public:
    Formula() = default;

    static Formula concept_only(Concept c);
    static Formula instance(Individual a, Concept c);
    static Formula role(Role r, Individual a, Individual b);
    static Formula neg_role(Role r, Individual a, Individual b);
    static Formula eq(Individual a, Individual b);
    static Formula neq(Individual a, Individual b);

    bool valid() const { return kind_.has_value(); }
    FormulaKind kind() const { return *kind_; }

    // ConceptOnly / Instance
    const Concept& concept_part() const;
    const Individual& subject() const;  // Instance only
    bool has_concept() const { return kind() == FormulaKind::ConceptOnly || kind() == FormulaKind::Instance; }
    // "alpha" view: subject individual or nullopt for the null:C form.
    std::optional<Individual> alpha() const;

    // RoleAssertion / NegRoleAssertion
    const Role& role_part() const;
    // Role assertions and (in)equalities: first/second individual.
    const Individual& first() const;
    const Individual& second() const;

    std::size_t hash() const;
    bool operator==(const Formula& o) const { return compare(*this, o) == 0; }
    bool operator!=(const Formula& o) const { return compare(*this, o) != 0; }
    bool operator<(const Formula& o) const { return compare(*this, o) < 0; }

    static int compare(const Formula& a, const Formula& b);

private:
    std::optional<FormulaKind> kind_;
    Concept concept_;
    std::optional<Individual> subject_;
    std::optional<Role> role_;
    std::optional<Individual> first_, second_;
};

// ── Canonical formula sets ─────────────────────────────────────────────────
// Labels, RFmls and the closure are stored as sorted, duplicate-free vectors;
// set equality is representation equality, which is what global caching keys
// on.

class FormulaSet {
public:
    FormulaSet() = default;
    explicit FormulaSet(std::vector<Formula> items);

    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    bool contains(const Formula& f) const;
    bool insert(const Formula& f);  // returns true if newly added

    FormulaSet set_union(const FormulaSet& o) const;
    FormulaSet set_minus(const FormulaSet& o) const;
    bool is_subset_of(const FormulaSet& o) const;

    const std::vector<Formula>& items() const { return items_; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    std::size_t hash() const;
    bool operator==(const FormulaSet& o) const { return items_ == o.items_; }
    bool operator!=(const FormulaSet& o) const { return items_ != o.items_; }
    bool operator<(const FormulaSet& o) const { return items_ < o.items_; }

private:
    std::vector<Formula> items_;
};

// ── Printing ────────────────────────────────────────────────────────────────
// Concepts print in the input grammar (binary operators fully parenthesised);
// the internal residual forms print as `atleast~` / `atmost~`, which the
// parser does not accept.

std::string to_string(const Concept& c);
std::string to_string(const Formula& f);
std::string to_string(const FormulaSet& s);

// ── Occurrence collection ──────────────────────────────────────────────────

void collect_individuals(const Concept& c, std::set<Individual>& out);
void collect_individuals(const Formula& f, std::set<Individual>& out);
void collect_roles(const Concept& c, std::set<Role>& out);
void collect_roles(const Formula& f, std::set<Role>& out);

}  // namespace shoq

#endif  // SHOQ_SYNTAX_HPP
