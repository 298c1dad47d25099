#include <fstream>
#include <functional>

#include "shoq/kb.hpp"

namespace shoq {

std::size_t KnowledgeBase::individual_index(const Individual& a) const {
    for (std::size_t i = 0; i < individuals.size(); ++i)
        if (individuals[i] == a) return i;
    throw EngineDefect("unknown individual: " + a.name);
}

bool KnowledgeBase::individual_less(const Individual& a, const Individual& b) const {
    return individual_index(a) < individual_index(b);
}

bool KnowledgeBase::is_numeric(const Role& r) const {
    SHOQ_CHECK(validated);
    auto it = numeric_.find(r);
    return it != numeric_.end() && it->second;
}

std::size_t KnowledgeBase::serialized_size() const { return pretty_print(*this).size(); }

namespace {

void collect_number_restriction_roles(const Concept& c, std::set<Role>& out) {
    switch (c.kind()) {
        case ConceptKind::And:
        case ConceptKind::Or:
            collect_number_restriction_roles(c.lhs(), out);
            collect_number_restriction_roles(c.rhs(), out);
            return;
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
            out.insert(c.role());
            collect_number_restriction_roles(c.sub(), out);
            return;
        case ConceptKind::Exists:
        case ConceptKind::Forall:
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
            collect_number_restriction_roles(c.sub(), out);
            return;
        default:
            return;
    }
}

void check_simple_roles(const Concept& c, const RBoxClosure& rbox) {
    switch (c.kind()) {
        case ConceptKind::And:
        case ConceptKind::Or:
            check_simple_roles(c.lhs(), rbox);
            check_simple_roles(c.rhs(), rbox);
            return;
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
            if (!rbox.is_simple(c.role()))
                throw ValidationError("non-simple role in number restriction: role '" +
                                      c.role().name + "' in '" + to_string(c) + "'");
            check_simple_roles(c.sub(), rbox);
            return;
        case ConceptKind::Exists:
        case ConceptKind::Forall:
            check_simple_roles(c.sub(), rbox);
            return;
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
        case ConceptKind::Not:
            throw ValidationError("internal concept form in input: " + to_string(c));
        default:
            return;
    }
}

}  // namespace

void validate(KnowledgeBase& kb) {
    for (const Concept& c : kb.tbox) check_simple_roles(c, kb.rbox);
    for (const Formula& f : kb.abox) {
        if (f.has_concept()) check_simple_roles(f.concept_part(), kb.rbox);
    }

    if (kb.abox.empty()) {
        // The calculus needs a nonempty ABox; add aux:top for a fresh
        // individual.
        std::string name = "aux";
        std::set<Individual> taken(kb.individuals.begin(), kb.individuals.end());
        int suffix = 0;
        while (taken.count(Individual{name}))
            name = "aux" + std::to_string(suffix++);
        Individual aux{name};
        kb.individuals.push_back(aux);
        kb.abox.insert(Formula::instance(aux, Concept::top()));
    }

    // Numeric roles: simple and occurring in a number restriction, closed
    // downward over subroles.
    std::set<Role> in_restriction;
    for (const Concept& c : kb.tbox) collect_number_restriction_roles(c, in_restriction);
    for (const Formula& f : kb.abox)
        if (f.has_concept()) collect_number_restriction_roles(f.concept_part(), in_restriction);

    kb.numeric_.clear();
    for (const Role& r : kb.rbox.roles()) kb.numeric_[r] = false;
    for (const Role& r : in_restriction)
        if (kb.rbox.is_simple(r)) kb.numeric_[r] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [s, flag] : kb.numeric_) {
            if (flag) continue;
            for (const auto& [lo, hi] : kb.rbox.sub_pairs()) {
                if (lo == s && kb.numeric_.count(hi) && kb.numeric_[hi]) {
                    flag = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    kb.validated = true;
}

KnowledgeBase load_kb(const std::string& text) {
    KnowledgeBase kb = parse_kb(text);
    validate(kb);
    return kb;
}

KnowledgeBase load_kb_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_kb(text);
}

// ── Closure ─────────────────────────────────────────────────────────────────
//
// The smallest formula set closed under:
//   1. subconcepts of the KB,
//   2. atmost 1 r (one a) for used roles/individuals,
//   3. subrole instances of universal restrictions,
//   4. only s C̄ for atmost 0 s C,
//   5. NNF negation (of non-residual members),
//   6. atleast~ 1 r C for numeric existentials,
//   7./8. residuals atleast~ (n-m) / atmost~ (n-m) for m up to the size bound,
//   9. the ABox,
//  10. a:C instances of member concepts,
//  11. equalities, inequalities and (negated) role assertions over used names,
// plus closure under individual-to-individual substitution, which the merge
// rules apply to whole labels.

namespace {

void subconcepts(const Concept& c, std::set<Concept>& out) {
    if (!out.insert(c).second) return;
    switch (c.kind()) {
        case ConceptKind::And:
        case ConceptKind::Or:
            subconcepts(c.lhs(), out);
            subconcepts(c.rhs(), out);
            return;
        case ConceptKind::Exists:
        case ConceptKind::Forall:
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
            subconcepts(c.sub(), out);
            return;
        default:
            return;
    }
}

}  // namespace

ClosureSet closure(const KnowledgeBase& kb) {
    SHOQ_CHECK(kb.validated);
    const std::size_t size_bound = kb.serialized_size();

    std::set<Concept> concepts;
    for (const Concept& c : kb.tbox) subconcepts(c, concepts);
    for (const Formula& f : kb.abox)
        if (f.has_concept()) subconcepts(f.concept_part(), concepts);

    for (const Role& r : kb.roles)
        for (const Individual& a : kb.individuals)
            concepts.insert(Concept::at_most(1, r, Concept::nominal(a)));

    // Substitution closure first on the seed, then maintained below.
    auto substitution_instances = [&](const Concept& c) {
        std::vector<Concept> out;
        for (const Individual& from : kb.individuals)
            for (const Individual& to : kb.individuals) {
                if (from == to) continue;
                out.push_back(substitute(c, {{from, to}}));
            }
        return out;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Concept> add;
        for (const Concept& c : concepts) {
            switch (c.kind()) {
                case ConceptKind::Forall:
                    for (const Role& r : kb.rbox.roles())
                        if (kb.rbox.subsumes(r, c.role()))
                            add.push_back(Concept::forall(r, c.sub()));
                    break;
                case ConceptKind::AtMost:
                    if (c.count() == 0)
                        add.push_back(Concept::forall(c.role(), negate_nnf(c.sub())));
                    for (std::uint32_t m = 0; m <= c.count() && m <= size_bound; ++m)
                        add.push_back(Concept::prec_eq(c.count() - m, c.role(), c.sub()));
                    break;
                case ConceptKind::AtLeast:
                    for (std::uint32_t m = 0; m < c.count() && m <= size_bound; ++m)
                        add.push_back(Concept::succ_eq(c.count() - m, c.role(), c.sub()));
                    break;
                case ConceptKind::Exists:
                    if (kb.is_numeric(c.role()))
                        add.push_back(Concept::succ_eq(1, c.role(), c.sub()));
                    break;
                default:
                    break;
            }
            if (!c.is_residual()) add.push_back(negate_nnf(c));
            for (Concept& inst : substitution_instances(c)) add.push_back(std::move(inst));
        }
        for (Concept& c : add) changed |= concepts.insert(std::move(c)).second;
    }

    FormulaSet out;
    for (const Concept& c : concepts) {
        out.insert(Formula::concept_only(c));
        for (const Individual& a : kb.individuals) out.insert(Formula::instance(a, c));
    }
    for (const Formula& f : kb.abox) out.insert(f);
    for (const Individual& a : kb.individuals)
        for (const Individual& b : kb.individuals) {
            out.insert(Formula::eq(a, b));
            out.insert(Formula::neq(a, b));
            for (const Role& r : kb.roles) {
                out.insert(Formula::role(r, a, b));
                out.insert(Formula::neg_role(r, a, b));
            }
        }
    return ClosureSet{std::move(out)};
}

}  // namespace shoq
