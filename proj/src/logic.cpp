#include "shoq/logic.hpp"

#include <algorithm>

namespace shoq {

// ── NNF ─────────────────────────────────────────────────────────────────────

bool is_nnf(const Concept& c) {
    switch (c.kind()) {
        case ConceptKind::Not:
            return false;
        case ConceptKind::And:
        case ConceptKind::Or:
            return is_nnf(c.lhs()) && is_nnf(c.rhs());
        case ConceptKind::Exists:
        case ConceptKind::Forall:
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
            return is_nnf(c.sub());
        default:
            return true;
    }
}

namespace {

Concept nnf_pos(const Concept& c);
Concept nnf_neg(const Concept& c);

Concept nnf_pos(const Concept& c) {
    switch (c.kind()) {
        case ConceptKind::Top:
        case ConceptKind::Bot:
        case ConceptKind::Atomic:
        case ConceptKind::NegAtomic:
        case ConceptKind::Nominal:
        case ConceptKind::NegNominal:
            return c;
        case ConceptKind::And:
            return Concept::conj(nnf_pos(c.lhs()), nnf_pos(c.rhs()));
        case ConceptKind::Or:
            return Concept::disj(nnf_pos(c.lhs()), nnf_pos(c.rhs()));
        case ConceptKind::Exists:
            return Concept::exists(c.role(), nnf_pos(c.sub()));
        case ConceptKind::Forall:
            return Concept::forall(c.role(), nnf_pos(c.sub()));
        case ConceptKind::AtLeast:
            return Concept::at_least(c.count(), c.role(), nnf_pos(c.sub()));
        case ConceptKind::AtMost:
            return Concept::at_most(c.count(), c.role(), nnf_pos(c.sub()));
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
            return c;  // residuals are already final
        case ConceptKind::Not:
            return nnf_neg(c.sub());
    }
    SHOQ_CHECK(false);
}

Concept nnf_neg(const Concept& c) {
    switch (c.kind()) {
        case ConceptKind::Top:
            return Concept::bot();
        case ConceptKind::Bot:
            return Concept::top();
        case ConceptKind::Atomic:
            return Concept::neg_atomic(c.name());
        case ConceptKind::NegAtomic:
            return Concept::atomic(c.name());
        case ConceptKind::Nominal:
            return Concept::neg_nominal(c.individual());
        case ConceptKind::NegNominal:
            return Concept::nominal(c.individual());
        case ConceptKind::And:
            return Concept::disj(nnf_neg(c.lhs()), nnf_neg(c.rhs()));
        case ConceptKind::Or:
            return Concept::conj(nnf_neg(c.lhs()), nnf_neg(c.rhs()));
        case ConceptKind::Exists:
            return Concept::forall(c.role(), nnf_neg(c.sub()));
        case ConceptKind::Forall:
            return Concept::exists(c.role(), nnf_neg(c.sub()));
        case ConceptKind::AtLeast:
            // ¬(≥n s.C) keeps C positive: fewer than n s-successors in C.
            if (c.count() == 0) return Concept::bot();
            return Concept::at_most(c.count() - 1, c.role(), nnf_pos(c.sub()));
        case ConceptKind::AtMost:
            return Concept::at_least(c.count() + 1, c.role(), nnf_pos(c.sub()));
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
            throw ValidationError("residual number restrictions have no defined negation");
        case ConceptKind::Not:
            return nnf_pos(c.sub());
    }
    SHOQ_CHECK(false);
}

}  // namespace

Concept nnf(const Concept& c) { return nnf_pos(c); }

Concept negate_nnf(const Concept& c) {
    if (c.is_residual())
        throw ValidationError("residual number restrictions have no defined negation");
    SHOQ_CHECK(is_nnf(c));
    return nnf_neg(c);
}

Formula negate_formula(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::ConceptOnly:
            return Formula::concept_only(negate_nnf(f.concept_part()));
        case FormulaKind::Instance:
            return Formula::instance(f.subject(), negate_nnf(f.concept_part()));
        default:
            throw ValidationError("negation is defined only for concept formulas");
    }
}

bool has_clash_complement(const Formula& f) {
    if (!f.has_concept()) return true;
    return !f.concept_part().is_residual();
}

Formula clash_complement(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::ConceptOnly:
        case FormulaKind::Instance:
            return negate_formula(f);
        case FormulaKind::RoleAssertion:
            return Formula::neg_role(f.role_part(), f.first(), f.second());
        case FormulaKind::NegRoleAssertion:
            return Formula::role(f.role_part(), f.first(), f.second());
        case FormulaKind::Eq:
            return Formula::neq(f.first(), f.second());
        case FormulaKind::NotEq:
            return Formula::eq(f.first(), f.second());
    }
    SHOQ_CHECK(false);
}

// ── Substitution ────────────────────────────────────────────────────────────

namespace {
Individual apply_repl(const Individual& a, const std::map<Individual, Individual>& repl) {
    auto it = repl.find(a);
    return it == repl.end() ? a : it->second;
}
}  // namespace

Concept substitute(const Concept& c, const std::map<Individual, Individual>& repl) {
    switch (c.kind()) {
        case ConceptKind::Nominal:
            return Concept::nominal(apply_repl(c.individual(), repl));
        case ConceptKind::NegNominal:
            return Concept::neg_nominal(apply_repl(c.individual(), repl));
        case ConceptKind::And:
            return Concept::conj(substitute(c.lhs(), repl), substitute(c.rhs(), repl));
        case ConceptKind::Or:
            return Concept::disj(substitute(c.lhs(), repl), substitute(c.rhs(), repl));
        case ConceptKind::Exists:
            return Concept::exists(c.role(), substitute(c.sub(), repl));
        case ConceptKind::Forall:
            return Concept::forall(c.role(), substitute(c.sub(), repl));
        case ConceptKind::AtLeast:
            return Concept::at_least(c.count(), c.role(), substitute(c.sub(), repl));
        case ConceptKind::AtMost:
            return Concept::at_most(c.count(), c.role(), substitute(c.sub(), repl));
        case ConceptKind::PrecEq:
            return Concept::prec_eq(c.count(), c.role(), substitute(c.sub(), repl));
        case ConceptKind::SuccEq:
            return Concept::succ_eq(c.count(), c.role(), substitute(c.sub(), repl));
        case ConceptKind::Not:
            return Concept::negation(substitute(c.sub(), repl));
        default:
            return c;
    }
}

Formula substitute(const Formula& f, const std::map<Individual, Individual>& repl) {
    switch (f.kind()) {
        case FormulaKind::ConceptOnly:
            return Formula::concept_only(substitute(f.concept_part(), repl));
        case FormulaKind::Instance:
            return Formula::instance(apply_repl(f.subject(), repl),
                                     substitute(f.concept_part(), repl));
        case FormulaKind::RoleAssertion:
            return Formula::role(f.role_part(), apply_repl(f.first(), repl),
                                 apply_repl(f.second(), repl));
        case FormulaKind::NegRoleAssertion:
            return Formula::neg_role(f.role_part(), apply_repl(f.first(), repl),
                                     apply_repl(f.second(), repl));
        case FormulaKind::Eq:
            return Formula::eq(apply_repl(f.first(), repl), apply_repl(f.second(), repl));
        case FormulaKind::NotEq:
            return Formula::neq(apply_repl(f.first(), repl), apply_repl(f.second(), repl));
    }
    SHOQ_CHECK(false);
}

Formula merge_substitute(const Formula& f, const Individual& from, const Individual& to) {
    if (f.kind() == FormulaKind::Eq) return f;  // merge records stay intact
    std::map<Individual, Individual> repl{{from, to}};
    return substitute(f, repl);
}

// ── Positive occurrence at modal depth 0 ───────────────────────────────────

namespace {
bool occurs_pos0_in(const Concept& phi, const Concept& psi) {
    if (psi == phi) return true;
    switch (psi.kind()) {
        case ConceptKind::And:
        case ConceptKind::Or:
            return occurs_pos0_in(phi, psi.lhs()) || occurs_pos0_in(phi, psi.rhs());
        default:
            return false;  // scopes of ¬, ∃, ∀ and number restrictions are cut off
    }
}
}  // namespace

bool occurs_positively_depth0(const Concept& phi, const std::vector<Concept>& X) {
    for (const Concept& psi : X) {
        if (occurs_pos0_in(phi, psi)) return true;
    }
    return false;
}

// ── Relevance of ≤1 r.{a} ──────────────────────────────────────────────────

namespace {

// All concepts reachable through top-level ⊓/⊔ from the members of X, i.e.
// the concepts that occur positively at modal depth 0.
void depth0_positive(const Concept& c, std::vector<Concept>& out) {
    out.push_back(c);
    if (c.kind() == ConceptKind::And || c.kind() == ConceptKind::Or) {
        depth0_positive(c.lhs(), out);
        depth0_positive(c.rhs(), out);
    }
}

struct Frontier {  // one ∃s.C / ≥1 s.C / ≥m s.C (m ≥ 2) concept at depth 0
    Concept source;
    Role role;
    Concept filler;
    bool plural;  // came from ≥m with m ≥ 2
};

}  // namespace

std::vector<Concept> relevant_atmost_one(const std::vector<Concept>& tbox,
                                         const std::vector<Concept>& X,
                                         const RBoxClosure& rbox) {
    std::vector<Concept> pos_x;
    for (const Concept& c : X) depth0_positive(c, pos_x);
    std::vector<Concept> pos_t;
    for (const Concept& c : tbox) depth0_positive(c, pos_t);

    std::vector<Frontier> frontier;
    for (const Concept& c : pos_x) {
        if (c.kind() == ConceptKind::AtLeast && c.count() >= 2)
            frontier.push_back({c, c.role(), c.sub(), true});
        else if (c.kind() == ConceptKind::Exists)
            frontier.push_back({c, c.role(), c.sub(), false});
        else if (c.kind() == ConceptKind::AtLeast && c.count() == 1)
            frontier.push_back({c, c.role(), c.sub(), false});
    }
    std::sort(frontier.begin(), frontier.end(),
              [](const Frontier& a, const Frontier& b) { return a.source < b.source; });
    frontier.erase(std::unique(frontier.begin(), frontier.end(),
                               [](const Frontier& a, const Frontier& b) {
                                   return a.source == b.source;
                               }),
                   frontier.end());

    // Candidate universes: roles and individuals occurring in T, X, R.
    std::set<Role> roles = rbox.roles();
    std::set<Individual> inds;
    for (const Concept& c : X) {
        collect_roles(c, roles);
        collect_individuals(c, inds);
    }
    for (const Concept& c : tbox) {
        collect_roles(c, roles);
        collect_individuals(c, inds);
    }

    // For a candidate role r, the pairs (s1,C1),(s2,C2) licensed by the first
    // condition group.
    auto licensed_pairs = [&](const Role& r) {
        std::vector<std::pair<Frontier, Frontier>> pairs;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            if (!rbox.subsumes(frontier[i].role, r)) continue;
            if (frontier[i].plural) pairs.push_back({frontier[i], frontier[i]});
            for (std::size_t j = i + 1; j < frontier.size(); ++j) {
                if (frontier[i].plural || frontier[j].plural) continue;
                if (!rbox.subsumes(frontier[j].role, r)) continue;
                pairs.push_back({frontier[i], frontier[j]});
            }
        }
        return pairs;
    };

    // The guarded-universal and guarded-number-restriction clauses scan the
    // label as well as the TBox: a successor label collects fillers from
    // both, and each route that can plant the nominal there needs the guard.
    std::vector<Concept> pos_tx = pos_t;
    pos_tx.insert(pos_tx.end(), pos_x.begin(), pos_x.end());
    auto nominal_clause = [&](const Individual& a, const Frontier& f1, const Frontier& f2) {
        Concept nom = Concept::nominal(a);
        Concept neg_nom = Concept::neg_nominal(a);
        if (occurs_positively_depth0(nom, pos_t) ||
            occurs_positively_depth0(nom, {f1.filler}) ||
            occurs_positively_depth0(nom, {f2.filler}))
            return true;
        for (const Concept& t : pos_tx) {
            if (t.kind() == ConceptKind::Forall && rbox.subsumes(f1.role, t.role()) &&
                rbox.subsumes(f2.role, t.role()) &&
                occurs_positively_depth0(nom, {t.sub()}))
                return true;
            if (t.kind() == ConceptKind::AtMost && rbox.subsumes(f1.role, t.role()) &&
                rbox.subsumes(f2.role, t.role()) &&
                (occurs_positively_depth0(nom, {t.sub()}) ||
                 occurs_positively_depth0(neg_nom, {t.sub()})))
                return true;
        }
        return false;
    };

    std::vector<Concept> out;
    for (const Role& r : roles) {
        auto pairs = licensed_pairs(r);
        if (pairs.empty()) continue;
        for (const Individual& a : inds) {
            bool hit = false;
            for (const auto& [f1, f2] : pairs) {
                if (nominal_clause(a, f1, f2)) {
                    hit = true;
                    break;
                }
            }
            if (hit) out.push_back(Concept::at_most(1, r, Concept::nominal(a)));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Formula> assertion_relevant_atmost_one(const std::vector<Concept>& tbox,
                                                   const FormulaSet& X, const Individual& a,
                                                   const RBoxClosure& rbox) {
    std::vector<Concept> projected;
    for (const Formula& f : X) {
        if (f.kind() == FormulaKind::Instance && f.subject() == a)
            projected.push_back(f.concept_part());
    }
    std::vector<Formula> out;
    for (const Concept& c : relevant_atmost_one(tbox, projected, rbox))
        out.push_back(Formula::instance(a, c));
    return out;
}

}  // namespace shoq
