#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "shoq/kb.hpp"
#include "shoq/logic.hpp"

using namespace shoq;

namespace {
std::string data_file(const std::string& name) {
    return std::string(SHOQ_TEST_DATA) + "/" + name;
}
}  // namespace

TEST_CASE("parse basic assertions") {
    KnowledgeBase kb = load_kb("abox a : (A and B)\n");
    REQUIRE(kb.abox.size() == 1);
    CHECK(*kb.abox.begin() ==
          Formula::instance(Individual{"a"},
                            Concept::conj(Concept::atomic("A"), Concept::atomic("B"))));
}

TEST_CASE("rbox closure from declarations") {
    KnowledgeBase kb = load_kb("rbox r sub s\nrbox trans s\nabox a : top\n");
    CHECK(kb.rbox.subsumes(Role{"r"}, Role{"s"}));
    CHECK(kb.rbox.subsumes(Role{"r"}, Role{"r"}));
    CHECK(kb.rbox.subsumes(Role{"s"}, Role{"s"}));
    CHECK(kb.rbox.is_transitive(Role{"s"}));
    CHECK_FALSE(kb.rbox.is_transitive(Role{"r"}));
}

TEST_CASE("build_rbox_closure is transitive, reflexive, idempotent") {
    std::vector<RBoxAxiom> axioms = {{RBoxAxiom::Kind::Sub, Role{"r"}, Role{"s"}},
                                     {RBoxAxiom::Kind::Sub, Role{"s"}, Role{"t"}}};
    RBoxClosure c = RBoxClosure::build(axioms, {Role{"r"}, Role{"s"}, Role{"t"}});
    CHECK(c.subsumes(Role{"r"}, Role{"t"}));
    CHECK(c.subsumes(Role{"r"}, Role{"r"}));
    // closing again adds nothing
    std::vector<RBoxAxiom> again;
    for (const auto& [lo, hi] : c.sub_pairs())
        again.push_back({RBoxAxiom::Kind::Sub, lo, hi});
    RBoxClosure c2 = RBoxClosure::build(again, c.roles());
    CHECK(c2.sub_pairs() == c.sub_pairs());

    RBoxClosure empty = RBoxClosure::build({}, {Role{"r"}});
    CHECK(empty.subsumes(Role{"r"}, Role{"r"}));
    RBoxClosure tr = RBoxClosure::build({{RBoxAxiom::Kind::Trans, Role{"t"}, Role{"t"}},
                                         {RBoxAxiom::Kind::Sub, Role{"r"}, Role{"t"}}},
                                        {});
    CHECK(tr.is_transitive(Role{"t"}));
    CHECK_FALSE(tr.is_transitive(Role{"r"}));
}

TEST_CASE("is_simple") {
    RBoxClosure c = RBoxClosure::build({{RBoxAxiom::Kind::Trans, Role{"t"}, Role{"t"}},
                                        {RBoxAxiom::Kind::Sub, Role{"r"}, Role{"t"}}},
                                       {});
    CHECK(c.is_simple(Role{"r"}));
    CHECK_FALSE(c.is_simple(Role{"t"}));
    RBoxClosure none = RBoxClosure::build({}, {Role{"r"}});
    CHECK(none.is_simple(Role{"r"}));
    RBoxClosure below = RBoxClosure::build({{RBoxAxiom::Kind::Trans, Role{"s"}, Role{"s"}},
                                            {RBoxAxiom::Kind::Sub, Role{"s"}, Role{"r"}}},
                                           {});
    CHECK_FALSE(below.is_simple(Role{"r"}));  // transitive subrole
}

TEST_CASE("is_numeric") {
    SUBCASE("example 1's role") {
        KnowledgeBase kb = load_kb_file(data_file("example1.kb"));
        CHECK(kb.is_numeric(Role{"r"}));
    }
    SUBCASE("no number restrictions") {
        KnowledgeBase kb = load_kb("abox a : some r only r A\n");
        CHECK_FALSE(kb.is_numeric(Role{"r"}));
    }
    SUBCASE("downward closure over subroles") {
        KnowledgeBase kb = load_kb("rbox s sub r\nabox a : atleast 2 r A\n");
        CHECK(kb.is_numeric(Role{"s"}));
        CHECK(kb.is_numeric(Role{"r"}));
    }
    SUBCASE("numeric implies simple") {
        for (const char* file : {"example1.kb", "trans_roles.kb", "numeric_sat.kb"}) {
            KnowledgeBase kb = load_kb_file(data_file(file));
            for (const Role& role : kb.roles)
                if (kb.is_numeric(role)) CHECK(kb.rbox.is_simple(role));
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(load_kb("rbox trans r\nabox a : atleast 1 r A\n"), ValidationError);
    CHECK_NOTHROW(load_kb("rbox trans t\nrbox r sub t\nabox a : atmost 2 r A\n"));
    KnowledgeBase kb = load_kb("tbox A sub B\n");
    // empty ABox gets the aux:top augmentation
    REQUIRE(kb.abox.size() == 1);
    CHECK(*kb.abox.begin() == Formula::instance(Individual{"aux"}, Concept::top()));
}

TEST_CASE("tbox encoding") {
    KnowledgeBase kb = load_kb("tbox A sub B\nabox a : top\n");
    REQUIRE(kb.tbox.size() == 1);
    CHECK(kb.tbox[0] == Concept::disj(Concept::neg_atomic("A"), Concept::atomic("B")));
    KnowledgeBase eq = load_kb("tbox A equiv B\nabox a : top\n");
    REQUIRE(eq.tbox.size() == 1);
    CHECK(eq.tbox[0].kind() == ConceptKind::And);
}

TEST_CASE("example 1 parses to eight assertions") {
    KnowledgeBase kb = load_kb_file(data_file("example1.kb"));
    CHECK(kb.abox.size() == 8);
    CHECK(kb.individuals == std::vector<Individual>{{"a"}, {"b"}});
}

TEST_CASE("negated nominal assertions are kept in NNF") {
    KnowledgeBase kb = load_kb("abox a : not one b\n");
    REQUIRE(kb.abox.size() == 1);
    CHECK(*kb.abox.begin() ==
          Formula::instance(Individual{"a"}, Concept::neg_nominal(Individual{"b"})));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(load_kb("abox a :\n"), ParseError);
    CHECK_THROWS_AS(load_kb("abox a : (A and)\n"), ParseError);
    CHECK_THROWS_AS(load_kb("tbox A\n"), ParseError);
    CHECK_THROWS_AS(load_kb("abox a : atleast 99999999999999 r A\n"), ParseError);
    CHECK_THROWS_AS(load_kb("abox top : A\n"), ParseError);
    try {
        load_kb("abox a : (A and B\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.col > 0);
    }
}

TEST_CASE("duplicate declarations are idempotent") {
    KnowledgeBase kb = load_kb("rbox r sub s\nrbox r sub s\nrbox trans s\nrbox trans s\nabox a : top\n");
    CHECK(kb.rbox_axioms.size() == 2);
}

TEST_CASE("pretty-print round trip") {
    for (const char* file : {"example1.kb", "example2.kb", "trans_roles.kb", "tbox_simple.kb",
                             "nominal_merge.kb", "numeric_clash.kb"}) {
        KnowledgeBase kb = load_kb_file(data_file(file));
        KnowledgeBase again = load_kb(pretty_print(kb));
        CHECK(again.abox == kb.abox);
        CHECK(again.tbox == kb.tbox);
        CHECK(again.rbox_axioms == kb.rbox_axioms);
        CHECK(again.rbox.sub_pairs() == kb.rbox.sub_pairs());
        // printing the reparse reproduces the text exactly
        CHECK(pretty_print(again) == pretty_print(kb));
    }
}

// ── Closure ─────────────────────────────────────────────────────────────────

namespace {

// Direct check of each closure property on the computed set.
void check_closure_properties(const KnowledgeBase& kb, const ClosureSet& clo) {
    const FormulaSet& g = clo.formulas;
    std::size_t bound = kb.serialized_size();
    for (const Formula& f : kb.abox) CHECK(g.contains(f));  // ABox membership
    for (const Concept& c : kb.tbox) CHECK(g.contains(Formula::concept_only(c)));
    for (const Role& role : kb.roles)
        for (const Individual& a : kb.individuals)
            CHECK(g.contains(Formula::concept_only(
                Concept::at_most(1, role, Concept::nominal(a)))));
    for (const Formula& f : g) {
        if (f.kind() != FormulaKind::ConceptOnly) continue;
        const Concept& c = f.concept_part();
        if (!c.is_residual()) CHECK(g.contains(Formula::concept_only(negate_nnf(c))));
        for (const Individual& a : kb.individuals)
            CHECK(g.contains(Formula::instance(a, c)));
        if (c.kind() == ConceptKind::Forall)
            for (const Role& role : kb.rbox.roles())
                if (kb.rbox.subsumes(role, c.role()))
                    CHECK(g.contains(Formula::concept_only(Concept::forall(role, c.sub()))));
        if (c.kind() == ConceptKind::AtMost && c.count() == 0)
            CHECK(g.contains(
                Formula::concept_only(Concept::forall(c.role(), negate_nnf(c.sub())))));
        if (c.kind() == ConceptKind::Exists && kb.is_numeric(c.role()))
            CHECK(g.contains(Formula::concept_only(Concept::succ_eq(1, c.role(), c.sub()))));
        if (c.kind() == ConceptKind::AtLeast)
            for (std::uint32_t m = 0; m < c.count() && m <= bound; ++m)
                CHECK(g.contains(
                    Formula::concept_only(Concept::succ_eq(c.count() - m, c.role(), c.sub()))));
        if (c.kind() == ConceptKind::AtMost)
            for (std::uint32_t m = 0; m <= c.count() && m <= bound; ++m)
                CHECK(g.contains(
                    Formula::concept_only(Concept::prec_eq(c.count() - m, c.role(), c.sub()))));
    }
    for (const Individual& a : kb.individuals)
        for (const Individual& b : kb.individuals) {
            CHECK(g.contains(Formula::eq(a, b)));
            CHECK(g.contains(Formula::neq(a, b)));
            for (const Role& role : kb.roles) {
                CHECK(g.contains(Formula::role(role, a, b)));
                CHECK(g.contains(Formula::neg_role(role, a, b)));
            }
        }
}

}  // namespace

TEST_CASE("closure basics") {
    KnowledgeBase kb = load_kb("abox a : A\n");
    ClosureSet clo = closure(kb);
    Individual a{"a"};
    CHECK(clo.contains(Formula::concept_only(Concept::atomic("A"))));
    CHECK(clo.contains(Formula::concept_only(Concept::neg_atomic("A"))));
    CHECK(clo.contains(Formula::instance(a, Concept::atomic("A"))));
    CHECK(clo.contains(Formula::instance(a, Concept::neg_atomic("A"))));
    CHECK(clo.contains(Formula::eq(a, a)));
    CHECK(clo.contains(Formula::neq(a, a)));
}

TEST_CASE("closure contains subrole instances of universals") {
    KnowledgeBase kb = load_kb("rbox r sub s\nabox a : only s C\n");
    ClosureSet clo = closure(kb);
    CHECK(clo.contains(
        Formula::concept_only(Concept::forall(Role{"r"}, Concept::atomic("C")))));
}

TEST_CASE("closure properties and size bound on the corpus") {
    for (const char* file :
         {"example1.kb", "example2.kb", "trans_roles.kb", "nominal_merge.kb", "numeric_clash.kb",
          "tbox_simple.kb", "empty_abox.kb", "exists_chain.kb", "numeric_sat.kb",
          "numeric_unsat.kb", "nominal_cycle.kb", "merge_or_distinguish.kb"}) {
        CAPTURE(file);
        KnowledgeBase kb = load_kb_file(data_file(file));
        ClosureSet clo = closure(kb);
        check_closure_properties(kb, clo);
        std::size_t n = kb.serialized_size();
        CHECK(clo.size() <= 1 * n * n * n);
    }
}

TEST_CASE("comments and blank lines are ignored") {
    KnowledgeBase kb = load_kb("# header\n\nabox a : A # trailing\n");
    CHECK(kb.abox.size() == 1);
}
