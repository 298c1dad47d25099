#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "shoq/engine.hpp"
#include "shoq/model.hpp"

using namespace shoq;

namespace {

std::string data_file(const std::string& name) {
    return std::string(SHOQ_TEST_DATA) + "/" + name;
}

struct Run {
    RunResult result;
    std::string trace;
    std::size_t nodes;
    EngineStats stats;
};

Run run_kb(const KnowledgeBase& kb, long max_steps = 100000) {
    std::ostringstream trace;
    EngineConfig cfg;
    cfg.trace = true;
    cfg.trace_out = &trace;
    cfg.max_steps = max_steps;
    Engine engine(kb, cfg);
    RunResult r = engine.run();

    // Structural invariants hold after every run.
    ClosureSet clo = closure(kb);
    std::vector<std::string> bad = engine.graph().check_invariants(&clo);
    for (const std::string& b : bad) FAIL_CHECK(b);

    return {r, trace.str(), engine.graph().node_count(), engine.stats()};
}

Run run_file(const std::string& name, long max_steps = 100000) {
    return run_kb(load_kb_file(data_file(name)), max_steps);
}

bool has_line_part(const std::string& trace, const std::string& part) {
    return trace.find(part) != std::string::npos;
}

}  // namespace

// ── Individual rules ────────────────────────────────────────────────────────

TEST_CASE("UPS1 clause by clause") {
    SUBCASE("clash pair closes") {
        KnowledgeBase kb = load_kb("abox b : B\nabox b : not B\n");
        Engine e(kb);
        CHECK(e.rule_ups1(e.graph().root()));
        CHECK(e.graph().node(e.graph().root()).status.is(StatusKind::Closed));
    }
    SUBCASE("a != a closes") {
        KnowledgeBase kb = load_kb("abox a : A\nabox a != a\n");
        Engine e(kb);
        CHECK(e.rule_ups1(e.graph().root()));
        CHECK(e.graph().node(e.graph().root()).status.is(StatusKind::Closed));
    }
    SUBCASE("counting clash with n = 0") {
        KnowledgeBase kb = load_kb("abox a : atmost 0 s C1\nabox s(a, b0)\nabox b0 : C1\n");
        Engine e(kb);
        CHECK(e.rule_ups1(e.graph().root()));
        CHECK(e.graph().node(e.graph().root()).status.is(StatusKind::Closed));
    }
    SUBCASE("counting clash needs the inequalities") {
        KnowledgeBase kb = load_kb(
            "abox a : atmost 1 s C1\nabox s(a, b)\nabox s(a, c)\nabox b : C1\nabox c : C1\n");
        Engine e(kb);
        CHECK_FALSE(e.rule_ups1(e.graph().root()));  // no b != c recorded
    }
    SUBCASE("successorless f-expanded state becomes open") {
        KnowledgeBase kb = load_kb("abox a : A\n");
        Engine e(kb);
        TableauGraph& g = e.graph_mut();
        g.node_mut(g.root()).type = NodeType::State;
        g.set_status(g.root(), Status{StatusKind::FExpanded, {}});
        CHECK(e.rule_ups1(g.root()));
        CHECK(g.node(g.root()).status.is(StatusKind::Open));
    }
}

TEST_CASE("US1 saturates labels") {
    SUBCASE("universal propagation over a role assertion") {
        KnowledgeBase kb = load_kb("abox a : only r B\nabox r(a, b)\n");
        Engine e(kb);
        REQUIRE(e.rule_us1(e.graph().root()));
        const TableauGraph& g = e.graph();
        REQUIRE(g.node_count() == 2);
        const TableauNode& w = g.node(1);
        CHECK(w.label.contains(Formula::instance(Individual{"b"}, Concept::atomic("B"))));
        CHECK(w.label.size() == g.node(0).label.size() + 1);
        CHECK(g.node(0).status.is(StatusKind::FExpanded));
    }
    SUBCASE("conjunctions split and move to RFmls") {
        KnowledgeBase kb = load_kb("abox a : (A and B)\n");
        Engine e(kb);
        REQUIRE(e.rule_us1(e.graph().root()));
        const TableauNode& w = e.graph().node(1);
        Individual a{"a"};
        CHECK(w.label.contains(Formula::instance(a, Concept::atomic("A"))));
        CHECK(w.label.contains(Formula::instance(a, Concept::atomic("B"))));
        CHECK_FALSE(w.label.contains(
            Formula::instance(a, Concept::conj(Concept::atomic("A"), Concept::atomic("B")))));
        CHECK(w.rfmls.contains(
            Formula::instance(a, Concept::conj(Concept::atomic("A"), Concept::atomic("B")))));
    }
    SUBCASE("subrole closure and pushdown") {
        KnowledgeBase kb = load_kb("rbox r sub s\nabox a : only s C1\nabox r(a, b)\n");
        Engine e(kb);
        REQUIRE(e.rule_us1(e.graph().root()));
        const TableauNode& w = e.graph().node(1);
        Individual a{"a"}, b{"b"};
        CHECK(w.label.contains(Formula::role(Role{"s"}, a, b)));
        CHECK(w.label.contains(
            Formula::instance(a, Concept::forall(Role{"r"}, Concept::atomic("C1")))));
    }
    SUBCASE("negated nominal yields an inequality") {
        KnowledgeBase kb = load_kb("abox a : not one b\nabox a : A\n");
        Engine e(kb);
        REQUIRE(e.rule_us1(e.graph().root()));
        const TableauNode& w = e.graph().node(1);
        CHECK(w.label.contains(Formula::neq(Individual{"a"}, Individual{"b"})));
        CHECK_FALSE(w.label.contains(
            Formula::instance(Individual{"a"}, Concept::neg_nominal(Individual{"b"}))));
    }
    SUBCASE("atmost 0 rewrites to a universal") {
        KnowledgeBase kb = load_kb("abox a : atmost 0 s C1\n");
        Engine e(kb);
        REQUIRE(e.rule_us1(e.graph().root()));
        const TableauNode& w = e.graph().node(1);
        CHECK(w.label.contains(Formula::instance(
            Individual{"a"}, Concept::forall(Role{"s"}, Concept::neg_atomic("C1")))));
    }
}

TEST_CASE("US2 merges the nominal's individual") {
    KnowledgeBase kb = load_kb("abox a : one b\nabox b : A\n");
    Engine e(kb);
    REQUIRE(e.rule_us2(e.graph().root()));
    const TableauNode& w = e.graph().node(1);
    Individual a{"a"}, b{"b"};
    CHECK(w.label.contains(Formula::instance(a, Concept::atomic("A"))));
    CHECK(w.label.contains(Formula::eq(a, b)));
    CHECK(w.label.contains(Formula::eq(b, a)));
    CHECK(w.rfmls.contains(Formula::instance(a, Concept::nominal(a))));
    CHECK(w.ind_repl.at(b) == a);
    CHECK(e.graph().node(0).status.is(StatusKind::FExpanded));
}

TEST_CASE("US3 adds relevant guards") {
    KnowledgeBase kb = load_kb("abox a : atleast 2 r one b\n");
    Engine e(kb);
    REQUIRE(e.rule_us3(e.graph().root()));
    const TableauNode& w = e.graph().node(1);
    CHECK(w.label.contains(Formula::instance(
        Individual{"a"}, Concept::at_most(1, Role{"r"}, Concept::nominal(Individual{"b"})))));
    CHECK(e.graph().node(0).status.is(StatusKind::FExpanded));

    KnowledgeBase plain = load_kb("abox a : A\n");
    Engine e2(plain);
    CHECK_FALSE(e2.rule_us3(e2.graph().root()));
}

TEST_CASE("NUS or-split") {
    KnowledgeBase kb = load_kb("abox a : (A or B)\n");
    Engine e(kb);
    REQUIRE(e.rule_nus(e.graph().root()));
    REQUIRE(e.graph().node_count() == 3);
    Individual a{"a"};
    Concept disj = Concept::disj(Concept::atomic("A"), Concept::atomic("B"));
    for (NodeId w : {1, 2}) {
        CHECK_FALSE(e.graph().node(w).label.contains(Formula::instance(a, disj)));
        CHECK(e.graph().node(w).rfmls.contains(Formula::instance(a, disj)));
    }
    CHECK(e.graph().node(1).label.contains(Formula::instance(a, Concept::atomic("A"))));
    CHECK(e.graph().node(2).label.contains(Formula::instance(a, Concept::atomic("B"))));
}

TEST_CASE("NUS semantic branching on a successor's membership") {
    KnowledgeBase kb = load_kb("abox a : atmost 2 s C1\nabox s(a, b)\n");
    Engine e(kb);
    REQUIRE(e.rule_nus(e.graph().root()));
    REQUIRE(e.graph().node_count() == 3);
    Individual b{"b"};
    CHECK(e.graph().node(1).label.contains(Formula::instance(b, Concept::atomic("C1"))));
    CHECK(e.graph().node(2).label.contains(Formula::instance(b, Concept::neg_atomic("C1"))));
}

TEST_CASE("NUS merge-or-distinguish") {
    KnowledgeBase kb = load_kb(
        "abox a : atmost 1 s C1\nabox s(a, b)\nabox s(a, c)\nabox b : C1\nabox c : C1\n");
    Engine e(kb);
    // subrules 1 and 2 do not apply: no disjunction, both memberships known
    REQUIRE(e.rule_nus(e.graph().root()));
    REQUIRE(e.graph().node_count() == 3);
    Individual b{"b"}, c{"c"};
    // b is first-occurrence smaller: branch 1 distinguishes, branch 2 merges
    CHECK(e.graph().node(1).label.contains(Formula::neq(b, c)));
    CHECK(e.graph().node(1).label.contains(Formula::neq(c, b)));
    CHECK(e.graph().node(2).label.contains(Formula::eq(b, c)));
    CHECK(e.graph().node(2).ind_repl.at(c) == b);
    CHECK_FALSE(e.graph().node(2).label.contains(Formula::role(Role{"s"}, Individual{"a"}, c)));
}

TEST_CASE("NUS role-membership branching") {
    KnowledgeBase kb = load_kb(
        "rbox s sub r\nabox a : atmost 1 r C1\nabox r(a, b)\nabox a : atleast 1 s C1\n"
        "abox b : C1\n");
    Engine e(kb);
    REQUIRE(e.rule_nus(e.graph().root()));
    REQUIRE(e.graph().node_count() == 3);
    Individual a{"a"}, b{"b"};
    CHECK(e.graph().node(1).label.contains(Formula::role(Role{"s"}, a, b)));
    CHECK(e.graph().node(2).label.contains(Formula::neg_role(Role{"s"}, a, b)));
}

TEST_CASE("FS residual computation honors named witnesses") {
    KnowledgeBase kb = load_kb(
        "abox a : atleast 3 s D\nabox s(a, b)\nabox b : D\nabox a : atmost 3 s D\n");
    Engine e(kb);
    REQUIRE(e.rule_fs(e.graph().root()));
    const TableauNode& w = e.graph().node(1);
    REQUIRE(w.is_state());
    Individual a{"a"};
    Role s{"s"};
    Concept d = Concept::atomic("D");
    CHECK(w.label.contains(Formula::instance(a, Concept::succ_eq(2, s, d))));
    CHECK(w.label.contains(Formula::instance(a, Concept::prec_eq(2, s, d))));

    // all atleast requirements witnessed: no residual
    KnowledgeBase done = load_kb("abox a : atleast 1 s D\nabox s(a, b)\nabox b : D\n");
    Engine e2(done);
    REQUIRE(e2.rule_fs(e2.graph().root()));
    const TableauNode& w2 = e2.graph().node(1);
    for (const Formula& f : w2.label)
        if (f.has_concept()) CHECK_FALSE(f.concept_part().is_residual());
}

// ── Example 1 ───────────────────────────────────────────────────────────────

TEST_CASE("example 1 is UNSAT with the reference milestones") {
    Run r = run_file("example1.kb");
    CHECK(r.result == RunResult::Unsat);

    // the clash closure of v3
    CHECK(has_line_part(r.trace, "UPS1 v3 | closed"));
    // the state v4 with its three residual assertions
    CHECK(has_line_part(r.trace,
                        "FS v2 -> v4[new] | residuals {a : atleast~ 1 r some r (A or one a), "
                        "a : atleast~ 2 r only r not A, a : atmost~ 2 r B}"));
    // the three-successor full expansion and its constraint system
    CHECK(has_line_part(r.trace, "TF v4 -> v5[new] v6[new] v7[new]"));
    CHECK(has_line_part(r.trace, "x(v5) + x(v7) >= 1"));
    CHECK(has_line_part(r.trace, "x(v6) + x(v7) >= 2"));
    CHECK(has_line_part(r.trace, "x(v5) + x(v6) + x(v7) <= 2"));
    // the infeasibility cascade: closed-wrt({v4}) first, then closed
    CHECK(has_line_part(r.trace, "UPS2 v13 | closed-wrt({v4})"));
    CHECK(has_line_part(r.trace, "UPS3 v7 | closed-wrt({v4})"));
    CHECK(has_line_part(r.trace, "UPS3 v4 | closed-wrt({v4})"));
    CHECK(has_line_part(r.trace, "UPS1 v4 | closed"));
    CHECK(has_line_part(r.trace, "result UNSAT"));
}

// ── Example 2 ───────────────────────────────────────────────────────────────

TEST_CASE("example 2 is SAT with the reference milestones") {
    KnowledgeBase kb = load_kb_file(data_file("example2.kb"));
    Run r = run_kb(kb);
    CHECK(r.result == RunResult::Sat);

    // the nominal rule re-expands v2 into the two branches a:not A / a:A
    CHECK(has_line_part(r.trace, "DN v13 wrt v4 | delete (v2,v4) | v2 -> v14[new]+{a : not A} "
                                 "v15[new]+{a : A}"));
    CHECK(has_line_part(r.trace, "DN v13 | blocked"));
    // the re-expanded branch reuses the cached simple states
    CHECK(has_line_part(r.trace, "TF v16 -> v5[cached] v6[cached] v7[cached]"));
    // the a:A branch closes
    CHECK(has_line_part(r.trace, "UPS2 v13 | closed-wrt({v17})"));
    CHECK(has_line_part(r.trace, "UPS3 v17 | closed-wrt({v17})"));
    CHECK(has_line_part(r.trace, "UPS1 v17 | closed"));
    CHECK(has_line_part(r.trace, "UPS3 v15 | closed"));
    CHECK(has_line_part(r.trace, "result SAT"));
}

// ── Corpus end-to-end ───────────────────────────────────────────────────────

TEST_CASE("corpus verdicts") {
    struct Expect {
        const char* file;
        RunResult result;
    };
    const Expect expectations[] = {
        {"example1.kb", RunResult::Unsat},   {"example2.kb", RunResult::Sat},
        {"trans_roles.kb", RunResult::Sat},  {"nominal_merge.kb", RunResult::Sat},
        {"numeric_clash.kb", RunResult::Unsat}, {"merge_or_distinguish.kb", RunResult::Sat},
        {"tbox_simple.kb", RunResult::Sat},  {"empty_abox.kb", RunResult::Sat},
        {"exists_chain.kb", RunResult::Sat}, {"numeric_sat.kb", RunResult::Sat},
        {"numeric_unsat.kb", RunResult::Unsat}, {"nominal_cycle.kb", RunResult::Sat},
    };
    for (const Expect& e : expectations) {
        CAPTURE(e.file);
        Run r = run_file(e.file);
        CHECK(r.result == e.result);
    }
}

TEST_CASE("trivial verdicts") {
    CHECK(run_kb(load_kb("abox a : top\n")).result == RunResult::Sat);
    CHECK(run_kb(load_kb("abox a : (A and not A)\n")).result == RunResult::Unsat);
    CHECK(run_kb(load_kb("abox a : bot\n")).result == RunResult::Unsat);
}

TEST_CASE("determinism: identical traces and node counts across runs") {
    for (const char* file : {"example1.kb", "example2.kb", "trans_roles.kb", "numeric_sat.kb",
                             "nominal_cycle.kb", "merge_or_distinguish.kb"}) {
        CAPTURE(file);
        Run a = run_file(file);
        Run b = run_file(file);
        CHECK(a.trace == b.trace);
        CHECK(a.nodes == b.nodes);
        CHECK(a.result == b.result);
    }
}

TEST_CASE("US2 merge shows up in the trace") {
    Run r = run_file("nominal_merge.kb");
    CHECK(r.result == RunResult::Sat);
    CHECK(has_line_part(r.trace, "US2 v0 -> v1[new] | merge b -> a"));
}

TEST_CASE("resource limits surface as errors, not verdicts") {
    KnowledgeBase kb = load_kb_file(data_file("example1.kb"));
    EngineConfig cfg;
    cfg.max_steps = 3;
    Engine limited(kb, cfg);
    CHECK_THROWS_AS(limited.run(), ResourceLimitError);

    EngineConfig tiny_ilp;
    tiny_ilp.ilp_node_budget = 1;
    Engine starved(load_kb_file(data_file("numeric_unsat.kb")), tiny_ilp);
    CHECK_THROWS_AS(starved.run(), ResourceLimitError);
}

TEST_CASE("rule priority: UPS quiescence before anything else") {
    // After a finished run the drained graph has no applicable UPS rule;
    // re-draining must make zero further changes.
    KnowledgeBase kb = load_kb_file(data_file("example2.kb"));
    Engine e(kb);
    e.run();
    long steps = e.stats().steps;
    e.drain_ups();
    CHECK(e.stats().steps == steps);
}

TEST_CASE("growing numbers do not clone successors") {
    // The per-state ILP variable count stays flat as n grows: successors are
    // counted, not materialized.
    std::vector<long> var_counts;
    for (int n = 1; n <= 20; ++n) {
        std::ostringstream kb_text;
        kb_text << "abox a : atleast " << n << " r A\n";
        kb_text << "abox a : atmost " << n + 1 << " r top\n";
        KnowledgeBase kb = load_kb(kb_text.str());
        Engine e(kb);
        CHECK(e.run() == RunResult::Sat);
        long max_vars = 0;
        for (NodeId v = 0; v < static_cast<NodeId>(e.graph().node_count()); ++v) {
            const TableauNode& node = e.graph().node(v);
            if (node.is_state())
                max_vars = std::max<long>(max_vars, static_cast<long>(node.ilc.vars.size()));
        }
        var_counts.push_back(max_vars);
    }
    for (std::size_t i = 1; i < var_counts.size(); ++i) CHECK(var_counts[i] == var_counts[0]);
}
