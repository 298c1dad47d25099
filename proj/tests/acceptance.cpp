// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "shoq/engine.hpp"
#include "shoq/ilp.hpp"
#include "shoq/model.hpp"

using namespace shoq;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        g_notes.push_back(what);
    }
}

std::string data_file(const std::string& name) {
    return std::string(SHOQ_TEST_DATA) + "/" + name;
}

const char* kCorpus[] = {"example1.kb",  "example2.kb",        "trans_roles.kb",
                         "nominal_merge.kb", "numeric_clash.kb", "merge_or_distinguish.kb",
                         "tbox_simple.kb",   "empty_abox.kb",    "exists_chain.kb",
                         "numeric_sat.kb",   "numeric_unsat.kb", "nominal_cycle.kb"};

struct RunOutput {
    RunResult result;
    std::string trace;
    std::size_t nodes = 0;
    long steps = 0;
};

RunOutput run_traced(const KnowledgeBase& kb, long max_steps = 200000) {
    std::ostringstream trace;
    EngineConfig cfg;
    cfg.trace = true;
    cfg.trace_out = &trace;
    cfg.max_steps = max_steps;
    Engine engine(kb, cfg);
    RunResult result = engine.run();
    ClosureSet clo = closure(kb);
    for (const std::string& bad : engine.graph().check_invariants(&clo))
        expect(false, "structural invariant: " + bad);
    return {result, trace.str(), engine.graph().node_count(), engine.stats().steps};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int n, const std::string& what) {
    if (g_failures == 0) {
        std::cout << "criterion " << n << ": PASS - " << what << "\n";
    } else {
        std::cout << "criterion " << n << ": FAIL - " << what << "\n";
        for (const std::string& note : g_notes) std::cout << "    " << note << "\n";
    }
    g_notes.clear();
}

int g_total_failures = 0;
void criterion(int n, const std::string& what, const std::function<void()>& body) {
    g_failures = 0;
    try {
        body();
    } catch (const std::exception& e) {
        expect(false, std::string("exception: ") + e.what());
    }
    report(n, what);
    g_total_failures += g_failures;
}

// ── Random IFDL instances (criteria 3 and 4) ───────────────────────────────

ilp::Problem random_ifdl(std::mt19937& rng) {
    std::uniform_int_distribution<int> nvars(1, 6), ncons(0, 5), bound(0, 5), coin(0, 2);
    ilp::Problem p;
    p.num_vars = nvars(rng);
    int cons = ncons(rng);
    for (int i = 0; i < cons; ++i) {
        std::vector<int> vars;
        for (int v = 0; v < p.num_vars; ++v)
            if (coin(rng) == 0) vars.push_back(v);
        if (vars.empty())
            vars.push_back(std::uniform_int_distribution<int>(0, p.num_vars - 1)(rng));
        if (coin(rng) == 0)
            p.add_le(std::move(vars), bound(rng));
        else
            p.add_ge(std::move(vars), bound(rng));
    }
    if (coin(rng) == 0)
        p.add_eq0(std::uniform_int_distribution<int>(0, p.num_vars - 1)(rng));
    return p;
}

// ── Random small KBs (criterion 5) ──────────────────────────────────────────

struct KbGen {
    std::mt19937 rng;
    explicit KbGen(unsigned seed) : rng(seed) {}

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    bool chance(double p) { return std::uniform_real_distribution<>(0, 1)(rng) < p; }

    std::vector<std::string> roles;
    std::vector<std::string> inds;
    std::vector<std::string> simple_roles;

    std::string gen_concept(int depth) {
        if (depth == 0 || chance(0.35)) {
            if (chance(0.3)) return "one " + inds[pick(0, (int)inds.size() - 1)];
            switch (pick(0, 3)) {
                case 0: return "A";
                case 1: return "B";
                case 2: return "not A";
                default: return chance(0.2) ? "top" : "not B";
            }
        }
        switch (pick(0, 4)) {
            case 0: return "(" + gen_concept(depth - 1) + " and " + gen_concept(depth - 1) + ")";
            case 1: return "(" + gen_concept(depth - 1) + " or " + gen_concept(depth - 1) + ")";
            case 2: return "some " + roles[pick(0, (int)roles.size() - 1)] + " " +
                           gen_concept(depth - 1);
            case 3: return "only " + roles[pick(0, (int)roles.size() - 1)] + " " +
                           gen_concept(depth - 1);
            default: {
                if (simple_roles.empty()) return "A";
                std::string op = chance(0.5) ? "atleast" : "atmost";
                return op + " " + std::to_string(pick(0, 3)) + " " +
                       simple_roles[pick(0, (int)simple_roles.size() - 1)] + " " +
                       gen_concept(depth - 1);
            }
        }
    }

    std::string generate() {
        roles.clear();
        inds.clear();
        simple_roles.clear();
        int nr = pick(1, 2), ni = pick(1, 2);
        const char* role_names[] = {"r", "s"};
        const char* ind_names[] = {"a", "b"};
        for (int i = 0; i < nr; ++i) roles.push_back(role_names[i]);
        for (int i = 0; i < ni; ++i) inds.push_back(ind_names[i]);

        std::ostringstream kb;
        if (chance(0.3)) kb << "rbox trans " << roles[pick(0, nr - 1)] << "\n";
        if (nr == 2 && chance(0.3)) kb << "rbox " << roles[0] << " sub " << roles[1] << "\n";
        // Number restrictions may only use roles that stay simple under the
        // axioms above; probe via the parser.
        KnowledgeBase probe = parse_kb(kb.str() + "abox a : top\n");
        for (const std::string& r : roles)
            if (probe.rbox.is_simple(Role{r})) simple_roles.push_back(r);

        int assertions = pick(1, 3);
        for (int i = 0; i < assertions; ++i) {
            switch (pick(0, 3)) {
                case 0:
                case 1:
                    kb << "abox " << inds[pick(0, ni - 1)] << " : " << gen_concept(2) << "\n";
                    break;
                case 2:
                    kb << "abox " << roles[pick(0, nr - 1)] << "(" << inds[pick(0, ni - 1)]
                       << ", " << inds[pick(0, ni - 1)] << ")\n";
                    break;
                default:
                    if (ni == 2)
                        kb << "abox a != b\n";
                    else
                        kb << "abox a : " << gen_concept(1) << "\n";
            }
        }
        if (chance(0.4)) kb << "tbox " << gen_concept(1) << " sub " << gen_concept(1) << "\n";
        return kb.str();
    }
};

}  // namespace

int main() {
    // 1. Example 1 reproduction.
    criterion(1, "example 1 reproduces the reference UNSAT run", [] {
        auto start = Clock::now();
        KnowledgeBase kb = load_kb_file(data_file("example1.kb"));
        RunOutput r = run_traced(kb);
        expect(r.result == RunResult::Unsat, "expected UNSAT");
        expect(contains(r.trace, "UPS1 v3 | closed"), "v3 clash closure missing");
        expect(contains(r.trace,
                        "FS v2 -> v4[new] | residuals {a : atleast~ 1 r some r (A or one a), "
                        "a : atleast~ 2 r only r not A, a : atmost~ 2 r B}"),
               "v4 residuals missing");
        expect(contains(r.trace, "TF v4 -> v5[new] v6[new] v7[new]"), "three-successor TF missing");
        expect(contains(r.trace, "x(v5) + x(v7) >= 1"), "constraint x5+x7>=1 missing");
        expect(contains(r.trace, "x(v6) + x(v7) >= 2"), "constraint x6+x7>=2 missing");
        expect(contains(r.trace, "x(v5) + x(v6) + x(v7) <= 2"), "constraint sum<=2 missing");
        expect(contains(r.trace, "UPS3 v4 | closed-wrt({v4})"), "closed-wrt({v4}) step missing");
        expect(contains(r.trace, "UPS1 v4 | closed"), "final closure of v4 missing");
        expect(seconds_since(start) < 1.0, "took longer than 1 s");
    });

    // 2. Example 2 reproduction.
    criterion(2, "example 2 reproduces the reference SAT run and verified model", [] {
        auto start = Clock::now();
        KnowledgeBase kb = load_kb_file(data_file("example2.kb"));
        RunOutput r = run_traced(kb);
        expect(r.result == RunResult::Sat, "expected SAT");
        expect(contains(r.trace,
                        "DN v13 wrt v4 | delete (v2,v4) | v2 -> v14[new]+{a : not A} "
                        "v15[new]+{a : A}"),
               "DN re-expansion into the two branches missing");
        expect(contains(r.trace, "TF v16 -> v5[cached] v6[cached] v7[cached]"),
               "cached reuse of v5,v6,v7 by v16 missing");
        expect(contains(r.trace, "UPS1 v17 | closed"), "closure of the a:A branch missing");
        expect(contains(r.trace, "UPS3 v15 | closed"), "closure of the a:A branch missing");

        Engine engine(kb);
        engine.run();
        engine.complete_for_extraction();
        ModelGraph m = extract_model(engine.graph(), kb);
        for (const std::string& bad : check_model_graph(m, kb.rbox))
            expect(false, "model graph: " + bad);
        Interpretation interp = corresponding_model(m, kb.rbox);
        CheckResult check = check_model(interp, kb);
        expect(check.ok, "extracted model fails: " + check.violation);
        expect(seconds_since(start) < 1.0, "took longer than 1 s");
    });

    // 3. ILP differential suite.
    criterion(3, "1000-instance ILP differential agreement", [] {
        auto start = Clock::now();
        std::mt19937 rng(20260808);
        for (int i = 0; i < 1000; ++i) {
            ilp::Problem p = random_ifdl(rng);
            bool expected = ilp::oracle_enumerate(p, 6) == ilp::Feasibility::Feasible;
            bool got = ilp::check_feasibility(p).feasible();
            expect(got == expected, "solver/enumerate disagreement at instance " +
                                        std::to_string(i) + "\n" + ilp::to_string(p));
            // bounds are <= 5, so both oracle preconditions hold with n = 5
            bool l1 = ilp::oracle_all_bounds_small(p, 5) == ilp::Feasibility::Feasible;
            bool l2 = ilp::oracle_le_bounds_small(p, 5) == ilp::Feasibility::Feasible;
            expect(l1 == expected, "all-bounds oracle disagreement at " + std::to_string(i));
            expect(l2 == expected, "le-bounds oracle disagreement at " + std::to_string(i));
        }
        double t = seconds_since(start);
        expect(t < 30.0, "took " + std::to_string(t) + " s (budget 30 s)");
    });

    // 4. Minimal-solution cap validation.
    criterion(4, "per-variable cap covers every feasible instance", [] {
        std::mt19937 rng(20260808);
        for (int i = 0; i < 1000; ++i) {
            ilp::Problem p = random_ifdl(rng);
            bool generous = ilp::oracle_enumerate(p, 8) == ilp::Feasibility::Feasible;
            if (!generous) continue;
            long cap = ilp::minimal_solution_cap(p);
            expect(ilp::oracle_enumerate(p, cap) == ilp::Feasibility::Feasible,
                   "no solution within the derived cap at instance " + std::to_string(i));
        }
    });

    // 5. Differential SAT suite on random small KBs.
    criterion(5, "500-KB differential satisfiability agreement", [] {
        auto start = Clock::now();
        KbGen gen(987654321);
        int generated = 0, brute_witness = 0, brute_limit = 0, sat_runs = 0;
        while (generated < 500) {
            std::string text = gen.generate();
            KnowledgeBase kb;
            try {
                kb = load_kb(text);
            } catch (const ValidationError&) {
                continue;  // a non-simple role slipped into a restriction
            }
            ++generated;
            RunResult verdict;
            try {
                Engine engine(kb, {});
                verdict = engine.run();
                ClosureSet clo = closure(kb);
                for (const std::string& bad : engine.graph().check_invariants(&clo))
                    expect(false, "invariant on generated KB:\n" + text + bad);
                if (verdict == RunResult::Sat) {
                    ++sat_runs;
                    engine.complete_for_extraction();
                    ModelGraph m = extract_model(engine.graph(), kb);
                    for (const std::string& bad : check_model_graph(m, kb.rbox))
                        expect(false, "model graph on generated KB:\n" + text + bad);
                    Interpretation interp = corresponding_model(m, kb.rbox);
                    CheckResult check = check_model(interp, kb);
                    expect(check.ok, "extracted model fails on:\n" + text + check.violation);
                }
            } catch (const std::exception& e) {
                expect(false, std::string("engine exception on generated KB:\n") + text +
                                  e.what());
                continue;
            }
            BruteResult brute = brute_force_sat(kb, 4, 150000);
            if (brute.kind == BruteResult::Kind::Limit) ++brute_limit;
            if (brute.kind == BruteResult::Kind::Witness) {
                ++brute_witness;
                expect(verdict == RunResult::Sat,
                       "brute force found a model but the engine said UNSAT:\n" + text);
            }
        }
        double t = seconds_since(start);
        std::cout << "    [500 KBs: " << sat_runs << " SAT, " << brute_witness
                  << " brute witnesses, " << brute_limit << " brute limits, "
                  << t << " s]\n";
        expect(brute_witness > 100, "brute-force coverage too thin to be meaningful");
        expect(t < 300.0, "took " + std::to_string(t) + " s (budget 300 s)");
    });

    // 6. Structural invariants (run once more, explicitly, over the corpus).
    criterion(6, "structural invariants hold after every corpus run", [] {
        for (const char* file : kCorpus) {
            KnowledgeBase kb = load_kb_file(data_file(file));
            Engine engine(kb, {});
            engine.run();
            ClosureSet clo = closure(kb);
            for (const std::string& bad : engine.graph().check_invariants(&clo))
                expect(false, std::string(file) + ": " + bad);
            std::size_t n = kb.serialized_size();
            expect(clo.size() <= n * n * n,
                   std::string(file) + ": closure exceeds the cubic bound");
        }
    });

    // 7. Determinism.
    criterion(7, "byte-identical traces on repeated corpus runs", [] {
        for (const char* file : kCorpus) {
            KnowledgeBase kb = load_kb_file(data_file(file));
            RunOutput a = run_traced(kb);
            RunOutput b = run_traced(kb);
            expect(a.trace == b.trace, std::string(file) + ": traces differ");
            expect(a.nodes == b.nodes, std::string(file) + ": node counts differ");
        }
    });

    // 8. Termination ceiling and no-cloning growth family.
    criterion(8, "step ceiling on the corpus; flat ILP width as numbers grow", [] {
        for (const char* file : kCorpus) {
            KnowledgeBase kb = load_kb_file(data_file(file));
            EngineConfig cfg;
            cfg.max_steps = 20000;
            Engine engine(kb, cfg);
            try {
                engine.run();
            } catch (const ResourceLimitError&) {
                expect(false, std::string(file) + ": exceeded the 20000-step ceiling");
            }
        }
        std::vector<long> widths;
        for (int n = 1; n <= 20; ++n) {
            std::ostringstream text;
            text << "abox a : atleast " << n << " r A\n";
            text << "abox a : atmost " << n + 1 << " r top\n";
            text << "abox a : some r B\n";
            KnowledgeBase kb = load_kb(text.str());
            Engine engine(kb, {});
            expect(engine.run() == RunResult::Sat, "growth family run failed");
            long w = 0;
            for (NodeId v = 0; v < static_cast<NodeId>(engine.graph().node_count()); ++v)
                if (engine.graph().node(v).is_state())
                    w = std::max<long>(w, engine.graph().node(v).ilc.vars.size());
            widths.push_back(w);
        }
        for (std::size_t i = 1; i < widths.size(); ++i)
            expect(widths[i] == widths[0],
                   "successor-tuple count varies with n: " + std::to_string(widths[i]) +
                       " vs " + std::to_string(widths[0]));
    });

    if (g_total_failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << g_total_failures << " acceptance failure(s)\n";
    return 1;
}
