// shoqsat: SHOQ knowledge-base satisfiability checker.
//
// Exit codes: 0 SAT, 1 UNSAT, 2 input/parse/validation error,
// 3 inconclusive (resource limit or internal defect).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shoq/engine.hpp"
#include "shoq/kb.hpp"
#include "shoq/model.hpp"

namespace {

int run(const std::string& input_path, bool trace, const std::string& model_out,
        const std::string& dot_out, bool stats, long ilp_node_budget, long max_steps,
        bool oracle_check) {
    shoq::KnowledgeBase kb = shoq::load_kb_file(input_path);

    shoq::EngineConfig cfg;
    cfg.trace = trace;
    cfg.trace_out = &std::cout;
    cfg.ilp_node_budget = ilp_node_budget;
    cfg.max_steps = max_steps;

    shoq::Engine engine(kb, cfg);
    shoq::RunResult result = engine.run();

    if (!dot_out.empty()) {
        std::ofstream out(dot_out);
        if (!out) {
            std::cerr << "error: cannot write " << dot_out << "\n";
            return 2;
        }
        out << engine.graph().to_dot();
    }

    if (stats) {
        const shoq::EngineStats& s = engine.stats();
        std::cout << "nodes " << engine.graph().node_count() << "\n";
        std::cout << "edges " << engine.graph().edge_count() << "\n";
        std::cout << "steps " << s.steps << "\n";
        std::cout << "ilp-calls " << s.ilp_calls << "\n";
        for (const auto& [rule, count] : s.rule_applications)
            std::cout << "rule " << rule << " " << count << "\n";
    }

    if (result == shoq::RunResult::Unsat) {
        std::cout << "UNSAT\n";
        return 1;
    }

    if (oracle_check) {
        shoq::BruteResult brute = shoq::brute_force_sat(kb, 4);
        if (brute.kind == shoq::BruteResult::Kind::NoModel) {
            std::cerr << "defect: engine reported SAT but exhaustive search found no model\n";
            return 3;
        }
    }

    if (!model_out.empty()) {
        // The model file is written only after the extracted model verifies.
        engine.complete_for_extraction();
        shoq::ModelGraph mg = shoq::extract_model(engine.graph(), kb, ilp_node_budget);
        std::vector<std::string> graph_bad = shoq::check_model_graph(mg, kb.rbox);
        if (!graph_bad.empty()) {
            std::cerr << "defect: extracted model graph fails saturation: " << graph_bad.front()
                      << "\n";
            return 3;
        }
        shoq::Interpretation interp = shoq::corresponding_model(mg, kb.rbox);
        shoq::CheckResult check = shoq::check_model(interp, kb);
        if (!check.ok) {
            std::cerr << "defect: extracted model fails verification: " << check.violation
                      << "\n";
            return 3;
        }
        std::ofstream out(model_out);
        if (!out) {
            std::cerr << "error: cannot write " << model_out << "\n";
            return 2;
        }
        out << shoq::serialize_model(interp);
    }

    std::cout << "SAT\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SHOQ knowledge-base satisfiability checker"};

    std::string input_path, model_out, dot_out;
    bool trace = false, stats = false, oracle_check = false;
    long ilp_node_budget = 1000000;
    long max_steps = 0;

    app.add_option("input", input_path, "knowledge base file")->required();
    app.add_flag("--trace", trace, "stream rule applications");
    app.add_option("--model", model_out, "write a verified model witness here (SAT only)");
    app.add_option("--dot", dot_out, "write the final tableau as DOT");
    app.add_flag("--stats", stats, "print node/edge counts and rule histogram");
    app.add_option("--ilp-node-budget", ilp_node_budget, "branch-and-bound node budget")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-steps", max_steps, "engine step ceiling (0 = unlimited)");
    app.add_flag("--oracle-check", oracle_check,
                 "cross-check a SAT answer against bounded exhaustive search");

    CLI11_PARSE(app, argc, argv);

    try {
        return run(input_path, trace, model_out, dot_out, stats, ilp_node_budget, max_steps,
                   oracle_check);
    } catch (const shoq::ResourceLimitError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 3;
    } catch (const shoq::EngineDefect& e) {
        std::cerr << "defect: " << e.what() << "\n";
        return 3;
    } catch (const shoq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
