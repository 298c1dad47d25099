// ilpcheck: standalone feasibility checking for the debug constraint format
// (one constraint per line, e.g. "x1 + x3 >= 2").  Reads a file or stdin.
//
// Exit codes: 0 feasible, 1 infeasible, 2 parse error, 3 budget exceeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shoq/ilp.hpp"

int main(int argc, char** argv) {
    CLI::App app{"0/1-coefficient integer feasibility checker"};
    std::string input_path = "-";
    long budget = 1000000;
    bool quiet = false;
    app.add_option("input", input_path, "constraint file ('-' for stdin)");
    app.add_option("--node-budget", budget, "branch-and-bound node budget")
        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "suppress the witness");
    CLI11_PARSE(app, argc, argv);

    std::string text;
    if (input_path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(input_path);
        if (!in) {
            std::cerr << "error: cannot open " << input_path << "\n";
            return 2;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }

    try {
        shoq::ilp::Problem p = shoq::ilp::parse_problem(text);
        shoq::ilp::Result r = shoq::ilp::check_feasibility(p, {budget});
        if (!r.feasible()) {
            std::cout << "INFEASIBLE\n";
            return 1;
        }
        std::cout << "FEASIBLE\n";
        if (!quiet) {
            for (std::size_t i = 0; i < r.witness.size(); ++i)
                std::cout << "x" << i + 1 << " = " << r.witness[i] << "\n";
        }
        return 0;
    } catch (const shoq::ResourceLimitError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 3;
    } catch (const shoq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
