#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "shoq/ilp.hpp"

using namespace shoq;
using namespace shoq::ilp;

namespace {

// The constraint system of a three-successor state with a merger:
//   x1 + x3 >= 1, x2 + x3 >= 2, x1 + x2 + x3 <= 2.
Problem three_successor_system() {
    Problem p;
    p.num_vars = 3;
    p.add_ge({0, 2}, 1);
    p.add_ge({1, 2}, 2);
    p.add_le({0, 1, 2}, 2);
    return p;
}

Problem random_problem(std::mt19937& rng) {
    std::uniform_int_distribution<int> nvars(1, 6), ncons(0, 5), bound(0, 5), coin(0, 2);
    Problem p;
    p.num_vars = nvars(rng);
    int cons = ncons(rng);
    for (int i = 0; i < cons; ++i) {
        std::vector<int> vars;
        for (int v = 0; v < p.num_vars; ++v)
            if (coin(rng) == 0) vars.push_back(v);
        if (vars.empty()) vars.push_back(std::uniform_int_distribution<int>(0, p.num_vars - 1)(rng));
        if (coin(rng) == 0)
            p.add_le(std::move(vars), bound(rng));
        else
            p.add_ge(std::move(vars), bound(rng));
    }
    // occasionally pin a variable
    if (coin(rng) == 0)
        p.add_eq0(std::uniform_int_distribution<int>(0, p.num_vars - 1)(rng));
    return p;
}

}  // namespace

TEST_CASE("three-successor system is feasible; pinning the merger kills it") {
    Problem p = three_successor_system();
    Result r = check_feasibility(p);
    REQUIRE(r.feasible());
    // the witness satisfies every constraint by substitution
    CHECK(r.witness[0] + r.witness[2] >= 1);
    CHECK(r.witness[1] + r.witness[2] >= 2);
    CHECK(r.witness[0] + r.witness[1] + r.witness[2] <= 2);

    p.add_eq0(2);
    CHECK_FALSE(check_feasibility(p).feasible());
}

TEST_CASE("single-variable system") {
    Problem p;
    p.num_vars = 1;
    p.add_ge({0}, 0);
    p.add_ge({0}, 1);
    Result r = check_feasibility(p);
    REQUIRE(r.feasible());
    CHECK(r.witness[0] == 1);
}

TEST_CASE("empty problem is feasible with the zero witness") {
    Problem p;
    p.num_vars = 1;
    Result r = check_feasibility(p);
    REQUIRE(r.feasible());
    CHECK(r.witness == std::vector<long>{0});
}

TEST_CASE("decompose splits independent blocks") {
    Problem p;
    p.num_vars = 2;
    p.add_ge({0}, 1);
    p.add_le({1}, 0);
    CHECK(decompose(p).size() == 2);

    Problem one;
    one.num_vars = 2;
    one.add_ge({0, 1}, 1);
    CHECK(decompose(one).size() == 1);

    CHECK(decompose(three_successor_system()).size() == 1);
}

TEST_CASE("decompose preserves feasibility") {
    std::mt19937 rng(5);
    for (int i = 0; i < 300; ++i) {
        Problem p = random_problem(rng);
        bool whole = oracle_enumerate(p, 6) == Feasibility::Feasible;
        bool parts = true;
        for (const Component& comp : decompose(p))
            parts = parts && oracle_enumerate(comp.problem, 6) == Feasibility::Feasible;
        for (const Constraint& c : p.cons)
            if (c.vars.empty() && c.sense == Constraint::Sense::Ge && c.bound > 0) parts = false;
        CHECK(whole == parts);
    }
}

TEST_CASE("oracle basics") {
    Problem contradictory;
    contradictory.num_vars = 1;
    contradictory.add_ge({0}, 3);
    contradictory.add_le({0}, 2);
    CHECK(oracle_enumerate(contradictory, 5) == Feasibility::Infeasible);
    CHECK(oracle_all_bounds_small(contradictory, 5) == Feasibility::Infeasible);

    Problem empty;
    CHECK(oracle_enumerate(empty, 0) == Feasibility::Feasible);

    CHECK(oracle_enumerate(three_successor_system(), 2) == Feasibility::Feasible);
    CHECK(oracle_all_bounds_small(three_successor_system(), 2) == Feasibility::Feasible);
}

TEST_CASE("bounded-counter oracle examples") {
    Problem p;
    p.num_vars = 2;
    p.add_ge({0, 1}, 2);
    p.add_le({0}, 0);
    p.add_le({1}, 0);
    CHECK(oracle_all_bounds_small(p, 2) == Feasibility::Infeasible);
    CHECK(oracle_le_bounds_small(p, 2) == Feasibility::Infeasible);

    Problem q;
    q.num_vars = 2;
    q.add_le({0, 1}, 1);
    q.add_ge({0}, 1);
    CHECK(oracle_le_bounds_small(q, 1) == Feasibility::Feasible);

    Problem single;
    single.num_vars = 1;
    single.add_ge({0}, 1);
    CHECK(oracle_all_bounds_small(single, 1) == Feasibility::Feasible);
    CHECK(oracle_le_bounds_small(single, 0) == Feasibility::Feasible);  // no <= rows at all

    Problem pinned;
    pinned.num_vars = 1;
    pinned.add_le({0}, 0);
    pinned.add_ge({0}, 1);
    CHECK(oracle_le_bounds_small(pinned, 1) == Feasibility::Infeasible);
}

TEST_CASE("bounded-counter oracle preconditions") {
    Problem p;
    p.num_vars = 1;
    p.add_ge({0}, 4);
    CHECK_THROWS_AS(oracle_all_bounds_small(p, 3), ValidationError);
    CHECK(oracle_le_bounds_small(p, 3) == Feasibility::Feasible);  // only <= bounds are restricted
    Problem q;
    q.num_vars = 1;
    q.add_le({0}, 4);
    CHECK_THROWS_AS(oracle_le_bounds_small(q, 3), ValidationError);
}

TEST_CASE("node budget raises instead of answering") {
    Problem p;
    p.num_vars = 6;
    for (int i = 0; i < 3; ++i) p.add_ge({0, 1, 2, 3, 4, 5}, 5);
    p.add_le({0, 1, 2, 3, 4, 5}, 4);  // infeasible, needs search
    CHECK_THROWS_AS(check_feasibility(p, {2}), ResourceLimitError);
}

TEST_CASE("differential: solver vs oracles") {
    std::mt19937 rng(1234);
    for (int i = 0; i < 500; ++i) {
        Problem p = random_problem(rng);
        long cap = minimal_solution_cap(p);
        bool expected = oracle_enumerate(p, cap) == Feasibility::Feasible;
        Result got = check_feasibility(p);
        CHECK(got.feasible() == expected);
        CHECK(oracle_all_bounds_small(p, 5) == (expected ? Feasibility::Feasible : Feasibility::Infeasible));
        CHECK(oracle_le_bounds_small(p, 5) == (expected ? Feasibility::Feasible : Feasibility::Infeasible));
    }
}

TEST_CASE("monotonicity: adding a constraint never repairs infeasibility") {
    std::mt19937 rng(77);
    for (int i = 0; i < 200; ++i) {
        Problem p = random_problem(rng);
        bool before = check_feasibility(p).feasible();
        Problem more = p;
        std::uniform_int_distribution<int> pickvar(0, p.num_vars - 1), b(0, 5);
        more.add_le({pickvar(rng)}, b(rng));
        bool after = check_feasibility(more).feasible();
        if (!before) CHECK_FALSE(after);
    }
}

TEST_CASE("minimal-solution cap is valid") {
    std::mt19937 rng(99);
    for (int i = 0; i < 500; ++i) {
        Problem p = random_problem(rng);
        // generous cap vs the derived one
        bool generous = oracle_enumerate(p, 8) == Feasibility::Feasible;
        bool capped = oracle_enumerate(p, minimal_solution_cap(p)) == Feasibility::Feasible;
        CHECK(generous == capped);
    }
}

TEST_CASE("debug text format round trip") {
    const char* text = "x1 + x3 >= 2\nx2 <= 1\nx4 = 0\n";
    Problem p = parse_problem(text);
    CHECK(p.num_vars == 4);
    REQUIRE(p.cons.size() == 3);
    CHECK(p.cons[0].sense == Constraint::Sense::Ge);
    CHECK(p.cons[0].vars == std::vector<int>{0, 2});
    CHECK(p.cons[2].sense == Constraint::Sense::Eq0);
    CHECK(parse_problem(to_string(p)).cons.size() == p.cons.size());
    CHECK_THROWS_AS(parse_problem("x1 >= \n"), ParseError);
    CHECK_THROWS_AS(parse_problem("x1 + x2 = 0\n"), ParseError);
    CHECK_THROWS_AS(parse_problem("y1 >= 2\n"), ParseError);
}
