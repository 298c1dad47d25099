#include "shoq/ilp.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace shoq::ilp {

namespace {
std::vector<int> normalize_vars(std::vector<int> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

bool satisfies(const Problem& p, const std::vector<long>& x) {
    for (const Constraint& c : p.cons) {
        long sum = 0;
        for (int v : c.vars) sum += x[v];
        switch (c.sense) {
            case Constraint::Sense::Ge:
                if (sum < c.bound) return false;
                break;
            case Constraint::Sense::Le:
                if (sum > c.bound) return false;
                break;
            case Constraint::Sense::Eq0:
                if (sum != 0) return false;
                break;
        }
    }
    return true;
}
}  // namespace

void Problem::add_ge(std::vector<int> vars, long bound) {
    SHOQ_CHECK(bound >= 0);
    cons.push_back({Constraint::Sense::Ge, normalize_vars(std::move(vars)), bound});
}

void Problem::add_le(std::vector<int> vars, long bound) {
    SHOQ_CHECK(bound >= 0);
    cons.push_back({Constraint::Sense::Le, normalize_vars(std::move(vars)), bound});
}

void Problem::add_eq0(int var) {
    if (!has_eq0(var)) cons.push_back({Constraint::Sense::Eq0, {var}, 0});
}

bool Problem::has_eq0(int var) const {
    for (const Constraint& c : cons)
        if (c.sense == Constraint::Sense::Eq0 && c.vars[0] == var) return true;
    return false;
}

long minimal_solution_cap(const Problem& p) {
    long cap = 0;
    for (const Constraint& c : p.cons)
        if (c.sense == Constraint::Sense::Ge) cap = std::max(cap, c.bound);
    return cap;
}

std::vector<Component> decompose(const Problem& p) {
    std::vector<int> parent(p.num_vars);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Constraint& c : p.cons) {
        for (std::size_t i = 1; i < c.vars.size(); ++i) {
            int a = find(c.vars[0]), b = find(c.vars[i]);
            if (a != b) parent[b] = a;
        }
    }
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of(std::max(p.num_vars, 1), -1);
    for (int v = 0; v < p.num_vars; ++v) {
        int root = find(v);
        if (group_of[root] < 0) {
            group_of[root] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        group_of[v] = group_of[root];
        groups[group_of[root]].push_back(v);
    }

    std::vector<Component> out;
    out.reserve(groups.size());
    for (auto& vars : groups) {
        Component comp;
        comp.vars = vars;  // ascending by construction
        comp.problem.num_vars = static_cast<int>(vars.size());
        out.push_back(std::move(comp));
    }
    for (const Constraint& c : p.cons) {
        if (c.vars.empty()) continue;  // empty sums are decided by the caller
        Component& comp = out[group_of[c.vars[0]]];
        Constraint local = c;
        for (int& v : local.vars) {
            auto it = std::lower_bound(comp.vars.begin(), comp.vars.end(), v);
            v = static_cast<int>(it - comp.vars.begin());
        }
        comp.problem.cons.push_back(std::move(local));
    }
    return out;
}

// ── Branch and bound ────────────────────────────────────────────────────────

namespace {

class Solver {
public:
    Solver(const Problem& p, long max_nodes) : p_(p), max_nodes_(max_nodes) {
        value_.assign(p.num_vars, -1);
        ge_of_var_.resize(p.num_vars);
        le_of_var_.resize(p.num_vars);
        for (const Constraint& c : p.cons) {
            if (c.sense == Constraint::Sense::Ge) {
                for (int v : c.vars) ge_of_var_[v].push_back(static_cast<int>(ge_.size()));
                ge_.push_back(&c);
                ge_residual_.push_back(c.bound);
            } else if (c.sense == Constraint::Sense::Le) {
                for (int v : c.vars) le_of_var_[v].push_back(static_cast<int>(le_.size()));
                le_.push_back(&c);
                le_budget_.push_back(c.bound);
            }
        }
        cap_ = minimal_solution_cap(p);

        std::vector<int> participation(p.num_vars, 0);
        for (const Constraint& c : p.cons)
            if (c.sense != Constraint::Sense::Eq0)
                for (int v : c.vars) ++participation[v];
        order_.resize(p.num_vars);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](int a, int b) { return participation[a] > participation[b]; });
    }

    bool search(std::vector<long>& out) { return search_at(0, out); }
    long nodes_used() const { return nodes_; }

private:
    bool ge_coverable() const {
        // Every outstanding Ge residual must fit into the slack of its
        // still-unassigned member variables.
        for (std::size_t gi = 0; gi < ge_.size(); ++gi) {
            if (ge_residual_[gi] <= 0) continue;
            long supply = 0;
            for (int v : ge_[gi]->vars) {
                if (value_[v] >= 0) continue;
                long ub = upper_bound(v);
                supply += std::max(0L, ub);
                if (supply >= ge_residual_[gi]) break;
            }
            if (supply < ge_residual_[gi]) return false;
        }
        return true;
    }

    long upper_bound(int v) const {
        if (p_.has_eq0(v) || ge_of_var_[v].empty()) return 0;
        long ub = cap_;
        for (int li : le_of_var_[v]) ub = std::min(ub, le_budget_[li]);
        return ub;
    }

    bool search_at(std::size_t depth, std::vector<long>& out) {
        if (depth == order_.size()) {
            for (long r : ge_residual_)
                if (r > 0) return false;
            out = value_;
            return true;
        }
        int var = order_[depth];
        long ub = upper_bound(var);
        for (long val = 0; val <= ub; ++val) {
            if (++nodes_ > max_nodes_)
                throw ResourceLimitError("ILP node budget exceeded (" +
                                         std::to_string(max_nodes_) + " nodes)");
            value_[var] = val;
            for (int gi : ge_of_var_[var]) ge_residual_[gi] -= val;
            for (int li : le_of_var_[var]) le_budget_[li] -= val;
            bool ok = ge_coverable() && search_at(depth + 1, out);
            for (int gi : ge_of_var_[var]) ge_residual_[gi] += val;
            for (int li : le_of_var_[var]) le_budget_[li] += val;
            value_[var] = -1;
            if (ok) return true;
        }
        return false;
    }

    const Problem& p_;
    long max_nodes_;
    long nodes_ = 0;
    long cap_ = 0;
    std::vector<long> value_;
    std::vector<const Constraint*> ge_, le_;
    std::vector<long> ge_residual_, le_budget_;
    std::vector<std::vector<int>> ge_of_var_, le_of_var_;
    std::vector<int> order_;
};

}  // namespace

Result check_feasibility(const Problem& p, const Budget& budget) {
    for (const Constraint& c : p.cons) {
        if (c.vars.empty() && c.sense == Constraint::Sense::Ge && c.bound > 0)
            return {Feasibility::Infeasible, {}};
    }

    std::vector<long> witness(p.num_vars, 0);
    long nodes_left = budget.max_nodes;
    for (const Component& comp : decompose(p)) {
        Solver solver(comp.problem, nodes_left);
        std::vector<long> local;
        bool ok = solver.search(local);
        nodes_left -= solver.nodes_used();
        if (!ok) return {Feasibility::Infeasible, {}};
        for (std::size_t i = 0; i < comp.vars.size(); ++i) witness[comp.vars[i]] = local[i];
    }
    SHOQ_CHECK(satisfies(p, witness));
    return {Feasibility::Feasible, std::move(witness)};
}

Feasibility oracle_enumerate(const Problem& p, long cap) {
    SHOQ_CHECK(cap >= 0);
    std::vector<long> x(p.num_vars, 0);
    while (true) {
        if (satisfies(p, x)) return Feasibility::Feasible;
        int i = 0;
        while (i < p.num_vars && x[i] == cap) x[i++] = 0;
        if (i == p.num_vars) return Feasibility::Infeasible;
        ++x[i];
    }
}

// ── Bounded-counter oracles ─────────────────────────────────────────────────
//
// Exhaustive deterministic versions of the bounded-counter procedures: each
// constraint with a small bound distributes its b_i units over its member
// variables ("choose some j" taken in every possible way, enumerated as
// compositions), and a run succeeds when the induced per-variable
// bound system is consistent.  Counter state is threaded through the rows so
// inconsistent prefixes are cut off early.  x = 0 constraints are the
// special case "sum over one variable <= 0".

namespace {

struct CounterState {
    std::vector<long> lo;  // max over Ge counters seen so far
    std::vector<long> hi;  // min over Le counters seen so far
};

// Distribute `remaining` units over row->vars[idx..] as counters, keeping
// lo <= hi per variable, and call next() for every complete composition.
bool distribute_row(const Constraint& row, std::size_t idx, long remaining, CounterState& st,
                    const std::function<bool()>& next) {
    if (idx == row.vars.size()) return remaining == 0 && next();
    int v = row.vars[idx];
    bool is_ge = row.sense == Constraint::Sense::Ge;
    long save_lo = st.lo[v], save_hi = st.hi[v];
    for (long c = 0; c <= remaining; ++c) {
        long lo = is_ge ? std::max(st.lo[v], c) : st.lo[v];
        long hi = is_ge ? st.hi[v] : std::min(st.hi[v], c);
        if (lo <= hi) {
            st.lo[v] = lo;
            st.hi[v] = hi;
            if (distribute_row(row, idx + 1, remaining - c, st, next)) {
                st.lo[v] = save_lo;
                st.hi[v] = save_hi;
                return true;
            }
            st.lo[v] = save_lo;
            st.hi[v] = save_hi;
        }
    }
    return false;
}

Constraint as_le_zero(const Constraint& c) {
    return {Constraint::Sense::Le, c.vars, 0};
}

}  // namespace

Feasibility oracle_all_bounds_small(const Problem& p, long n) {
    std::vector<Constraint> rows;
    for (const Constraint& c : p.cons) {
        if (c.sense == Constraint::Sense::Eq0) {
            rows.push_back(as_le_zero(c));
            continue;
        }
        if (c.bound > n)
            throw ValidationError("oracle_all_bounds_small precondition: every bound must be <= n");
        if (!c.vars.empty()) rows.push_back(c);
        else if (c.sense == Constraint::Sense::Ge && c.bound > 0)
            return Feasibility::Infeasible;
    }
    // Fewer compositions first.
    std::stable_sort(rows.begin(), rows.end(), [](const Constraint& a, const Constraint& b) {
        return a.bound * static_cast<long>(a.vars.size()) <
               b.bound * static_cast<long>(b.vars.size());
    });

    CounterState st;
    st.lo.assign(p.num_vars, 0);
    st.hi.assign(p.num_vars, std::numeric_limits<long>::max());

    std::function<bool(std::size_t)> run = [&](std::size_t i) -> bool {
        if (i == rows.size()) return true;
        std::function<bool()> next = [&]() { return run(i + 1); };
        return distribute_row(rows[i], 0, rows[i].bound, st, next);
    };
    return run(0) ? Feasibility::Feasible : Feasibility::Infeasible;
}

Feasibility oracle_le_bounds_small(const Problem& p, long n) {
    std::vector<Constraint> le_rows;
    std::vector<const Constraint*> ge_rows;
    for (const Constraint& c : p.cons) {
        if (c.sense == Constraint::Sense::Eq0) {
            le_rows.push_back(as_le_zero(c));
        } else if (c.sense == Constraint::Sense::Le) {
            if (c.bound > n)
                throw ValidationError("oracle_le_bounds_small precondition: every <= bound must be <= n");
            le_rows.push_back(c);
        } else {
            if (c.vars.empty() && c.bound > 0) return Feasibility::Infeasible;
            if (!c.vars.empty()) ge_rows.push_back(&c);
        }
    }
    std::stable_sort(le_rows.begin(), le_rows.end(),
                     [](const Constraint& a, const Constraint& b) {
                         return a.bound * static_cast<long>(a.vars.size()) <
                                b.bound * static_cast<long>(b.vars.size());
                     });

    std::set<int> in_le;
    for (const Constraint& c : le_rows) in_le.insert(c.vars.begin(), c.vars.end());

    CounterState st;
    st.lo.assign(p.num_vars, 0);
    st.hi.assign(p.num_vars, std::numeric_limits<long>::max());

    auto check_ge = [&]() -> bool {
        // d_j = min over the Le counters containing j, i.e. st.hi[j] for
        // j in a Le row.  Variables outside every Le row are unbounded.
        for (const Constraint* g : ge_rows) {
            long sum = 0;
            bool has_free = false;
            for (int v : g->vars) {
                if (in_le.count(v))
                    sum += st.hi[v];
                else
                    has_free = true;
            }
            if (!has_free && sum < g->bound) return false;
        }
        return true;
    };

    std::function<bool(std::size_t)> run = [&](std::size_t i) -> bool {
        if (i == le_rows.size()) return check_ge();
        std::function<bool()> next = [&]() { return run(i + 1); };
        return distribute_row(le_rows[i], 0, le_rows[i].bound, st, next);
    };
    return run(0) ? Feasibility::Feasible : Feasibility::Infeasible;
}

// ── Debug text format ───────────────────────────────────────────────────────

Problem parse_problem(const std::string& text) {
    Problem p;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = line.substr(0, line.find('#'));
        std::istringstream ls(stripped);
        std::vector<int> vars;
        std::string tok;
        std::string op;
        long bound = -1;
        while (ls >> tok) {
            if (tok == "+") continue;
            if (tok == ">=" || tok == "<=" || tok == "=") {
                op = tok;
                if (!(ls >> bound)) throw ParseError(line_no, 0, "expected a bound");
                break;
            }
            if (tok.size() < 2 || tok[0] != 'x')
                throw ParseError(line_no, 0, "expected a variable like x1");
            int idx = 0;
            try {
                idx = std::stoi(tok.substr(1));
            } catch (const std::exception&) {
                throw ParseError(line_no, 0, "expected a variable like x1");
            }
            if (idx < 1) throw ParseError(line_no, 0, "variable indices start at 1");
            vars.push_back(idx - 1);
            p.num_vars = std::max(p.num_vars, idx);
        }
        if (vars.empty() && op.empty()) continue;  // blank/comment line
        if (op.empty()) throw ParseError(line_no, 0, "expected >=, <= or = 0");
        if (bound < 0) throw ParseError(line_no, 0, "bounds must be nonnegative");
        if (op == ">=")
            p.add_ge(std::move(vars), bound);
        else if (op == "<=")
            p.add_le(std::move(vars), bound);
        else {
            if (vars.size() != 1 || bound != 0)
                throw ParseError(line_no, 0, "equality constraints must pin one variable to 0");
            p.add_eq0(vars[0]);
        }
    }
    return p;
}

std::string to_string(const Problem& p) {
    std::string out;
    for (const Constraint& c : p.cons) {
        for (std::size_t i = 0; i < c.vars.size(); ++i) {
            if (i) out += " + ";
            out += "x" + std::to_string(c.vars[i] + 1);
        }
        switch (c.sense) {
            case Constraint::Sense::Ge: out += " >= " + std::to_string(c.bound); break;
            case Constraint::Sense::Le: out += " <= " + std::to_string(c.bound); break;
            case Constraint::Sense::Eq0: out += " = 0"; break;
        }
        out += "\n";
    }
    return out;
}

}  // namespace shoq::ilp
