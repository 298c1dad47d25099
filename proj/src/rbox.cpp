#include "shoq/rbox.hpp"

namespace shoq {

bool RBoxClosure::is_simple(const Role& r) const {
    if (is_transitive(r)) return false;
    for (const Role& t : trans_) {
        if (subsumes(t, r)) return false;
    }
    return true;
}

std::vector<Role> RBoxClosure::supers_of(const Role& r) const {
    std::vector<Role> out{r};
    for (const auto& [lo, hi] : sub_) {
        if (lo == r && hi != r) out.push_back(hi);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RBoxClosure RBoxClosure::build(const std::vector<RBoxAxiom>& axioms,
                               const std::set<Role>& mentioned_roles) {
    RBoxClosure c;
    c.roles_ = mentioned_roles;
    for (const RBoxAxiom& ax : axioms) {
        c.roles_.insert(ax.sub);
        if (ax.kind == RBoxAxiom::Kind::Sub) {
            c.roles_.insert(ax.super);
            c.sub_.insert({ax.sub, ax.super});
        } else {
            c.trans_.insert(ax.sub);
        }
    }
    for (const Role& r : c.roles_) c.sub_.insert({r, r});

    // Least fixed point: r ⊑ r' and r' ⊑ r'' imply r ⊑ r''.
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::pair<Role, Role>> add;
        for (const auto& [a, b] : c.sub_) {
            for (const auto& [b2, d] : c.sub_) {
                if (b == b2 && !c.sub_.count({a, d})) add.push_back({a, d});
            }
        }
        for (auto& p : add) changed |= c.sub_.insert(std::move(p)).second;
    }
    return c;
}

}  // namespace shoq
