#ifndef SHOQ_RBOX_HPP
#define SHOQ_RBOX_HPP

#include <set>
#include <utility>
#include <vector>

#include "shoq/syntax.hpp"

namespace shoq {

// One parsed RBox line.
struct RBoxAxiom {
    enum class Kind { Sub, Trans } kind;
    Role sub;    // Sub: sub ⊑ super; Trans: the role (super unused)
    Role super;
    bool operator<(const RBoxAxiom& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (sub != o.sub) return sub < o.sub;
        return super < o.super;
    }
    bool operator==(const RBoxAxiom& o) const {
        return kind == o.kind && sub == o.sub && super == o.super;
    }
};

// ext(R): the subrole relation closed under reflexivity and transitivity,
// plus the set of transitive roles.
class RBoxClosure {
public:
    RBoxClosure() = default;

    bool subsumes(const Role& r, const Role& s) const {  // r ⊑_R s
        return r == s || sub_.count({r, s}) > 0;
    }
    bool is_transitive(const Role& r) const { return trans_.count(r) > 0; }

    // Neither transitive nor having a transitive subrole.
    bool is_simple(const Role& r) const;

    std::vector<Role> supers_of(const Role& r) const;  // includes r itself, sorted
    const std::set<Role>& roles() const { return roles_; }
    const std::set<std::pair<Role, Role>>& sub_pairs() const { return sub_; }
    const std::set<Role>& transitive_roles() const { return trans_; }

    static RBoxClosure build(const std::vector<RBoxAxiom>& axioms,
                             const std::set<Role>& mentioned_roles);

private:
    std::set<std::pair<Role, Role>> sub_;  // closure incl. reflexive pairs
    std::set<Role> trans_;
    std::set<Role> roles_;
};

}  // namespace shoq

#endif  // SHOQ_RBOX_HPP
