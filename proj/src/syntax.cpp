#include "shoq/syntax.hpp"

#include <algorithm>

namespace shoq {

// ── Concept nodes ───────────────────────────────────────────────────────────

struct Concept::Node {
    ConceptKind kind = ConceptKind::Top;
    std::string name;          // Atomic / NegAtomic
    Individual ind;            // Nominal / NegNominal
    Role role;                 // quantified forms
    std::uint32_t count = 0;   // number restrictions
    Concept lhs, rhs;          // And / Or
    Concept sub;               // quantified forms, Not
    std::size_t hash = 0;
};

namespace {

std::shared_ptr<const Concept::Node> make_node(Concept::Node n) {
    std::size_t h = static_cast<std::size_t>(n.kind);
    hash_combine(h, std::hash<std::string>{}(n.name));
    hash_combine(h, std::hash<std::string>{}(n.ind.name));
    hash_combine(h, std::hash<std::string>{}(n.role.name));
    hash_combine(h, n.count);
    if (n.lhs.valid()) hash_combine(h, n.lhs.hash());
    if (n.rhs.valid()) hash_combine(h, n.rhs.hash());
    if (n.sub.valid()) hash_combine(h, n.sub.hash());
    n.hash = h;
    return std::make_shared<const Concept::Node>(std::move(n));
}

}  // namespace

Concept Concept::top() {
    Node n;
    n.kind = ConceptKind::Top;
    return Concept(make_node(std::move(n)));
}

Concept Concept::bot() {
    Node n;
    n.kind = ConceptKind::Bot;
    return Concept(make_node(std::move(n)));
}

Concept Concept::atomic(std::string name) {
    SHOQ_CHECK(!name.empty());
    Node n;
    n.kind = ConceptKind::Atomic;
    n.name = std::move(name);
    return Concept(make_node(std::move(n)));
}

Concept Concept::neg_atomic(std::string name) {
    SHOQ_CHECK(!name.empty());
    Node n;
    n.kind = ConceptKind::NegAtomic;
    n.name = std::move(name);
    return Concept(make_node(std::move(n)));
}

Concept Concept::nominal(Individual a) {
    SHOQ_CHECK(!a.name.empty());
    Node n;
    n.kind = ConceptKind::Nominal;
    n.ind = std::move(a);
    return Concept(make_node(std::move(n)));
}

Concept Concept::neg_nominal(Individual a) {
    SHOQ_CHECK(!a.name.empty());
    Node n;
    n.kind = ConceptKind::NegNominal;
    n.ind = std::move(a);
    return Concept(make_node(std::move(n)));
}

Concept Concept::conj(Concept lhs, Concept rhs) {
    SHOQ_CHECK(lhs.valid() && rhs.valid());
    Node n;
    n.kind = ConceptKind::And;
    n.lhs = std::move(lhs);
    n.rhs = std::move(rhs);
    return Concept(make_node(std::move(n)));
}

Concept Concept::disj(Concept lhs, Concept rhs) {
    SHOQ_CHECK(lhs.valid() && rhs.valid());
    Node n;
    n.kind = ConceptKind::Or;
    n.lhs = std::move(lhs);
    n.rhs = std::move(rhs);
    return Concept(make_node(std::move(n)));
}

Concept Concept::exists(Role r, Concept sub) {
    SHOQ_CHECK(sub.valid() && !r.name.empty());
    Node n;
    n.kind = ConceptKind::Exists;
    n.role = std::move(r);
    n.sub = std::move(sub);
    return Concept(make_node(std::move(n)));
}

Concept Concept::forall(Role r, Concept sub) {
    SHOQ_CHECK(sub.valid() && !r.name.empty());
    Node n;
    n.kind = ConceptKind::Forall;
    n.role = std::move(r);
    n.sub = std::move(sub);
    return Concept(make_node(std::move(n)));
}

Concept Concept::at_least(std::uint32_t n, Role s, Concept sub) {
    SHOQ_CHECK(sub.valid() && !s.name.empty());
    Node node;
    node.kind = ConceptKind::AtLeast;
    node.role = std::move(s);
    node.count = n;
    node.sub = std::move(sub);
    return Concept(make_node(std::move(node)));
}

Concept Concept::at_most(std::uint32_t n, Role s, Concept sub) {
    SHOQ_CHECK(sub.valid() && !s.name.empty());
    Node node;
    node.kind = ConceptKind::AtMost;
    node.role = std::move(s);
    node.count = n;
    node.sub = std::move(sub);
    return Concept(make_node(std::move(node)));
}

Concept Concept::prec_eq(std::uint32_t n, Role s, Concept sub) {
    SHOQ_CHECK(sub.valid() && !s.name.empty());
    Node node;
    node.kind = ConceptKind::PrecEq;
    node.role = std::move(s);
    node.count = n;
    node.sub = std::move(sub);
    return Concept(make_node(std::move(node)));
}

Concept Concept::succ_eq(std::uint32_t n, Role s, Concept sub) {
    SHOQ_CHECK(sub.valid() && !s.name.empty());
    Node node;
    node.kind = ConceptKind::SuccEq;
    node.role = std::move(s);
    node.count = n;
    node.sub = std::move(sub);
    return Concept(make_node(std::move(node)));
}

Concept Concept::negation(Concept sub) {
    SHOQ_CHECK(sub.valid());
    Node n;
    n.kind = ConceptKind::Not;
    n.sub = std::move(sub);
    return Concept(make_node(std::move(n)));
}

ConceptKind Concept::kind() const {
    SHOQ_CHECK(node_);
    return node_->kind;
}

const std::string& Concept::name() const {
    SHOQ_CHECK(kind() == ConceptKind::Atomic || kind() == ConceptKind::NegAtomic);
    return node_->name;
}

const Individual& Concept::individual() const {
    SHOQ_CHECK(kind() == ConceptKind::Nominal || kind() == ConceptKind::NegNominal);
    return node_->ind;
}

const Role& Concept::role() const {
    SHOQ_CHECK(node_ && !node_->role.name.empty());
    return node_->role;
}

std::uint32_t Concept::count() const {
    ConceptKind k = kind();
    SHOQ_CHECK(k == ConceptKind::AtLeast || k == ConceptKind::AtMost || k == ConceptKind::PrecEq ||
               k == ConceptKind::SuccEq);
    return node_->count;
}

const Concept& Concept::lhs() const {
    SHOQ_CHECK(kind() == ConceptKind::And || kind() == ConceptKind::Or);
    return node_->lhs;
}

const Concept& Concept::rhs() const {
    SHOQ_CHECK(kind() == ConceptKind::And || kind() == ConceptKind::Or);
    return node_->rhs;
}

const Concept& Concept::sub() const {
    SHOQ_CHECK(node_ && node_->sub.valid());
    return node_->sub;
}

bool Concept::is_residual() const {
    return kind() == ConceptKind::PrecEq || kind() == ConceptKind::SuccEq;
}

std::size_t Concept::hash() const {
    SHOQ_CHECK(node_);
    return node_->hash;
}

int Concept::compare(const Concept& a, const Concept& b) {
    SHOQ_CHECK(a.node_ && b.node_);
    if (a.node_ == b.node_) return 0;
    if (a.node_->kind != b.node_->kind)
        return a.node_->kind < b.node_->kind ? -1 : 1;
    switch (a.node_->kind) {
        case ConceptKind::Top:
        case ConceptKind::Bot:
            return 0;
        case ConceptKind::Atomic:
        case ConceptKind::NegAtomic:
            return a.node_->name.compare(b.node_->name);
        case ConceptKind::Nominal:
        case ConceptKind::NegNominal:
            return a.node_->ind.name.compare(b.node_->ind.name);
        case ConceptKind::And:
        case ConceptKind::Or: {
            int c = compare(a.node_->lhs, b.node_->lhs);
            if (c != 0) return c;
            return compare(a.node_->rhs, b.node_->rhs);
        }
        case ConceptKind::Exists:
        case ConceptKind::Forall: {
            int c = a.node_->role.name.compare(b.node_->role.name);
            if (c != 0) return c;
            return compare(a.node_->sub, b.node_->sub);
        }
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq: {
            if (a.node_->count != b.node_->count)
                return a.node_->count < b.node_->count ? -1 : 1;
            int c = a.node_->role.name.compare(b.node_->role.name);
            if (c != 0) return c;
            return compare(a.node_->sub, b.node_->sub);
        }
        case ConceptKind::Not:
            return compare(a.node_->sub, b.node_->sub);
    }
    SHOQ_CHECK(false);
}

// ── Formulas ────────────────────────────────────────────────────────────────

Formula Formula::concept_only(Concept c) {
    SHOQ_CHECK(c.valid());
    Formula f;
    f.kind_ = FormulaKind::ConceptOnly;
    f.concept_ = std::move(c);
    return f;
}

Formula Formula::instance(Individual a, Concept c) {
    SHOQ_CHECK(c.valid() && !a.name.empty());
    Formula f;
    f.kind_ = FormulaKind::Instance;
    f.subject_ = std::move(a);
    f.concept_ = std::move(c);
    return f;
}

Formula Formula::role(Role r, Individual a, Individual b) {
    Formula f;
    f.kind_ = FormulaKind::RoleAssertion;
    f.role_ = std::move(r);
    f.first_ = std::move(a);
    f.second_ = std::move(b);
    return f;
}

Formula Formula::neg_role(Role r, Individual a, Individual b) {
    Formula f;
    f.kind_ = FormulaKind::NegRoleAssertion;
    f.role_ = std::move(r);
    f.first_ = std::move(a);
    f.second_ = std::move(b);
    return f;
}

Formula Formula::eq(Individual a, Individual b) {
    Formula f;
    f.kind_ = FormulaKind::Eq;
    f.first_ = std::move(a);
    f.second_ = std::move(b);
    return f;
}

Formula Formula::neq(Individual a, Individual b) {
    Formula f;
    f.kind_ = FormulaKind::NotEq;
    f.first_ = std::move(a);
    f.second_ = std::move(b);
    return f;
}

const Concept& Formula::concept_part() const {
    SHOQ_CHECK(has_concept());
    return concept_;
}

const Individual& Formula::subject() const {
    SHOQ_CHECK(kind() == FormulaKind::Instance);
    return *subject_;
}

std::optional<Individual> Formula::alpha() const {
    SHOQ_CHECK(has_concept());
    return subject_;
}

const Role& Formula::role_part() const {
    SHOQ_CHECK(kind() == FormulaKind::RoleAssertion || kind() == FormulaKind::NegRoleAssertion);
    return *role_;
}

const Individual& Formula::first() const {
    SHOQ_CHECK(first_.has_value());
    return *first_;
}

const Individual& Formula::second() const {
    SHOQ_CHECK(second_.has_value());
    return *second_;
}

std::size_t Formula::hash() const {
    SHOQ_CHECK(valid());
    std::size_t h = static_cast<std::size_t>(*kind_);
    if (concept_.valid()) hash_combine(h, concept_.hash());
    if (subject_) hash_combine(h, std::hash<std::string>{}(subject_->name));
    if (role_) hash_combine(h, std::hash<std::string>{}(role_->name));
    if (first_) hash_combine(h, std::hash<std::string>{}(first_->name));
    if (second_) hash_combine(h, std::hash<std::string>{}(second_->name));
    return h;
}

int Formula::compare(const Formula& a, const Formula& b) {
    SHOQ_CHECK(a.valid() && b.valid());
    if (*a.kind_ != *b.kind_) return *a.kind_ < *b.kind_ ? -1 : 1;
    switch (*a.kind_) {
        case FormulaKind::ConceptOnly:
            return Concept::compare(a.concept_, b.concept_);
        case FormulaKind::Instance: {
            int c = a.subject_->name.compare(b.subject_->name);
            if (c != 0) return c;
            return Concept::compare(a.concept_, b.concept_);
        }
        case FormulaKind::RoleAssertion:
        case FormulaKind::NegRoleAssertion: {
            int c = a.role_->name.compare(b.role_->name);
            if (c != 0) return c;
            c = a.first_->name.compare(b.first_->name);
            if (c != 0) return c;
            return a.second_->name.compare(b.second_->name);
        }
        case FormulaKind::Eq:
        case FormulaKind::NotEq: {
            int c = a.first_->name.compare(b.first_->name);
            if (c != 0) return c;
            return a.second_->name.compare(b.second_->name);
        }
    }
    SHOQ_CHECK(false);
}

// ── FormulaSet ──────────────────────────────────────────────────────────────

FormulaSet::FormulaSet(std::vector<Formula> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool FormulaSet::contains(const Formula& f) const {
    return std::binary_search(items_.begin(), items_.end(), f);
}

bool FormulaSet::insert(const Formula& f) {
    auto it = std::lower_bound(items_.begin(), items_.end(), f);
    if (it != items_.end() && *it == f) return false;
    items_.insert(it, f);
    return true;
}

FormulaSet FormulaSet::set_union(const FormulaSet& o) const {
    std::vector<Formula> out;
    out.reserve(items_.size() + o.items_.size());
    std::set_union(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
                   std::back_inserter(out));
    FormulaSet r;
    r.items_ = std::move(out);
    return r;
}

FormulaSet FormulaSet::set_minus(const FormulaSet& o) const {
    std::vector<Formula> out;
    std::set_difference(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
                        std::back_inserter(out));
    FormulaSet r;
    r.items_ = std::move(out);
    return r;
}

bool FormulaSet::is_subset_of(const FormulaSet& o) const {
    return std::includes(o.items_.begin(), o.items_.end(), items_.begin(), items_.end());
}

std::size_t FormulaSet::hash() const {
    std::size_t h = items_.size();
    for (const Formula& f : items_) hash_combine(h, f.hash());
    return h;
}

// ── Printing ────────────────────────────────────────────────────────────────

namespace {

void print_concept(const Concept& c, std::string& out) {
    switch (c.kind()) {
        case ConceptKind::Top:
            out += "top";
            return;
        case ConceptKind::Bot:
            out += "bot";
            return;
        case ConceptKind::Atomic:
            out += c.name();
            return;
        case ConceptKind::NegAtomic:
            out += "not ";
            out += c.name();
            return;
        case ConceptKind::Nominal:
            out += "one ";
            out += c.individual().name;
            return;
        case ConceptKind::NegNominal:
            out += "not one ";
            out += c.individual().name;
            return;
        case ConceptKind::And:
        case ConceptKind::Or:
            out += '(';
            print_concept(c.lhs(), out);
            out += c.kind() == ConceptKind::And ? " and " : " or ";
            print_concept(c.rhs(), out);
            out += ')';
            return;
        case ConceptKind::Exists:
        case ConceptKind::Forall:
            out += c.kind() == ConceptKind::Exists ? "some " : "only ";
            out += c.role().name;
            out += ' ';
            print_concept(c.sub(), out);
            return;
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq: {
            switch (c.kind()) {
                case ConceptKind::AtLeast: out += "atleast "; break;
                case ConceptKind::AtMost: out += "atmost "; break;
                case ConceptKind::SuccEq: out += "atleast~ "; break;
                default: out += "atmost~ "; break;
            }
            out += std::to_string(c.count());
            out += ' ';
            out += c.role().name;
            out += ' ';
            print_concept(c.sub(), out);
            return;
        }
        case ConceptKind::Not:
            out += "not ";
            print_concept(c.sub(), out);
            return;
    }
}

}  // namespace

std::string to_string(const Concept& c) {
    std::string out;
    print_concept(c, out);
    return out;
}

std::string to_string(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::ConceptOnly:
            return to_string(f.concept_part());
        case FormulaKind::Instance:
            return f.subject().name + " : " + to_string(f.concept_part());
        case FormulaKind::RoleAssertion:
            return f.role_part().name + "(" + f.first().name + ", " + f.second().name + ")";
        case FormulaKind::NegRoleAssertion:
            return "not " + f.role_part().name + "(" + f.first().name + ", " + f.second().name + ")";
        case FormulaKind::Eq:
            return f.first().name + " = " + f.second().name;
        case FormulaKind::NotEq:
            return f.first().name + " != " + f.second().name;
    }
    SHOQ_CHECK(false);
}

std::string to_string(const FormulaSet& s) {
    std::string out = "{";
    bool first = true;
    for (const Formula& f : s) {
        if (!first) out += ", ";
        first = false;
        out += to_string(f);
    }
    out += "}";
    return out;
}

// ── Occurrence collection ──────────────────────────────────────────────────

void collect_individuals(const Concept& c, std::set<Individual>& out) {
    switch (c.kind()) {
        case ConceptKind::Nominal:
        case ConceptKind::NegNominal:
            out.insert(c.individual());
            return;
        case ConceptKind::And:
        case ConceptKind::Or:
            collect_individuals(c.lhs(), out);
            collect_individuals(c.rhs(), out);
            return;
        case ConceptKind::Exists:
        case ConceptKind::Forall:
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
        case ConceptKind::Not:
            collect_individuals(c.sub(), out);
            return;
        default:
            return;
    }
}

void collect_individuals(const Formula& f, std::set<Individual>& out) {
    switch (f.kind()) {
        case FormulaKind::ConceptOnly:
            collect_individuals(f.concept_part(), out);
            return;
        case FormulaKind::Instance:
            out.insert(f.subject());
            collect_individuals(f.concept_part(), out);
            return;
        default:
            out.insert(f.first());
            out.insert(f.second());
            return;
    }
}

void collect_roles(const Concept& c, std::set<Role>& out) {
    switch (c.kind()) {
        case ConceptKind::And:
        case ConceptKind::Or:
            collect_roles(c.lhs(), out);
            collect_roles(c.rhs(), out);
            return;
        case ConceptKind::Exists:
        case ConceptKind::Forall:
        case ConceptKind::AtLeast:
        case ConceptKind::AtMost:
        case ConceptKind::PrecEq:
        case ConceptKind::SuccEq:
            out.insert(c.role());
            collect_roles(c.sub(), out);
            return;
        case ConceptKind::Not:
            collect_roles(c.sub(), out);
            return;
        default:
            return;
    }
}

void collect_roles(const Formula& f, std::set<Role>& out) {
    switch (f.kind()) {
        case FormulaKind::ConceptOnly:
        case FormulaKind::Instance:
            collect_roles(f.concept_part(), out);
            return;
        case FormulaKind::RoleAssertion:
        case FormulaKind::NegRoleAssertion:
            out.insert(f.role_part());
            return;
        default:
            return;
    }
}

}  // namespace shoq
