#include "fex/proplogic.hpp"

#include <algorithm>

namespace fex::proplogic {

// --- constructors ------------------------------------------------------------

FormulaPtr mk_atom(uint32_t gamma) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Atom;
    f->atom = gamma;
    return f;
}

FormulaPtr mk_not(FormulaPtr child) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Not;
    f->children = {std::move(child)};
    return f;
}

FormulaPtr mk_and(std::vector<FormulaPtr> children) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::And;
    f->children = std::move(children);
    return f;
}

FormulaPtr mk_or(std::vector<FormulaPtr> children) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Or;
    f->children = std::move(children);
    return f;
}

SetExprPtr mk_gen(uint32_t gamma) {
    auto e = std::make_shared<SetExpr>();
    e->kind = SetExpr::Kind::Gen;
    e->gen = gamma;
    return e;
}

SetExprPtr mk_complement(SetExprPtr child) {
    auto e = std::make_shared<SetExpr>();
    e->kind = SetExpr::Kind::Complement;
    e->children = {std::move(child)};
    return e;
}

SetExprPtr mk_intersect(std::vector<SetExprPtr> children) {
    auto e = std::make_shared<SetExpr>();
    e->kind = SetExpr::Kind::Intersect;
    e->children = std::move(children);
    return e;
}

SetExprPtr mk_union(std::vector<SetExprPtr> children) {
    auto e = std::make_shared<SetExpr>();
    e->kind = SetExpr::Kind::Union;
    e->children = std::move(children);
    return e;
}

// --- printing ------------------------------------------------------------------

std::string to_text(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Atom:
            return "a" + std::to_string(f.atom);
        case Formula::Kind::Not:
            return "(not " + to_text(*f.children[0]) + ")";
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::string out = f.kind == Formula::Kind::And ? "(and" : "(or";
            for (const auto& c : f.children) out += " " + to_text(*c);
            return out + ")";
        }
    }
    return "";
}

std::string to_text(const SetExpr& e) {
    switch (e.kind) {
        case SetExpr::Kind::Gen:
            return "g" + std::to_string(e.gen);
        case SetExpr::Kind::Complement:
            return "(comp " + to_text(*e.children[0]) + ")";
        case SetExpr::Kind::Intersect:
        case SetExpr::Kind::Union: {
            std::string out = e.kind == SetExpr::Kind::Intersect ? "(isect" : "(union";
            for (const auto& c : e.children) out += " " + to_text(*c);
            return out + ")";
        }
    }
    return "";
}

// --- syntactic helpers -----------------------------------------------------------

namespace {

void collect_support(const Formula& f, std::set<uint32_t>& out) {
    if (f.kind == Formula::Kind::Atom) {
        out.insert(f.atom);
        return;
    }
    for (const auto& c : f.children) collect_support(*c, out);
}

void collect_gens(const SetExpr& e, std::set<uint32_t>& out) {
    if (e.kind == SetExpr::Kind::Gen) {
        out.insert(e.gen);
        return;
    }
    for (const auto& c : e.children) collect_gens(*c, out);
}

}  // namespace

std::vector<uint32_t> support(const Formula& f) {
    std::set<uint32_t> acc;
    collect_support(f, acc);
    return {acc.begin(), acc.end()};
}

std::vector<uint32_t> mentioned_generators(const SetExpr& e) {
    std::set<uint32_t> acc;
    collect_gens(e, acc);
    return {acc.begin(), acc.end()};
}

size_t max_arity(const Formula& f) {
    size_t m = f.kind == Formula::Kind::Atom ? 0 : f.children.size();
    for (const auto& c : f.children) m = std::max(m, max_arity(*c));
    return m;
}

size_t max_arity(const SetExpr& e) {
    size_t m = e.kind == SetExpr::Kind::Gen ? 0 : e.children.size();
    for (const auto& c : e.children) m = std::max(m, max_arity(*c));
    return m;
}

void check_arity(const Formula& f, uint32_t width) {
    if (max_arity(f) >= width)
        throw WidthExceeded("formula has a connective of arity " +
                            std::to_string(max_arity(f)) + ", which is not below width " +
                            std::to_string(width));
}

// --- semantics --------------------------------------------------------------------

bool evaluate(const Formula& f, const Assignment& s) {
    switch (f.kind) {
        case Formula::Kind::Atom: {
            auto it = s.find(f.atom);
            if (it == s.end()) throw UnboundAtom(f.atom);
            return it->second;
        }
        case Formula::Kind::Not:
            return !evaluate(*f.children[0], s);
        case Formula::Kind::And:
            for (const auto& c : f.children)
                if (!evaluate(*c, s)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& c : f.children)
                if (evaluate(*c, s)) return true;
            return false;
    }
    return false;
}

bool eval_setexpr(const setcore::FamilySpec& family, const SetExpr& e,
                  const setcore::GroundPoint& p) {
    switch (e.kind) {
        case SetExpr::Kind::Gen:
            return setcore::indep_member(p, family.at(e.gen));
        case SetExpr::Kind::Complement:
            return !eval_setexpr(family, *e.children[0], p);
        case SetExpr::Kind::Intersect:
            for (const auto& c : e.children)
                if (!eval_setexpr(family, *c, p)) return false;
            return true;
        case SetExpr::Kind::Union:
            for (const auto& c : e.children)
                if (eval_setexpr(family, *c, p)) return true;
            return false;
    }
    return false;
}

SetExprPtr iota(const Formula& f, size_t generator_count) {
    switch (f.kind) {
        case Formula::Kind::Atom:
            if (f.atom >= generator_count) throw UnknownGenerator(f.atom);
            return mk_gen(f.atom);
        case Formula::Kind::Not:
            return mk_complement(iota(*f.children[0], generator_count));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<SetExprPtr> children;
            children.reserve(f.children.size());
            for (const auto& c : f.children) children.push_back(iota(*c, generator_count));
            return f.kind == Formula::Kind::And ? mk_intersect(std::move(children))
                                                : mk_union(std::move(children));
        }
    }
    throw std::logic_error("unreachable formula kind");
}

SetExprPtr cell_of(const Assignment& s) {
    std::vector<SetExprPtr> conjuncts;
    for (const auto& [gamma, sign] : s)
        if (sign) conjuncts.push_back(mk_gen(gamma));
    for (const auto& [gamma, sign] : s)
        if (!sign) conjuncts.push_back(mk_complement(mk_gen(gamma)));
    if (conjuncts.size() == 1) return conjuncts[0];
    return mk_intersect(std::move(conjuncts));
}

// --- exhaustive checks ----------------------------------------------------------------

namespace {

// All 2^|Γ| assignments over Γ, as (mask → Assignment); bit i of the mask is
// the sign of gamma[i].
std::vector<Assignment> assignments_over(const std::vector<uint32_t>& gamma) {
    if (gamma.size() >= 63) throw SizeOverflow("too many indices for exhaustive assignments");
    std::vector<Assignment> out;
    out.reserve(uint64_t{1} << gamma.size());
    for (uint64_t mask = 0; mask < (uint64_t{1} << gamma.size()); ++mask) {
        Assignment s;
        for (size_t i = 0; i < gamma.size(); ++i)
            s[gamma[i]] = (mask >> i) & 1;
        out.push_back(std::move(s));
    }
    return out;
}

void require_gamma(const setcore::FamilySpec& family, const std::vector<uint32_t>& gamma) {
    if (gamma.size() >= family.domain.width)
        throw WidthExceeded("index set of size " + std::to_string(gamma.size()) +
                            " is not below width " + std::to_string(family.domain.width));
    for (uint32_t g : gamma) family.at(g);
    for (size_t i = 1; i < gamma.size(); ++i)
        if (gamma[i - 1] >= gamma[i]) throw InvalidInput("index set must be sorted and unique");
}

}  // namespace

IotaReport verify_iota_identity(const setcore::FamilySpec& family, const Formula& f,
                                const std::vector<uint32_t>& gamma, uint64_t truncation,
                                uint64_t cap) {
    require_gamma(family, gamma);
    auto sup = support(f);
    if (!std::includes(gamma.begin(), gamma.end(), sup.begin(), sup.end()))
        throw InvalidInput("the index set must contain the formula's support");

    SetExprPtr image = iota(f, family.generators.size());
    auto assignments = assignments_over(gamma);
    std::vector<SetExprPtr> satisfied_cells;
    for (const auto& s : assignments)
        if (evaluate(f, s)) satisfied_cells.push_back(cell_of(s));

    IotaReport report;
    for (const auto& p : setcore::enumerate_ground(family.domain, truncation, cap)) {
        bool lhs = eval_setexpr(family, *image, p);
        bool rhs = false;
        for (const auto& cell : satisfied_cells)
            if (eval_setexpr(family, *cell, p)) { rhs = true; break; }
        ++report.points_checked;
        if (lhs != rhs) {
            report.holds = false;
            report.counterexample = p;
            return report;
        }
    }
    return report;
}

PartitionReport partition_check(const setcore::FamilySpec& family,
                                const std::vector<uint32_t>& gamma, uint64_t truncation,
                                uint64_t cap) {
    require_gamma(family, gamma);
    auto assignments = assignments_over(gamma);
    std::vector<SetExprPtr> cells;
    cells.reserve(assignments.size());
    for (const auto& s : assignments) cells.push_back(cell_of(s));

    PartitionReport report;
    report.cell_sizes.assign(cells.size(), 0);
    for (const auto& p : setcore::enumerate_ground(family.domain, truncation, cap)) {
        ++report.total;
        uint64_t hits = 0;
        uint64_t hit_mask = 0;
        for (size_t m = 0; m < cells.size(); ++m) {
            if (eval_setexpr(family, *cells[m], p)) {
                ++hits;
                hit_mask = m;
                ++report.cell_sizes[m];
            }
        }
        if (hits == 0) report.covers = false;
        if (hits > 1) report.disjoint = false;
        if (hits == 1) {
            // the covering construction: a point belongs to the cell cut out
            // by its own trace pattern
            uint64_t pattern = 0;
            for (size_t i = 0; i < gamma.size(); ++i)
                if (setcore::indep_member(p, family.at(gamma[i]))) pattern |= uint64_t{1} << i;
            if (pattern != hit_mask) report.trace_pattern_ok = false;
        }
    }
    return report;
}

// --- random formulas ----------------------------------------------------------------------

namespace {

FormulaPtr random_formula_rec(Rng& rng, const RandomFormulaParams& params, uint32_t depth) {
    if (depth == 0 || rng.below(4) == 0)
        return mk_atom(static_cast<uint32_t>(rng.below(params.atom_count)));
    switch (rng.below(3)) {
        case 0:
            return mk_not(random_formula_rec(rng, params, depth - 1));
        case 1: {
            auto arity = rng.below(params.max_arity + 1);
            std::vector<FormulaPtr> children;
            for (uint64_t i = 0; i < arity; ++i)
                children.push_back(random_formula_rec(rng, params, depth - 1));
            return mk_and(std::move(children));
        }
        default: {
            auto arity = rng.below(params.max_arity + 1);
            std::vector<FormulaPtr> children;
            for (uint64_t i = 0; i < arity; ++i)
                children.push_back(random_formula_rec(rng, params, depth - 1));
            return mk_or(std::move(children));
        }
    }
}

}  // namespace

FormulaPtr random_formula(Rng& rng, const RandomFormulaParams& params) {
    if (params.atom_count == 0) throw InvalidInput("random formulas need at least one atom");
    return random_formula_rec(rng, params, params.max_depth);
}

}  // namespace fex::proplogic
