#include "fex/filters.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fex::filters {

using proplogic::SetExpr;
using proplogic::SetExprPtr;
using setcore::GroundPoint;

// --- presentation construction -----------------------------------------------

FilterPresentation FilterPresentation::finite_powerset(
    uint64_t n, std::vector<std::vector<uint64_t>> generators, uint32_t width) {
    setcore::BaseDomain::check_width(width);
    if (n == 0) throw InvalidInput("finite powerset carrier needs n >= 1");
    if (n > 62) throw InvalidInput("finite powerset carrier supports n <= 62");
    if (generators.empty()) throw InvalidInput("a filter presentation needs at least one generator");
    for (auto& g : generators) {
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        for (uint64_t x : g)
            if (x >= n) throw InvalidInput("generator element " + std::to_string(x) +
                                           " is outside the carrier 0.." + std::to_string(n - 1));
    }
    FilterPresentation F;
    F.carrier = Carrier::FinitePowerset;
    F.n = n;
    F.width = width;
    F.finite_generators = std::move(generators);
    return F;
}

FilterPresentation FilterPresentation::symbolic(setcore::FamilySpec family,
                                                std::vector<proplogic::SetExprPtr> generators) {
    if (generators.empty()) throw InvalidInput("a filter presentation needs at least one generator");
    for (const auto& e : generators)
        for (uint32_t g : proplogic::mentioned_generators(*e)) family.at(g);
    FilterPresentation F;
    F.carrier = Carrier::Symbolic;
    F.width = family.domain.width;
    F.family = std::move(family);
    F.symbolic_generators = std::move(generators);
    return F;
}

// --- ultrafilter membership ----------------------------------------------------

bool Ultrafilter::contains_subset(const std::vector<uint64_t>& X) const {
    if (kind != Kind::Principal)
        throw InvalidInput("subset membership is defined for principal ultrafilters");
    return std::binary_search(X.begin(), X.end(), point);
}

bool ultrafilter_contains(const Ultrafilter& U, const setcore::FamilySpec& family,
                          const proplogic::SetExpr& e) {
    if (U.kind != Ultrafilter::Kind::CellBased)
        throw InvalidInput("expression membership is defined for cell-based ultrafilters");
    return proplogic::eval_setexpr(family, e, U.witness);
}

// --- the sign-pattern search -----------------------------------------------------

namespace {

constexpr int8_t kUnknown = -1;

int8_t eval3(const SetExpr& e, const std::vector<int8_t>& signs) {
    switch (e.kind) {
        case SetExpr::Kind::Gen:
            return signs[e.gen];
        case SetExpr::Kind::Complement: {
            int8_t v = eval3(*e.children[0], signs);
            return v == kUnknown ? kUnknown : static_cast<int8_t>(1 - v);
        }
        case SetExpr::Kind::Intersect: {
            bool unknown = false;
            for (const auto& c : e.children) {
                int8_t v = eval3(*c, signs);
                if (v == 0) return 0;
                if (v == kUnknown) unknown = true;
            }
            return unknown ? kUnknown : 1;
        }
        case SetExpr::Kind::Union: {
            bool unknown = false;
            for (const auto& c : e.children) {
                int8_t v = eval3(*c, signs);
                if (v == 1) return 1;
                if (v == kUnknown) unknown = true;
            }
            return unknown ? kUnknown : 0;
        }
    }
    return kUnknown;
}

// Forces the expression toward the required truth value, assigning generator
// signs when they are the only way to comply.  Returns false on conflict.
bool require(const SetExpr& e, bool req, std::vector<int8_t>& signs, bool& changed) {
    switch (e.kind) {
        case SetExpr::Kind::Gen: {
            int8_t& slot = signs[e.gen];
            if (slot == kUnknown) {
                slot = req ? 1 : 0;
                changed = true;
                return true;
            }
            return slot == (req ? 1 : 0);
        }
        case SetExpr::Kind::Complement:
            return require(*e.children[0], !req, signs, changed);
        case SetExpr::Kind::Intersect: {
            if (req) {
                for (const auto& c : e.children)
                    if (!require(*c, true, signs, changed)) return false;
                return true;
            }
            // must be false: only forcible when all but one child is true
            int8_t v = eval3(e, signs);
            if (v == 1) return false;
            if (v == 0) return true;
            const SetExpr* lone = nullptr;
            for (const auto& c : e.children) {
                int8_t cv = eval3(*c, signs);
                if (cv == kUnknown) {
                    if (lone) return true;  // two unknowns: defer
                    lone = c.get();
                }
            }
            return lone ? require(*lone, false, signs, changed) : true;
        }
        case SetExpr::Kind::Union: {
            if (!req) {
                for (const auto& c : e.children)
                    if (!require(*c, false, signs, changed)) return false;
                return true;
            }
            int8_t v = eval3(e, signs);
            if (v == 0) return false;
            if (v == 1) return true;
            const SetExpr* lone = nullptr;
            for (const auto& c : e.children) {
                int8_t cv = eval3(*c, signs);
                if (cv == kUnknown) {
                    if (lone) return true;
                    lone = c.get();
                }
            }
            return lone ? require(*lone, true, signs, changed) : true;
        }
    }
    return false;
}

struct CellSearch {
    const std::vector<SetExprPtr>& roots;
    std::vector<uint32_t> vars;  // mentioned generator indices, ascending

    bool propagate(std::vector<int8_t>& signs) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& root : roots)
                if (!require(*root, true, signs, changed)) return false;
        }
        return true;
    }

    std::optional<std::vector<int8_t>> run(std::vector<int8_t> signs) const {
        if (!propagate(signs)) return std::nullopt;
        for (uint32_t v : vars) {
            if (signs[v] != kUnknown) continue;
            for (int8_t value : {int8_t{0}, int8_t{1}}) {
                std::vector<int8_t> branch = signs;
                branch[v] = value;
                if (auto found = run(std::move(branch))) return found;
            }
            return std::nullopt;
        }
        for (const auto& root : roots)
            if (eval3(*root, signs) != 1)
                throw std::logic_error("propagation accepted a non-satisfying full pattern");
        return signs;
    }
};

struct CellOutcome {
    bool found = false;
    setcore::CellSpec cell;
};

CellOutcome find_cell(const FilterPresentation& F) {
    if (F.carrier != FilterPresentation::Carrier::Symbolic)
        throw InvalidInput("sign-pattern search needs a symbolic carrier");
    std::set<uint32_t> mentioned;
    for (const auto& e : F.symbolic_generators)
        for (uint32_t g : proplogic::mentioned_generators(*e)) mentioned.insert(g);

    CellSearch search{F.symbolic_generators, {mentioned.begin(), mentioned.end()}};
    std::vector<int8_t> blank(F.family->generators.size(), kUnknown);
    auto found = search.run(std::move(blank));
    if (!found) return {};

    CellOutcome outcome;
    outcome.found = true;
    for (uint32_t v : search.vars)
        if ((*found)[v] != kUnknown) outcome.cell.signs[v] = (*found)[v] == 1;
    return outcome;
}

}  // namespace

// --- properness --------------------------------------------------------------------

ProperReport is_proper(const FilterPresentation& F, uint64_t searchBound) {
    ProperReport report;
    if (F.carrier == FilterPresentation::Carrier::FinitePowerset) {
        uint64_t cut = (F.n >= 64 ? ~uint64_t{0} : (uint64_t{1} << F.n) - 1);
        for (const auto& g : F.finite_generators) {
            uint64_t mask = 0;
            for (uint64_t x : g) mask |= uint64_t{1} << x;
            cut &= mask;
        }
        if (cut == 0) {
            report.verdict = Properness::Improper;
        } else {
            report.verdict = Properness::Proper;
            report.element_witness = static_cast<uint64_t>(std::countr_zero(cut));
        }
        return report;
    }

    auto outcome = find_cell(F);
    if (!outcome.found) {
        report.verdict = Properness::Improper;
        return report;
    }
    try {
        auto points = setcore::cell_witness(*F.family, outcome.cell, 1, searchBound);
        report.verdict = Properness::Proper;
        report.point_witness = points.at(0);
        report.cell = outcome.cell;
    } catch (const BudgetError&) {
        report.verdict = Properness::Inconclusive;
    } catch (const WidthExceeded&) {
        report.verdict = Properness::Inconclusive;
    }
    return report;
}

// --- extension -----------------------------------------------------------------------

Ultrafilter extend_ultrafilter_finite(const FilterPresentation& F) {
    if (F.carrier != FilterPresentation::Carrier::FinitePowerset)
        throw InvalidInput("extend_ultrafilter_finite needs a finite powerset carrier");
    auto report = is_proper(F, 0);
    if (report.verdict != Properness::Proper)
        throw ImproperFilter("the generators have empty intersection");
    Ultrafilter U;
    U.kind = Ultrafilter::Kind::Principal;
    U.point = *report.element_witness;
    return U;
}

Ultrafilter extend_ultrafilter_symbolic(const FilterPresentation& F, uint64_t searchBound) {
    auto outcome = find_cell(F);
    if (!outcome.found)
        throw ImproperFilter("no sign pattern satisfies every filter generator");
    auto points = setcore::cell_witness(*F.family, outcome.cell, 1, searchBound);
    Ultrafilter U;
    U.kind = Ultrafilter::Kind::CellBased;
    U.cell = outcome.cell;
    U.witness = points.at(0);
    return U;
}

proplogic::Assignment assignment_from_ultrafilter(const Ultrafilter& U,
                                                  const setcore::FamilySpec& family) {
    if (U.kind != Ultrafilter::Kind::CellBased)
        throw InvalidInput("assignment derivation needs a ground-space ultrafilter");
    proplogic::Assignment S;
    for (uint32_t g = 0; g < family.generators.size(); ++g)
        S[g] = setcore::indep_member(U.witness, family.generators[g]);
    return S;
}

// --- the compactness pipeline -----------------------------------------------------------

SolveResult compactness_solve(const std::vector<proplogic::FormulaPtr>& theory,
                              uint32_t width, uint64_t searchBound) {
    if (theory.empty()) throw InvalidInput("the theory must contain at least one formula");

    std::set<uint32_t> atoms;
    size_t arity = 0;
    for (const auto& f : theory) {
        auto sup = proplogic::support(*f);
        atoms.insert(sup.begin(), sup.end());
        arity = std::max(arity, proplogic::max_arity(*f));
    }
    uint32_t atom_count = atoms.empty() ? 0 : *atoms.rbegin() + 1;

    SolveResult result;
    result.effective_width = std::max<uint64_t>(
        {width, arity + 1, static_cast<uint64_t>(atoms.size()) + 1, 2});
    uint64_t bound = std::max<uint64_t>(searchBound, atom_count + 1);

    setcore::FamilySpec family;
    family.domain = setcore::BaseDomain::omega(result.effective_width);
    for (uint32_t g = 0; g < atom_count; ++g)
        family.generators.push_back(setcore::BaseSet::finite({g}));
    family.validate(bound);

    std::vector<SetExprPtr> images;
    images.reserve(theory.size());
    for (const auto& f : theory)
        images.push_back(proplogic::iota(*f, std::max<size_t>(atom_count, 1)));

    // Formulas with no atoms produce constant expressions; atomless theories
    // still need a carrier family, so keep a single dummy generator.
    if (family.generators.empty())
        family.generators.push_back(setcore::BaseSet::finite({0}));

    FilterPresentation F = FilterPresentation::symbolic(std::move(family), std::move(images));

    Ultrafilter U;
    try {
        U = extend_ultrafilter_symbolic(F, bound);
    } catch (const ImproperFilter&) {
        result.sat = false;
        return result;
    }

    result.sat = true;
    result.assignment = assignment_from_ultrafilter(U, *F.family);
    result.witness = U.witness;

    for (const auto& f : theory)
        if (!proplogic::evaluate(*f, result.assignment))
            throw std::logic_error("compactness pipeline produced a non-model");
    for (const auto& e : F.symbolic_generators)
        if (!proplogic::eval_setexpr(*F.family, *e, U.witness))
            throw std::logic_error("ultrafilter witness escaped a filter generator");
    return result;
}

}  // namespace fex::filters
