#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fex/rng.hpp"
#include "fex/setcore.hpp"

namespace fex::proplogic {

// Propositional formula over generator atoms a_γ.  Connective arities are
// width-bounded by the operations that consume formulas, not by the AST.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Atom, Not, And, Or };
    Kind kind = Kind::Atom;
    uint32_t atom = 0;                  // Kind::Atom
    std::vector<FormulaPtr> children;   // Not (1) / And / Or
};

FormulaPtr mk_atom(uint32_t gamma);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(std::vector<FormulaPtr> children);
FormulaPtr mk_or(std::vector<FormulaPtr> children);

std::string to_text(const Formula& f);

// Partial truth assignment, generator index → {0,1}.
using Assignment = std::map<uint32_t, bool>;

// Symbolic Boolean expression over the family's generators.
struct SetExpr;
using SetExprPtr = std::shared_ptr<const SetExpr>;

struct SetExpr {
    enum class Kind { Gen, Complement, Intersect, Union };
    Kind kind = Kind::Gen;
    uint32_t gen = 0;
    std::vector<SetExprPtr> children;
};

SetExprPtr mk_gen(uint32_t gamma);
SetExprPtr mk_complement(SetExprPtr e);
SetExprPtr mk_intersect(std::vector<SetExprPtr> children);
SetExprPtr mk_union(std::vector<SetExprPtr> children);

std::string to_text(const SetExpr& e);

// --- syntactic helpers -----------------------------------------------------

// Atom indices occurring in the formula, ascending.
std::vector<uint32_t> support(const Formula& f);

// Generator indices occurring in the expression, ascending.
std::vector<uint32_t> mentioned_generators(const SetExpr& e);

// Largest connective arity (for width validation).
size_t max_arity(const Formula& f);
size_t max_arity(const SetExpr& e);

void check_arity(const Formula& f, uint32_t width);

// --- semantics ---------------------------------------------------------------

// Truth-functional evaluation; and() is 1, or() is 0.  Throws UnboundAtom
// when the formula mentions an atom outside the assignment.
bool evaluate(const Formula& f, const Assignment& s);

// Pointwise semantics of an expression at a ground point: a generator
// evaluates via indep_member, the connectives Boolean-wise; isect() is true
// (the whole-ground-set convention), union() false.
bool eval_setexpr(const setcore::FamilySpec& family, const SetExpr& e,
                  const setcore::GroundPoint& p);

// The structural embedding of formulas into the set algebra: atom ↦
// generator, not ↦ complement, and ↦ intersect, or ↦ union.
SetExprPtr iota(const Formula& f, size_t generator_count);

// The cell named by a sign pattern: positives intersected minus the
// negatives; the empty pattern names the whole ground set.
SetExprPtr cell_of(const Assignment& s);

// --- exhaustive checks ---------------------------------------------------------

struct IotaReport {
    bool holds = true;
    std::optional<setcore::GroundPoint> counterexample;
    uint64_t points_checked = 0;
};

// Pointwise comparison of iota(φ) against the union of the cells of the
// satisfying assignments over Γ, across the whole enumerated ground space.
IotaReport verify_iota_identity(const setcore::FamilySpec& family, const Formula& f,
                                const std::vector<uint32_t>& gamma, uint64_t truncation,
                                uint64_t cap = setcore::kDefaultEnumCap);

struct PartitionReport {
    bool disjoint = true;
    bool covers = true;
    bool trace_pattern_ok = true;   // each point lies in the cell of its own trace pattern
    std::vector<uint64_t> cell_sizes;  // indexed by sign mask over gamma (bit i = gamma[i])
    uint64_t total = 0;
};

// Checks that the 2^|Γ| cells partition the enumerated ground space.
PartitionReport partition_check(const setcore::FamilySpec& family,
                                const std::vector<uint32_t>& gamma, uint64_t truncation,
                                uint64_t cap = setcore::kDefaultEnumCap);

// --- deterministic random formulas ---------------------------------------------

struct RandomFormulaParams {
    uint32_t max_depth = 5;
    uint32_t atom_count = 6;
    uint32_t max_arity = 3;
};

FormulaPtr random_formula(Rng& rng, const RandomFormulaParams& params);

}  // namespace fex::proplogic
