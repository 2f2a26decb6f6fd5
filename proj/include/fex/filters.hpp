#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fex/proplogic.hpp"
#include "fex/setcore.hpp"

namespace fex::filters {

// A width-complete filter, presented by generators over one of two carriers:
// the full powerset of {0,…,n−1}, or the subalgebra named by expressions
// over a ground-space family.
struct FilterPresentation {
    enum class Carrier { FinitePowerset, Symbolic };

    Carrier carrier = Carrier::FinitePowerset;
    uint64_t n = 0;                                        // FinitePowerset
    std::optional<setcore::FamilySpec> family;             // Symbolic
    std::vector<std::vector<uint64_t>> finite_generators;  // sorted subsets of {0..n−1}
    std::vector<proplogic::SetExprPtr> symbolic_generators;
    uint32_t width = 4;

    static FilterPresentation finite_powerset(uint64_t n,
                                              std::vector<std::vector<uint64_t>> generators,
                                              uint32_t width);
    static FilterPresentation symbolic(setcore::FamilySpec family,
                                       std::vector<proplogic::SetExprPtr> generators);
};

// An ultrafilter extending a presentation: principal at a carrier point
// (finite powersets) or given by a sign pattern plus a materialized ground
// point of that cell (symbolic carriers).  Membership for symbolic carriers
// is evaluation at the witness.
struct Ultrafilter {
    enum class Kind { Principal, CellBased };
    Kind kind = Kind::Principal;
    uint64_t point = 0;            // Principal
    setcore::CellSpec cell;        // CellBased
    setcore::GroundPoint witness;  // CellBased

    // Finite-powerset membership: X ∈ U iff the principal point lies in X.
    bool contains_subset(const std::vector<uint64_t>& X) const;
};

// Symbolic membership test: whether the set named by the expression belongs
// to the ultrafilter.
bool ultrafilter_contains(const Ultrafilter& U, const setcore::FamilySpec& family,
                          const proplogic::SetExpr& e);

enum class Properness { Proper, Improper, Inconclusive };

struct ProperReport {
    Properness verdict = Properness::Inconclusive;
    std::optional<uint64_t> element_witness;             // finite carrier
    std::optional<setcore::GroundPoint> point_witness;   // symbolic carrier
    std::optional<setcore::CellSpec> cell;               // symbolic carrier
};

// Finite carrier: intersect the generators, proper iff nonempty.  Symbolic
// carrier: search for a sign pattern making every generator true; a pattern
// yields a materialized point (Proper), provable absence of a pattern means
// the intersection is empty (Improper), and witness-construction budget
// failures are reported Inconclusive.
ProperReport is_proper(const FilterPresentation& F, uint64_t searchBound);

// Principal ultrafilter at the least point of the generators' intersection.
Ultrafilter extend_ultrafilter_finite(const FilterPresentation& F);

// First satisfying sign pattern in sign-lex order (after propagation), with
// a cell witness materialized for it.
Ultrafilter extend_ultrafilter_symbolic(const FilterPresentation& F, uint64_t searchBound);

// The truth assignment the ultrafilter induces on the named generators:
// S(γ) = 1 iff the member attached to A_γ belongs to U.
proplogic::Assignment assignment_from_ultrafilter(const Ultrafilter& U,
                                                  const setcore::FamilySpec& family);

// --- the compactness pipeline ------------------------------------------------

struct SolveResult {
    bool sat = false;
    proplogic::Assignment assignment;                   // total on named atoms when sat
    std::optional<setcore::GroundPoint> witness;        // the ultrafilter's point when sat
    uint32_t effective_width = 0;
};

inline constexpr uint64_t kDefaultSearchBound = 64;

// Builds the filter generated by the formulas' set images over a fresh
// one-generator-per-atom family, extends it to an ultrafilter, and reads the
// assignment back off.  The width and bound are raised automatically when the
// theory needs more room than configured.
SolveResult compactness_solve(const std::vector<proplogic::FormulaPtr>& theory,
                              uint32_t width, uint64_t searchBound = kDefaultSearchBound);

}  // namespace fex::filters
