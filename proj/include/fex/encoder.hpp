#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fex/filters.hpp"
#include "fex/henkin.hpp"
#include "fex/proplogic.hpp"

namespace fex::encoder {

// A filter-extension problem compiled to logic: one constant a<mask> per
// field member, one unary predicate U, and three axiom schemes whose models
// are exactly the width-complete ultrafilters extending the filter.  The
// same axioms are kept in two forms: first-order sentences (solvable by the
// henkin pipeline) and propositional formulas where atom i stands for
// U(a_{field[i]}).
struct FilterTheory {
    uint64_t n = 0;              // base set {0,…,n−1}
    uint32_t width = 2;          // bounds the conjunctions in scheme (2)
    std::vector<uint64_t> field; // subset masks, sorted ascending
    std::map<uint64_t, uint32_t> index_of;  // mask → position in `field`
    uint64_t core = 0;           // intersection of the generators
    std::vector<uint64_t> members;          // field members containing the core

    std::vector<henkin::FOFormulaPtr> sentences;
    std::vector<proplogic::FormulaPtr> prop_axioms;
    std::vector<std::string> labels;        // parallel to both axiom lists

    filters::FilterPresentation origin;

    static std::string constant_name(uint64_t mask);  // "a" + decimal mask
};

// Compiles a finite-powerset presentation.  The field defaults to the full
// powerset (n ≤ 4); larger bases need an explicit subfield, which must be a
// Boolean subalgebra given as sorted subset masks.
FilterTheory encode_filter_extension(const filters::FilterPresentation& F, uint32_t width,
                                     std::vector<uint64_t> field = {});

// An ultrafilter read off a model of a FilterTheory.  `atom` is the least
// member under inclusion (an atom of the field); the ultrafilter is principal
// at that atom's least element.
struct DecodedUltrafilter {
    uint64_t point = 0;
    uint64_t atom = 0;
    std::vector<uint64_t> members;  // true field members, sorted ascending
    filters::Ultrafilter ultra;
};

// `holds` maps every field mask to the truth value of U(a_mask).  Verifies
// the scheme postconditions (members present, upward closure, pairwise
// intersections when width ≥ 3, exactly one of each complement pair) before
// reading the ultrafilter off; violations raise NotAModel naming the axiom.
DecodedUltrafilter decode_ultrafilter(const FilterTheory& T,
                                      const std::map<uint64_t, bool>& holds);

std::map<uint64_t, bool> holds_from_assignment(const FilterTheory& T,
                                               const proplogic::Assignment& S);
std::map<uint64_t, bool> holds_from_structure(const FilterTheory& T,
                                              const henkin::Structure& M);

struct RoundtripReport {
    bool sat = false;
    uint64_t prop_point = 0;       // decoded via compactness_solve on the propositional form
    uint64_t fo_point = 0;         // decoded via the henkin pipeline on the sentences
    bool paths_agree = false;      // both solvers picked the same ultrafilter
    bool extends_filter = false;   // both decodes contain every encoded member
    bool matches_direct = false;   // both points lie in the generators' intersection
};

// encode → solve both ways → decode → compare against direct extension.
RoundtripReport roundtrip_check(const filters::FilterPresentation& F,
                                uint64_t searchBound = filters::kDefaultSearchBound);

}  // namespace fex::encoder
