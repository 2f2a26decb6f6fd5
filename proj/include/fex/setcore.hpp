#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fex/errors.hpp"

namespace fex::setcore {

// The base domain: either {0,…,n−1} or all naturals.  `width` bounds the
// arity of every bounded-intersection/conjunction and the size of ground
// point supports (strictly: sizes stay < width).
struct BaseDomain {
    std::optional<uint64_t> finite_n;  // nullopt = unbounded naturals
    uint32_t width = 4;

    bool is_finite() const { return finite_n.has_value(); }
    bool contains(uint64_t x) const { return !finite_n || x < *finite_n; }

    static BaseDomain finite(uint64_t n, uint32_t width) {
        check_width(width);
        return BaseDomain{n, width};
    }
    static BaseDomain omega(uint32_t width) {
        check_width(width);
        return BaseDomain{std::nullopt, width};
    }
    static void check_width(uint32_t width) {
        if (width < 2) throw InvalidInput("width must be at least 2");
    }
};

// A subset of the base domain, in one of three shapes: explicit finite,
// complement of explicit finite, or one of a few closed-form builtins.
// Membership is total; enumeration is strictly increasing.
struct BaseSet {
    enum class Kind { Finite, Cofinite, Builtin };
    enum class Builtin { Evens, Odds, Mult, Interval };

    Kind kind = Kind::Finite;
    std::vector<uint64_t> elems;  // Finite: members; Cofinite: excluded (sorted, unique)
    Builtin builtin = Builtin::Evens;
    uint64_t k = 0;  // Mult: modulus; Interval: lower bound (inclusive)
    uint64_t b = 0;  // Interval: upper bound (exclusive)

    bool contains(uint64_t x) const;

    // Least member ≥ x, within the given domain; nullopt if none.
    std::optional<uint64_t> next_geq(uint64_t x, const BaseDomain& dom) const;

    std::string to_text() const;

    static BaseSet finite(std::vector<uint64_t> elems);
    static BaseSet cofinite(std::vector<uint64_t> excluded);
    static BaseSet evens() { return builtin_set(Builtin::Evens, 0, 0); }
    static BaseSet odds() { return builtin_set(Builtin::Odds, 0, 0); }
    static BaseSet mult(uint64_t k);
    static BaseSet interval(uint64_t a, uint64_t b);  // [a, b)

private:
    static BaseSet builtin_set(Builtin which, uint64_t k, uint64_t b);
};

// A point of the ground space: a small support X together with a trace
// Z ⊆ P(X).  Subsets are kept sorted; the trace is kept sorted by
// (size, lexicographic) and duplicate-free.
struct GroundPoint {
    std::vector<uint64_t> support;
    std::vector<std::vector<uint64_t>> trace;

    bool operator==(const GroundPoint&) const = default;
    std::string to_text() const;
};

// Canonical total order: (|support|, support lex, trace lex with each
// member compared by (size, lex)).
bool point_less(const GroundPoint& a, const GroundPoint& b);

// Validates sortedness/dedup/width and trace ⊆ P(support); throws InvalidInput.
void check_point(const GroundPoint& p, const BaseDomain& dom);

// An indexed family of named sets over a common domain.
struct FamilySpec {
    BaseDomain domain;
    std::vector<BaseSet> generators;

    const BaseSet& at(uint32_t index) const {
        if (index >= generators.size()) throw UnknownGenerator(index);
        return generators[index];
    }

    // Checks pairwise distinctness by exhibiting a difference below the
    // bound for every pair; throws NoDifferenceFound on failure.
    void validate(uint64_t searchBound) const;
};

// A sign pattern: a finite partial map generator index → {0,1}.
struct CellSpec {
    std::map<uint32_t, bool> signs;

    std::vector<uint32_t> positives() const;
    std::vector<uint32_t> negatives() const;
};

// --- membership and witnesses -------------------------------------------

// Does the point lie in the family member attached to A, i.e. is
// (A ∩ support) a member of the trace?
bool indep_member(const GroundPoint& p, const BaseSet& A);

// Least element of A △ B within the domain, scanning upward; throws
// NoDifferenceFound(searchBound) when the sets agree below the bound.
uint64_t least_difference(const BaseSet& A, const BaseSet& B, const BaseDomain& dom,
                          uint64_t searchBound);

// All elements of A △ B below the bound (and inside the domain).
std::vector<uint64_t> differences_below(const BaseSet& A, const BaseSet& B,
                                        const BaseDomain& dom, uint64_t searchBound);

// The one-element point ⟨{γ},{{γ}}⟩ separating the members attached to two
// distinct sets.
GroundPoint distinctness_witness(const BaseSet& A, const BaseSet& B, const BaseDomain& dom,
                                 uint64_t searchBound);

// A small X making the positive traces {A∩X} disjoint from the negative
// traces {B∩X}.  Exact (size, lex)-minimal over the harvested per-pair
// difference elements when the instance is small; otherwise the union of
// per-pair least differences (still separating, possibly larger).
std::vector<uint64_t> separating_support(const std::vector<const BaseSet*>& positives,
                                         const std::vector<const BaseSet*>& negatives,
                                         const BaseDomain& dom, uint64_t searchBound);

// `count` distinct points, each inside every positive member and outside
// every negative member of the cell named by `s`; deterministic order.
std::vector<GroundPoint> cell_witness(const FamilySpec& family, const CellSpec& s,
                                      uint64_t count, uint64_t searchBound);

// --- exhaustive enumeration ----------------------------------------------

inline constexpr uint64_t kDefaultEnumCap = 1u << 22;

// Every valid point with support ⊆ {0,…,truncation−1} (intersected with a
// finite domain's range), in canonical order.
std::vector<GroundPoint> enumerate_ground(const BaseDomain& dom, uint64_t truncation,
                                          uint64_t cap = kDefaultEnumCap);

}  // namespace fex::setcore
