#include "fex/setcore.hpp"

#include <algorithm>
#include <stdexcept>

namespace fex::setcore {

// --- BaseSet ---------------------------------------------------------------

BaseSet BaseSet::finite(std::vector<uint64_t> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    BaseSet s;
    s.kind = Kind::Finite;
    s.elems = std::move(elems);
    return s;
}

BaseSet BaseSet::cofinite(std::vector<uint64_t> excluded) {
    std::sort(excluded.begin(), excluded.end());
    excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
    BaseSet s;
    s.kind = Kind::Cofinite;
    s.elems = std::move(excluded);
    return s;
}

BaseSet BaseSet::builtin_set(Builtin which, uint64_t k, uint64_t b) {
    BaseSet s;
    s.kind = Kind::Builtin;
    s.builtin = which;
    s.k = k;
    s.b = b;
    return s;
}

BaseSet BaseSet::mult(uint64_t k) {
    if (k == 0) throw InvalidInput("(mult k) requires k >= 1");
    return builtin_set(Builtin::Mult, k, 0);
}

BaseSet BaseSet::interval(uint64_t a, uint64_t b) {
    return builtin_set(Builtin::Interval, a, b);
}

bool BaseSet::contains(uint64_t x) const {
    switch (kind) {
        case Kind::Finite:
            return std::binary_search(elems.begin(), elems.end(), x);
        case Kind::Cofinite:
            return !std::binary_search(elems.begin(), elems.end(), x);
        case Kind::Builtin:
            switch (builtin) {
                case Builtin::Evens: return x % 2 == 0;
                case Builtin::Odds: return x % 2 == 1;
                case Builtin::Mult: return x % k == 0;
                case Builtin::Interval: return k <= x && x < b;
            }
    }
    return false;
}

std::optional<uint64_t> BaseSet::next_geq(uint64_t x, const BaseDomain& dom) const {
    std::optional<uint64_t> result;
    switch (kind) {
        case Kind::Finite: {
            auto it = std::lower_bound(elems.begin(), elems.end(), x);
            if (it != elems.end()) result = *it;
            break;
        }
        case Kind::Cofinite: {
            uint64_t y = x;
            while (std::binary_search(elems.begin(), elems.end(), y)) ++y;
            result = y;
            break;
        }
        case Kind::Builtin:
            switch (builtin) {
                case Builtin::Evens: result = x + (x % 2); break;
                case Builtin::Odds: result = x % 2 == 1 ? x : x + 1; break;
                case Builtin::Mult: result = (x + k - 1) / k * k; break;
                case Builtin::Interval: {
                    uint64_t y = std::max(x, k);
                    if (y < b) result = y;
                    break;
                }
            }
            break;
    }
    if (result && !dom.contains(*result)) return std::nullopt;
    return result;
}

std::string BaseSet::to_text() const {
    auto braces = [](const std::vector<uint64_t>& xs) {
        std::string out = "{";
        for (size_t i = 0; i < xs.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(xs[i]);
        }
        return out + "}";
    };
    switch (kind) {
        case Kind::Finite:
            return braces(elems);
        case Kind::Cofinite:
            return "(co " + braces(elems) + ")";
        case Kind::Builtin:
            switch (builtin) {
                case Builtin::Evens: return "(builtin evens)";
                case Builtin::Odds: return "(builtin odds)";
                case Builtin::Mult: return "(builtin (mult " + std::to_string(k) + "))";
                case Builtin::Interval:
                    return "(builtin (interval " + std::to_string(k) + " " + std::to_string(b) + "))";
            }
    }
    return "{}";
}

// --- GroundPoint -----------------------------------------------------------

namespace {

bool subset_less(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

bool sorted_unique(const std::vector<uint64_t>& xs) {
    for (size_t i = 1; i < xs.size(); ++i)
        if (xs[i - 1] >= xs[i]) return false;
    return true;
}

}  // namespace

std::string GroundPoint::to_text() const {
    auto braces = [](const std::vector<uint64_t>& xs) {
        std::string out = "{";
        for (size_t i = 0; i < xs.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(xs[i]);
        }
        return out + "}";
    };
    std::string out = "(pt " + braces(support) + " (";
    for (size_t i = 0; i < trace.size(); ++i) {
        if (i) out += ' ';
        out += braces(trace[i]);
    }
    return out + "))";
}

bool point_less(const GroundPoint& a, const GroundPoint& b) {
    if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    if (a.support != b.support) return a.support < b.support;
    return std::lexicographical_compare(a.trace.begin(), a.trace.end(),
                                        b.trace.begin(), b.trace.end(), subset_less);
}

void check_point(const GroundPoint& p, const BaseDomain& dom) {
    if (!sorted_unique(p.support))
        throw InvalidInput("point support must be sorted and duplicate-free");
    if (p.support.size() >= dom.width)
        throw InvalidInput("point support size must stay below the width");
    for (uint64_t x : p.support)
        if (!dom.contains(x)) throw InvalidInput("point support leaves the base domain");
    for (size_t i = 0; i < p.trace.size(); ++i) {
        const auto& member = p.trace[i];
        if (!sorted_unique(member))
            throw InvalidInput("trace member must be sorted and duplicate-free");
        if (!std::includes(p.support.begin(), p.support.end(), member.begin(), member.end()))
            throw InvalidInput("trace member must be a subset of the support");
        if (i > 0 && !subset_less(p.trace[i - 1], member))
            throw InvalidInput("trace must be sorted by (size, lex) and duplicate-free");
    }
}

// --- FamilySpec / CellSpec ---------------------------------------------------

void FamilySpec::validate(uint64_t searchBound) const {
    for (size_t i = 0; i < generators.size(); ++i)
        for (size_t j = i + 1; j < generators.size(); ++j)
            least_difference(generators[i], generators[j], domain, searchBound);
}

std::vector<uint32_t> CellSpec::positives() const {
    std::vector<uint32_t> out;
    for (const auto& [index, sign] : signs)
        if (sign) out.push_back(index);
    return out;
}

std::vector<uint32_t> CellSpec::negatives() const {
    std::vector<uint32_t> out;
    for (const auto& [index, sign] : signs)
        if (!sign) out.push_back(index);
    return out;
}

// --- membership and witnesses -----------------------------------------------

bool indep_member(const GroundPoint& p, const BaseSet& A) {
    std::vector<uint64_t> cut;
    for (uint64_t x : p.support)
        if (A.contains(x)) cut.push_back(x);
    return std::binary_search(p.trace.begin(), p.trace.end(), cut, subset_less);
}

uint64_t least_difference(const BaseSet& A, const BaseSet& B, const BaseDomain& dom,
                          uint64_t searchBound) {
    uint64_t limit = searchBound;
    if (dom.finite_n) limit = std::min<uint64_t>(limit, *dom.finite_n);
    for (uint64_t x = 0; x < limit; ++x)
        if (A.contains(x) != B.contains(x)) return x;
    throw NoDifferenceFound(searchBound);
}

std::vector<uint64_t> differences_below(const BaseSet& A, const BaseSet& B,
                                        const BaseDomain& dom, uint64_t searchBound) {
    uint64_t limit = searchBound;
    if (dom.finite_n) limit = std::min<uint64_t>(limit, *dom.finite_n);
    std::vector<uint64_t> out;
    for (uint64_t x = 0; x < limit; ++x)
        if (A.contains(x) != B.contains(x)) out.push_back(x);
    return out;
}

GroundPoint distinctness_witness(const BaseSet& A, const BaseSet& B, const BaseDomain& dom,
                                 uint64_t searchBound) {
    uint64_t gamma = least_difference(A, B, dom, searchBound);
    GroundPoint p;
    p.support = {gamma};
    p.trace = {{gamma}};
    return p;
}

namespace {

// Exact search thresholds for the minimal separating support; beyond them we
// fall back to the (always separating, not always minimal) union of per-pair
// least differences.
constexpr size_t kExactPairLimit = 24;
constexpr size_t kExactUniverseLimit = 20;

bool hits_all(const std::vector<uint64_t>& X, const std::vector<std::vector<uint64_t>>& pairSets) {
    for (const auto& ws : pairSets) {
        bool hit = false;
        for (uint64_t w : ws)
            if (std::binary_search(X.begin(), X.end(), w)) { hit = true; break; }
        if (!hit) return false;
    }
    return true;
}

// First k-subset (by lex over the sorted universe) hitting every pair set.
std::optional<std::vector<uint64_t>> first_hitting_subset(
    const std::vector<uint64_t>& universe, size_t k,
    const std::vector<std::vector<uint64_t>>& pairSets) {
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > universe.size()) return std::nullopt;
    while (true) {
        std::vector<uint64_t> X(k);
        for (size_t i = 0; i < k; ++i) X[i] = universe[idx[i]];
        if (hits_all(X, pairSets)) return X;
        // advance to the next combination in lex order
        size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + universe.size() - k) {
                ++idx[i];
                for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return std::nullopt;
        }
        if (k == 0) return std::nullopt;
    }
}

}  // namespace

std::vector<uint64_t> separating_support(const std::vector<const BaseSet*>& positives,
                                         const std::vector<const BaseSet*>& negatives,
                                         const BaseDomain& dom, uint64_t searchBound) {
    if (positives.empty() || negatives.empty()) return {};

    std::vector<std::vector<uint64_t>> pairSets;
    pairSets.reserve(positives.size() * negatives.size());
    for (const BaseSet* A : positives)
        for (const BaseSet* B : negatives) {
            auto ws = differences_below(*A, *B, dom, searchBound);
            if (ws.empty()) throw NoDifferenceFound(searchBound);
            pairSets.push_back(std::move(ws));
        }

    std::vector<uint64_t> X;
    std::vector<uint64_t> universe;
    for (const auto& ws : pairSets) universe.insert(universe.end(), ws.begin(), ws.end());
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

    if (pairSets.size() <= kExactPairLimit && universe.size() <= kExactUniverseLimit) {
        for (size_t k = 1; k <= universe.size(); ++k) {
            if (auto found = first_hitting_subset(universe, k, pairSets)) {
                X = std::move(*found);
                break;
            }
        }
    } else {
        for (const auto& ws : pairSets) X.push_back(ws.front());
        std::sort(X.begin(), X.end());
        X.erase(std::unique(X.begin(), X.end()), X.end());
    }

    if (X.size() >= dom.width)
        throw WidthExceeded("separating support of size " + std::to_string(X.size()) +
                            " does not fit below width " + std::to_string(dom.width));
    return X;
}

namespace {

// Fresh elements of the domain outside `base`, ascending; nullopt when the
// (finite) domain is exhausted.
std::optional<uint64_t> nth_fresh(const BaseDomain& dom, const std::vector<uint64_t>& base,
                                  uint64_t n) {
    uint64_t x = 0;
    uint64_t skipped = 0;
    while (dom.contains(x)) {
        if (!std::binary_search(base.begin(), base.end(), x)) {
            if (skipped == n) return x;
            ++skipped;
        }
        ++x;
    }
    return std::nullopt;
}

}  // namespace

std::vector<GroundPoint> cell_witness(const FamilySpec& family, const CellSpec& s,
                                      uint64_t count, uint64_t searchBound) {
    std::vector<const BaseSet*> pos, neg;
    for (const auto& [index, sign] : s.signs) {
        const BaseSet* g = &family.at(index);
        (sign ? pos : neg).push_back(g);
    }

    std::vector<uint64_t> X0 = separating_support(pos, neg, family.domain, searchBound);

    if (X0.size() + 1 >= family.domain.width && count > 1 && !family.domain.is_finite())
        throw WidthExceeded("separating support leaves no room below the width for " +
                            std::to_string(count) + " distinct witnesses");

    std::vector<GroundPoint> out;
    // Supports are X0 plus a finite set of fresh elements; the extension sets
    // are walked in binary-counting order over the ascending fresh elements,
    // which yields pairwise-distinct supports deterministically.
    for (uint64_t pattern = 0; out.size() < count; ++pattern) {
        std::vector<uint64_t> X = X0;
        uint64_t bits = pattern;
        for (uint64_t pos_bit = 0; bits != 0; ++pos_bit, bits >>= 1) {
            if (!(bits & 1)) continue;
            auto fresh = nth_fresh(family.domain, X0, pos_bit);
            if (!fresh)
                throw ExhaustedSupports("only " + std::to_string(out.size()) + " of " +
                                        std::to_string(count) + " requested cell witnesses exist");
            X.push_back(*fresh);
        }
        std::sort(X.begin(), X.end());
        if (X.size() >= family.domain.width) continue;

        GroundPoint p;
        p.support = std::move(X);
        for (const BaseSet* A : pos) {
            std::vector<uint64_t> cut;
            for (uint64_t x : p.support)
                if (A->contains(x)) cut.push_back(x);
            p.trace.push_back(std::move(cut));
        }
        std::sort(p.trace.begin(), p.trace.end(), subset_less);
        p.trace.erase(std::unique(p.trace.begin(), p.trace.end()), p.trace.end());

        // Re-check the point against every referenced generator.
        for (const auto& [index, sign] : s.signs)
            if (indep_member(p, family.at(index)) != sign)
                throw std::logic_error("cell witness failed its membership re-check");
        out.push_back(std::move(p));
    }
    return out;
}

// --- enumeration -------------------------------------------------------------

std::vector<GroundPoint> enumerate_ground(const BaseDomain& dom, uint64_t truncation,
                                          uint64_t cap) {
    uint64_t base = truncation;
    if (dom.finite_n) base = std::min<uint64_t>(base, *dom.finite_n);

    // Pre-count to respect the cap: Σ over supports S of 2^(2^|S|).
    uint64_t total = 0;
    uint64_t maxSupport = std::min<uint64_t>(base, dom.width - 1);
    {
        // binomial(base, k) supports of size k
        std::vector<uint64_t> binom(maxSupport + 1, 0);
        binom[0] = 1;
        for (uint64_t row = 1; row <= base; ++row)
            for (uint64_t k = std::min(row, maxSupport); k > 0; --k)
                binom[k] += binom[k - 1];
        for (uint64_t k = 0; k <= maxSupport; ++k) {
            if ((uint64_t{1} << k) >= 40)
                throw SizeOverflow("ground enumeration with supports of size " +
                                   std::to_string(k) + " is out of reach");
            uint64_t tracesPer = uint64_t{1} << (uint64_t{1} << k);
            if (binom[k] != 0 && tracesPer > cap / binom[k])
                throw SizeOverflow("ground enumeration exceeds the configured cap");
            total += binom[k] * tracesPer;
            if (total > cap)
                throw SizeOverflow("ground enumeration exceeds the configured cap");
        }
    }

    std::vector<GroundPoint> out;
    out.reserve(total);

    // supports of size k over {0..base−1}, lex order within each size
    for (uint64_t k = 0; k <= maxSupport; ++k) {
        std::vector<uint64_t> idx(k);
        for (uint64_t i = 0; i < k; ++i) idx[i] = i;
        bool more = k <= base;
        while (more) {
            std::vector<uint64_t> support(idx.begin(), idx.end());

            // all subsets of support, in (size, lex) order
            std::vector<std::vector<uint64_t>> subsets;
            subsets.reserve(uint64_t{1} << k);
            for (uint64_t m = 0; m < (uint64_t{1} << k); ++m) {
                std::vector<uint64_t> sub;
                for (uint64_t i = 0; i < k; ++i)
                    if (m & (uint64_t{1} << i)) sub.push_back(support[i]);
                subsets.push_back(std::move(sub));
            }
            std::sort(subsets.begin(), subsets.end(), subset_less);

            // all traces = subsets of `subsets`, sorted canonically
            uint64_t traceCount = uint64_t{1} << subsets.size();
            std::vector<std::vector<std::vector<uint64_t>>> traces;
            traces.reserve(traceCount);
            for (uint64_t t = 0; t < traceCount; ++t) {
                std::vector<std::vector<uint64_t>> trace;
                for (size_t j = 0; j < subsets.size(); ++j)
                    if (t & (uint64_t{1} << j)) trace.push_back(subsets[j]);
                traces.push_back(std::move(trace));
            }
            std::sort(traces.begin(), traces.end(),
                      [](const auto& a, const auto& b) {
                          return std::lexicographical_compare(a.begin(), a.end(),
                                                              b.begin(), b.end(), subset_less);
                      });
            for (auto& trace : traces) {
                GroundPoint p;
                p.support = support;
                p.trace = std::move(trace);
                out.push_back(std::move(p));
            }

            // next combination
            if (k == 0) break;
            size_t i = k;
            more = false;
            while (i > 0) {
                --i;
                if (idx[i] != i + base - k) {
                    ++idx[i];
                    for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                    more = true;
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace fex::setcore
