#include "fex/encoder.hpp"

#include <algorithm>
#include <bit>

#include "fex/errors.hpp"

namespace fex::encoder {

namespace {

std::string mask_text(uint64_t mask) {
    std::string out = "{";
    bool first = true;
    for (uint64_t i = 0; i < 64; ++i)
        if ((mask >> i) & 1) {
            if (!first) out += ' ';
            out += std::to_string(i);
            first = false;
        }
    return out + "}";
}

uint64_t mask_of(const std::vector<uint64_t>& subset) {
    uint64_t mask = 0;
    for (uint64_t x : subset) mask |= uint64_t{1} << x;
    return mask;
}

void validate_field(const std::vector<uint64_t>& field, uint64_t n) {
    const uint64_t full = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
    if (!std::is_sorted(field.begin(), field.end()) ||
        std::adjacent_find(field.begin(), field.end()) != field.end())
        throw InvalidInput("subfield masks must be sorted and distinct");
    auto has = [&field](uint64_t m) {
        return std::binary_search(field.begin(), field.end(), m);
    };
    if (!has(0) || !has(full))
        throw InvalidInput("a subfield must contain the empty set and the whole base");
    for (uint64_t Y : field) {
        if (Y & ~full) throw InvalidInput("subfield member " + mask_text(Y) + " leaves the base");
        if (!has(full & ~Y))
            throw InvalidInput("subfield is not closed under complement at " + mask_text(Y));
    }
    for (uint64_t Y : field)
        for (uint64_t Z : field)
            if (!has(Y & Z))
                throw InvalidInput("subfield is not closed under intersection at " +
                                   mask_text(Y) + ", " + mask_text(Z));
}

henkin::FOFormulaPtr fo_U(uint64_t mask) {
    return henkin::fo_rel("U", {henkin::mk_const(FilterTheory::constant_name(mask))});
}

}  // namespace

std::string FilterTheory::constant_name(uint64_t mask) { return "a" + std::to_string(mask); }

FilterTheory encode_filter_extension(const filters::FilterPresentation& F, uint32_t width,
                                     std::vector<uint64_t> field) {
    if (F.carrier != filters::FilterPresentation::Carrier::FinitePowerset)
        throw InvalidInput("encoding needs a finite-powerset carrier");
    if (width < 2) throw InvalidInput("width must be at least 2");
    const uint64_t n = F.n;

    FilterTheory T;
    T.n = n;
    T.width = width;
    T.origin = F;

    if (field.empty()) {
        constexpr uint64_t kDefaultFieldBase = 4;  // 2^4 = 16 constants
        if (n > kDefaultFieldBase)
            throw FieldTooLarge("the full powerset of " + std::to_string(n) +
                                " elements exceeds the default field; pass an explicit subfield");
        for (uint64_t m = 0; m < (uint64_t{1} << n); ++m) field.push_back(m);
    } else {
        constexpr size_t kFieldCap = 64;
        if (n > 62) throw FieldTooLarge("base sets beyond 62 elements are not supported");
        if (field.size() > kFieldCap)
            throw FieldTooLarge("subfields are capped at " + std::to_string(kFieldCap) +
                                " members, got " + std::to_string(field.size()));
        validate_field(field, n);
    }
    T.field = std::move(field);
    for (uint32_t i = 0; i < T.field.size(); ++i) T.index_of[T.field[i]] = i;

    const uint64_t full = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
    uint64_t core = full;
    for (const auto& g : F.finite_generators) {
        uint64_t m = mask_of(g);
        if (!T.index_of.count(m))
            throw InvalidInput("generator " + mask_text(m) + " is not a field member");
        core &= m;
    }
    if (core == 0) throw ImproperFilter("the generators have empty intersection");
    T.core = core;

    for (uint64_t Y : T.field)
        if ((Y & core) == core) T.members.push_back(Y);

    auto prop_U = [&T](uint64_t mask) { return proplogic::mk_atom(T.index_of.at(mask)); };
    auto emit = [&T](henkin::FOFormulaPtr fo, proplogic::FormulaPtr prop, std::string label) {
        T.sentences.push_back(std::move(fo));
        T.prop_axioms.push_back(std::move(prop));
        T.labels.push_back(std::move(label));
    };

    // scheme (1): the filter's members hold
    for (uint64_t Y : T.members) emit(fo_U(Y), prop_U(Y), "member " + mask_text(Y));

    // scheme (2), single-set steps: monotonicity along cover edges of the field
    for (uint64_t X : T.field)
        for (uint64_t Y : T.field) {
            if (X == Y || (X & Y) != X) continue;  // need X ⊂ Y
            bool covered = false;
            for (uint64_t Z : T.field)
                if (Z != X && Z != Y && (X & Z) == X && (Z & Y) == Z) {
                    covered = true;
                    break;
                }
            if (covered) continue;
            emit(henkin::fo_or({henkin::fo_not(fo_U(X)), fo_U(Y)}),
                 proplogic::mk_or({proplogic::mk_not(prop_U(X)), prop_U(Y)}),
                 "mono " + mask_text(X) + " -> " + mask_text(Y));
        }

    // scheme (2), two-set steps: pairwise intersections (width permitting);
    // longer conjunctions are subsumed by chaining these
    if (width >= 3) {
        for (size_t i = 0; i < T.field.size(); ++i)
            for (size_t j = i + 1; j < T.field.size(); ++j) {
                uint64_t X = T.field[i], Z = T.field[j], I = X & Z;
                if (I == X || I == Z) continue;  // monotonicity already covers these
                emit(henkin::fo_or({henkin::fo_not(fo_U(X)), henkin::fo_not(fo_U(Z)), fo_U(I)}),
                     proplogic::mk_or({proplogic::mk_not(prop_U(X)),
                                       proplogic::mk_not(prop_U(Z)), prop_U(I)}),
                     "isect " + mask_text(X) + ", " + mask_text(Z));
            }
    }

    // scheme (3): exactly one of each complement pair, emitted once per pair
    for (uint64_t Y : T.field) {
        uint64_t C = full & ~Y;
        if (C < Y) continue;
        emit(henkin::fo_and({henkin::fo_or({henkin::fo_not(fo_U(Y)), henkin::fo_not(fo_U(C))}),
                             henkin::fo_or({fo_U(Y), fo_U(C)})}),
             proplogic::mk_and(
                 {proplogic::mk_or({proplogic::mk_not(prop_U(Y)), proplogic::mk_not(prop_U(C))}),
                  proplogic::mk_or({prop_U(Y), prop_U(C)})}),
             "complement " + mask_text(Y));
    }

    return T;
}

DecodedUltrafilter decode_ultrafilter(const FilterTheory& T,
                                      const std::map<uint64_t, bool>& holds) {
    auto truth = [&](uint64_t mask) {
        auto it = holds.find(mask);
        if (it == holds.end())
            throw NotAModel("no truth value for field member " + mask_text(mask));
        return it->second;
    };

    for (uint64_t Y : T.members)
        if (!truth(Y)) throw NotAModel("member " + mask_text(Y) + " is false");
    for (uint64_t X : T.field)
        for (uint64_t Y : T.field)
            if ((X & Y) == X && truth(X) && !truth(Y))
                throw NotAModel("mono " + mask_text(X) + " -> " + mask_text(Y) + " is violated");
    if (T.width >= 3)
        for (uint64_t X : T.field)
            for (uint64_t Y : T.field)
                if (truth(X) && truth(Y) && !truth(X & Y))
                    throw NotAModel("isect " + mask_text(X) + ", " + mask_text(Y) +
                                    " is violated");
    const uint64_t full = T.n == 64 ? ~uint64_t{0} : (uint64_t{1} << T.n) - 1;
    for (uint64_t Y : T.field)
        if (truth(Y) == truth(full & ~Y))
            throw NotAModel("complement " + mask_text(Y) + " is violated");

    DecodedUltrafilter D;
    uint64_t atom = full;
    for (uint64_t Y : T.field)
        if (truth(Y)) {
            D.members.push_back(Y);
            atom &= Y;
        }
    if (atom == 0 || !T.index_of.count(atom) ||
        !std::binary_search(D.members.begin(), D.members.end(), atom))
        throw NotAModel("the true members have no least element; a width of at least 3 is "
                        "needed to force intersection closure");
    for (uint64_t Y : T.field)
        if (truth(Y) != ((Y & atom) == atom))
            throw std::logic_error("decoded member set is not generated by its atom");

    D.atom = atom;
    D.point = static_cast<uint64_t>(std::countr_zero(atom));
    D.ultra.kind = filters::Ultrafilter::Kind::Principal;
    D.ultra.point = D.point;
    return D;
}

std::map<uint64_t, bool> holds_from_assignment(const FilterTheory& T,
                                               const proplogic::Assignment& S) {
    std::map<uint64_t, bool> holds;
    for (const auto& [mask, index] : T.index_of) {
        auto it = S.find(index);
        holds[mask] = it != S.end() && it->second;
    }
    return holds;
}

std::map<uint64_t, bool> holds_from_structure(const FilterTheory& T,
                                              const henkin::Structure& M) {
    std::map<uint64_t, bool> holds;
    for (uint64_t mask : T.field) {
        auto atom = henkin::fo_rel("U", {henkin::mk_const(FilterTheory::constant_name(mask))});
        holds[mask] = henkin::model_check(M, *atom);
    }
    return holds;
}

RoundtripReport roundtrip_check(const filters::FilterPresentation& F, uint64_t searchBound) {
    FilterTheory T = encode_filter_extension(F, F.width);

    RoundtripReport R;

    auto prop = filters::compactness_solve(T.prop_axioms, F.width, searchBound);
    if (!prop.sat) return R;
    DecodedUltrafilter from_prop = decode_ultrafilter(T, holds_from_assignment(T, prop.assignment));

    auto fo = henkin::henkin_pipeline(T.sentences, F.width, searchBound);
    if (!fo.sat) return R;
    DecodedUltrafilter from_fo = decode_ultrafilter(T, holds_from_structure(T, *fo.model));

    R.sat = true;
    R.prop_point = from_prop.point;
    R.fo_point = from_fo.point;
    R.paths_agree = from_prop.members == from_fo.members;
    R.extends_filter = std::includes(from_prop.members.begin(), from_prop.members.end(),
                                     T.members.begin(), T.members.end()) &&
                       std::includes(from_fo.members.begin(), from_fo.members.end(),
                                     T.members.begin(), T.members.end());
    R.matches_direct =
        ((T.core >> from_prop.point) & 1) == 1 && ((T.core >> from_fo.point) & 1) == 1;
    return R;
}

}  // namespace fex::encoder
