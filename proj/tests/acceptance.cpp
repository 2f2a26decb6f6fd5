// Acceptance battery for the workbench.  Each criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.  Numeric
// expectations and time budgets are pinned here, in code.
#include <sys/wait.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fex/encoder.hpp"
#include "fex/errors.hpp"
#include "fex/filters.hpp"
#include "fex/henkin.hpp"
#include "fex/io.hpp"
#include "fex/proplogic.hpp"
#include "fex/rng.hpp"
#include "fex/setcore.hpp"
#include "oracle_fo.hpp"

namespace {

namespace sc = fex::setcore;
namespace pl = fex::proplogic;
namespace hk = fex::henkin;

constexpr double kFastBudgetSeconds = 10.0;  // criteria 1 and 2
constexpr double kSlowBudgetSeconds = 60.0;  // criteria 3 and 5

// --- small helpers -----------------------------------------------------------

sc::FamilySpec powerset_family(uint64_t n, uint32_t width) {
    sc::FamilySpec fam;
    fam.domain = sc::BaseDomain::finite(n, width);
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
        std::vector<uint64_t> elems;
        for (uint64_t i = 0; i < n; ++i)
            if (mask >> i & 1) elems.push_back(i);
        fam.generators.push_back(sc::BaseSet::finite(std::move(elems)));
    }
    return fam;
}

bool in_cell(const sc::FamilySpec& fam, const sc::CellSpec& cell, const sc::GroundPoint& p) {
    for (const auto& [gamma, sign] : cell.signs)
        if (sc::indep_member(p, fam.at(gamma)) != sign) return false;
    return true;
}

bool all_distinct(std::vector<sc::GroundPoint> points) {
    std::sort(points.begin(), points.end(), sc::point_less);
    return std::adjacent_find(points.begin(), points.end()) == points.end();
}

// --- criterion 1: every sign pattern over finite ground spaces is realized ----

bool crit_finite_patterns(std::string& detail) {
    bool ok = true;
    uint64_t patterns_checked = 0;
    for (auto [n, width] : std::vector<std::pair<uint64_t, uint32_t>>{{2, 5}, {3, 9}}) {
        auto fam = powerset_family(n, width);
        fam.validate(64);
        auto ground = sc::enumerate_ground(fam.domain, n);
        if (n == 2 && ground.size() != 26) {
            detail = "finite(2) ground space has " + std::to_string(ground.size()) +
                     " points, expected 26";
            return false;
        }
        const uint32_t gens = static_cast<uint32_t>(fam.generators.size());
        for (uint32_t chosen = 0; chosen < (1u << gens); ++chosen) {
            if (static_cast<uint32_t>(std::popcount(chosen)) > width - 1) continue;
            std::vector<uint32_t> gamma;
            for (uint32_t i = 0; i < gens; ++i)
                if (chosen >> i & 1) gamma.push_back(i);
            for (uint32_t signs = 0; signs < (1u << gamma.size()); ++signs) {
                sc::CellSpec cell;
                for (size_t i = 0; i < gamma.size(); ++i)
                    cell.signs[gamma[i]] = (signs >> i & 1) != 0;
                auto ws = sc::cell_witness(fam, cell, 1, 64);
                ++patterns_checked;
                bool witness_ok = !ws.empty() && in_cell(fam, cell, ws[0]) &&
                                  std::find(ground.begin(), ground.end(), ws[0]) != ground.end();
                uint64_t enumerated = 0;
                for (const auto& p : ground)
                    if (in_cell(fam, cell, p)) ++enumerated;
                if (!witness_ok || enumerated == 0) {
                    ok = false;
                    detail = "pattern failed over the " + std::to_string(1 << n) +
                             "-generator family";
                }
            }
        }
    }
    if (ok)
        detail = std::to_string(patterns_checked) + " sign patterns realized and cross-checked";
    return ok;  // expected: 81 + 6561 = 6642 patterns
}

// --- criterion 2: witness mass production over an infinite domain --------------

bool crit_omega_witnesses(std::string& detail) {
    sc::FamilySpec fam;
    fam.domain = sc::BaseDomain::omega(24);
    fam.generators = {sc::BaseSet::evens(),        sc::BaseSet::odds(),
                      sc::BaseSet::mult(3),        sc::BaseSet::mult(4),
                      sc::BaseSet::mult(5),        sc::BaseSet::mult(6),
                      sc::BaseSet::mult(7),        sc::BaseSet::interval(10, 200)};
    fam.validate(4096);
    const uint32_t gens = static_cast<uint32_t>(fam.generators.size());
    constexpr uint64_t kPerCell = 100;

    for (uint32_t signs = 0; signs < (1u << gens); ++signs) {
        sc::CellSpec cell;
        for (uint32_t i = 0; i < gens; ++i) cell.signs[i] = (signs >> i & 1) != 0;
        auto ws = sc::cell_witness(fam, cell, kPerCell, 4096);
        if (ws.size() != kPerCell || !all_distinct(ws)) {
            detail = "cell " + std::to_string(signs) + " yielded " + std::to_string(ws.size()) +
                     " witnesses";
            return false;
        }
        for (const auto& p : ws)
            for (uint32_t g = 0; g < gens; ++g)
                if (sc::indep_member(p, fam.at(g)) != cell.signs.at(g)) {
                    detail = "membership recheck failed in cell " + std::to_string(signs);
                    return false;
                }
    }
    detail = "256 cells x " + std::to_string(kPerCell) + " distinct witnesses, all re-verified";
    return true;
}

// --- criterion 3: the embedding identity, checked pointwise -----------------------

bool crit_iota_pointwise(std::string& detail) {
    auto fam = powerset_family(3, 9);
    auto ground = sc::enumerate_ground(fam.domain, 3);
    fex::Rng rng(2026);
    pl::RandomFormulaParams params;  // depth <= 5, atoms <= 6
    constexpr uint64_t kFormulas = 1000;

    for (uint64_t i = 0; i < kFormulas; ++i) {
        auto f = pl::random_formula(rng, params);
        auto gamma = pl::support(*f);
        auto image = pl::iota(*f, fam.generators.size());
        for (const auto& p : ground) {
            bool lhs = pl::eval_setexpr(fam, *image, p);
            pl::Assignment s;
            for (uint32_t g : gamma) s[g] = sc::indep_member(p, fam.at(g));
            bool rhs = pl::evaluate(*f, s);
            if (lhs != rhs) {
                detail = "formula " + std::to_string(i) + " splits from its image at " +
                         p.to_text();
                return false;
            }
        }
    }
    detail = std::to_string(kFormulas) + " formulas x " + std::to_string(ground.size()) +
             " points, exact agreement";
    return true;
}

// --- criterion 4: cells partition the ground space ---------------------------------

bool crit_partitions(std::string& detail) {
    auto fam = powerset_family(2, 5);
    uint64_t checked = 0;
    for (uint32_t chosen = 0; chosen < 16; ++chosen) {
        if (std::popcount(chosen) > 3) continue;
        std::vector<uint32_t> gamma;
        for (uint32_t i = 0; i < 4; ++i)
            if (chosen >> i & 1) gamma.push_back(i);
        auto rep = pl::partition_check(fam, gamma, 2);
        uint64_t sum = 0;
        for (uint64_t c : rep.cell_sizes) sum += c;
        bool good = rep.disjoint && rep.covers && rep.trace_pattern_ok &&
                    rep.cell_sizes.size() == (uint64_t{1} << gamma.size()) && sum == 26 &&
                    rep.total == 26;
        if (!good) {
            detail = "partition failed for a generator set of size " +
                     std::to_string(gamma.size());
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " generator sets partition all 26 points";
    return checked == 15;
}

// --- criterion 5: the solver against exhaustive truth tables ------------------------

bool crit_solver_vs_tables(std::string& detail) {
    fex::Rng rng(4242);
    pl::RandomFormulaParams params;
    params.atom_count = 8;
    constexpr uint64_t kTheories = 500;
    uint64_t sat_seen = 0, unsat_seen = 0;

    for (uint64_t i = 0; i < kTheories; ++i) {
        std::vector<pl::FormulaPtr> theory;
        uint64_t count = 1 + rng.below(30);
        for (uint64_t k = 0; k < count; ++k) theory.push_back(pl::random_formula(rng, params));

        bool table_sat = false;
        for (uint32_t mask = 0; mask < 256 && !table_sat; ++mask) {
            pl::Assignment s;
            for (uint32_t a = 0; a < 8; ++a) s[a] = (mask >> a & 1) != 0;
            bool all = true;
            for (const auto& f : theory)
                if (!pl::evaluate(*f, s)) {
                    all = false;
                    break;
                }
            table_sat = all;
        }

        auto r = fex::filters::compactness_solve(theory, 4);
        if (r.sat != table_sat) {
            detail = "verdict mismatch on theory " + std::to_string(i);
            return false;
        }
        if (r.sat) {
            ++sat_seen;
            for (const auto& f : theory)
                if (!pl::evaluate(*f, r.assignment)) {
                    detail = "solver returned a non-model on theory " + std::to_string(i);
                    return false;
                }
        } else {
            ++unsat_seen;
        }
    }
    detail = std::to_string(kTheories) + " theories (" + std::to_string(sat_seen) + " sat, " +
             std::to_string(unsat_seen) + " unsat) agree with truth tables";
    return sat_seen > 0 && unsat_seen > 0;
}

// --- criterion 6: the first-order reduction against an independent oracle --------------

bool crit_fo_corpus(std::string& detail) {
    using namespace fex::henkin;
    auto v = [](const char* s) { return mk_var(s); };
    auto c = [](const char* s) { return mk_const(s); };
    auto P = [&](TermPtr t) { return fo_rel("P", {std::move(t)}); };
    auto Q = [&](TermPtr t) { return fo_rel("Q", {std::move(t)}); };
    auto R = [&](TermPtr a, TermPtr b) { return fo_rel("R", {std::move(a), std::move(b)}); };

    std::vector<std::vector<FOFormulaPtr>> corpus = {
        // satisfiable
        {fo_exists({"x"}, P(v("x"))), fo_forall({"x"}, fo_or({fo_not(P(v("x"))), Q(v("x"))}))},
        {fo_not(fo_exists({"x"}, R(v("x"), v("x")))), R(c("a"), c("b"))},
        {fo_exists({"x", "y"}, R(v("x"), v("y"))),
         fo_forall({"x", "y"}, fo_or({fo_not(R(v("x"), v("y"))), fo_not(R(v("y"), v("x")))}))},
        {P(mk_func("f", {c("c")})),
         fo_forall({"x"}, fo_or({fo_not(P(v("x"))), Q(v("x"))}))},
        {fo_forall({"x"}, fo_or({P(v("x")), Q(v("x"))})),
         fo_exists({"x"}, fo_not(P(v("x")))), fo_exists({"x"}, fo_not(Q(v("x"))))},
        {fo_eq(c("c"), c("d"))},
        // unsatisfiable
        {fo_exists({"x"}, P(v("x"))), fo_forall({"x"}, fo_not(P(v("x"))))},
        {fo_eq(c("c"), c("d")), P(c("c")), fo_not(P(c("d")))},
        {fo_not(fo_exists({"x"}, R(v("x"), v("x")))), R(c("a"), c("b")), fo_eq(c("a"), c("b"))},
        {fo_forall({"x", "y"}, fo_or({R(v("x"), v("y")), R(v("y"), v("x"))})),
         fo_exists({"x"}, fo_not(R(v("x"), v("x"))))},
        {fo_eq(mk_func("f", {c("c")}), c("c")), P(mk_func("f", {mk_func("f", {c("c")})})),
         fo_not(P(c("c")))},
        {fo_exists({"x"}, fo_and({P(v("x")), fo_not(Q(v("x")))})),
         fo_forall({"x"}, fo_or({fo_not(P(v("x"))), Q(v("x"))}))},
    };

    uint64_t unsat_seen = 0;
    for (size_t i = 0; i < corpus.size(); ++i) {
        auto r = henkin_pipeline(corpus[i], 4);
        auto verdict = fex::oracle::decide(corpus[i], 3, 2);
        if (verdict == fex::oracle::Verdict::Unknown) {
            detail = "oracle could not decide theory " + std::to_string(i);
            return false;
        }
        bool oracle_sat = verdict == fex::oracle::Verdict::Sat;
        if (r.sat != oracle_sat) {
            detail = "pipeline and oracle disagree on theory " + std::to_string(i);
            return false;
        }
        if (r.sat) {
            for (const auto& f : corpus[i])
                if (!model_check(*r.model, *f) || !fex::oracle::eval_structure(*r.model, *f)) {
                    detail = "extracted model fails theory " + std::to_string(i);
                    return false;
                }
        } else {
            ++unsat_seen;
        }
    }
    detail = std::to_string(corpus.size()) + " theories match the oracle (" +
             std::to_string(unsat_seen) + " unsatisfiable)";
    return corpus.size() >= 10 && unsat_seen >= 3;
}

// --- criterion 7: ultrafilter extension over finite carriers ----------------------------

bool ultra_ok(const fex::filters::Ultrafilter& U,
              const fex::filters::FilterPresentation& F) {
    if (U.kind != fex::filters::Ultrafilter::Kind::Principal) return false;
    auto subset_of = [](uint64_t mask) {
        std::vector<uint64_t> elems;
        for (uint64_t i = 0; i < 64; ++i)
            if (mask >> i & 1) elems.push_back(i);
        return elems;
    };
    const uint64_t total = uint64_t{1} << F.n;
    auto member = [&](uint64_t mask) { return U.contains_subset(subset_of(mask)); };
    for (const auto& g : F.finite_generators)
        if (!U.contains_subset(g)) return false;  // extends the filter
    for (uint64_t X = 0; X < total; ++X) {
        if (member(X) == member((total - 1) & ~X)) return false;  // maximality
        for (uint64_t Y = 0; Y < total; ++Y) {
            if ((X & Y) == X && member(X) && !member(Y)) return false;      // upward
            if (member(X) && member(Y) && !member(X & Y)) return false;     // meets
        }
    }
    return true;
}

bool crit_ultrafilters(std::string& detail) {
    uint64_t principal_checked = 0;
    for (uint64_t n = 1; n <= 4; ++n)
        for (uint64_t core = 1; core < (uint64_t{1} << n); ++core) {
            std::vector<uint64_t> elems;
            for (uint64_t i = 0; i < n; ++i)
                if (core >> i & 1) elems.push_back(i);
            auto F = fex::filters::FilterPresentation::finite_powerset(n, {elems}, 3);
            if (!ultra_ok(fex::filters::extend_ultrafilter_finite(F), F)) {
                detail = "principal filter over " + std::to_string(n) + " elements failed";
                return false;
            }
            ++principal_checked;
        }

    fex::Rng rng(2027);
    for (uint64_t i = 0; i < 50; ++i) {
        uint64_t n = 1 + rng.below(4);
        uint64_t anchor = rng.below(n);  // common point keeps the filter proper
        std::vector<std::vector<uint64_t>> gens;
        uint64_t count = 1 + rng.below(3);
        for (uint64_t g = 0; g < count; ++g) {
            uint64_t mask = (rng.below(uint64_t{1} << n)) | (uint64_t{1} << anchor);
            std::vector<uint64_t> elems;
            for (uint64_t b = 0; b < n; ++b)
                if (mask >> b & 1) elems.push_back(b);
            gens.push_back(std::move(elems));
        }
        auto F = fex::filters::FilterPresentation::finite_powerset(n, gens, 3);
        if (!ultra_ok(fex::filters::extend_ultrafilter_finite(F), F)) {
            detail = "random filter " + std::to_string(i) + " failed";
            return false;
        }
    }

    // tiny bases: the encoded theory's models correspond one-to-one with the
    // ultrafilters, checked by enumerating every assignment over the field
    for (uint64_t n = 1; n <= 2; ++n) {
        std::vector<uint64_t> whole;
        for (uint64_t i = 0; i < n; ++i) whole.push_back(i);
        auto F = fex::filters::FilterPresentation::finite_powerset(n, {whole}, 3);
        auto T = fex::encoder::encode_filter_extension(F, 3);
        std::set<uint64_t> decoded_points;
        const uint64_t assignments = uint64_t{1} << T.field.size();
        for (uint64_t bits = 0; bits < assignments; ++bits) {
            pl::Assignment S;
            for (uint32_t v2 = 0; v2 < T.field.size(); ++v2) S[v2] = (bits >> v2 & 1) != 0;
            bool model = true;
            for (const auto& ax : T.prop_axioms)
                if (!pl::evaluate(*ax, S)) {
                    model = false;
                    break;
                }
            if (!model) continue;
            auto D = fex::encoder::decode_ultrafilter(
                T, fex::encoder::holds_from_assignment(T, S));
            decoded_points.insert(D.point);
        }
        std::set<uint64_t> expected;
        for (uint64_t p = 0; p < n; ++p) expected.insert(p);
        if (decoded_points != expected) {
            detail = "model/ultrafilter correspondence failed for a base of " +
                     std::to_string(n);
            return false;
        }
    }

    detail = std::to_string(principal_checked) +
             " principal + 50 random filters extend correctly; tiny bases biject";
    return principal_checked == 26;
}

// --- criterion 8: machine output is reproducible --------------------------------------

std::string scratch_dir() {
    auto d = std::filesystem::temp_directory_path() / "fex_acceptance";
    std::filesystem::create_directories(d);
    return d.string();
}

std::string put_file(const std::string& name, const std::string& content) {
    auto path = scratch_dir() + "/" + name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

std::optional<std::string> run_capture(const std::string& cmd_line) {
    auto out_path = scratch_dir() + "/capture.out";
    std::string cmd = cmd_line + " >" + out_path + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool crit_reproducible_reports(std::string& detail) {
    const char* bin = std::getenv("FEX_BIN");
    if (!bin) {
        detail = "FEX_BIN is not set";
        return false;
    }
    auto fam = put_file("fam2.sexp",
                        "(family (domain finite 2) (width 5) (gen {}) (gen {0}) (gen {1}) "
                        "(gen {0 1}))\n");
    auto sat = put_file("sat.sexp", "(theory (assert a0) (assert (or (not a0) a1)))\n");
    auto fo = put_file("fo.sexp",
                       "(theory (assert (exists (x) (P x)))\n"
                       "        (assert (forall (x) (or (not (P x)) (Q x)))))\n");
    auto filt = put_file("filt.sexp",
                         "(filter (carrier finite 3) (width 3) (gen {0 1}) (gen {1 2}))\n");
    std::vector<std::string> commands = {
        std::string(bin) + " indep " + fam + " --all-cells --exhaustive --format records",
        std::string(bin) + " iota-check --random 10 --seed 9 --parallel 3 --format records",
        std::string(bin) + " solve " + sat + " --mode both --format records",
        std::string(bin) + " henkin " + fo + " --format records",
        std::string(bin) + " roundtrip " + filt + " --format records",
    };
    std::string first, second;
    for (int round = 0; round < 2; ++round) {
        std::string& sink = round == 0 ? first : second;
        for (const auto& cmd : commands) {
            auto out = run_capture(cmd);
            if (!out) {
                detail = "a seeded command exited nonzero";
                return false;
            }
            sink += *out;
        }
    }
    if (first.empty() || first != second) {
        detail = "reports differ between identically seeded runs";
        return false;
    }
    detail = std::to_string(commands.size()) + " seeded commands, byte-identical reports";
    return true;
}

// --- driver ------------------------------------------------------------------------------

struct Criterion {
    const char* name;
    std::function<bool(std::string&)> body;
    double budget_seconds;  // 0 = untimed
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"finite families realize every bounded sign pattern", crit_finite_patterns,
         kFastBudgetSeconds},
        {"infinite-domain cells yield 100 distinct verified witnesses", crit_omega_witnesses,
         kFastBudgetSeconds},
        {"formula evaluation matches its set image pointwise", crit_iota_pointwise,
         kSlowBudgetSeconds},
        {"generator cells partition the ground space", crit_partitions, 0.0},
        {"filter-based solving agrees with exhaustive truth tables", crit_solver_vs_tables,
         kSlowBudgetSeconds},
        {"first-order reduction agrees with an independent oracle", crit_fo_corpus, 0.0},
        {"ultrafilter extension is correct on finite carriers", crit_ultrafilters, 0.0},
        {"seeded runs produce byte-identical machine reports", crit_reproducible_reports, 0.0},
    };

    bool all_ok = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto& crit = criteria[i];
        std::string detail;
        bool ok = false;
        auto started = std::chrono::steady_clock::now();
        try {
            ok = crit.body(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                       started)
                             .count();
        if (ok && crit.budget_seconds > 0 && seconds > crit.budget_seconds) {
            ok = false;
            detail += " — over the " + std::to_string(crit.budget_seconds) + " s budget";
        }
        std::printf("%s  %zu. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", i + 1, crit.name,
                    seconds, detail.empty() ? "" : " — ", detail.c_str());
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
