// fex — command-line workbench over independent families, width-complete
// filters, and the propositional / first-order machinery built on them.
//
// Exit codes: 0 success, 1 property violated, 2 theory unsatisfiable,
// 3 bad input, 4 search or closure budget exceeded.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fex/encoder.hpp"
#include "fex/errors.hpp"
#include "fex/filters.hpp"
#include "fex/henkin.hpp"
#include "fex/io.hpp"
#include "fex/proplogic.hpp"
#include "fex/rng.hpp"
#include "fex/setcore.hpp"
#include "fex/sexpr.hpp"

namespace {

namespace pl = fex::proplogic;
namespace sc = fex::setcore;
using json = nlohmann::ordered_json;

struct Options {
    uint32_t width = 4;
    uint64_t truncation = 3;
    uint64_t bound = fex::filters::kDefaultSearchBound;
    uint64_t seed = 0;
    unsigned parallel = 1;
    std::string format = "human";
    bool exhaustive = false;

    bool records() const { return format == "records"; }
};

json base_record(const char* command) {
    json j;
    j["schema"] = "fex/1";
    j["command"] = command;
    return j;
}

// Runs fn(0..count-1) on up to `workers` threads.  Results must be written
// to pre-sized slots so output order stays canonical; the first exception
// wins and is rethrown after the pool drains.
template <typename Fn>
void run_indexed(size_t count, unsigned workers, Fn&& fn) {
    workers = static_cast<unsigned>(std::min<size_t>(std::max(1u, workers), count));
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i; (i = next.fetch_add(1)) < count && !stop.load();) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                    stop.store(true);
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string cell_text(const sc::CellSpec& cell) {
    std::string out = "(cell";
    auto side = [&out](const char* head, const std::vector<uint32_t>& gammas) {
        if (gammas.empty()) return;
        out += " (";
        out += head;
        for (uint32_t g : gammas) out += " " + std::to_string(g);
        out += ")";
    };
    side("pos", cell.positives());
    side("neg", cell.negatives());
    out += ")";
    return out;
}

std::string subset_text(uint64_t mask) {
    std::string out = "{";
    bool first = true;
    for (uint32_t i = 0; i < 64; ++i)
        if (mask >> i & 1) {
            if (!first) out += " ";
            out += std::to_string(i);
            first = false;
        }
    return out + "}";
}

// --- indep --------------------------------------------------------------

int cmd_indep(const Options& opt, const std::string& family_file,
              const std::vector<std::string>& cell_texts,
              const std::vector<std::string>& cell_files, bool all_cells, uint64_t count) {
    auto family = fex::io::parse_family(fex::io::parse_file_one(family_file), opt.width);
    family.validate(opt.bound);
    const size_t gens = family.generators.size();

    std::vector<sc::CellSpec> cells;
    for (const auto& text : cell_texts)
        cells.push_back(fex::io::parse_cell(fex::sexpr::parse_one(text)));
    for (const auto& path : cell_files)
        cells.push_back(fex::io::parse_cell(fex::io::parse_file_one(path)));
    if (all_cells) {
        if (gens > 16) throw fex::InvalidInput("--all-cells needs at most 16 generators");
        for (uint64_t mask = 0; mask < (uint64_t{1} << gens); ++mask) {
            sc::CellSpec cell;
            for (size_t i = 0; i < gens; ++i)
                cell.signs[static_cast<uint32_t>(i)] = (mask >> i & 1) != 0;
            cells.push_back(std::move(cell));
        }
    }
    if (cells.empty()) cells.emplace_back();  // the whole ground set

    std::vector<sc::GroundPoint> ground;
    if (opt.exhaustive) ground = sc::enumerate_ground(family.domain, opt.truncation);

    struct CellResult {
        std::vector<sc::GroundPoint> points;
        bool verified = true;
        uint64_t enumerated = 0;
        std::string note;
    };
    std::vector<CellResult> results(cells.size());

    run_indexed(cells.size(), opt.parallel, [&](size_t i) {
        auto& r = results[i];
        auto in_cell = [&](const sc::GroundPoint& p) {
            for (const auto& [gamma, sign] : cells[i].signs)
                if (sc::indep_member(p, family.at(gamma)) != sign) return false;
            return true;
        };
        r.points = sc::cell_witness(family, cells[i], count, opt.bound);
        for (const auto& p : r.points)
            if (!in_cell(p)) {
                r.verified = false;
                r.note = "witness escapes its cell";
            }
        for (size_t a = 0; a < r.points.size(); ++a)
            for (size_t b = a + 1; b < r.points.size(); ++b)
                if (r.points[a] == r.points[b]) {
                    r.verified = false;
                    r.note = "duplicate witnesses";
                }
        if (opt.exhaustive) {
            for (const auto& p : ground)
                if (in_cell(p)) ++r.enumerated;
            for (const auto& p : r.points) {
                bool in_region = true;
                for (uint64_t s : p.support)
                    if (s >= opt.truncation) in_region = false;
                if (!in_region) continue;
                if (std::find(ground.begin(), ground.end(), p) == ground.end()) {
                    r.verified = false;
                    r.note = "witness missing from the ground enumeration";
                }
            }
        }
    });

    bool all_ok = true;
    for (size_t i = 0; i < cells.size(); ++i) {
        const auto& r = results[i];
        all_ok = all_ok && r.verified;
        if (opt.records()) {
            json j = base_record("indep");
            j["cell"] = cell_text(cells[i]);
            json pts = json::array();
            for (const auto& p : r.points) pts.push_back(p.to_text());
            j["witnesses"] = pts;
            j["verified"] = r.verified;
            if (opt.exhaustive) j["enumerated_cell_size"] = r.enumerated;
            if (!r.note.empty()) j["note"] = r.note;
            std::cout << j.dump() << "\n";
        } else {
            std::cout << cell_text(cells[i]) << "\n";
            for (const auto& p : r.points) std::cout << "  " << p.to_text() << "\n";
            if (opt.exhaustive)
                std::cout << "  enumerated cell size: " << r.enumerated << "\n";
            if (!r.verified) std::cout << "  FAILED: " << r.note << "\n";
        }
    }
    if (opt.records()) {
        json j = base_record("indep");
        j["summary"] = true;
        j["cells"] = cells.size();
        j["count"] = count;
        j["ok"] = all_ok;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "cells: " << cells.size() << ", witnesses per cell: " << count
                  << (all_ok ? ", all verified" : ", FAILURES above") << "\n";
    }
    return all_ok ? 0 : 1;
}

// --- iota-check ------------------------------------------------------------

int cmd_iota_check(const Options& opt, const std::string& theory_file, uint64_t random_n,
                   const std::string& family_file) {
    std::vector<pl::FormulaPtr> formulas;
    if (!theory_file.empty())
        formulas = fex::io::parse_prop_theory(fex::io::parse_file_one(theory_file));
    if (random_n > 0) {
        fex::Rng rng(opt.seed);
        pl::RandomFormulaParams params;
        for (uint64_t i = 0; i < random_n; ++i)
            formulas.push_back(pl::random_formula(rng, params));
    }
    if (formulas.empty())
        throw fex::InvalidInput("nothing to check: give a theory file or --random N");

    // The width has to clear every formula's support and connective arity;
    // raise it like the solver does and report the effective value.
    uint32_t needed = std::max(opt.width, 2u);
    uint32_t max_atom = 0;
    bool any_atom = false;
    for (const auto& f : formulas) {
        auto gamma = pl::support(*f);
        if (!gamma.empty()) {
            any_atom = true;
            max_atom = std::max(max_atom, gamma.back());
        }
        needed = std::max<uint32_t>(needed, static_cast<uint32_t>(gamma.size()) + 1);
        needed = std::max<uint32_t>(needed, static_cast<uint32_t>(pl::max_arity(*f)) + 1);
    }

    sc::FamilySpec family;
    if (!family_file.empty()) {
        family = fex::io::parse_family(fex::io::parse_file_one(family_file), opt.width);
        family.domain.width = std::max(family.domain.width, needed);
    } else {
        family.domain = sc::BaseDomain::omega(needed);
        uint32_t atoms = any_atom ? max_atom + 1 : 1;
        for (uint32_t gamma = 0; gamma < atoms; ++gamma)
            family.generators.push_back(sc::BaseSet::finite({gamma}));
    }

    struct Row {
        pl::IotaReport iota;
        pl::PartitionReport part;
        size_t atoms = 0;
        bool ok = false;
    };
    std::vector<Row> rows(formulas.size());

    run_indexed(formulas.size(), opt.parallel, [&](size_t i) {
        auto& r = rows[i];
        auto gamma = pl::support(*formulas[i]);
        r.atoms = gamma.size();
        r.iota = pl::verify_iota_identity(family, *formulas[i], gamma, opt.truncation);
        r.part = pl::partition_check(family, gamma, opt.truncation);
        uint64_t sum = 0;
        for (uint64_t c : r.part.cell_sizes) sum += c;
        r.ok = r.iota.holds && r.part.disjoint && r.part.covers && r.part.trace_pattern_ok &&
               sum == r.part.total && r.part.total == r.iota.points_checked;
    });

    bool all_ok = true;
    for (size_t i = 0; i < formulas.size(); ++i) {
        const auto& r = rows[i];
        all_ok = all_ok && r.ok;
        if (opt.records()) {
            json j = base_record("iota-check");
            j["formula"] = pl::to_text(*formulas[i]);
            j["atoms"] = r.atoms;
            j["holds"] = r.iota.holds;
            j["points"] = r.iota.points_checked;
            j["partition_ok"] = r.part.disjoint && r.part.covers && r.part.trace_pattern_ok;
            j["cell_sizes"] = r.part.cell_sizes;
            if (r.iota.counterexample) j["counterexample"] = r.iota.counterexample->to_text();
            j["ok"] = r.ok;
            std::cout << j.dump() << "\n";
        } else {
            std::cout << (r.ok ? "ok   " : "FAIL ") << pl::to_text(*formulas[i]) << "  ["
                      << r.iota.points_checked << " points, " << r.part.cell_sizes.size()
                      << " cells]";
            if (r.iota.counterexample)
                std::cout << "  counterexample " << r.iota.counterexample->to_text();
            std::cout << "\n";
        }
    }
    if (opt.records()) {
        json j = base_record("iota-check");
        j["summary"] = true;
        j["formulas"] = formulas.size();
        j["effective_width"] = family.domain.width;
        j["ok"] = all_ok;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "formulas: " << formulas.size() << ", effective width: "
                  << family.domain.width << (all_ok ? ", all hold" : ", FAILURES above") << "\n";
    }
    return all_ok ? 0 : 1;
}

// --- solve ----------------------------------------------------------------

int cmd_solve(const Options& opt, const std::string& theory_file, const std::string& mode) {
    auto theory = fex::io::parse_prop_theory(fex::io::parse_file_one(theory_file));
    if (theory.empty()) throw fex::InvalidInput("the theory must contain at least one formula");

    std::optional<fex::filters::SolveResult> filter_res;
    std::optional<bool> direct_sat;
    pl::Assignment direct_asg;

    if (mode == "filter" || mode == "both")
        filter_res = fex::filters::compactness_solve(theory, opt.width, opt.bound);

    if (mode == "direct" || mode == "both") {
        std::set<uint32_t> atom_set;
        for (const auto& f : theory)
            for (uint32_t a : pl::support(*f)) atom_set.insert(a);
        std::vector<uint32_t> atoms(atom_set.begin(), atom_set.end());
        if (atoms.size() > 24)
            throw fex::SizeOverflow("direct truth-table search over " +
                                    std::to_string(atoms.size()) +
                                    " atoms exceeds the 24-atom cap");
        direct_sat = false;
        for (uint64_t mask = 0; mask < (uint64_t{1} << atoms.size()); ++mask) {
            pl::Assignment s;
            for (size_t i = 0; i < atoms.size(); ++i) s[atoms[i]] = (mask >> i & 1) != 0;
            bool all = true;
            for (const auto& f : theory)
                if (!pl::evaluate(*f, s)) {
                    all = false;
                    break;
                }
            if (all) {
                direct_sat = true;
                direct_asg = std::move(s);
                break;
            }
        }
    }

    bool mismatch = mode == "both" && filter_res->sat != *direct_sat;
    bool verified = true;
    if (filter_res && filter_res->sat)
        for (const auto& f : theory)
            if (!pl::evaluate(*f, filter_res->assignment)) verified = false;
    if (direct_sat && *direct_sat)
        for (const auto& f : theory)
            if (!pl::evaluate(*f, direct_asg)) verified = false;

    bool sat = filter_res ? filter_res->sat : *direct_sat;
    const pl::Assignment& shown = filter_res && filter_res->sat
                                      ? filter_res->assignment
                                      : direct_asg;

    if (opt.records()) {
        json j = base_record("solve");
        j["mode"] = mode;
        j["formulas"] = theory.size();
        j["verdict"] = mismatch ? "DISAGREE" : (sat ? "SAT" : "UNSAT");
        if (!mismatch && sat) {
            json asg = json::object();
            for (const auto& [a, v] : shown) asg["a" + std::to_string(a)] = v ? 1 : 0;
            j["assignment"] = asg;
            if (filter_res && filter_res->witness)
                j["witness"] = filter_res->witness->to_text();
        }
        if (filter_res) j["effective_width"] = filter_res->effective_width;
        j["verified"] = verified;
        std::cout << j.dump() << "\n";
    } else {
        if (mismatch) {
            std::cout << "DISAGREE: filter path says " << (filter_res->sat ? "SAT" : "UNSAT")
                      << ", direct path says " << (*direct_sat ? "SAT" : "UNSAT") << "\n";
        } else if (sat) {
            std::string asg_text = fex::io::write_assignment(shown);
            if (asg_text.empty() || asg_text.back() != '\n') asg_text += "\n";
            std::cout << "SAT\n" << asg_text;
            if (filter_res && filter_res->witness)
                std::cout << "witness: " << filter_res->witness->to_text() << "\n";
            if (filter_res)
                std::cout << "effective width: " << filter_res->effective_width << "\n";
            if (!verified) std::cout << "FAILED: assignment does not satisfy the theory\n";
        } else {
            std::cout << "UNSAT\n";
        }
    }
    if (mismatch || !verified) return 1;
    return sat ? 0 : 2;
}

// --- henkin ---------------------------------------------------------------

int cmd_henkin(const Options& opt, const std::string& theory_file, uint32_t rounds,
               const std::string& emit_model, const std::string& emit_image) {
    auto theory = fex::io::parse_fo_theory(fex::io::parse_file_one(theory_file));
    fex::henkin::ClosureConfig cfg;
    cfg.max_rounds = rounds;
    auto r = fex::henkin::henkin_pipeline(theory, opt.width, opt.bound, cfg);
    const auto& closed = r.image.closed;

    if (!emit_image.empty()) {
        std::string text;
        for (size_t v = 0; v < r.image.var_keys.size(); ++v)
            text += "; a" + std::to_string(v) + " = [[" + r.image.var_keys[v] + "]]\n";
        text += fex::io::write_prop_theory(r.image.axioms);
        if (text.empty() || text.back() != '\n') text += "\n";
        fex::io::write_file(emit_image, text);
    }
    std::string model_text;
    if (r.sat) {
        model_text = fex::io::write_model(*r.model);
        if (!emit_model.empty()) fex::io::write_file(emit_model, model_text);
    }

    if (opt.records()) {
        json j = base_record("henkin");
        j["sentences"] = theory.size();
        j["closure_sentences"] = closed.sentence_order.size();
        j["closure_terms"] = closed.term_order.size();
        j["rounds"] = closed.rounds_used;
        j["variables"] = r.image.var_keys.size();
        j["axioms"] = r.image.axioms.size();
        j["equality"] = r.image.equality_enabled;
        j["verdict"] = r.sat ? "SAT" : "UNSAT";
        if (r.sat) {
            j["domain"] = r.model->domain_size();
            j["model"] = model_text;
        }
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "closure: " << closed.sentence_order.size() << " sentences, "
                  << closed.term_order.size() << " terms, " << closed.rounds_used
                  << " round(s)\n"
                  << "image: " << r.image.var_keys.size() << " variables, "
                  << r.image.axioms.size() << " axioms"
                  << (r.image.equality_enabled ? " (with equality)" : "") << "\n";
        if (r.sat)
            std::cout << "SAT, domain size " << r.model->domain_size() << "\n" << model_text;
        else
            std::cout << "UNSAT\n";
    }
    return r.sat ? 0 : 2;
}

// --- encode / decode / roundtrip -----------------------------------------------

int cmd_encode(const Options& opt, const std::string& filter_file, const std::string& out,
               const std::string& emit_prop) {
    auto F = fex::io::parse_filter(fex::io::parse_file_one(filter_file), opt.width);
    auto T = fex::encoder::encode_filter_extension(F, F.width);
    std::string fo_text = fex::io::write_fo_theory(T.sentences);
    if (!out.empty()) fex::io::write_file(out, fo_text);
    if (!emit_prop.empty()) fex::io::write_file(emit_prop, fex::io::write_prop_theory(T.prop_axioms));

    if (opt.records()) {
        json j = base_record("encode");
        j["n"] = T.n;
        j["width"] = T.width;
        j["field_size"] = T.field.size();
        j["core"] = subset_text(T.core);
        j["members"] = T.members.size();
        j["sentences"] = T.sentences.size();
        if (out.empty()) j["theory"] = fo_text;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "base size " << T.n << ", width " << T.width << ", field of "
                  << T.field.size() << " sets, core " << subset_text(T.core) << ", "
                  << T.members.size() << " members, " << T.sentences.size() << " sentences\n";
        if (out.empty()) std::cout << fo_text;
    }
    return 0;
}

int cmd_decode(const Options& opt, const std::string& filter_file,
               const std::string& witness_file) {
    auto F = fex::io::parse_filter(fex::io::parse_file_one(filter_file), opt.width);
    auto T = fex::encoder::encode_filter_extension(F, F.width);
    auto node = fex::io::parse_file_one(witness_file);
    std::map<uint64_t, bool> holds;
    std::string kind;
    if (node.is_list() && node.head() == "model") {
        holds = fex::encoder::holds_from_structure(T, fex::io::parse_model(node));
        kind = "model";
    } else if (node.is_list() && node.head() == "assignment") {
        holds = fex::encoder::holds_from_assignment(T, fex::io::parse_assignment(node));
        kind = "assignment";
    } else {
        throw fex::InvalidInput("expected a (model …) or (assignment …) file");
    }
    auto D = fex::encoder::decode_ultrafilter(T, holds);

    if (opt.records()) {
        json j = base_record("decode");
        j["from"] = kind;
        j["point"] = D.point;
        j["atom"] = subset_text(D.atom);
        j["members"] = D.members.size();
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "principal ultrafilter at " << D.point << ", atom " << subset_text(D.atom)
                  << ", " << D.members.size() << " members (from " << kind << ")\n";
    }
    return 0;
}

int cmd_roundtrip(const Options& opt, const std::string& filter_file) {
    auto F = fex::io::parse_filter(fex::io::parse_file_one(filter_file), opt.width);
    auto R = fex::encoder::roundtrip_check(F, opt.bound);
    bool ok = R.sat && R.extends_filter && R.matches_direct;

    if (opt.records()) {
        json j = base_record("roundtrip");
        j["sat"] = R.sat;
        if (R.sat) {
            j["prop_point"] = R.prop_point;
            j["fo_point"] = R.fo_point;
            j["paths_agree"] = R.paths_agree;
            j["extends_filter"] = R.extends_filter;
            j["matches_direct"] = R.matches_direct;
        }
        j["ok"] = ok;
        std::cout << j.dump() << "\n";
    } else {
        if (!R.sat) {
            std::cout << "UNSAT: the encoded theory has no model\n";
        } else {
            std::cout << "prop point " << R.prop_point << ", fo point " << R.fo_point
                      << (R.paths_agree ? " (paths agree)" : " (paths differ)") << "\n"
                      << "extends the filter: " << (R.extends_filter ? "yes" : "no")
                      << ", matches a direct extension: " << (R.matches_direct ? "yes" : "no")
                      << "\n";
        }
        std::cout << (ok ? "ok" : "FAILED") << "\n";
    }
    if (ok) return 0;
    return R.sat ? 1 : 2;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const fex::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const fex::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const fex::WidthExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const fex::NotAModel& e) {
        std::cerr << "violation: " << e.what() << "\n";
        return 1;
    } catch (const fex::InconsistentAssignment& e) {
        std::cerr << "violation: " << e.what() << "\n";
        return 1;
    } catch (const fex::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);

    CLI::App app{"workbench for independent families, width-complete filters, and their logic"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--width", opt.width, "width bound for connectives and filter intersections")
        ->capture_default_str();
    app.add_option("--truncation", opt.truncation, "ground enumeration support bound")
        ->capture_default_str();
    app.add_option("--bound", opt.bound, "search bound for witness and difference scans")
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for the random formula suite")->capture_default_str();
    app.add_option("--parallel", opt.parallel, "worker threads for per-item batches")
        ->capture_default_str();
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"human", "records"}))
        ->capture_default_str();
    app.add_flag("--exhaustive", opt.exhaustive, "cross-check against the full ground enumeration");

    std::string family_file, theory_file, filter_file, witness_file;
    std::vector<std::string> cell_texts, cell_files;
    bool all_cells = false;
    uint64_t count = 1, random_n = 0;
    std::string iota_family, mode = "filter", emit_model, emit_image, out, emit_prop;
    uint32_t rounds = fex::henkin::ClosureConfig{}.max_rounds;

    auto* indep = app.add_subcommand("indep", "find and verify cell witnesses for a family");
    indep->fallthrough();
    indep->add_option("family", family_file, "family file")->required();
    indep->add_option("--cell", cell_texts, "inline cell spec, e.g. \"(cell (pos 0) (neg 1))\"");
    indep->add_option("--cell-file", cell_files, "file holding one cell spec");
    indep->add_flag("--all-cells", all_cells, "every full sign pattern over the generators");
    indep->add_option("--count", count, "witnesses per cell")->capture_default_str();

    auto* iota = app.add_subcommand("iota-check", "verify the embedding identity per formula");
    iota->fallthrough();
    iota->add_option("theory", theory_file, "propositional theory file");
    iota->add_option("--random", random_n, "additionally check N seeded random formulas");
    iota->add_option("--family", iota_family, "family file (default: fresh singleton generators)");

    auto* solve = app.add_subcommand("solve", "decide a propositional theory");
    solve->fallthrough();
    solve->add_option("theory", theory_file, "propositional theory file")->required();
    solve->add_option("--mode", mode, "filter | direct | both")
        ->check(CLI::IsMember({"filter", "direct", "both"}))
        ->capture_default_str();

    auto* henkin = app.add_subcommand("henkin", "reduce a first-order theory and extract a model");
    henkin->fallthrough();
    henkin->add_option("theory", theory_file, "first-order theory file")->required();
    henkin->add_option("--rounds", rounds, "witness closure round budget")->capture_default_str();
    henkin->add_option("--emit-model", emit_model, "write the extracted model to this file");
    henkin->add_option("--emit-image", emit_image, "write the propositional image to this file");

    auto* encode = app.add_subcommand("encode", "encode a filter extension problem as a theory");
    encode->fallthrough();
    encode->add_option("filter", filter_file, "filter file")->required();
    encode->add_option("--out", out, "write the first-order theory to this file");
    encode->add_option("--emit-prop", emit_prop, "write the propositional form to this file");

    auto* decode = app.add_subcommand("decode", "read an ultrafilter back off a model");
    decode->fallthrough();
    decode->add_option("filter", filter_file, "filter file")->required();
    decode->add_option("witness", witness_file, "(model …) or (assignment …) file")->required();

    auto* roundtrip = app.add_subcommand("roundtrip", "encode, solve both ways, decode, compare");
    roundtrip->fallthrough();
    roundtrip->add_option("filter", filter_file, "filter file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    auto started = std::chrono::steady_clock::now();
    int code = guarded([&]() -> int {
        if (*indep)
            return cmd_indep(opt, family_file, cell_texts, cell_files, all_cells, count);
        if (*iota) return cmd_iota_check(opt, theory_file, random_n, iota_family);
        if (*solve) return cmd_solve(opt, theory_file, mode);
        if (*henkin) return cmd_henkin(opt, theory_file, rounds, emit_model, emit_image);
        if (*encode) return cmd_encode(opt, filter_file, out, emit_prop);
        if (*decode) return cmd_decode(opt, filter_file, witness_file);
        if (*roundtrip) return cmd_roundtrip(opt, filter_file);
        return 3;
    });
    if (!opt.records()) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
        std::cerr << "elapsed: " << ms << " ms\n";
    }
    return code;
}
