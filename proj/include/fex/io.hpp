#pragma once

#include <string>
#include <vector>

#include "fex/filters.hpp"
#include "fex/henkin.hpp"
#include "fex/proplogic.hpp"
#include "fex/setcore.hpp"
#include "fex/sexpr.hpp"

namespace fex::io {

// --- files ---------------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Reads and parses a file expected to hold a single toplevel form.
sexpr::Node parse_file_one(const std::string& path);

// --- sets, points, families ------------------------------------------------

// `{0 1 3}` | `(co {0 1})` | `(builtin evens|odds|(mult k)|(interval a b))`
setcore::BaseSet parse_base_set(const sexpr::Node& n);

// `(pt {0 1} ({0} {0 1}))`
setcore::GroundPoint parse_point(const sexpr::Node& n);

// `(family (domain finite 2|omega) (width 4)? (gen <set>)*)`; a missing
// width clause falls back to the supplied default.
setcore::FamilySpec parse_family(const sexpr::Node& n, uint32_t default_width);
std::string write_family(const setcore::FamilySpec& family);

// `(cell (pos γ*)? (neg γ*)?)`
setcore::CellSpec parse_cell(const sexpr::Node& n);

// --- propositional formulas --------------------------------------------------

// `a<γ>` | `(not f)` | `(and f*)` | `(or f*)`
proplogic::FormulaPtr parse_formula(const sexpr::Node& n);

// `g<γ>` | `(comp e)` | `(isect e*)` | `(union e*)`
proplogic::SetExprPtr parse_setexpr(const sexpr::Node& n);

// `(theory (assert f)*)`
std::vector<proplogic::FormulaPtr> parse_prop_theory(const sexpr::Node& n);
std::string write_prop_theory(const std::vector<proplogic::FormulaPtr>& theory);

// --- first-order formulas ------------------------------------------------------

// Variables are exactly the names bound by an enclosing quantifier block;
// all other symbols in term position are constants or function applications.
// `(exists (x y) f)` | `(forall (x) f)` | `(= t u)` | `(R t*)` with terms
// `x` | `c` | `(fn t*)`.
henkin::FOFormulaPtr parse_fo_formula(const sexpr::Node& n);

std::vector<henkin::FOFormulaPtr> parse_fo_theory(const sexpr::Node& n);
std::string write_fo_theory(const std::vector<henkin::FOFormulaPtr>& theory);

// --- filters ----------------------------------------------------------------------

// `(filter (carrier finite 3) (width 3)? (gen {0 1})*)` or
// `(filter (carrier symbolic (family …)) (width 3)? (gen <setexpr>)*)`
filters::FilterPresentation parse_filter(const sexpr::Node& n, uint32_t default_width);

// --- models and assignments ---------------------------------------------------------

// `(model (sig (fn f 2)* (rel R 1)*) (domain k) (const c i)* (fn f ((args) v)*)*
//  (rel R (tuple)*)*)`
std::string write_model(const henkin::Structure& M);
henkin::Structure parse_model(const sexpr::Node& n);

// `(assignment (a<γ> 0|1)*)`
std::string write_assignment(const proplogic::Assignment& S);
proplogic::Assignment parse_assignment(const sexpr::Node& n);

}  // namespace fex::io
