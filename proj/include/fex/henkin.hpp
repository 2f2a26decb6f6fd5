#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fex/filters.hpp"
#include "fex/proplogic.hpp"

namespace fex::henkin {

// --- terms and formulas ------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Constants are 0-ary function applications; Var nodes only ever denote
// quantifier-bound variables (theories are sentences).
struct Term {
    enum class Kind { Var, Func };
    Kind kind = Kind::Var;
    std::string name;
    std::vector<TermPtr> args;
};

TermPtr mk_var(std::string name);
TermPtr mk_const(std::string name);
TermPtr mk_func(std::string name, std::vector<TermPtr> args);

std::string to_text(const Term& t);
bool term_closed(const Term& t);

struct FOFormula;
using FOFormulaPtr = std::shared_ptr<const FOFormula>;

struct FOFormula {
    enum class Kind { Rel, Eq, Not, And, Or, Exists, Forall };
    Kind kind = Kind::Rel;
    std::string rel;                     // Rel
    std::vector<TermPtr> terms;          // Rel arguments; Eq stores {lhs, rhs}
    std::vector<FOFormulaPtr> children;  // Not (1) / And / Or
    std::vector<std::string> vars;       // quantifier block, nonempty
    FOFormulaPtr body;                   // quantifier body
};

FOFormulaPtr fo_rel(std::string name, std::vector<TermPtr> args);
FOFormulaPtr fo_eq(TermPtr lhs, TermPtr rhs);
FOFormulaPtr fo_not(FOFormulaPtr f);
FOFormulaPtr fo_and(std::vector<FOFormulaPtr> children);
FOFormulaPtr fo_or(std::vector<FOFormulaPtr> children);
FOFormulaPtr fo_exists(std::vector<std::string> vars, FOFormulaPtr body);
FOFormulaPtr fo_forall(std::vector<std::string> vars, FOFormulaPtr body);

std::string to_text(const FOFormula& f);

// Alpha-renamed printing: bound variables are numbered in binder order, so
// alpha-equivalent formulas share a key.
std::string canonical_key(const FOFormula& f);

// Free variables (for sentence checks).
std::set<std::string> free_vars(const FOFormula& f);

// Universal blocks rewritten as negated existentials; the rest is mapped
// structurally.
FOFormulaPtr normalize_foralls(const FOFormula& f);

// Capture-avoiding substitution of closed terms for free variables.
FOFormulaPtr substitute(const FOFormula& f, const std::map<std::string, TermPtr>& sub);

// --- signature -----------------------------------------------------------------

struct Signature {
    std::map<std::string, uint32_t> functions;  // constants have arity 0
    std::map<std::string, uint32_t> relations;
};

// Collects symbols from a theory, checking arity consistency and
// function/relation separation.
Signature infer_signature(const std::vector<FOFormulaPtr>& theory);

// --- witness closure --------------------------------------------------------------

struct ClosureConfig {
    uint32_t max_rounds = 8;
    uint64_t term_cap = 128;
    uint64_t sentence_cap = 20000;
    uint64_t tuple_cap = 50000;  // instantiation tuples per existential per round
};

struct ClosedTheory {
    std::vector<FOFormulaPtr> theory;  // normalized input sentences
    // the sentence closure, in deterministic insertion order
    std::vector<std::string> sentence_order;               // canonical keys
    std::map<std::string, FOFormulaPtr> sentences;
    // polarities under which each sentence is reachable from the asserted
    // roots (both bits may be set); negative existentials are the ones whose
    // falsity must rule out every term instance, so only they are
    // tuple-instantiated during closure
    std::map<std::string, std::pair<bool, bool>> polarity;  // key → {positive, negative}
    // closed terms, insertion order
    std::vector<std::string> term_order;
    std::map<std::string, TermPtr> terms;
    Signature sig;  // includes witness constants
    std::map<std::string, std::vector<std::string>> witnesses;  // existential key → constants
    bool stable = true;
    uint32_t rounds_used = 0;
};

// Builds the subformula closure of the theory: every existential sentence
// gets witness constants and its witness-substituted body; existentials
// reachable under negative polarity are additionally instantiated over all
// closed-term tuples, looping until fixpoint or the round budget.  A
// non-stable result carries stable = false.
ClosedTheory close_witnesses(const std::vector<FOFormulaPtr>& theory,
                             const ClosureConfig& cfg = {});

// --- propositional image ------------------------------------------------------------

struct PropImage {
    std::vector<std::string> var_keys;           // variable index → sentence key
    std::vector<FOFormulaPtr> var_formula;       // variable index → sentence
    std::map<std::string, uint32_t> var_of;      // sentence key → variable index
    std::vector<proplogic::FormulaPtr> axioms;
    std::vector<std::string> axiom_labels;       // parallel to axioms
    bool equality_enabled = false;
    ClosedTheory closed;
};

// Emits one propositional variable per closure sentence (plus an equality
// table over the closed terms when the theory needs one) and the axiom
// schemes tying them together: asserted theory sentences, negation and
// and/or decomposition, quantifier-free tautologies, witness biconditionals,
// instance-to-witness implications, and equality/congruence axioms.
PropImage propositionalize(const ClosedTheory& closed, const ClosureConfig& cfg = {});

// --- structures ----------------------------------------------------------------------

struct Structure {
    Signature sig;
    std::vector<std::string> class_reps;          // class index → representative term text
    std::map<std::string, size_t> class_of_term;  // closure term text → class index
    std::map<std::string, size_t> constants;      // constant name → class index
    std::map<std::string, std::map<std::vector<size_t>, size_t>> functions;
    size_t function_default = 0;                  // class used for untabulated tuples
    std::map<std::string, std::set<std::vector<size_t>>> relations;

    size_t domain_size() const { return class_reps.size(); }
};

// Quotient of the closed terms by the assignment's equality table, with
// relations and functions read off the assignment.
Structure extract_structure(const PropImage& image, const proplogic::Assignment& S);

// Standard satisfaction over the finite domain.
bool model_check(const Structure& M, const FOFormula& f);

// --- pipeline -------------------------------------------------------------------------

struct PipelineResult {
    bool sat = false;
    std::optional<Structure> model;
    proplogic::Assignment assignment;  // over image variables, when sat
    PropImage image;
};

// close_witnesses → propositionalize → compactness_solve → extract_structure,
// with the extracted structure model-checked against every input sentence.
PipelineResult henkin_pipeline(const std::vector<FOFormulaPtr>& theory, uint32_t width,
                               uint64_t searchBound = filters::kDefaultSearchBound,
                               const ClosureConfig& cfg = {});

}  // namespace fex::henkin
