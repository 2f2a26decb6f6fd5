#include "oracle_fo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fex/errors.hpp"

namespace fex::oracle {

using henkin::FOFormula;
using henkin::FOFormulaPtr;
using henkin::Term;
using henkin::TermPtr;

namespace {

using Env = std::map<std::string, size_t>;

size_t eval_term(const FiniteModel& M, const Term& t, const Env& env) {
    if (t.kind == Term::Kind::Var) return env.at(t.name);
    if (t.args.empty()) return M.constants.at(t.name);
    std::vector<size_t> args;
    args.reserve(t.args.size());
    for (const auto& a : t.args) args.push_back(eval_term(M, *a, env));
    return M.functions.at(t.name).at(args);
}

bool eval_rec(const FiniteModel& M, const FOFormula& f, Env& env) {
    switch (f.kind) {
        case FOFormula::Kind::Rel: {
            std::vector<size_t> tuple;
            tuple.reserve(f.terms.size());
            for (const auto& t : f.terms) tuple.push_back(eval_term(M, *t, env));
            auto it = M.relations.find(f.rel);
            return it != M.relations.end() && it->second.count(tuple) != 0;
        }
        case FOFormula::Kind::Eq:
            return eval_term(M, *f.terms[0], env) == eval_term(M, *f.terms[1], env);
        case FOFormula::Kind::Not:
            return !eval_rec(M, *f.children[0], env);
        case FOFormula::Kind::And:
            for (const auto& c : f.children)
                if (!eval_rec(M, *c, env)) return false;
            return true;
        case FOFormula::Kind::Or:
            for (const auto& c : f.children)
                if (eval_rec(M, *c, env)) return true;
            return false;
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall: {
            const bool exists = f.kind == FOFormula::Kind::Exists;
            // odometer over the block variables
            std::vector<size_t> vals(f.vars.size(), 0);
            while (true) {
                for (size_t i = 0; i < f.vars.size(); ++i) env[f.vars[i]] = vals[i];
                bool body = eval_rec(M, *f.body, env);
                if (body == exists) {
                    for (const auto& v : f.vars) env.erase(v);
                    return exists;
                }
                size_t i = 0;
                while (i < vals.size() && ++vals[i] == M.n) vals[i++] = 0;
                if (i == vals.size()) break;
            }
            for (const auto& v : f.vars) env.erase(v);
            return !exists;
        }
    }
    return false;
}

struct Symbols {
    std::map<std::string, uint32_t> functions;  // constants have arity 0
    std::map<std::string, uint32_t> relations;
};

void scan_term(const Term& t, Symbols& sym) {
    if (t.kind == Term::Kind::Var) return;
    sym.functions[t.name] = static_cast<uint32_t>(t.args.size());
    for (const auto& a : t.args) scan_term(*a, sym);
}

void scan_formula(const FOFormula& f, Symbols& sym, bool& has_eq) {
    switch (f.kind) {
        case FOFormula::Kind::Rel:
            sym.relations[f.rel] = static_cast<uint32_t>(f.terms.size());
            for (const auto& t : f.terms) scan_term(*t, sym);
            return;
        case FOFormula::Kind::Eq:
            has_eq = true;
            scan_term(*f.terms[0], sym);
            scan_term(*f.terms[1], sym);
            return;
        case FOFormula::Kind::Not:
        case FOFormula::Kind::And:
        case FOFormula::Kind::Or:
            for (const auto& c : f.children) scan_formula(*c, sym, has_eq);
            return;
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall:
            scan_formula(*f.body, sym, has_eq);
            return;
    }
}

}  // namespace

bool eval_sentence(const FiniteModel& M, const FOFormula& f) {
    Env env;
    return eval_rec(M, f, env);
}

std::optional<FiniteModel> find_model(const std::vector<FOFormulaPtr>& theory, size_t max_n,
                                      uint64_t budget) {
    Symbols sym;
    bool has_eq = false;
    for (const auto& f : theory) scan_formula(*f, sym, has_eq);

    for (size_t n = 1; n <= max_n; ++n) {
        // flatten all function table entries and relation tuples into one
        // mixed-radix counter, least candidate first
        struct FnSlot {
            std::string name;
            std::vector<size_t> args;
        };
        std::vector<FnSlot> fn_slots;
        std::vector<std::pair<std::string, std::vector<size_t>>> rel_slots;
        auto tuples_of = [n](uint32_t arity) {
            std::vector<std::vector<size_t>> out;
            std::vector<size_t> t(arity, 0);
            while (true) {
                out.push_back(t);
                size_t i = 0;
                while (i < t.size() && ++t[i] == n) t[i++] = 0;
                if (i == t.size() || t.empty()) break;
            }
            return out;
        };
        for (const auto& [name, arity] : sym.functions)
            for (auto& t : tuples_of(arity)) fn_slots.push_back({name, t});
        for (const auto& [name, arity] : sym.relations)
            for (auto& t : tuples_of(arity)) rel_slots.push_back({name, t});

        long double est = std::pow(static_cast<long double>(n),
                                   static_cast<long double>(fn_slots.size())) *
                          std::pow(2.0L, static_cast<long double>(rel_slots.size()));
        if (est > static_cast<long double>(budget))
            throw SizeOverflow("oracle model search at domain size " + std::to_string(n) +
                               " needs ~" + std::to_string(static_cast<double>(est)) +
                               " candidates");

        std::vector<size_t> fn_digits(fn_slots.size(), 0);
        std::vector<bool> rel_bits(rel_slots.size(), false);
        while (true) {
            FiniteModel M;
            M.n = n;
            for (size_t i = 0; i < fn_slots.size(); ++i) {
                if (fn_slots[i].args.empty())
                    M.constants[fn_slots[i].name] = fn_digits[i];
                else
                    M.functions[fn_slots[i].name][fn_slots[i].args] = fn_digits[i];
            }
            for (size_t i = 0; i < rel_slots.size(); ++i)
                if (rel_bits[i]) M.relations[rel_slots[i].first].insert(rel_slots[i].second);
            bool all = true;
            for (const auto& f : theory)
                if (!eval_sentence(M, *f)) {
                    all = false;
                    break;
                }
            if (all) return M;

            size_t i = 0;
            while (i < rel_bits.size() && rel_bits[i]) rel_bits[i++] = false;
            if (i < rel_bits.size()) {
                rel_bits[i] = true;
                continue;
            }
            size_t j = 0;
            while (j < fn_digits.size() && ++fn_digits[j] == n) fn_digits[j++] = 0;
            if (j == fn_digits.size()) break;
        }
    }
    return std::nullopt;
}

// --- grounding refutation ----------------------------------------------------

namespace {

TermPtr g_subst_term(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
    if (t->kind == Term::Kind::Var) {
        auto it = sub.find(t->name);
        return it != sub.end() ? it->second : t;
    }
    if (t->args.empty()) return t;
    std::vector<TermPtr> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(g_subst_term(a, sub));
    return henkin::mk_func(t->name, std::move(args));
}

// Substitution of closed terms only, so captures cannot happen.
FOFormulaPtr g_subst(const FOFormulaPtr& f, const std::map<std::string, TermPtr>& sub) {
    switch (f->kind) {
        case FOFormula::Kind::Rel: {
            std::vector<TermPtr> ts;
            for (const auto& t : f->terms) ts.push_back(g_subst_term(t, sub));
            return henkin::fo_rel(f->rel, std::move(ts));
        }
        case FOFormula::Kind::Eq:
            return henkin::fo_eq(g_subst_term(f->terms[0], sub), g_subst_term(f->terms[1], sub));
        case FOFormula::Kind::Not:
            return henkin::fo_not(g_subst(f->children[0], sub));
        case FOFormula::Kind::And:
        case FOFormula::Kind::Or: {
            std::vector<FOFormulaPtr> cs;
            for (const auto& c : f->children) cs.push_back(g_subst(c, sub));
            return f->kind == FOFormula::Kind::And ? henkin::fo_and(std::move(cs))
                                                   : henkin::fo_or(std::move(cs));
        }
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall: {
            auto inner = sub;
            for (const auto& v : f->vars) inner.erase(v);
            auto body = g_subst(f->body, inner);
            return f->kind == FOFormula::Kind::Exists ? henkin::fo_exists(f->vars, body)
                                                      : henkin::fo_forall(f->vars, body);
        }
    }
    return f;
}

// Negation normal form over the quantifier/connective fragment.
FOFormulaPtr g_nnf(const FOFormulaPtr& f, bool positive) {
    switch (f->kind) {
        case FOFormula::Kind::Rel:
        case FOFormula::Kind::Eq:
            return positive ? f : henkin::fo_not(f);
        case FOFormula::Kind::Not:
            return g_nnf(f->children[0], !positive);
        case FOFormula::Kind::And:
        case FOFormula::Kind::Or: {
            std::vector<FOFormulaPtr> cs;
            for (const auto& c : f->children) cs.push_back(g_nnf(c, positive));
            bool as_and = (f->kind == FOFormula::Kind::And) == positive;
            return as_and ? henkin::fo_and(std::move(cs)) : henkin::fo_or(std::move(cs));
        }
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall: {
            auto body = g_nnf(f->body, positive);
            bool as_exists = (f->kind == FOFormula::Kind::Exists) == positive;
            return as_exists ? henkin::fo_exists(f->vars, body)
                             : henkin::fo_forall(f->vars, body);
        }
    }
    return f;
}

struct Skolemizer {
    uint32_t counter = 0;
    Symbols* sym;

    FOFormulaPtr walk(const FOFormulaPtr& f, const std::vector<std::string>& univ) {
        switch (f->kind) {
            case FOFormula::Kind::Rel:
            case FOFormula::Kind::Eq:
            case FOFormula::Kind::Not:  // NNF: negations sit on atoms
                return f;
            case FOFormula::Kind::And:
            case FOFormula::Kind::Or: {
                std::vector<FOFormulaPtr> cs;
                for (const auto& c : f->children) cs.push_back(walk(c, univ));
                return f->kind == FOFormula::Kind::And ? henkin::fo_and(std::move(cs))
                                                       : henkin::fo_or(std::move(cs));
            }
            case FOFormula::Kind::Exists: {
                std::map<std::string, TermPtr> sub;
                for (const auto& v : f->vars) {
                    std::string name;
                    do {
                        name = "sk" + std::to_string(counter++);
                    } while (sym->functions.count(name) || sym->relations.count(name));
                    std::vector<TermPtr> args;
                    for (const auto& u : univ) args.push_back(henkin::mk_var(u));
                    sym->functions[name] = static_cast<uint32_t>(args.size());
                    sub[v] = args.empty() ? henkin::mk_const(name)
                                          : henkin::mk_func(name, std::move(args));
                }
                return walk(g_subst(f->body, sub), univ);
            }
            case FOFormula::Kind::Forall: {
                auto wider = univ;
                wider.insert(wider.end(), f->vars.begin(), f->vars.end());
                return henkin::fo_forall(f->vars, walk(f->body, wider));
            }
        }
        return f;
    }
};

std::string atom_key(const FOFormula& f) {
    if (f.kind == FOFormula::Kind::Eq)
        return henkin::to_text(*f.terms[0]) + " = " + henkin::to_text(*f.terms[1]);
    std::string out = f.rel;
    for (const auto& t : f.terms) out += " " + henkin::to_text(*t);
    return out;
}

// Propositional skeleton over ground atoms, evaluated against a bit mask.
struct GroundFormula {
    enum class Kind { Atom, Not, And, Or } kind = Kind::Atom;
    size_t atom = 0;
    std::vector<GroundFormula> children;

    bool eval(uint64_t mask) const {
        switch (kind) {
            case Kind::Atom:
                return mask >> atom & 1;
            case Kind::Not:
                return !children[0].eval(mask);
            case Kind::And:
                for (const auto& c : children)
                    if (!c.eval(mask)) return false;
                return true;
            case Kind::Or:
                for (const auto& c : children)
                    if (c.eval(mask)) return true;
                return false;
        }
        return false;
    }
};

struct Grounder {
    std::vector<TermPtr> terms;
    std::map<std::string, size_t> atom_index;
    std::vector<std::string> atom_names;
    uint32_t max_atoms;

    size_t atom(const FOFormula& f) {
        auto key = atom_key(f);
        auto it = atom_index.find(key);
        if (it != atom_index.end()) return it->second;
        if (atom_names.size() >= max_atoms)
            throw SizeOverflow("ground refutation needs more than " +
                               std::to_string(max_atoms) + " atoms");
        atom_index[key] = atom_names.size();
        atom_names.push_back(key);
        return atom_names.size() - 1;
    }

    GroundFormula ground(const FOFormulaPtr& f) {
        GroundFormula g;
        switch (f->kind) {
            case FOFormula::Kind::Rel:
            case FOFormula::Kind::Eq:
                g.kind = GroundFormula::Kind::Atom;
                g.atom = atom(*f);
                return g;
            case FOFormula::Kind::Not:
                g.kind = GroundFormula::Kind::Not;
                g.children.push_back(ground(f->children[0]));
                return g;
            case FOFormula::Kind::And:
            case FOFormula::Kind::Or:
                g.kind = f->kind == FOFormula::Kind::And ? GroundFormula::Kind::And
                                                         : GroundFormula::Kind::Or;
                for (const auto& c : f->children) g.children.push_back(ground(c));
                return g;
            case FOFormula::Kind::Forall: {
                // conjunction over all tuples from the closed-term universe
                g.kind = GroundFormula::Kind::And;
                std::vector<size_t> idx(f->vars.size(), 0);
                while (true) {
                    std::map<std::string, TermPtr> sub;
                    for (size_t i = 0; i < f->vars.size(); ++i) sub[f->vars[i]] = terms[idx[i]];
                    g.children.push_back(ground(g_subst(f->body, sub)));
                    size_t i = 0;
                    while (i < idx.size() && ++idx[i] == terms.size()) idx[i++] = 0;
                    if (i == idx.size()) break;
                }
                return g;
            }
            case FOFormula::Kind::Exists:
                throw std::logic_error("existential survived skolemization");
        }
        return g;
    }
};

}  // namespace

bool ground_refutes(const std::vector<FOFormulaPtr>& theory, uint32_t depth,
                    uint32_t max_ground_atoms) {
    Symbols sym;
    bool has_eq = false;
    for (const auto& f : theory) scan_formula(*f, sym, has_eq);

    Skolemizer sk{0, &sym};
    std::vector<FOFormulaPtr> skolemized;
    for (const auto& f : theory) skolemized.push_back(sk.walk(g_nnf(f, true), {}));

    // closed-term universe: constants, then up to `depth` rounds of function
    // application over everything built so far
    std::vector<TermPtr> terms;
    std::set<std::string> seen;
    auto add = [&terms, &seen](const TermPtr& t) {
        if (seen.insert(henkin::to_text(*t)).second) terms.push_back(t);
    };
    for (const auto& [name, arity] : sym.functions)
        if (arity == 0) add(henkin::mk_const(name));
    if (terms.empty()) add(henkin::mk_const("h0"));
    constexpr size_t kTermCap = 64;
    for (uint32_t round = 0; round < depth; ++round) {
        auto snapshot = terms;
        for (const auto& [name, arity] : sym.functions) {
            if (arity == 0) continue;
            std::vector<size_t> idx(arity, 0);
            while (true) {
                std::vector<TermPtr> args;
                for (size_t i = 0; i < arity; ++i) args.push_back(snapshot[idx[i]]);
                add(henkin::mk_func(name, std::move(args)));
                if (terms.size() > kTermCap) return false;
                size_t i = 0;
                while (i < idx.size() && ++idx[i] == snapshot.size()) idx[i++] = 0;
                if (i == idx.size()) break;
            }
        }
    }

    Grounder gr{terms, {}, {}, max_ground_atoms};
    std::vector<GroundFormula> clauses;
    try {
        for (const auto& f : skolemized) clauses.push_back(gr.ground(f));

        // without equality atoms, distinct ground terms may simply denote
        // distinct values, so no congruence machinery is needed
        if (has_eq) {
            auto eq_atom = [&gr](const TermPtr& a, const TermPtr& b) {
                GroundFormula g;
                g.kind = GroundFormula::Kind::Atom;
                g.atom = gr.atom(*henkin::fo_eq(a, b));
                return g;
            };
            auto lit_not = [](GroundFormula g) {
                GroundFormula n;
                n.kind = GroundFormula::Kind::Not;
                n.children.push_back(std::move(g));
                return n;
            };
            auto disj = [](std::vector<GroundFormula> cs) {
                GroundFormula g;
                g.kind = GroundFormula::Kind::Or;
                g.children = std::move(cs);
                return g;
            };
            for (const auto& t : terms) clauses.push_back(eq_atom(t, t));
            for (const auto& a : terms)
                for (const auto& b : terms) {
                    if (a == b) continue;
                    clauses.push_back(disj({lit_not(eq_atom(a, b)), eq_atom(b, a)}));
                    for (const auto& c : terms)
                        clauses.push_back(disj({lit_not(eq_atom(a, b)), lit_not(eq_atom(b, c)),
                                                eq_atom(a, c)}));
                }
            // congruence over the function applications inside the universe
            for (const auto& s : terms)
                for (const auto& t : terms) {
                    if (s->kind != Term::Kind::Func || t->kind != Term::Kind::Func) continue;
                    if (s->name != t->name || s->args.size() != t->args.size() ||
                        s->args.empty())
                        continue;
                    std::vector<GroundFormula> cs;
                    for (size_t i = 0; i < s->args.size(); ++i)
                        cs.push_back(lit_not(eq_atom(s->args[i], t->args[i])));
                    cs.push_back(eq_atom(s, t));
                    clauses.push_back(disj(std::move(cs)));
                }
            // congruence for relations, over every tuple from the universe
            std::vector<std::pair<std::string, std::vector<TermPtr>>> rels;
            for (const auto& [name, arity] : sym.relations) {
                std::vector<size_t> idx(arity, 0);
                while (true) {
                    std::vector<TermPtr> args;
                    for (size_t i = 0; i < arity; ++i) args.push_back(terms[idx[i]]);
                    rels.emplace_back(name, std::move(args));
                    size_t i = 0;
                    while (i < idx.size() && ++idx[i] == terms.size()) idx[i++] = 0;
                    if (i == idx.size() || arity == 0) break;
                }
            }
            for (const auto& [name, a] : rels)
                for (const auto& [name2, b] : rels) {
                    if (name != name2 || a == b) continue;
                    std::vector<GroundFormula> cs;
                    for (size_t i = 0; i < a.size(); ++i) cs.push_back(lit_not(eq_atom(a[i], b[i])));
                    GroundFormula ga;
                    ga.kind = GroundFormula::Kind::Atom;
                    ga.atom = gr.atom(*henkin::fo_rel(name, a));
                    GroundFormula gb;
                    gb.kind = GroundFormula::Kind::Atom;
                    gb.atom = gr.atom(*henkin::fo_rel(name, b));
                    cs.push_back(lit_not(std::move(ga)));
                    cs.push_back(std::move(gb));
                    clauses.push_back(disj(std::move(cs)));
                }
        }
    } catch (const SizeOverflow&) {
        return false;  // too big to ground — no refutation claimed
    }

    const size_t k = gr.atom_names.size();
    if (k > 63) return false;
    for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
        bool all = true;
        for (const auto& c : clauses)
            if (!c.eval(mask)) {
                all = false;
                break;
            }
        if (all) return false;  // the grounding is satisfiable — no refutation
    }
    return true;
}

Verdict decide(const std::vector<FOFormulaPtr>& theory, size_t max_n, uint32_t depth) {
    if (find_model(theory, max_n)) return Verdict::Sat;
    if (ground_refutes(theory, depth)) return Verdict::Unsat;
    return Verdict::Unknown;
}

bool eval_structure(const henkin::Structure& M, const FOFormula& f) {
    FiniteModel F;
    F.n = M.domain_size();
    F.constants = M.constants;
    F.relations = M.relations;

    Symbols sym;
    bool has_eq = false;
    scan_formula(f, sym, has_eq);
    for (const auto& [name, arity] : sym.functions) {
        if (arity == 0) {
            if (!F.constants.count(name)) F.constants[name] = M.function_default;
            continue;
        }
        auto table_it = M.functions.find(name);
        std::vector<size_t> idx(arity, 0);
        while (true) {
            size_t val = M.function_default;
            if (table_it != M.functions.end()) {
                auto e = table_it->second.find(idx);
                if (e != table_it->second.end()) val = e->second;
            }
            F.functions[name][idx] = val;
            size_t i = 0;
            while (i < idx.size() && ++idx[i] == F.n) idx[i++] = 0;
            if (i == idx.size()) break;
        }
    }
    return eval_sentence(F, f);
}

}  // namespace fex::oracle
