#include "fex/henkin.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fex::henkin {

// --- construction ------------------------------------------------------------

TermPtr mk_var(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Var;
    t->name = std::move(name);
    return t;
}

TermPtr mk_const(std::string name) { return mk_func(std::move(name), {}); }

TermPtr mk_func(std::string name, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Func;
    t->name = std::move(name);
    t->args = std::move(args);
    return t;
}

FOFormulaPtr fo_rel(std::string name, std::vector<TermPtr> args) {
    auto f = std::make_shared<FOFormula>();
    f->kind = FOFormula::Kind::Rel;
    f->rel = std::move(name);
    f->terms = std::move(args);
    return f;
}

FOFormulaPtr fo_eq(TermPtr lhs, TermPtr rhs) {
    auto f = std::make_shared<FOFormula>();
    f->kind = FOFormula::Kind::Eq;
    f->terms = {std::move(lhs), std::move(rhs)};
    return f;
}

FOFormulaPtr fo_not(FOFormulaPtr child) {
    auto f = std::make_shared<FOFormula>();
    f->kind = FOFormula::Kind::Not;
    f->children = {std::move(child)};
    return f;
}

FOFormulaPtr fo_and(std::vector<FOFormulaPtr> children) {
    auto f = std::make_shared<FOFormula>();
    f->kind = FOFormula::Kind::And;
    f->children = std::move(children);
    return f;
}

FOFormulaPtr fo_or(std::vector<FOFormulaPtr> children) {
    auto f = std::make_shared<FOFormula>();
    f->kind = FOFormula::Kind::Or;
    f->children = std::move(children);
    return f;
}

namespace {

FOFormulaPtr mk_quant(FOFormula::Kind kind, std::vector<std::string> vars, FOFormulaPtr body) {
    if (vars.empty()) throw InvalidInput("a quantifier block needs at least one variable");
    for (size_t i = 0; i < vars.size(); ++i)
        for (size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j])
                throw InvalidInput("duplicate variable '" + vars[i] + "' in a quantifier block");
    auto f = std::make_shared<FOFormula>();
    f->kind = kind;
    f->vars = std::move(vars);
    f->body = std::move(body);
    return f;
}

}  // namespace

FOFormulaPtr fo_exists(std::vector<std::string> vars, FOFormulaPtr body) {
    return mk_quant(FOFormula::Kind::Exists, std::move(vars), std::move(body));
}

FOFormulaPtr fo_forall(std::vector<std::string> vars, FOFormulaPtr body) {
    return mk_quant(FOFormula::Kind::Forall, std::move(vars), std::move(body));
}

// --- printing ------------------------------------------------------------------

std::string to_text(const Term& t) {
    if (t.args.empty()) return t.name;
    std::string out = "(" + t.name;
    for (const auto& a : t.args) out += " " + to_text(*a);
    return out + ")";
}

bool term_closed(const Term& t) {
    if (t.kind == Term::Kind::Var) return false;
    for (const auto& a : t.args)
        if (!term_closed(*a)) return false;
    return true;
}

std::string to_text(const FOFormula& f) {
    switch (f.kind) {
        case FOFormula::Kind::Rel: {
            std::string out = "(" + f.rel;
            for (const auto& t : f.terms) out += " " + to_text(*t);
            return out + ")";
        }
        case FOFormula::Kind::Eq:
            return "(= " + to_text(*f.terms[0]) + " " + to_text(*f.terms[1]) + ")";
        case FOFormula::Kind::Not:
            return "(not " + to_text(*f.children[0]) + ")";
        case FOFormula::Kind::And:
        case FOFormula::Kind::Or: {
            std::string out = f.kind == FOFormula::Kind::And ? "(and" : "(or";
            for (const auto& c : f.children) out += " " + to_text(*c);
            return out + ")";
        }
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall: {
            std::string out = f.kind == FOFormula::Kind::Exists ? "(exists (" : "(forall (";
            for (size_t i = 0; i < f.vars.size(); ++i) {
                if (i) out += ' ';
                out += f.vars[i];
            }
            return out + ") " + to_text(*f.body) + ")";
        }
    }
    return "";
}

namespace {

void canon_term(const Term& t, const std::map<std::string, std::string>& env, std::string& out) {
    if (t.kind == Term::Kind::Var) {
        auto it = env.find(t.name);
        out += it != env.end() ? it->second : t.name;
        return;
    }
    if (t.args.empty()) {
        out += t.name;
        return;
    }
    out += "(" + t.name;
    for (const auto& a : t.args) {
        out += ' ';
        canon_term(*a, env, out);
    }
    out += ")";
}

void canon_formula(const FOFormula& f, std::map<std::string, std::string> env, uint32_t& counter,
                   std::string& out) {
    switch (f.kind) {
        case FOFormula::Kind::Rel:
            out += "(" + f.rel;
            for (const auto& t : f.terms) {
                out += ' ';
                canon_term(*t, env, out);
            }
            out += ")";
            return;
        case FOFormula::Kind::Eq:
            out += "(= ";
            canon_term(*f.terms[0], env, out);
            out += ' ';
            canon_term(*f.terms[1], env, out);
            out += ")";
            return;
        case FOFormula::Kind::Not:
            out += "(not ";
            canon_formula(*f.children[0], env, counter, out);
            out += ")";
            return;
        case FOFormula::Kind::And:
        case FOFormula::Kind::Or:
            out += f.kind == FOFormula::Kind::And ? "(and" : "(or";
            for (const auto& c : f.children) {
                out += ' ';
                canon_formula(*c, env, counter, out);
            }
            out += ")";
            return;
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall: {
            out += f.kind == FOFormula::Kind::Exists ? "(exists (" : "(forall (";
            for (size_t i = 0; i < f.vars.size(); ++i) {
                std::string fresh = "$" + std::to_string(counter++);
                env[f.vars[i]] = fresh;
                if (i) out += ' ';
                out += fresh;
            }
            out += ") ";
            canon_formula(*f.body, env, counter, out);
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string canonical_key(const FOFormula& f) {
    std::string out;
    uint32_t counter = 0;
    canon_formula(f, {}, counter, out);
    return out;
}

// --- variables, normalization, substitution --------------------------------------

namespace {

void free_vars_term(const Term& t, const std::set<std::string>& bound,
                    std::set<std::string>& out) {
    if (t.kind == Term::Kind::Var) {
        if (!bound.count(t.name)) out.insert(t.name);
        return;
    }
    for (const auto& a : t.args) free_vars_term(*a, bound, out);
}

void free_vars_rec(const FOFormula& f, std::set<std::string> bound, std::set<std::string>& out) {
    switch (f.kind) {
        case FOFormula::Kind::Rel:
        case FOFormula::Kind::Eq:
            for (const auto& t : f.terms) free_vars_term(*t, bound, out);
            return;
        case FOFormula::Kind::Not:
        case FOFormula::Kind::And:
        case FOFormula::Kind::Or:
            for (const auto& c : f.children) free_vars_rec(*c, bound, out);
            return;
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall:
            for (const auto& v : f.vars) bound.insert(v);
            free_vars_rec(*f.body, std::move(bound), out);
            return;
    }
}

}  // namespace

std::set<std::string> free_vars(const FOFormula& f) {
    std::set<std::string> out;
    free_vars_rec(f, {}, out);
    return out;
}

FOFormulaPtr normalize_foralls(const FOFormula& f) {
    switch (f.kind) {
        case FOFormula::Kind::Rel: {
            auto copy = std::make_shared<FOFormula>(f);
            return copy;
        }
        case FOFormula::Kind::Eq: {
            auto copy = std::make_shared<FOFormula>(f);
            return copy;
        }
        case FOFormula::Kind::Not:
            return fo_not(normalize_foralls(*f.children[0]));
        case FOFormula::Kind::And:
        case FOFormula::Kind::Or: {
            std::vector<FOFormulaPtr> children;
            children.reserve(f.children.size());
            for (const auto& c : f.children) children.push_back(normalize_foralls(*c));
            return f.kind == FOFormula::Kind::And ? fo_and(std::move(children))
                                                  : fo_or(std::move(children));
        }
        case FOFormula::Kind::Exists:
            return fo_exists(f.vars, normalize_foralls(*f.body));
        case FOFormula::Kind::Forall:
            return fo_not(fo_exists(f.vars, fo_not(normalize_foralls(*f.body))));
    }
    throw std::logic_error("unreachable formula kind");
}

namespace {

TermPtr subst_term(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
    if (t->kind == Term::Kind::Var) {
        auto it = sub.find(t->name);
        return it != sub.end() ? it->second : t;
    }
    if (t->args.empty()) return t;
    std::vector<TermPtr> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(subst_term(a, sub));
    return mk_func(t->name, std::move(args));
}

}  // namespace

FOFormulaPtr substitute(const FOFormula& f, const std::map<std::string, TermPtr>& sub) {
    switch (f.kind) {
        case FOFormula::Kind::Rel: {
            std::vector<TermPtr> args;
            args.reserve(f.terms.size());
            for (const auto& t : f.terms) args.push_back(subst_term(t, sub));
            return fo_rel(f.rel, std::move(args));
        }
        case FOFormula::Kind::Eq:
            return fo_eq(subst_term(f.terms[0], sub), subst_term(f.terms[1], sub));
        case FOFormula::Kind::Not:
            return fo_not(substitute(*f.children[0], sub));
        case FOFormula::Kind::And:
        case FOFormula::Kind::Or: {
            std::vector<FOFormulaPtr> children;
            children.reserve(f.children.size());
            for (const auto& c : f.children) children.push_back(substitute(*c, sub));
            return f.kind == FOFormula::Kind::And ? fo_and(std::move(children))
                                                  : fo_or(std::move(children));
        }
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall: {
            // binders shadow substituted names
            std::map<std::string, TermPtr> inner = sub;
            for (const auto& v : f.vars) inner.erase(v);
            auto body = substitute(*f.body, inner);
            return f.kind == FOFormula::Kind::Exists ? fo_exists(f.vars, std::move(body))
                                                     : fo_forall(f.vars, std::move(body));
        }
    }
    throw std::logic_error("unreachable formula kind");
}

// --- signature ----------------------------------------------------------------------

namespace {

struct SigBuilder {
    Signature sig;

    void add_function(const std::string& name, uint32_t arity) {
        if (sig.relations.count(name))
            throw SignatureMismatch("'" + name + "' is used both as a relation and in term position");
        auto [it, fresh] = sig.functions.emplace(name, arity);
        if (!fresh && it->second != arity)
            throw SignatureMismatch("'" + name + "' is used with arities " +
                                    std::to_string(it->second) + " and " + std::to_string(arity));
    }

    void add_relation(const std::string& name, uint32_t arity) {
        if (sig.functions.count(name))
            throw SignatureMismatch("'" + name + "' is used both as a relation and in term position");
        auto [it, fresh] = sig.relations.emplace(name, arity);
        if (!fresh && it->second != arity)
            throw SignatureMismatch("'" + name + "' is used with arities " +
                                    std::to_string(it->second) + " and " + std::to_string(arity));
    }

    void term(const Term& t) {
        if (t.kind == Term::Kind::Var) return;
        add_function(t.name, static_cast<uint32_t>(t.args.size()));
        for (const auto& a : t.args) term(*a);
    }

    void formula(const FOFormula& f) {
        switch (f.kind) {
            case FOFormula::Kind::Rel:
                add_relation(f.rel, static_cast<uint32_t>(f.terms.size()));
                for (const auto& t : f.terms) term(*t);
                return;
            case FOFormula::Kind::Eq:
                term(*f.terms[0]);
                term(*f.terms[1]);
                return;
            case FOFormula::Kind::Not:
            case FOFormula::Kind::And:
            case FOFormula::Kind::Or:
                for (const auto& c : f.children) formula(*c);
                return;
            case FOFormula::Kind::Exists:
            case FOFormula::Kind::Forall:
                formula(*f.body);
                return;
        }
    }
};

}  // namespace

Signature infer_signature(const std::vector<FOFormulaPtr>& theory) {
    SigBuilder b;
    for (const auto& f : theory) b.formula(*f);
    return b.sig;
}

// --- witness closure ---------------------------------------------------------------------

namespace {

struct ClosureBuilder {
    ClosureConfig cfg;
    ClosedTheory out;
    uint32_t witness_counter = 0;

    void add_term(const TermPtr& t) {
        for (const auto& a : t->args) add_term(a);
        std::string key = to_text(*t);
        if (out.terms.count(key)) return;
        if (out.terms.size() >= cfg.term_cap)
            throw UniverseOverflow("closed-term universe exceeds the cap of " +
                                   std::to_string(cfg.term_cap));
        out.terms.emplace(key, t);
        out.term_order.push_back(std::move(key));
    }

    void add_closed_parts(const TermPtr& t) {
        if (term_closed(*t)) {
            add_term(t);
            return;
        }
        for (const auto& a : t->args) add_closed_parts(a);
    }

    void scan_terms(const FOFormula& f) {
        switch (f.kind) {
            case FOFormula::Kind::Rel:
            case FOFormula::Kind::Eq:
                for (const auto& t : f.terms) add_closed_parts(t);
                return;
            case FOFormula::Kind::Not:
            case FOFormula::Kind::And:
            case FOFormula::Kind::Or:
                for (const auto& c : f.children) scan_terms(*c);
                return;
            case FOFormula::Kind::Exists:
            case FOFormula::Kind::Forall:
                scan_terms(*f.body);
                return;
        }
    }

    const std::vector<std::string>& ensure_witnesses(const std::string& key, size_t count) {
        auto it = out.witnesses.find(key);
        if (it != out.witnesses.end()) return it->second;
        std::vector<std::string> names;
        names.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            std::string name;
            do {
                name = "w" + std::to_string(witness_counter++);
            } while (out.sig.functions.count(name) || out.sig.relations.count(name));
            out.sig.functions.emplace(name, 0);
            add_term(mk_const(name));
            names.push_back(std::move(name));
        }
        return out.witnesses.emplace(key, std::move(names)).first->second;
    }

    bool polarity_dirty = false;

    // Adds the sentence (if new) and merges its reachability polarity,
    // propagating through the subformula structure: negation flips, and/or
    // pass through, and the witness-substituted body of an existential
    // inherits both bits.
    void add_sentence(const FOFormulaPtr& f, bool pos, bool neg) {
        std::string key = canonical_key(*f);
        auto found = out.sentences.find(key);
        if (found != out.sentences.end()) {
            auto& bits = out.polarity.at(key);
            bool new_pos = pos && !bits.first;
            bool new_neg = neg && !bits.second;
            if (!new_pos && !new_neg) return;
            bits.first |= pos;
            bits.second |= neg;
            polarity_dirty = true;
            descend(found->second, new_pos, new_neg);
            return;
        }
        if (out.sentences.size() >= cfg.sentence_cap)
            throw UniverseOverflow("sentence closure exceeds the cap of " +
                                   std::to_string(cfg.sentence_cap));
        out.sentences.emplace(key, f);
        out.sentence_order.push_back(key);
        out.polarity.emplace(key, std::make_pair(pos, neg));
        scan_terms(*f);
        if (f->kind == FOFormula::Kind::Exists) ensure_witnesses(key, f->vars.size());
        if (f->kind == FOFormula::Kind::Forall)
            throw std::logic_error("universal block survived normalization");
        descend(f, pos, neg);
    }

    void descend(const FOFormulaPtr& f, bool pos, bool neg) {
        if (!pos && !neg) return;
        switch (f->kind) {
            case FOFormula::Kind::Not:
                add_sentence(f->children[0], neg, pos);
                return;
            case FOFormula::Kind::And:
            case FOFormula::Kind::Or:
                for (const auto& c : f->children) add_sentence(c, pos, neg);
                return;
            case FOFormula::Kind::Exists: {
                const auto& names = out.witnesses.at(canonical_key(*f));
                std::map<std::string, TermPtr> sub;
                for (size_t i = 0; i < f->vars.size(); ++i)
                    sub[f->vars[i]] = mk_const(names[i]);
                add_sentence(substitute(*f->body, sub), pos, neg);
                return;
            }
            default:
                return;
        }
    }

    // Instantiates every negative existential over every tuple of known
    // closed terms; returns whether anything new appeared.
    bool instantiate_round() {
        size_t sentences_before = out.sentence_order.size();
        size_t terms_before = out.term_order.size();
        polarity_dirty = false;
        std::vector<std::string> sentence_snapshot = out.sentence_order;
        std::vector<std::string> term_snapshot = out.term_order;

        for (const auto& key : sentence_snapshot) {
            const FOFormulaPtr& f = out.sentences.at(key);
            if (f->kind != FOFormula::Kind::Exists || !out.polarity.at(key).second) continue;
            size_t rho = f->vars.size();

            uint64_t tuples = 1;
            for (size_t i = 0; i < rho; ++i) {
                tuples *= term_snapshot.size();
                if (tuples > cfg.tuple_cap)
                    throw UniverseOverflow("instantiation needs more than " +
                                           std::to_string(cfg.tuple_cap) + " term tuples");
            }

            std::vector<size_t> odo(rho, 0);
            while (true) {
                std::map<std::string, TermPtr> sub;
                for (size_t i = 0; i < rho; ++i)
                    sub[f->vars[i]] = out.terms.at(term_snapshot[odo[i]]);
                add_sentence(substitute(*f->body, sub), false, true);

                size_t i = 0;
                while (i < rho && ++odo[i] == term_snapshot.size()) {
                    odo[i] = 0;
                    ++i;
                }
                if (i == rho) break;
            }
        }
        return out.sentence_order.size() != sentences_before ||
               out.term_order.size() != terms_before || polarity_dirty;
    }
};

}  // namespace

ClosedTheory close_witnesses(const std::vector<FOFormulaPtr>& theory, const ClosureConfig& cfg) {
    ClosureBuilder b{cfg, {}, 0};
    b.out.sig = infer_signature(theory);
    for (const auto& f : theory) {
        auto free = free_vars(*f);
        if (!free.empty())
            throw InvalidInput("theory formulas must be sentences; '" + *free.begin() +
                               "' occurs free");
        auto normalized = normalize_foralls(*f);
        b.out.theory.push_back(normalized);
        b.add_sentence(normalized, true, false);
    }

    // structures are nonempty: inject a constant when the theory names no terms
    if (b.out.terms.empty()) b.ensure_witnesses("$ground", 1);

    b.out.stable = false;
    for (uint32_t round = 0; round < cfg.max_rounds; ++round) {
        b.out.rounds_used = round + 1;
        if (!b.instantiate_round()) {
            b.out.stable = true;
            break;
        }
    }
    return b.out;
}

// --- propositional image --------------------------------------------------------------------

namespace {

bool quantifier_free(const FOFormula& f) {
    switch (f.kind) {
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall:
            return false;
        case FOFormula::Kind::Rel:
        case FOFormula::Kind::Eq:
            return true;
        default:
            for (const auto& c : f.children)
                if (!quantifier_free(*c)) return false;
            return true;
    }
}

bool contains_eq(const FOFormula& f) {
    switch (f.kind) {
        case FOFormula::Kind::Eq:
            return true;
        case FOFormula::Kind::Rel:
            return false;
        case FOFormula::Kind::Exists:
        case FOFormula::Kind::Forall:
            return contains_eq(*f.body);
        default:
            for (const auto& c : f.children)
                if (contains_eq(*c)) return true;
            return false;
    }
}

void collect_shells(const FOFormula& f, std::map<std::string, const FOFormula*>& shells) {
    switch (f.kind) {
        case FOFormula::Kind::Rel:
        case FOFormula::Kind::Eq:
            shells.emplace(canonical_key(f), &f);
            return;
        default:
            for (const auto& c : f.children) collect_shells(*c, shells);
            return;
    }
}

bool eval_shells(const FOFormula& f, const std::map<std::string, bool>& values) {
    switch (f.kind) {
        case FOFormula::Kind::Rel:
        case FOFormula::Kind::Eq:
            return values.at(canonical_key(f));
        case FOFormula::Kind::Not:
            return !eval_shells(*f.children[0], values);
        case FOFormula::Kind::And:
            for (const auto& c : f.children)
                if (!eval_shells(*c, values)) return false;
            return true;
        case FOFormula::Kind::Or:
            for (const auto& c : f.children)
                if (eval_shells(*c, values)) return true;
            return false;
        default:
            throw std::logic_error("shell evaluation on a quantified formula");
    }
}

// Truth-table tautology test over the atomic shells; formulas with too many
// shells are skipped (their decomposition axioms already pin them down).
bool is_qf_tautology(const FOFormula& f) {
    std::map<std::string, const FOFormula*> shells;
    collect_shells(f, shells);
    if (shells.size() > 16) return false;
    std::vector<std::string> keys;
    keys.reserve(shells.size());
    for (const auto& [k, _] : shells) keys.push_back(k);
    for (uint64_t mask = 0; mask < (uint64_t{1} << keys.size()); ++mask) {
        std::map<std::string, bool> values;
        for (size_t i = 0; i < keys.size(); ++i) values[keys[i]] = (mask >> i) & 1;
        if (!eval_shells(f, values)) return false;
    }
    return true;
}

}  // namespace

PropImage propositionalize(const ClosedTheory& closed, const ClosureConfig& cfg) {
    (void)cfg;
    PropImage im;
    im.closed = closed;

    auto add_var = [&im](const std::string& key, const FOFormulaPtr& f) -> uint32_t {
        auto it = im.var_of.find(key);
        if (it != im.var_of.end()) return it->second;
        uint32_t index = static_cast<uint32_t>(im.var_keys.size());
        im.var_of.emplace(key, index);
        im.var_keys.push_back(key);
        im.var_formula.push_back(f);
        return index;
    };

    for (const auto& key : closed.sentence_order) add_var(key, closed.sentences.at(key));

    bool needs_eq = false;
    for (const auto& [key, f] : closed.sentences)
        if (contains_eq(*f)) { needs_eq = true; break; }
    if (!needs_eq)
        for (const auto& [name, arity] : closed.sig.functions)
            if (arity >= 1) { needs_eq = true; break; }
    im.equality_enabled = needs_eq;

    std::vector<TermPtr> terms;
    terms.reserve(closed.term_order.size());
    for (const auto& key : closed.term_order) terms.push_back(closed.terms.at(key));

    constexpr size_t kEqualityTermLimit = 24;
    if (needs_eq && terms.size() > kEqualityTermLimit)
        throw UniverseOverflow("equality table supports at most " +
                               std::to_string(kEqualityTermLimit) + " closed terms, need " +
                               std::to_string(terms.size()));

    // eq variables for every ordered pair of closed terms
    std::vector<std::vector<uint32_t>> eqv;
    if (needs_eq) {
        eqv.assign(terms.size(), std::vector<uint32_t>(terms.size(), 0));
        for (size_t i = 0; i < terms.size(); ++i)
            for (size_t j = 0; j < terms.size(); ++j) {
                auto eq = fo_eq(terms[i], terms[j]);
                eqv[i][j] = add_var(canonical_key(*eq), eq);
            }
    }

    auto emit = [&im](proplogic::FormulaPtr ax, std::string label) {
        im.axioms.push_back(std::move(ax));
        im.axiom_labels.push_back(std::move(label));
    };
    auto atom = [](uint32_t v) { return proplogic::mk_atom(v); };
    auto implies = [&](proplogic::FormulaPtr a, proplogic::FormulaPtr b) {
        return proplogic::mk_or({proplogic::mk_not(std::move(a)), std::move(b)});
    };
    auto iff = [&](proplogic::FormulaPtr a, proplogic::FormulaPtr b) {
        return proplogic::mk_and({proplogic::mk_or({proplogic::mk_not(a), b}),
                                  proplogic::mk_or({proplogic::mk_not(b), a})});
    };
    auto var_of_formula = [&](const FOFormula& f) -> std::optional<uint32_t> {
        auto it = im.var_of.find(canonical_key(f));
        if (it == im.var_of.end()) return std::nullopt;
        return it->second;
    };

    // asserted theory sentences
    for (const auto& f : closed.theory) {
        auto v = var_of_formula(*f);
        if (!v) throw std::logic_error("theory sentence missing from the closure");
        emit(atom(*v), "assert " + canonical_key(*f));
    }

    // decomposition, witness, and tautology schemes, per sentence
    for (uint32_t index = 0; index < closed.sentence_order.size(); ++index) {
        const auto& key = closed.sentence_order[index];
        const FOFormulaPtr& f = closed.sentences.at(key);
        switch (f->kind) {
            case FOFormula::Kind::Not: {
                auto child = var_of_formula(*f->children[0]);
                if (!child) throw std::logic_error("negation child missing from the closure");
                emit(iff(atom(index), proplogic::mk_not(atom(*child))), "negation " + key);
                break;
            }
            case FOFormula::Kind::And:
            case FOFormula::Kind::Or: {
                std::vector<proplogic::FormulaPtr> parts;
                parts.reserve(f->children.size());
                for (const auto& c : f->children) {
                    auto v = var_of_formula(*c);
                    if (!v) throw std::logic_error("connective child missing from the closure");
                    parts.push_back(atom(*v));
                }
                auto rhs = f->kind == FOFormula::Kind::And ? proplogic::mk_and(std::move(parts))
                                                           : proplogic::mk_or(std::move(parts));
                emit(iff(atom(index), std::move(rhs)),
                     (f->kind == FOFormula::Kind::And ? "conjunction " : "disjunction ") + key);
                break;
            }
            case FOFormula::Kind::Exists: {
                const auto& names = closed.witnesses.at(key);
                std::map<std::string, TermPtr> sub;
                for (size_t i = 0; i < f->vars.size(); ++i)
                    sub[f->vars[i]] = mk_const(names[i]);
                auto instance = substitute(*f->body, sub);
                auto v = var_of_formula(*instance);
                if (!v) throw std::logic_error("witness instance missing from the closure");
                emit(iff(atom(index), atom(*v)), "witness " + key);
                break;
            }
            default:
                break;
        }
        if (quantifier_free(*f) && is_qf_tautology(*f)) emit(atom(index), "tautology " + key);
    }

    // instance-to-witness-instance implications over the term universe; a
    // missing instance variable is a closure defect for negative
    // existentials but expected for positive-only ones
    for (uint32_t index = 0; index < closed.sentence_order.size(); ++index) {
        const auto& key = closed.sentence_order[index];
        const FOFormulaPtr& f = closed.sentences.at(key);
        if (f->kind != FOFormula::Kind::Exists) continue;
        const bool negative = closed.polarity.at(key).second;

        const auto& names = closed.witnesses.at(key);
        std::map<std::string, TermPtr> witness_sub;
        for (size_t i = 0; i < f->vars.size(); ++i) witness_sub[f->vars[i]] = mk_const(names[i]);
        auto witness_var = var_of_formula(*substitute(*f->body, witness_sub));
        if (!witness_var) throw std::logic_error("witness instance missing from the closure");

        size_t rho = f->vars.size();
        std::vector<size_t> odo(rho, 0);
        if (terms.empty()) continue;
        while (true) {
            std::map<std::string, TermPtr> sub;
            for (size_t i = 0; i < rho; ++i) sub[f->vars[i]] = terms[odo[i]];
            auto instance = substitute(*f->body, sub);
            auto v = var_of_formula(*instance);
            if (v && *v != *witness_var) {
                emit(implies(atom(*v), atom(*witness_var)), "instantiation " + key);
            } else if (!v && negative && closed.stable) {
                throw std::logic_error("stable closure misses an instance of a negative "
                                       "existential");
            }
            size_t i = 0;
            while (i < rho && ++odo[i] == terms.size()) {
                odo[i] = 0;
                ++i;
            }
            if (i == rho) break;
        }
    }

    // equality: reflexivity, symmetry, transitivity, congruence
    if (needs_eq) {
        const size_t n = terms.size();
        for (size_t i = 0; i < n; ++i) emit(atom(eqv[i][i]), "refl " + closed.term_order[i]);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                emit(implies(atom(eqv[i][j]), atom(eqv[j][i])), "sym");
            }
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k) {
                    if (i == j || j == k || i == k) continue;
                    emit(proplogic::mk_or({proplogic::mk_not(atom(eqv[i][j])),
                                           proplogic::mk_not(atom(eqv[j][k])),
                                           atom(eqv[i][k])}),
                         "trans");
                }

        // function congruence over application terms present in the universe
        std::map<std::string, std::vector<size_t>> apps;
        for (size_t i = 0; i < n; ++i)
            if (!terms[i]->args.empty()) apps[terms[i]->name].push_back(i);
        auto term_index = [&](const Term& t) -> size_t {
            auto it = std::find(closed.term_order.begin(), closed.term_order.end(), to_text(t));
            if (it == closed.term_order.end())
                throw std::logic_error("closed subterm missing from the term universe");
            return static_cast<size_t>(it - closed.term_order.begin());
        };
        for (const auto& [name, indices] : apps)
            for (size_t a : indices)
                for (size_t b : indices) {
                    if (a == b) continue;
                    const auto& ta = terms[a];
                    const auto& tb = terms[b];
                    if (ta->args.size() != tb->args.size()) continue;
                    std::vector<proplogic::FormulaPtr> parts;
                    for (size_t i = 0; i < ta->args.size(); ++i)
                        parts.push_back(proplogic::mk_not(
                            atom(eqv[term_index(*ta->args[i])][term_index(*tb->args[i])])));
                    parts.push_back(atom(eqv[a][b]));
                    emit(proplogic::mk_or(std::move(parts)), "congruence fn " + name);
                }

        // relation congruence over atoms present in the closure
        std::map<std::string, std::vector<uint32_t>> rel_atoms;
        for (uint32_t index = 0; index < closed.sentence_order.size(); ++index) {
            const FOFormulaPtr& f = closed.sentences.at(closed.sentence_order[index]);
            if (f->kind == FOFormula::Kind::Rel) rel_atoms[f->rel].push_back(index);
        }
        for (const auto& [name, indices] : rel_atoms)
            for (uint32_t a : indices)
                for (uint32_t b : indices) {
                    if (a == b) continue;
                    const auto& fa = closed.sentences.at(closed.sentence_order[a]);
                    const auto& fb = closed.sentences.at(closed.sentence_order[b]);
                    if (fa->terms.size() != fb->terms.size()) continue;
                    std::vector<proplogic::FormulaPtr> parts;
                    for (size_t i = 0; i < fa->terms.size(); ++i)
                        parts.push_back(proplogic::mk_not(
                            atom(eqv[term_index(*fa->terms[i])][term_index(*fb->terms[i])])));
                    parts.push_back(proplogic::mk_not(atom(a)));
                    parts.push_back(atom(b));
                    emit(proplogic::mk_or(std::move(parts)), "congruence rel " + name);
                }
    }

    return im;
}

// --- structure extraction -------------------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    size_t find(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

bool rep_less(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

Structure extract_structure(const PropImage& image, const proplogic::Assignment& S) {
    for (uint32_t v = 0; v < image.var_keys.size(); ++v)
        if (!S.count(v))
            throw InconsistentAssignment("assignment misses variable " + std::to_string(v) +
                                         " (" + image.var_keys[v] + ")");
    for (size_t i = 0; i < image.axioms.size(); ++i)
        if (!proplogic::evaluate(*image.axioms[i], S))
            throw InconsistentAssignment("axiom fails under the assignment: " +
                                         image.axiom_labels[i]);

    const auto& closed = image.closed;
    const size_t n = closed.term_order.size();
    std::vector<TermPtr> terms;
    terms.reserve(n);
    for (const auto& key : closed.term_order) terms.push_back(closed.terms.at(key));

    UnionFind uf(n);
    if (image.equality_enabled) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                auto eq = fo_eq(terms[i], terms[j]);
                if (S.at(image.var_of.at(canonical_key(*eq)))) uf.unite(i, j);
            }
    }

    // classes keyed by their (size, lex)-least member text, ordered the same way
    std::map<size_t, std::string> root_rep;
    for (size_t i = 0; i < n; ++i) {
        size_t root = uf.find(i);
        const std::string& text = closed.term_order[i];
        auto it = root_rep.find(root);
        if (it == root_rep.end() || rep_less(text, it->second)) root_rep[root] = text;
    }
    std::vector<std::string> reps;
    reps.reserve(root_rep.size());
    for (const auto& [root, rep] : root_rep) reps.push_back(rep);
    std::sort(reps.begin(), reps.end(), rep_less);

    Structure M;
    M.sig = closed.sig;
    M.class_reps = reps;
    std::map<std::string, size_t> class_of_rep;
    for (size_t c = 0; c < reps.size(); ++c) class_of_rep[reps[c]] = c;
    for (size_t i = 0; i < n; ++i)
        M.class_of_term[closed.term_order[i]] = class_of_rep.at(root_rep.at(uf.find(i)));

    for (const auto& [name, arity] : closed.sig.functions) {
        if (arity != 0) continue;
        auto it = M.class_of_term.find(name);
        M.constants[name] = it != M.class_of_term.end() ? it->second : M.function_default;
    }

    for (size_t i = 0; i < n; ++i) {
        const auto& t = terms[i];
        if (t->args.empty()) continue;
        std::vector<size_t> tuple;
        tuple.reserve(t->args.size());
        for (const auto& a : t->args) tuple.push_back(M.class_of_term.at(to_text(*a)));
        size_t value = M.class_of_term.at(closed.term_order[i]);
        auto [it, fresh] = M.functions[t->name].emplace(std::move(tuple), value);
        if (!fresh && it->second != value)
            throw std::logic_error("function read-off disagrees across a class");
    }

    for (uint32_t v = 0; v < image.var_formula.size(); ++v) {
        const FOFormulaPtr& f = image.var_formula[v];
        if (f->kind != FOFormula::Kind::Rel || !S.at(v)) continue;
        std::vector<size_t> tuple;
        tuple.reserve(f->terms.size());
        for (const auto& t : f->terms) tuple.push_back(M.class_of_term.at(to_text(*t)));
        M.relations[f->rel].insert(std::move(tuple));
    }
    // relations present in the signature but with no true atom
    for (const auto& [name, arity] : closed.sig.relations) M.relations.try_emplace(name);

    return M;
}

// --- model checking ----------------------------------------------------------------------------

namespace {

size_t eval_term_in(const Structure& M, const Term& t,
                    const std::map<std::string, size_t>& env) {
    if (t.kind == Term::Kind::Var) {
        auto it = env.find(t.name);
        if (it == env.end()) throw InvalidInput("unbound variable '" + t.name + "'");
        return it->second;
    }
    auto sig_it = M.sig.functions.find(t.name);
    if (sig_it == M.sig.functions.end())
        throw SignatureMismatch("unknown function or constant '" + t.name + "'");
    if (sig_it->second != t.args.size())
        throw SignatureMismatch("'" + t.name + "' applied to " + std::to_string(t.args.size()) +
                                " arguments, expected " + std::to_string(sig_it->second));
    if (t.args.empty()) return M.constants.at(t.name);
    std::vector<size_t> tuple;
    tuple.reserve(t.args.size());
    for (const auto& a : t.args) tuple.push_back(eval_term_in(M, *a, env));
    auto tab = M.functions.find(t.name);
    if (tab != M.functions.end()) {
        auto hit = tab->second.find(tuple);
        if (hit != tab->second.end()) return hit->second;
    }
    return M.function_default;
}

bool check_rec(const Structure& M, const FOFormula& f, std::map<std::string, size_t>& env);

bool quant_loop(const Structure& M, const FOFormula& f, size_t i,
                std::map<std::string, size_t>& env, bool existential) {
    if (i == f.vars.size()) {
        bool r = check_rec(M, *f.body, env);
        return r;
    }
    const std::string& name = f.vars[i];
    std::optional<size_t> prev;
    if (auto it = env.find(name); it != env.end()) prev = it->second;
    for (size_t c = 0; c < M.domain_size(); ++c) {
        env[name] = c;
        bool r = quant_loop(M, f, i + 1, env, existential);
        if (r == existential) {
            if (prev) env[name] = *prev; else env.erase(name);
            return existential;
        }
    }
    if (prev) env[name] = *prev; else env.erase(name);
    return !existential;
}

bool check_rec(const Structure& M, const FOFormula& f, std::map<std::string, size_t>& env) {
    switch (f.kind) {
        case FOFormula::Kind::Rel: {
            auto sig_it = M.sig.relations.find(f.rel);
            if (sig_it == M.sig.relations.end())
                throw SignatureMismatch("unknown relation '" + f.rel + "'");
            if (sig_it->second != f.terms.size())
                throw SignatureMismatch("'" + f.rel + "' applied to " +
                                        std::to_string(f.terms.size()) + " arguments, expected " +
                                        std::to_string(sig_it->second));
            std::vector<size_t> tuple;
            tuple.reserve(f.terms.size());
            for (const auto& t : f.terms) tuple.push_back(eval_term_in(M, *t, env));
            auto rel = M.relations.find(f.rel);
            return rel != M.relations.end() && rel->second.count(tuple) > 0;
        }
        case FOFormula::Kind::Eq:
            return eval_term_in(M, *f.terms[0], env) == eval_term_in(M, *f.terms[1], env);
        case FOFormula::Kind::Not:
            return !check_rec(M, *f.children[0], env);
        case FOFormula::Kind::And:
            for (const auto& c : f.children)
                if (!check_rec(M, *c, env)) return false;
            return true;
        case FOFormula::Kind::Or:
            for (const auto& c : f.children)
                if (check_rec(M, *c, env)) return true;
            return false;
        case FOFormula::Kind::Exists:
            return quant_loop(M, f, 0, env, true);
        case FOFormula::Kind::Forall:
            return quant_loop(M, f, 0, env, false);
    }
    return false;
}

}  // namespace

bool model_check(const Structure& M, const FOFormula& f) {
    if (M.domain_size() == 0) throw InvalidInput("model checking needs a nonempty domain");
    std::map<std::string, size_t> env;
    return check_rec(M, f, env);
}

// --- pipeline --------------------------------------------------------------------------------

PipelineResult henkin_pipeline(const std::vector<FOFormulaPtr>& theory, uint32_t width,
                               uint64_t searchBound, const ClosureConfig& cfg) {
    auto closed = close_witnesses(theory, cfg);
    if (!closed.stable) throw ClosureBudgetExceeded(cfg.max_rounds);

    PipelineResult result;
    result.image = propositionalize(closed, cfg);

    if (result.image.axioms.empty()) {
        result.sat = true;
        result.model = extract_structure(result.image, {});
        return result;
    }

    auto solved = filters::compactness_solve(result.image.axioms, width, searchBound);
    if (!solved.sat) {
        result.sat = false;
        return result;
    }

    proplogic::Assignment S;
    for (uint32_t v = 0; v < result.image.var_keys.size(); ++v) {
        auto it = solved.assignment.find(v);
        S[v] = it != solved.assignment.end() && it->second;
    }
    result.sat = true;
    result.assignment = S;
    result.model = extract_structure(result.image, S);

    for (const auto& f : theory)
        if (!model_check(*result.model, *f))
            throw NotAModel("extracted structure fails a theory sentence: " + to_text(*f));
    return result;
}

}  // namespace fex::henkin
