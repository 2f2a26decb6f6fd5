#include "fex/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace fex::io {

namespace {

[[noreturn]] void fail(const sexpr::Node& n, const std::string& message) {
    throw ParseError(message + " (got `" + sexpr::to_string(n) + "`)", n.line, n.col);
}

std::vector<uint64_t> parse_subset(const sexpr::Node& n) {
    if (!n.is_braces()) fail(n, "expected a set literal like {0 1 3}");
    std::vector<uint64_t> elems;
    elems.reserve(n.items.size());
    for (const auto& item : n.items) elems.push_back(sexpr::atom_u64(item));
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return elems;
}

// Finds `(head …)` clauses among the items of a toplevel form.
const sexpr::Node* find_clause(const sexpr::Node& n, const std::string& head) {
    for (const auto& item : n.items)
        if (item.head() == head) return &item;
    return nullptr;
}

uint32_t parse_index_atom(const sexpr::Node& n, char prefix, const char* what) {
    if (!n.is_atom() || n.text.size() < 2 || n.text[0] != prefix ||
        n.text.find_first_not_of("0123456789", 1) != std::string::npos)
        fail(n, std::string("expected ") + what);
    sexpr::Node digits = n;
    digits.text = n.text.substr(1);
    return static_cast<uint32_t>(sexpr::atom_u64(digits));
}

}  // namespace

// --- files -----------------------------------------------------------------

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write file: " + path);
    out << content;
    if (!out) throw InvalidInput("short write to file: " + path);
}

sexpr::Node parse_file_one(const std::string& path) {
    return sexpr::parse_one(read_file(path));
}

// --- sets, points, families ----------------------------------------------------

setcore::BaseSet parse_base_set(const sexpr::Node& n) {
    if (n.is_braces()) return setcore::BaseSet::finite(parse_subset(n));
    if (n.head() == "co") {
        if (n.items.size() != 2) fail(n, "expected (co {…})");
        return setcore::BaseSet::cofinite(parse_subset(n.items[1]));
    }
    if (n.head() == "builtin") {
        if (n.items.size() != 2) fail(n, "expected (builtin <which>)");
        const auto& which = n.items[1];
        if (which.is_atom()) {
            if (which.text == "evens") return setcore::BaseSet::evens();
            if (which.text == "odds") return setcore::BaseSet::odds();
            fail(which, "unknown builtin set");
        }
        if (which.head() == "mult" && which.items.size() == 2)
            return setcore::BaseSet::mult(sexpr::atom_u64(which.items[1]));
        if (which.head() == "interval" && which.items.size() == 3)
            return setcore::BaseSet::interval(sexpr::atom_u64(which.items[1]),
                                              sexpr::atom_u64(which.items[2]));
        fail(which, "unknown builtin set");
    }
    fail(n, "expected a base set");
}

setcore::GroundPoint parse_point(const sexpr::Node& n) {
    if (n.head() != "pt" || n.items.size() != 3) fail(n, "expected (pt {support} (trace…))");
    setcore::GroundPoint p;
    p.support = parse_subset(n.items[1]);
    if (!n.items[2].is_list()) fail(n.items[2], "expected a parenthesized trace list");
    for (const auto& member : n.items[2].items) p.trace.push_back(parse_subset(member));
    return p;
}

setcore::FamilySpec parse_family(const sexpr::Node& n, uint32_t default_width) {
    if (n.head() != "family") fail(n, "expected (family …)");
    const sexpr::Node* domain_clause = find_clause(n, "domain");
    if (!domain_clause) fail(n, "missing (domain …) clause");

    uint32_t width = default_width;
    if (const sexpr::Node* width_clause = find_clause(n, "width")) {
        if (width_clause->items.size() != 2) fail(*width_clause, "expected (width k)");
        width = static_cast<uint32_t>(sexpr::atom_u64(width_clause->items[1]));
    }

    setcore::BaseDomain domain = setcore::BaseDomain::omega(width);
    if (domain_clause->items.size() == 3 && domain_clause->items[1].is_atom() &&
        domain_clause->items[1].text == "finite") {
        domain = setcore::BaseDomain::finite(sexpr::atom_u64(domain_clause->items[2]), width);
    } else if (domain_clause->items.size() == 2 && domain_clause->items[1].is_atom() &&
               domain_clause->items[1].text == "omega") {
        // already set
    } else {
        fail(*domain_clause, "expected (domain finite n) or (domain omega)");
    }

    setcore::FamilySpec family{domain, {}};
    for (const auto& item : n.items)
        if (item.head() == "gen") {
            if (item.items.size() != 2) fail(item, "expected (gen <set>)");
            family.generators.push_back(parse_base_set(item.items[1]));
        }
    return family;
}

std::string write_family(const setcore::FamilySpec& family) {
    std::string out = "(family (domain ";
    if (family.domain.is_finite())
        out += "finite " + std::to_string(*family.domain.finite_n);
    else
        out += "omega";
    out += ") (width " + std::to_string(family.domain.width) + ")";
    for (const auto& g : family.generators) out += " (gen " + g.to_text() + ")";
    return out + ")";
}

setcore::CellSpec parse_cell(const sexpr::Node& n) {
    if (n.head() != "cell") fail(n, "expected (cell (pos …) (neg …))");
    setcore::CellSpec cell;
    for (const auto& item : n.items) {
        if (item.head() != "pos" && item.head() != "neg") continue;
        bool sign = item.head() == "pos";
        for (size_t i = 1; i < item.items.size(); ++i) {
            uint32_t gamma = static_cast<uint32_t>(sexpr::atom_u64(item.items[i]));
            auto [it, fresh] = cell.signs.emplace(gamma, sign);
            if (!fresh && it->second != sign)
                fail(item.items[i],
                     "generator " + std::to_string(gamma) + " is both positive and negative");
        }
    }
    return cell;
}

// --- propositional formulas ---------------------------------------------------------

proplogic::FormulaPtr parse_formula(const sexpr::Node& n) {
    if (n.is_atom()) return proplogic::mk_atom(parse_index_atom(n, 'a', "an atom like a0"));
    std::string head = n.head();
    if (head == "not") {
        if (n.items.size() != 2) fail(n, "(not …) takes exactly one formula");
        return proplogic::mk_not(parse_formula(n.items[1]));
    }
    if (head == "and" || head == "or") {
        std::vector<proplogic::FormulaPtr> children;
        for (size_t i = 1; i < n.items.size(); ++i) children.push_back(parse_formula(n.items[i]));
        return head == "and" ? proplogic::mk_and(std::move(children))
                             : proplogic::mk_or(std::move(children));
    }
    fail(n, "expected a formula");
}

proplogic::SetExprPtr parse_setexpr(const sexpr::Node& n) {
    if (n.is_atom()) return proplogic::mk_gen(parse_index_atom(n, 'g', "a generator like g0"));
    std::string head = n.head();
    if (head == "comp") {
        if (n.items.size() != 2) fail(n, "(comp …) takes exactly one expression");
        return proplogic::mk_complement(parse_setexpr(n.items[1]));
    }
    if (head == "isect" || head == "union") {
        std::vector<proplogic::SetExprPtr> children;
        for (size_t i = 1; i < n.items.size(); ++i) children.push_back(parse_setexpr(n.items[i]));
        return head == "isect" ? proplogic::mk_intersect(std::move(children))
                               : proplogic::mk_union(std::move(children));
    }
    fail(n, "expected a set expression");
}

namespace {

template <typename Formula, typename Parse>
std::vector<Formula> parse_theory_with(const sexpr::Node& n, Parse parse) {
    if (n.head() != "theory") fail(n, "expected (theory (assert f)*)");
    std::vector<Formula> out;
    for (size_t i = 1; i < n.items.size(); ++i) {
        const auto& clause = n.items[i];
        if (clause.head() != "assert" || clause.items.size() != 2)
            fail(clause, "expected (assert f)");
        out.push_back(parse(clause.items[1]));
    }
    return out;
}

}  // namespace

std::vector<proplogic::FormulaPtr> parse_prop_theory(const sexpr::Node& n) {
    return parse_theory_with<proplogic::FormulaPtr>(n, parse_formula);
}

std::string write_prop_theory(const std::vector<proplogic::FormulaPtr>& theory) {
    std::string out = "(theory";
    for (const auto& f : theory) out += "\n  (assert " + proplogic::to_text(*f) + ")";
    return out + ")\n";
}

// --- first-order formulas -------------------------------------------------------------

namespace {

const std::set<std::string> kReservedHeads = {"not", "and", "or", "exists", "forall", "=",
                                              "theory", "assert"};

henkin::TermPtr parse_term(const sexpr::Node& n, const std::set<std::string>& bound) {
    if (n.is_atom()) {
        if (n.text.empty() || n.text[0] == '$')
            fail(n, "names starting with $ are reserved");
        if (bound.count(n.text)) return henkin::mk_var(n.text);
        return henkin::mk_const(n.text);
    }
    if (!n.is_list() || n.items.empty() || !n.items[0].is_atom())
        fail(n, "expected a term");
    const std::string& fn = n.items[0].text;
    if (kReservedHeads.count(fn)) fail(n, "'" + fn + "' cannot name a function");
    std::vector<henkin::TermPtr> args;
    for (size_t i = 1; i < n.items.size(); ++i) args.push_back(parse_term(n.items[i], bound));
    return henkin::mk_func(fn, std::move(args));
}

henkin::FOFormulaPtr parse_fo_rec(const sexpr::Node& n, std::set<std::string> bound) {
    if (!n.is_list() || n.items.empty() || !n.items[0].is_atom())
        fail(n, "expected a first-order formula");
    const std::string& head = n.items[0].text;
    if (head == "not") {
        if (n.items.size() != 2) fail(n, "(not …) takes exactly one formula");
        return henkin::fo_not(parse_fo_rec(n.items[1], bound));
    }
    if (head == "and" || head == "or") {
        std::vector<henkin::FOFormulaPtr> children;
        for (size_t i = 1; i < n.items.size(); ++i)
            children.push_back(parse_fo_rec(n.items[i], bound));
        return head == "and" ? henkin::fo_and(std::move(children))
                             : henkin::fo_or(std::move(children));
    }
    if (head == "exists" || head == "forall") {
        if (n.items.size() != 3 || !n.items[1].is_list())
            fail(n, "expected (" + head + " (x…) f)");
        std::vector<std::string> vars;
        for (const auto& v : n.items[1].items) {
            if (!v.is_atom()) fail(v, "expected a variable name");
            if (v.text.empty() || v.text[0] == '$')
                fail(v, "names starting with $ are reserved");
            vars.push_back(v.text);
            bound.insert(v.text);
        }
        auto body = parse_fo_rec(n.items[2], std::move(bound));
        return head == "exists" ? henkin::fo_exists(std::move(vars), std::move(body))
                                : henkin::fo_forall(std::move(vars), std::move(body));
    }
    if (head == "=") {
        if (n.items.size() != 3) fail(n, "expected (= t u)");
        return henkin::fo_eq(parse_term(n.items[1], bound), parse_term(n.items[2], bound));
    }
    if (kReservedHeads.count(head)) fail(n, "'" + head + "' cannot name a relation");
    std::vector<henkin::TermPtr> args;
    for (size_t i = 1; i < n.items.size(); ++i) args.push_back(parse_term(n.items[i], bound));
    return henkin::fo_rel(head, std::move(args));
}

}  // namespace

henkin::FOFormulaPtr parse_fo_formula(const sexpr::Node& n) { return parse_fo_rec(n, {}); }

std::vector<henkin::FOFormulaPtr> parse_fo_theory(const sexpr::Node& n) {
    return parse_theory_with<henkin::FOFormulaPtr>(n, parse_fo_formula);
}

std::string write_fo_theory(const std::vector<henkin::FOFormulaPtr>& theory) {
    std::string out = "(theory";
    for (const auto& f : theory) out += "\n  (assert " + henkin::to_text(*f) + ")";
    return out + ")\n";
}

// --- filters -------------------------------------------------------------------------

filters::FilterPresentation parse_filter(const sexpr::Node& n, uint32_t default_width) {
    if (n.head() != "filter") fail(n, "expected (filter …)");
    const sexpr::Node* carrier = find_clause(n, "carrier");
    if (!carrier || carrier->items.size() < 2 || !carrier->items[1].is_atom())
        fail(n, "missing (carrier finite n) or (carrier symbolic (family …))");

    uint32_t width = default_width;
    if (const sexpr::Node* width_clause = find_clause(n, "width")) {
        if (width_clause->items.size() != 2) fail(*width_clause, "expected (width k)");
        width = static_cast<uint32_t>(sexpr::atom_u64(width_clause->items[1]));
    }

    if (carrier->items[1].text == "finite") {
        if (carrier->items.size() != 3) fail(*carrier, "expected (carrier finite n)");
        uint64_t base = sexpr::atom_u64(carrier->items[2]);
        std::vector<std::vector<uint64_t>> generators;
        for (const auto& item : n.items)
            if (item.head() == "gen") {
                if (item.items.size() != 2) fail(item, "expected (gen {…})");
                generators.push_back(parse_subset(item.items[1]));
            }
        return filters::FilterPresentation::finite_powerset(base, std::move(generators), width);
    }
    if (carrier->items[1].text == "symbolic") {
        if (carrier->items.size() != 3) fail(*carrier, "expected (carrier symbolic (family …))");
        setcore::FamilySpec family = parse_family(carrier->items[2], width);
        family.domain.width = width;
        std::vector<proplogic::SetExprPtr> generators;
        for (const auto& item : n.items)
            if (item.head() == "gen") {
                if (item.items.size() != 2) fail(item, "expected (gen <setexpr>)");
                generators.push_back(parse_setexpr(item.items[1]));
            }
        auto F = filters::FilterPresentation::symbolic(std::move(family), std::move(generators));
        F.width = width;
        return F;
    }
    fail(*carrier, "unknown carrier kind");
}

// --- models and assignments ---------------------------------------------------------------

std::string write_model(const henkin::Structure& M) {
    std::string out = "(model\n  (sig";
    for (const auto& [name, arity] : M.sig.functions)
        out += " (fn " + name + " " + std::to_string(arity) + ")";
    for (const auto& [name, arity] : M.sig.relations)
        out += " (rel " + name + " " + std::to_string(arity) + ")";
    out += ")\n  (domain " + std::to_string(M.domain_size()) + ")";
    for (size_t c = 0; c < M.class_reps.size(); ++c)
        out += "\n  ; class " + std::to_string(c) + " represents " + M.class_reps[c];
    for (const auto& [name, cls] : M.constants)
        out += "\n  (const " + name + " " + std::to_string(cls) + ")";
    for (const auto& [name, table] : M.functions) {
        out += "\n  (fn " + name;
        for (const auto& [args, value] : table) {
            out += " ((";
            for (size_t i = 0; i < args.size(); ++i) {
                if (i) out += ' ';
                out += std::to_string(args[i]);
            }
            out += ") " + std::to_string(value) + ")";
        }
        out += ")";
    }
    for (const auto& [name, tuples] : M.relations) {
        out += "\n  (rel " + name;
        for (const auto& tuple : tuples) {
            out += " (";
            for (size_t i = 0; i < tuple.size(); ++i) {
                if (i) out += ' ';
                out += std::to_string(tuple[i]);
            }
            out += ")";
        }
        out += ")";
    }
    return out + ")\n";
}

henkin::Structure parse_model(const sexpr::Node& n) {
    if (n.head() != "model") fail(n, "expected (model …)");
    henkin::Structure M;

    const sexpr::Node* sig = find_clause(n, "sig");
    if (!sig) fail(n, "missing (sig …) clause");
    for (size_t i = 1; i < sig->items.size(); ++i) {
        const auto& entry = sig->items[i];
        if (entry.items.size() != 3 || !entry.items[1].is_atom())
            fail(entry, "expected (fn name arity) or (rel name arity)");
        uint32_t arity = static_cast<uint32_t>(sexpr::atom_u64(entry.items[2]));
        if (entry.head() == "fn")
            M.sig.functions[entry.items[1].text] = arity;
        else if (entry.head() == "rel")
            M.sig.relations[entry.items[1].text] = arity;
        else
            fail(entry, "expected (fn …) or (rel …)");
    }

    const sexpr::Node* domain = find_clause(n, "domain");
    if (!domain || domain->items.size() != 2) fail(n, "missing (domain k) clause");
    uint64_t k = sexpr::atom_u64(domain->items[1]);
    for (uint64_t c = 0; c < k; ++c) M.class_reps.push_back("k" + std::to_string(c));

    auto parse_class = [&](const sexpr::Node& v) {
        uint64_t cls = sexpr::atom_u64(v);
        if (cls >= k) fail(v, "class index out of range");
        return static_cast<size_t>(cls);
    };

    for (const auto& item : n.items) {
        if (item.head() == "const") {
            if (item.items.size() != 3 || !item.items[1].is_atom())
                fail(item, "expected (const name class)");
            M.constants[item.items[1].text] = parse_class(item.items[2]);
        } else if (item.head() == "fn" && item.items.size() >= 2 && item.items[1].is_atom()) {
            const std::string& name = item.items[1].text;
            for (size_t i = 2; i < item.items.size(); ++i) {
                const auto& row = item.items[i];
                if (!row.is_list() || row.items.size() != 2 || !row.items[0].is_list())
                    fail(row, "expected ((args…) value)");
                std::vector<size_t> args;
                for (const auto& a : row.items[0].items) args.push_back(parse_class(a));
                M.functions[name][std::move(args)] = parse_class(row.items[1]);
            }
        } else if (item.head() == "rel" && item.items.size() >= 2 && item.items[1].is_atom()) {
            const std::string& name = item.items[1].text;
            M.relations.try_emplace(name);
            for (size_t i = 2; i < item.items.size(); ++i) {
                const auto& row = item.items[i];
                if (!row.is_list()) fail(row, "expected a tuple (c…)");
                std::vector<size_t> tuple;
                for (const auto& a : row.items) tuple.push_back(parse_class(a));
                M.relations[name].insert(std::move(tuple));
            }
        }
    }
    for (const auto& [name, arity] : M.sig.relations) M.relations.try_emplace(name);
    for (const auto& [name, arity] : M.sig.functions)
        if (arity == 0 && !M.constants.count(name)) M.constants[name] = 0;
    return M;
}

std::string write_assignment(const proplogic::Assignment& S) {
    std::string out = "(assignment";
    for (const auto& [gamma, value] : S)
        out += " (a" + std::to_string(gamma) + " " + (value ? "1" : "0") + ")";
    return out + ")\n";
}

proplogic::Assignment parse_assignment(const sexpr::Node& n) {
    if (n.head() != "assignment") fail(n, "expected (assignment (a<γ> 0|1)*)");
    proplogic::Assignment S;
    for (size_t i = 1; i < n.items.size(); ++i) {
        const auto& pair = n.items[i];
        if (!pair.is_list() || pair.items.size() != 2)
            fail(pair, "expected (a<γ> 0|1)");
        uint32_t gamma = parse_index_atom(pair.items[0], 'a', "an atom like a0");
        uint64_t value = sexpr::atom_u64(pair.items[1]);
        if (value > 1) fail(pair.items[1], "expected 0 or 1");
        S[gamma] = value == 1;
    }
    return S;
}

}  // namespace fex::io
