#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fex/errors.hpp"

namespace fex::sexpr {

// Minimal s-expression reader shared by every text format the tools accept.
// Grammar: atom | '(' node* ')' | '{' node* '}'.  Braces are sugar: the list
// they delimit gets "{}" as head marker so set literals stay distinguishable
// from plain lists after parsing.  ';' starts a comment running to newline.
struct Node {
    enum class Kind { Atom, List, Braces };
    Kind kind = Kind::Atom;
    std::string text;          // Kind::Atom only
    std::vector<Node> items;   // Kind::List / Kind::Braces
    int line = 0;
    int col = 0;

    bool is_atom() const { return kind == Kind::Atom; }
    bool is_list() const { return kind == Kind::List; }
    bool is_braces() const { return kind == Kind::Braces; }

    // Head symbol of a list, or "" when not a list / empty / non-atom head.
    std::string head() const {
        if (kind != Kind::List || items.empty() || !items[0].is_atom()) return "";
        return items[0].text;
    }
};

// Parse exactly one node; trailing non-comment input is an error.
Node parse_one(const std::string& input);

// Parse all top-level nodes.
std::vector<Node> parse_all(const std::string& input);

// Serialize a node back to text (single line, canonical spacing).
std::string to_string(const Node& node);

// Helpers for readers built on top of Node.
uint64_t atom_u64(const Node& node);   // throws ParseError if not a decimal atom
int64_t atom_i64(const Node& node);

}  // namespace fex::sexpr
