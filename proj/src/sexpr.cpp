#include "fex/sexpr.hpp"

#include <cctype>
#include <charconv>

namespace fex::sexpr {

namespace {

struct Token {
    enum class Kind { LParen, RParen, LBrace, RBrace, Atom, End };
    Kind kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& input) : input_(input) {}

    Token next() {
        skip_ws_and_comments();
        if (pos_ >= input_.size()) return {Token::Kind::End, "", line_, col_};
        int line = line_, col = col_;
        char c = input_[pos_];
        switch (c) {
            case '(': advance(); return {Token::Kind::LParen, "(", line, col};
            case ')': advance(); return {Token::Kind::RParen, ")", line, col};
            case '{': advance(); return {Token::Kind::LBrace, "{", line, col};
            case '}': advance(); return {Token::Kind::RBrace, "}", line, col};
            default: break;
        }
        std::string text;
        while (pos_ < input_.size()) {
            char d = input_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
                d == '{' || d == '}' || d == ';')
                break;
            text.push_back(d);
            advance();
        }
        return {Token::Kind::Atom, text, line, col};
    }

private:
    void advance() {
        if (input_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws_and_comments() {
        while (pos_ < input_.size()) {
            char c = input_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == ';') {
                while (pos_ < input_.size() && input_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    const std::string& input_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& input) : lexer_(input) { bump(); }

    Node parse_node() {
        switch (tok_.kind) {
            case Token::Kind::Atom: {
                Node n;
                n.kind = Node::Kind::Atom;
                n.text = tok_.text;
                n.line = tok_.line;
                n.col = tok_.col;
                bump();
                return n;
            }
            case Token::Kind::LParen:
                return parse_group(Node::Kind::List, Token::Kind::RParen, ")");
            case Token::Kind::LBrace:
                return parse_group(Node::Kind::Braces, Token::Kind::RBrace, "}");
            case Token::Kind::RParen:
            case Token::Kind::RBrace:
                throw ParseError("unexpected '" + tok_.text + "'", tok_.line, tok_.col);
            case Token::Kind::End:
                throw ParseError("unexpected end of input", tok_.line, tok_.col);
        }
        throw ParseError("unreachable", tok_.line, tok_.col);
    }

    bool at_end() const { return tok_.kind == Token::Kind::End; }
    const Token& tok() const { return tok_; }

private:
    Node parse_group(Node::Kind kind, Token::Kind closer, const char* closer_text) {
        Node n;
        n.kind = kind;
        n.line = tok_.line;
        n.col = tok_.col;
        bump();  // consume opener
        while (tok_.kind != closer) {
            if (tok_.kind == Token::Kind::End)
                throw ParseError(std::string("missing '") + closer_text + "'", tok_.line, tok_.col);
            n.items.push_back(parse_node());
        }
        bump();  // consume closer
        return n;
    }

    void bump() { tok_ = lexer_.next(); }

    Lexer lexer_;
    Token tok_{Token::Kind::End, "", 0, 0};
};

}  // namespace

Node parse_one(const std::string& input) {
    Parser p(input);
    Node n = p.parse_node();
    if (!p.at_end())
        throw ParseError("trailing input after expression", p.tok().line, p.tok().col);
    return n;
}

std::vector<Node> parse_all(const std::string& input) {
    Parser p(input);
    std::vector<Node> out;
    while (!p.at_end()) out.push_back(p.parse_node());
    return out;
}

std::string to_string(const Node& node) {
    switch (node.kind) {
        case Node::Kind::Atom:
            return node.text;
        case Node::Kind::List:
        case Node::Kind::Braces: {
            std::string open = node.kind == Node::Kind::List ? "(" : "{";
            std::string close = node.kind == Node::Kind::List ? ")" : "}";
            std::string out = open;
            for (size_t i = 0; i < node.items.size(); ++i) {
                if (i) out += ' ';
                out += to_string(node.items[i]);
            }
            out += close;
            return out;
        }
    }
    return "";
}

uint64_t atom_u64(const Node& node) {
    if (!node.is_atom())
        throw ParseError("expected a number", node.line, node.col);
    uint64_t value = 0;
    const char* begin = node.text.data();
    const char* end = begin + node.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("expected a non-negative number, got '" + node.text + "'", node.line, node.col);
    return value;
}

int64_t atom_i64(const Node& node) {
    if (!node.is_atom())
        throw ParseError("expected a number", node.line, node.col);
    int64_t value = 0;
    const char* begin = node.text.data();
    const char* end = begin + node.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("expected a number, got '" + node.text + "'", node.line, node.col);
    return value;
}

}  // namespace fex::sexpr
