#include "plateau/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace plateau {

struct Expression::Node {
    enum class Kind { Const, Coord, FrameEntry, NormX, Add, Sub, Mul, Div, Neg, Abs, Min, Max };
    Kind kind;
    double value = 0;
    int a = 0, b = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    void skip()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c)
    {
        skip();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool peek(char c)
    {
        skip();
        return pos < text.size() && text[pos] == c;
    }
    [[noreturn]] void fail(const std::string& what)
    {
        throw std::invalid_argument("integrand expression: " + what + " at position " +
                                    std::to_string(pos) + " of \"" + text + "\"");
    }

    NodePtr parse_expr()
    {
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                lhs = make(Node::Kind::Add, lhs, parse_term());
            } else if (eat('-')) {
                lhs = make(Node::Kind::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term()
    {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (eat('*')) {
                lhs = make(Node::Kind::Mul, lhs, parse_factor());
            } else if (eat('/')) {
                lhs = make(Node::Kind::Div, lhs, parse_factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_factor()
    {
        skip();
        if (eat('-')) return make(Node::Kind::Neg, parse_factor());
        if (eat('(')) {
            NodePtr inner = parse_expr();
            if (!eat(')')) fail("missing )");
            return inner;
        }
        if (eat('|')) {
            skip();
            // |x| is the norm of the point
            if (pos < text.size() && text[pos] == 'x' &&
                (pos + 1 >= text.size() ||
                 !std::isdigit(static_cast<unsigned char>(text[pos + 1])))) {
                ++pos;
                if (!eat('|')) fail("missing closing |");
                return make(Node::Kind::NormX);
            }
            NodePtr inner = parse_expr();
            if (!eat('|')) fail("missing closing |");
            return make(Node::Kind::Abs, inner);
        }
        if (pos >= text.size()) fail("unexpected end");
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = std::stod(text.substr(pos), &used);
            pos += used;
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Const;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            std::string word = text.substr(start, pos - start);
            if (word == "min" || word == "max" || word == "abs") {
                if (!eat('(')) fail("expected ( after " + word);
                NodePtr a = parse_expr();
                if (word == "abs") {
                    if (!eat(')')) fail("missing )");
                    return make(Node::Kind::Abs, a);
                }
                if (!eat(',')) fail("expected , in " + word);
                NodePtr b = parse_expr();
                if (!eat(')')) fail("missing )");
                return make(word == "min" ? Node::Kind::Min : Node::Kind::Max, a, b);
            }
            if (word.size() >= 2 && word[0] == 'x') {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Coord;
                n->a = std::stoi(word.substr(1));
                return n;
            }
            if (word.size() == 3 && word[0] == 't' &&
                std::isdigit(static_cast<unsigned char>(word[1])) &&
                std::isdigit(static_cast<unsigned char>(word[2]))) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::FrameEntry;
                n->a = word[1] - '0';
                n->b = word[2] - '0';
                return n;
            }
            fail("unknown identifier " + word);
        }
        fail("unexpected character");
    }
};

double eval_node(const Node& n, const std::vector<double>& p, const TangentFrame* frame)
{
    switch (n.kind) {
    case Node::Kind::Const: return n.value;
    case Node::Kind::Coord:
        if (n.a >= static_cast<int>(p.size()))
            throw std::invalid_argument("integrand expression: coordinate index out of range");
        return p[n.a];
    case Node::Kind::FrameEntry:
        if (!frame) throw std::invalid_argument("integrand expression: no tangent frame");
        if (n.a >= static_cast<int>(frame->rows.size()) ||
            n.b >= static_cast<int>(frame->rows[n.a].size()))
            throw std::invalid_argument("integrand expression: frame entry out of range");
        return frame->rows[n.a][n.b];
    case Node::Kind::NormX: {
        double s = 0;
        for (double c : p) s += c * c;
        return std::sqrt(s);
    }
    case Node::Kind::Add: return eval_node(*n.lhs, p, frame) + eval_node(*n.rhs, p, frame);
    case Node::Kind::Sub: return eval_node(*n.lhs, p, frame) - eval_node(*n.rhs, p, frame);
    case Node::Kind::Mul: return eval_node(*n.lhs, p, frame) * eval_node(*n.rhs, p, frame);
    case Node::Kind::Div: return eval_node(*n.lhs, p, frame) / eval_node(*n.rhs, p, frame);
    case Node::Kind::Neg: return -eval_node(*n.lhs, p, frame);
    case Node::Kind::Abs: return std::abs(eval_node(*n.lhs, p, frame));
    case Node::Kind::Min:
        return std::min(eval_node(*n.lhs, p, frame), eval_node(*n.rhs, p, frame));
    case Node::Kind::Max:
        return std::max(eval_node(*n.lhs, p, frame), eval_node(*n.rhs, p, frame));
    }
    throw std::logic_error("integrand expression: bad node");
}

bool node_uses_frame(const Node& n)
{
    if (n.kind == Node::Kind::FrameEntry) return true;
    if (n.lhs && node_uses_frame(*n.lhs)) return true;
    if (n.rhs && node_uses_frame(*n.rhs)) return true;
    return false;
}

} // namespace

Expression Expression::parse(const std::string& text)
{
    Parser p{text};
    Expression e;
    e.root_ = p.parse_expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing characters");
    e.source_ = text;
    return e;
}

double Expression::eval(const std::vector<double>& point, const TangentFrame* frame) const
{
    return eval_node(*root_, point, frame);
}

bool Expression::uses_frame() const { return node_uses_frame(*root_); }

} // namespace plateau
