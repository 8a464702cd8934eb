#include "fuzzyfp/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace fuzzyfp::expr {

namespace {

enum class Kind { number, variable, neg, add, sub, mul, div, pow, call };
enum class Func { min, max, abs, sqrt, exp };

std::string join_expected(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += (i + 1 == expected.size()) ? " or " : ", ";
        out += expected[i];
    }
    return out;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
    : InputError(what), offset_(offset), expected_(std::move(expected)) {}

struct Node {
    Kind kind = Kind::number;
    double value = 0.0;
    std::string name;
    Func func = Func::min;
    std::size_t offset = 0;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

// ---------------------------------------------------------------- lexer

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::end, start, {}};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Tok::ident, start, src_.substr(start, pos_ - start)};
        }
        ++pos_;
        switch (c) {
            case '+': return {Tok::plus, start, src_.substr(start, 1)};
            case '-': return {Tok::minus, start, src_.substr(start, 1)};
            case '*': return {Tok::star, start, src_.substr(start, 1)};
            case '/': return {Tok::slash, start, src_.substr(start, 1)};
            case '^': return {Tok::caret, start, src_.substr(start, 1)};
            case '(': return {Tok::lparen, start, src_.substr(start, 1)};
            case ')': return {Tok::rparen, start, src_.substr(start, 1)};
            case ',': return {Tok::comma, start, src_.substr(start, 1)};
            default: break;
        }
        throw ParseError(start, {"number", "identifier", "'('", "'-'"},
                         "unexpected character '" + std::string(1, c) + "' at offset " +
                             std::to_string(start));
    }

private:
    Token lex_number(std::size_t start) {
        auto digits = [&] {
            const std::size_t from = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return pos_ - from;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0)
            throw ParseError(start, {"digit"}, "malformed number at offset " + std::to_string(start));
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0)
                throw ParseError(pos_, {"exponent digits"},
                                 "malformed exponent at offset " + std::to_string(pos_));
        }
        const std::string_view text = src_.substr(start, pos_ - start);
        double value = 0.0;
        // from_chars does not accept a leading '.', so pad it.
        const std::string buf = text.front() == '.' ? "0" + std::string(text) : std::string(text);
        const auto res = std::from_chars(buf.data(), buf.data() + buf.size(), value);
        if (res.ec != std::errc() || res.ptr != buf.data() + buf.size() || !std::isfinite(value))
            throw ParseError(start, {"number"}, "number out of range at offset " + std::to_string(start));
        return {Tok::number, start, text, value};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    NodePtr parse_all() {
        NodePtr e = parse_expr();
        if (cur_.kind != Tok::end)
            fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::ostringstream os;
        os << "syntax error at offset " << cur_.offset << ": expected " << join_expected(expected)
           << ", found " << (cur_.kind == Tok::end ? std::string("end of input")
                                                   : "'" + std::string(cur_.text) + "'");
        throw ParseError(cur_.offset, std::move(expected), os.str());
    }

    static NodePtr make(Kind k, std::size_t offset, std::vector<NodePtr> args) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->offset = offset;
        n->args = std::move(args);
        return n;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
            const Kind k = cur_.kind == Tok::plus ? Kind::add : Kind::sub;
            const std::size_t at = cur_.offset;
            advance();
            lhs = make(k, at, {lhs, parse_term()});
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
            const Kind k = cur_.kind == Tok::star ? Kind::mul : Kind::div;
            const std::size_t at = cur_.offset;
            advance();
            lhs = make(k, at, {lhs, parse_unary()});
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (cur_.kind == Tok::minus) {
            const std::size_t at = cur_.offset;
            advance();
            return make(Kind::neg, at, {parse_unary()});
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (cur_.kind == Tok::caret) {
            const std::size_t at = cur_.offset;
            advance();
            return make(Kind::pow, at, {base, parse_unary()});
        }
        return base;
    }

    NodePtr parse_atom() {
        switch (cur_.kind) {
            case Tok::number: {
                auto n = std::make_shared<Node>();
                n->kind = Kind::number;
                n->value = cur_.number;
                n->offset = cur_.offset;
                advance();
                return n;
            }
            case Tok::ident: {
                const Token id = cur_;
                advance();
                if (cur_.kind == Tok::lparen) return parse_call(id);
                auto n = std::make_shared<Node>();
                n->kind = Kind::variable;
                n->name = std::string(id.text);
                n->offset = id.offset;
                return n;
            }
            case Tok::lparen: {
                advance();
                NodePtr inner = parse_expr();
                if (cur_.kind != Tok::rparen) fail({"')'"});
                advance();
                return inner;
            }
            default:
                fail({"number", "identifier", "'('", "'-'"});
        }
    }

    NodePtr parse_call(const Token& id) {
        static const std::array<std::pair<std::string_view, Func>, 5> kFuncs{{
            {"min", Func::min}, {"max", Func::max}, {"abs", Func::abs},
            {"sqrt", Func::sqrt}, {"exp", Func::exp}}};
        const auto it = std::find_if(kFuncs.begin(), kFuncs.end(),
                                     [&](const auto& f) { return f.first == id.text; });
        if (it == kFuncs.end())
            throw ParseError(id.offset, {"min", "max", "abs", "sqrt", "exp"},
                             "unknown function '" + std::string(id.text) + "' at offset " +
                                 std::to_string(id.offset));
        advance();  // '('
        std::vector<NodePtr> args{parse_expr()};
        while (cur_.kind == Tok::comma) {
            advance();
            args.push_back(parse_expr());
        }
        if (cur_.kind != Tok::rparen) fail({"','", "')'"});
        const bool unary = it->second == Func::abs || it->second == Func::sqrt || it->second == Func::exp;
        if (unary && args.size() != 1)
            throw ParseError(id.offset, {"one argument"},
                             "function '" + std::string(id.text) + "' at offset " +
                                 std::to_string(id.offset) + " takes exactly one argument");
        advance();
        auto n = make(Kind::call, id.offset, std::move(args));
        auto node = std::const_pointer_cast<Node>(n);
        node->func = it->second;
        node->name = std::string(id.text);
        return n;
    }

    Lexer lex_;
    Token cur_{Tok::end, 0, {}};
};

// ---------------------------------------------------------------- evaluation

[[noreturn]] void domain_error(const std::string& what, std::size_t offset, const std::string& src) {
    std::ostringstream os;
    os << what << " at offset " << offset << " in '" << src << "'";
    throw EvalError(os.str());
}

double checked(double v, std::size_t offset, const std::string& src) {
    if (!std::isfinite(v)) domain_error("non-finite result", offset, src);
    return v;
}

double apply_binary(Kind k, double a, double b, std::size_t offset, const std::string& src) {
    switch (k) {
        case Kind::add: return checked(a + b, offset, src);
        case Kind::sub: return checked(a - b, offset, src);
        case Kind::mul: return checked(a * b, offset, src);
        case Kind::div:
            if (b == 0.0) domain_error("division by zero", offset, src);
            return checked(a / b, offset, src);
        case Kind::pow: {
            const double v = std::pow(a, b);
            if (!std::isfinite(v)) domain_error("power out of domain", offset, src);
            return v;
        }
        default: break;
    }
    domain_error("internal: not a binary operator", offset, src);
}

double apply_call(Func f, std::span<const double> args, std::size_t offset, const std::string& src) {
    switch (f) {
        case Func::min: return *std::min_element(args.begin(), args.end());
        case Func::max: return *std::max_element(args.begin(), args.end());
        case Func::abs: return std::abs(args[0]);
        case Func::sqrt:
            if (args[0] < 0.0) domain_error("sqrt of a negative number", offset, src);
            return std::sqrt(args[0]);
        case Func::exp: return checked(std::exp(args[0]), offset, src);
    }
    domain_error("internal: unknown function", offset, src);
}

double eval_node(const Node& n, const Binding& b, const std::string& src) {
    switch (n.kind) {
        case Kind::number: return n.value;
        case Kind::variable: {
            const auto it = b.find(n.name);
            if (it == b.end()) domain_error("unbound variable '" + n.name + "'", n.offset, src);
            return it->second;
        }
        case Kind::neg: return -eval_node(*n.args[0], b, src);
        case Kind::call: {
            std::vector<double> vals;
            vals.reserve(n.args.size());
            for (const auto& a : n.args) vals.push_back(eval_node(*a, b, src));
            return apply_call(n.func, vals, n.offset, src);
        }
        default:
            return apply_binary(n.kind, eval_node(*n.args[0], b, src), eval_node(*n.args[1], b, src),
                                n.offset, src);
    }
}

void collect_vars(const Node& n, std::set<std::string>& out) {
    if (n.kind == Kind::variable) out.insert(n.name);
    for (const auto& a : n.args) collect_vars(*a, out);
}

}  // namespace

Expr Expr::parse(std::string_view text) {
    bool blank = std::all_of(text.begin(), text.end(),
                             [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (blank) throw ParseError(0, {"expression"}, "empty expression");
    Parser p(text);
    return Expr(p.parse_all(), std::string(text));
}

double Expr::eval(const Binding& binding) const { return eval_node(*root_, binding, source_); }

std::set<std::string> Expr::variables() const {
    std::set<std::string> out;
    collect_vars(*root_, out);
    return out;
}

double eval_expr(const Expr& e, const Binding& binding) { return e.eval(binding); }

// ---------------------------------------------------------------- compiled form

struct Compiled::Instr {
    Kind kind;
    Func func = Func::min;
    double value = 0.0;
    std::size_t slot = 0;
    std::size_t argc = 0;
    std::size_t offset = 0;
};

namespace {

template <class Instr>
std::size_t emit(const Node& n, const std::vector<std::string>& params, std::vector<Instr>& prog,
                 std::size_t depth) {
    // Returns the maximum stack depth reached while evaluating n.
    Instr in{n.kind};
    in.offset = n.offset;
    switch (n.kind) {
        case Kind::number:
            in.value = n.value;
            prog.push_back(in);
            return depth + 1;
        case Kind::variable: {
            const auto it = std::find(params.begin(), params.end(), n.name);
            if (it == params.end()) {
                std::string allowed;
                for (const auto& p : params) allowed += (allowed.empty() ? "" : ", ") + p;
                throw InputError("unknown variable '" + n.name + "' at offset " +
                                 std::to_string(n.offset) + " (allowed: " + allowed + ")");
            }
            in.slot = static_cast<std::size_t>(it - params.begin());
            prog.push_back(in);
            return depth + 1;
        }
        default: {
            std::size_t peak = depth;
            std::size_t d = depth;
            for (const auto& a : n.args) {
                peak = std::max(peak, emit(*a, params, prog, d));
                ++d;
            }
            in.func = n.func;
            in.argc = n.args.size();
            prog.push_back(in);
            return std::max(peak, depth + 1);
        }
    }
}

}  // namespace

Compiled::Compiled(const Expr& e, std::vector<std::string> params)
    : expr_(e), params_(std::move(params)) {
    auto prog = std::make_shared<std::vector<Instr>>();
    max_depth_ = emit(*e.root_, params_, *prog, 0);
    program_ = std::move(prog);
}

double Compiled::operator()(std::span<const double> args) const {
    if (args.size() != params_.size())
        throw EvalError("expression '" + expr_.source() + "' expects " +
                        std::to_string(params_.size()) + " arguments");
    std::array<double, 64> fixed{};
    std::vector<double> heap;
    double* stack = fixed.data();
    if (max_depth_ > fixed.size()) {
        heap.resize(max_depth_);
        stack = heap.data();
    }
    std::size_t sp = 0;
    const std::string& src = expr_.source();
    for (const Instr& in : *program_) {
        switch (in.kind) {
            case Kind::number: stack[sp++] = in.value; break;
            case Kind::variable: stack[sp++] = args[in.slot]; break;
            case Kind::neg: stack[sp - 1] = -stack[sp - 1]; break;
            case Kind::call: {
                sp -= in.argc;
                stack[sp] = apply_call(in.func, std::span<const double>(stack + sp, in.argc), in.offset, src);
                ++sp;
                break;
            }
            default:
                --sp;
                stack[sp - 1] = apply_binary(in.kind, stack[sp - 1], stack[sp], in.offset, src);
                break;
        }
    }
    const double v = stack[0];
    if (!std::isfinite(v)) domain_error("non-finite result", 0, src);
    return v;
}

}  // namespace fuzzyfp::expr
