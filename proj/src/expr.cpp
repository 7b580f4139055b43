#include "invmet/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace invmet {

struct Expression::Node {
  enum class Op {
    Const, Coord, Re, Im, Add, Sub, Mul, Div, Pow, Neg, Abs, Conj, Sqrt, Exp, Log
  };
  Op op = Op::Const;
  cplx value = 0.0;
  int coord = 0;        // 0-based, for Coord/Re/Im leaves
  bool part_leaf = false;
  std::shared_ptr<const Node> lhs, rhs;

  cplx eval(const CPoint& z) const {
    switch (op) {
      case Op::Const: return value;
      case Op::Coord: return z[coord];
      case Op::Re: return part_leaf ? cplx(z[coord].real(), 0.0) : cplx(lhs->eval(z).real(), 0.0);
      case Op::Im: return part_leaf ? cplx(z[coord].imag(), 0.0) : cplx(lhs->eval(z).imag(), 0.0);
      case Op::Add: return lhs->eval(z) + rhs->eval(z);
      case Op::Sub: return lhs->eval(z) - rhs->eval(z);
      case Op::Mul: return lhs->eval(z) * rhs->eval(z);
      case Op::Div: return lhs->eval(z) / rhs->eval(z);
      case Op::Neg: return -lhs->eval(z);
      case Op::Abs: return std::abs(lhs->eval(z));
      case Op::Conj: return std::conj(lhs->eval(z));
      case Op::Sqrt: return std::sqrt(lhs->eval(z));
      case Op::Exp: return std::exp(lhs->eval(z));
      case Op::Log: return std::log(lhs->eval(z));
      case Op::Pow: {
        const cplx base = lhs->eval(z);
        const cplx e = rhs->eval(z);
        if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64) {
          const int k = static_cast<int>(e.real());
          cplx r = 1.0;
          cplx b = k < 0 ? 1.0 / base : base;
          for (int j = 0; j < std::abs(k); ++j) r *= b;
          return r;
        }
        if (base.imag() == 0.0 && base.real() >= 0.0 && e.imag() == 0.0) {
          return std::pow(base.real(), e.real());
        }
        return std::pow(base, e);
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr constant(cplx v) {
  auto n = std::make_shared<Expression::Node>();
  n->value = v;
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int dim_;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ExprError(msg, static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, lhs, term());
      else if (accept('-')) lhs = make(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (c == '|') {
      ++pos_;
      NodePtr e = expr();
      expect('|');
      return make(Op::Abs, e);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const std::string tail(begin, text_.size() - pos_);
    const double v = std::strtod(tail.c_str(), &end);
    const std::size_t used = static_cast<std::size_t>(end - tail.c_str());
    if (used == 0) fail("malformed number");
    pos_ += used;
    return constant(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    if (name == "i") return constant(cplx(0.0, 1.0));
    if (name == "pi") return constant(std::numbers::pi);

    const char head = name[0];
    if ((head == 'z' || head == 'x' || head == 'y') && name.size() > 1 &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int k = std::stoi(name.substr(1));
      if (k < 1 || k > dim_) {
        pos_ = start;
        fail("coordinate '" + name + "' out of range 1.." + std::to_string(dim_));
      }
      auto n = std::make_shared<Expression::Node>();
      n->coord = k - 1;
      n->part_leaf = head != 'z';
      n->op = head == 'z' ? Op::Coord : (head == 'x' ? Op::Re : Op::Im);
      return n;
    }

    static const std::pair<const char*, Op> funcs[] = {
        {"re", Op::Re},     {"im", Op::Im},   {"conj", Op::Conj}, {"abs", Op::Abs},
        {"sqrt", Op::Sqrt}, {"exp", Op::Exp}, {"log", Op::Log}};
    for (const auto& [fname, op] : funcs) {
      if (name == fname) {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return make(op, arg);
      }
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace

Expression Expression::parse(std::string_view text, int dim) {
  if (dim < 1) throw ExprError("dimension must be at least 1", 1);
  Expression e;
  e.root_ = Parser(text, dim).parse();
  e.source_ = std::string(text);
  e.dim_ = dim;
  return e;
}

cplx Expression::evaluate(const CPoint& z) const { return root_->eval(z); }

double Expression::operator()(const CPoint& z) const { return root_->eval(z).real(); }

}  // namespace invmet
