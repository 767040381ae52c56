#include "bfsi/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace bfsi {
namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

struct NamedVar {
  const char* name;
  Var var;
};
constexpr NamedVar kVars[] = {{"x", Var::X}, {"y", Var::Y}, {"t", Var::T}, {"pi", Var::Pi}, {"L", Var::L}};

struct NamedFunc {
  const char* name;
  Func func;
};
constexpr NamedFunc kFuncs[] = {{"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp}, {"tanh", Func::Tanh}};

const char* var_name(Var v) {
  for (const auto& nv : kVars)
    if (nv.var == v) return nv.name;
  return "?";
}

const char* func_name(Func f) {
  for (const auto& nf : kFuncs)
    if (nf.func == f) return nf.name;
  return "?";
}

// Binding strength: + - (1), * / (2), unary - (3), ^ (4), atoms (5).
int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Binary:
      if (n.op == '+' || n.op == '-') return 1;
      if (n.op == '*' || n.op == '/') return 2;
      return 4;
    case ExprKind::Neg: return 3;
    default: return 5;
  }
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", 0);
    NodePtr e = sum();
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool take(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Binary;
    n->op = op;
    n->children = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr sum() {
    NodePtr e = product();
    for (;;) {
      if (take('+'))
        e = binary('+', e, product());
      else if (take('-'))
        e = binary('-', e, product());
      else
        return e;
    }
  }

  NodePtr product() {
    NodePtr e = unary();
    for (;;) {
      if (take('*'))
        e = binary('*', e, unary());
      else if (take('/'))
        e = binary('/', e, unary());
      else
        return e;
    }
  }

  NodePtr unary() {
    if (take('-')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::Neg;
      n->children = {unary()};
      return n;
    }
    return power();
  }

  // The exponent may carry its own sign and chains to the right.
  NodePtr power() {
    NodePtr base = primary();
    if (take('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", s_.empty() ? 0 : s_.size() - 1);
    const char c = s_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      NodePtr e = sum();
      if (!take(')')) throw ParseError("unclosed parenthesis", open);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        pos_ = p;
      }
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Literal;
    n->text = s_.substr(start, pos_ - start);
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, n->value);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) throw ParseError("malformed number '" + n->text + "'", start);
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    for (const auto& nf : kFuncs)
      if (name == nf.name) {
        if (!take('(')) throw ParseError("function '" + name + "' needs a parenthesized argument", start);
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Call;
        n->func = nf.func;
        n->children = {sum()};
        skip();
        if (take(',')) throw ParseError("function '" + name + "' takes exactly one argument", pos_ - 1);
        if (!take(')')) throw ParseError("unclosed call to '" + name + "'", start);
        return n;
      }
    for (const auto& nv : kVars)
      if (name == nv.name) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') throw ParseError("'" + name + "' is not a function", start);
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Variable;
        n->var = nv.var;
        return n;
      }
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

void render(const ExprNode& n, std::string& out) {
  auto child = [&](const ExprNode& c, bool paren) {
    if (paren) out += '(';
    render(c, out);
    if (paren) out += ')';
  };
  switch (n.kind) {
    case ExprKind::Literal: out += n.text; return;
    case ExprKind::Variable: out += var_name(n.var); return;
    case ExprKind::Neg:
      out += '-';
      child(*n.children[0], precedence(*n.children[0]) < 3);
      return;
    case ExprKind::Call:
      out += func_name(n.func);
      child(*n.children[0], true);
      return;
    case ExprKind::Binary: {
      const int p = precedence(n);
      const ExprNode& a = *n.children[0];
      const ExprNode& b = *n.children[1];
      if (n.op == '^') {
        child(a, precedence(a) <= 4);
        out += '^';
        child(b, precedence(b) < 3);
        return;
      }
      child(a, precedence(a) < p);
      if (p == 1)
        out += std::string(" ") + n.op + " ";
      else
        out += n.op;
      child(b, precedence(b) <= p);
      return;
    }
  }
}

}  // namespace

ExprAst::ExprAst(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const ExprNode& n) -> void {
    for (const auto& c : n.children) self(self, *c);
    switch (n.kind) {
      case ExprKind::Literal:
        program_.push_back({Instr::Push, n.value});
        ++depth;
        break;
      case ExprKind::Variable:
        program_.push_back({Instr::Load, static_cast<double>(n.var)});
        ++depth;
        break;
      case ExprKind::Neg: program_.push_back({Instr::Neg, 0.0}); break;
      case ExprKind::Binary: {
        const Instr::Code c = n.op == '+'   ? Instr::Add
                              : n.op == '-' ? Instr::Sub
                              : n.op == '*' ? Instr::Mul
                              : n.op == '/' ? Instr::Div
                                            : Instr::Pow;
        program_.push_back({c, 0.0});
        --depth;
        break;
      }
      case ExprKind::Call: {
        const Instr::Code c = n.func == Func::Sin   ? Instr::Sin
                              : n.func == Func::Cos ? Instr::Cos
                              : n.func == Func::Exp ? Instr::Exp
                                                    : Instr::Tanh;
        program_.push_back({c, 0.0});
        break;
      }
    }
    max_depth_ = std::max(max_depth_, depth);
  };
  if (root_) emit(emit, *root_);
}

bool ExprAst::depends_on(Var v) const {
  for (const auto& in : program_)
    if (in.code == Instr::Load && static_cast<Var>(static_cast<int>(in.value)) == v) return true;
  return false;
}

double ExprAst::eval(const EvalPoint& p) const {
  std::array<double, 32> small;
  std::vector<double> big;
  double* st = small.data();
  if (max_depth_ > small.size()) {
    big.resize(max_depth_);
    st = big.data();
  }
  const double vars[] = {p.x, p.y, p.t, M_PI, p.L};
  std::size_t sp = 0;
  for (const auto& in : program_) {
    switch (in.code) {
      case Instr::Push: st[sp++] = in.value; break;
      case Instr::Load: st[sp++] = vars[static_cast<int>(in.value)]; break;
      case Instr::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Instr::Add: --sp; st[sp - 1] += st[sp]; break;
      case Instr::Sub: --sp; st[sp - 1] -= st[sp]; break;
      case Instr::Mul: --sp; st[sp - 1] *= st[sp]; break;
      case Instr::Div: --sp; st[sp - 1] /= st[sp]; break;
      case Instr::Pow: --sp; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
      case Instr::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case Instr::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
      case Instr::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case Instr::Tanh: st[sp - 1] = std::tanh(st[sp - 1]); break;
    }
  }
  return sp == 1 ? st[0] : 0.0;
}

ExprAst parse_expression(const std::string& src) { return ExprAst(Parser(src).parse()); }

double eval_expression(const ExprAst& ast, double x, double y, double t, double L) {
  return ast.eval({x, y, t, L});
}

std::string to_string(const ExprAst& ast) {
  std::string out;
  if (!ast.empty()) render(ast.root(), out);
  return out;
}

}  // namespace bfsi
