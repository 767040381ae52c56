#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfsi {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class ExprKind { Literal, Variable, Neg, Binary, Call };
enum class Var { X, Y, T, Pi, L };
enum class Func { Sin, Cos, Exp, Tanh };

struct ExprNode {
  ExprKind kind = ExprKind::Literal;
  double value = 0.0;
  std::string text;  // literal spelling, kept for printing
  Var var = Var::X;
  char op = 0;  // + - * / ^
  Func func = Func::Sin;
  std::vector<std::shared_ptr<const ExprNode>> children;
};

struct EvalPoint {
  double x = 0.0, y = 0.0, t = 0.0, L = 1.0;
};

// Immutable parsed expression; evaluation runs a flattened stack program.
class ExprAst {
 public:
  ExprAst() = default;
  explicit ExprAst(std::shared_ptr<const ExprNode> root);

  const ExprNode& root() const { return *root_; }
  bool empty() const { return !root_; }
  bool depends_on(Var v) const;
  double eval(const EvalPoint& p) const;

 private:
  struct Instr {
    enum Code : unsigned char { Push, Load, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Tanh } code;
    double value;
  };
  std::shared_ptr<const ExprNode> root_;
  std::vector<Instr> program_;
  std::size_t max_depth_ = 0;
};

ExprAst parse_expression(const std::string& src);
double eval_expression(const ExprAst& ast, double x, double y, double t, double L);

// Minimal-parenthesis rendering; parse(to_string(e)) rebuilds the same tree.
std::string to_string(const ExprAst& ast);

}  // namespace bfsi
