#include "gp/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "gp/errors.hpp"

namespace gp {

struct Expression::Node {
  enum class Kind { Number, Q, P, X, GroupRe, GroupIm, TraceRe, TraceIm, Neg, Add, Sub, Mul, Div, Pow, Call };
  enum class Func { Sin, Cos, Exp, Log, Sqrt };

  Kind kind = Kind::Number;
  double value = 0.0;
  int index = 0;  // 0-based sector index, or matrix row
  int col = 0;    // matrix column
  Func func = Func::Sin;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_ws();
    if (pos_ != src_.size()) error("unexpected '" + std::string(1, src_[pos_]) + "'");
    return n;
  }

  int max_q = 0, max_p = 0, max_x = 0;
  bool uses_group = false;

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ExpressionParseError,
         "'" + std::string(src_) + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+'))
        n = make(Node::Kind::Add, n, term());
      else if (accept('-'))
        n = make(Node::Kind::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*'))
        n = make(Node::Kind::Mul, n, unary());
      else if (accept('/'))
        n = make(Node::Kind::Div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) error("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) error("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    error("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double value = 0.0;
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) error("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    auto n = std::make_shared<Node>();
    n->value = value;
    return n;
  }

  static bool parse_index(std::string_view digits, int& out) {
    if (digits.empty()) return false;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    return ec == std::errc() && ptr == digits.data() + digits.size() && out >= 1;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();

    static constexpr std::pair<std::string_view, Node::Func> funcs[] = {
        {"sin", Node::Func::Sin}, {"cos", Node::Func::Cos}, {"exp", Node::Func::Exp},
        {"log", Node::Func::Log}, {"sqrt", Node::Func::Sqrt}};
    for (const auto& [name, f] : funcs)
      if (id == name) {
        if (!accept('(')) error("expected '(' after " + std::string(name));
        n->kind = Node::Kind::Call;
        n->func = f;
        n->lhs = expr();
        if (!accept(')')) error("expected ')'");
        return n;
      }

    if (id == "pi") {
      n->value = std::numbers::pi;
      return n;
    }
    if (id == "retr" || id == "imtr") {
      n->kind = id == "retr" ? Node::Kind::TraceRe : Node::Kind::TraceIm;
      uses_group = true;
      return n;
    }
    if (id.size() == 6 && (id.starts_with("re_g") || id.starts_with("im_g")) && std::isdigit(static_cast<unsigned char>(id[4])) &&
        std::isdigit(static_cast<unsigned char>(id[5])) && id[4] != '0' && id[5] != '0') {
      n->kind = id.starts_with("re") ? Node::Kind::GroupRe : Node::Kind::GroupIm;
      n->index = id[4] - '1';
      n->col = id[5] - '1';
      uses_group = true;
      return n;
    }
    int idx = 0;
    const char head = id.empty() ? '\0' : id[0];
    if (parse_index(id.substr(1), idx)) {
      switch (head) {
        case 'q':
          n->kind = Node::Kind::Q;
          max_q = std::max(max_q, idx);
          break;
        case 'p':
          n->kind = Node::Kind::P;
          max_p = std::max(max_p, idx);
          break;
        case 'x':
        case 'I':
        case 'z':
          n->kind = Node::Kind::X;
          max_x = std::max(max_x, idx);
          break;
        default:
          error("unknown variable '" + std::string(id) + "'");
      }
      n->index = idx - 1;
      return n;
    }
    error("unknown identifier '" + std::string(id) + "'");
  }
};

double component(const Vector& v, int index, char sector) {
  if (index >= v.size())
    fail(ErrorCode::DimensionMismatch, std::string("expression references ") + sector + std::to_string(index + 1) +
                                           " but the point has only " + std::to_string(v.size()));
  return v(index);
}

const GroupElement& group_of(const PhasePoint& pt) {
  if (!pt.g) fail(ErrorCode::DimensionMismatch, "expression references the group but the point has none");
  return *pt.g;
}

double eval(const Node& n, const PhasePoint& pt) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::Number: return n.value;
    case K::Q: return component(pt.q, n.index, 'q');
    case K::P: return component(pt.p, n.index, 'p');
    case K::X: return component(pt.x, n.index, 'x');
    case K::GroupRe:
    case K::GroupIm: {
      const auto& m = group_of(pt).matrix;
      if (n.index >= m.rows() || n.col >= m.cols())
        fail(ErrorCode::DimensionMismatch, "group entry index exceeds the matrix size");
      const Complex v = m(n.index, n.col);
      return n.kind == K::GroupRe ? v.real() : v.imag();
    }
    case K::TraceRe: return group_of(pt).matrix.trace().real();
    case K::TraceIm: return group_of(pt).matrix.trace().imag();
    case K::Neg: return -eval(*n.lhs, pt);
    case K::Add: return eval(*n.lhs, pt) + eval(*n.rhs, pt);
    case K::Sub: return eval(*n.lhs, pt) - eval(*n.rhs, pt);
    case K::Mul: return eval(*n.lhs, pt) * eval(*n.rhs, pt);
    case K::Div: return eval(*n.lhs, pt) / eval(*n.rhs, pt);
    case K::Pow: {
      const double base = eval(*n.lhs, pt);
      const double e = eval(*n.rhs, pt);
      // integer powers by repeated multiplication keep polynomials exact in sign
      if (e == std::floor(e) && std::abs(e) <= 16) {
        double r = 1.0;
        for (int i = 0; i < static_cast<int>(std::abs(e)); ++i) r *= base;
        return e < 0 ? 1.0 / r : r;
      }
      return std::pow(base, e);
    }
    case K::Call: {
      const double a = eval(*n.lhs, pt);
      switch (n.func) {
        case Node::Func::Sin: return std::sin(a);
        case Node::Func::Cos: return std::cos(a);
        case Node::Func::Exp: return std::exp(a);
        case Node::Func::Log: return std::log(a);
        case Node::Func::Sqrt: return std::sqrt(a);
      }
    }
  }
  return 0.0;
}

}  // namespace

Expression::Expression() : Expression("0") {}

Expression::Expression(std::string_view source) : source_(source) {
  Parser parser(source);
  root_ = parser.parse();
  max_q_ = parser.max_q;
  max_p_ = parser.max_p;
  max_x_ = parser.max_x;
  uses_group_ = parser.uses_group;
}

double Expression::operator()(const PhasePoint& pt) const { return eval(*root_, pt); }

}  // namespace gp
