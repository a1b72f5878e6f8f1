#include "loss_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "io.hpp"

namespace topograd::cli {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<LossTerm> parse() {
    std::vector<LossTerm> terms;
    skip();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    terms.push_back(term(sign));
    while (true) {
      skip();
      if (at_end()) break;
      const char c = take();
      if (c != '+' && c != '-') error("expected '+' or '-'");
      terms.push_back(term(c == '-' ? -1.0 : 1.0));
    }
    return terms;
  }

 private:
  LossTerm term(double sign) {
    skip();
    LossTerm t;
    t.weight = sign;
    if (peek() != 'E') {
      t.weight *= number();
      skip();
      expect('*');
      skip();
    }
    expect('E');
    skip();
    expect('(');
    t.spec.p = number();
    expect(',');
    t.spec.q = number();
    expect(',');
    t.spec.i0 = integer();
    skip();
    expect(';');
    skip();
    expect('P');
    expect('D');
    t.spec.k = integer();
    skip();
    expect(')');
    skip();
    if (peek() == '*') {
      take();
      t.weight *= number();
    }
    try {
      t.spec.validate();
    } catch (const std::invalid_argument& e) {
      error(e.what());
    }
    if (!std::isfinite(t.weight)) error("weight must be finite");
    return t;
  }

  double number() {
    skip();
    std::size_t end = pos_;
    while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) ||
                                  std::string_view(".eE+-").find(text_[end]) != std::string_view::npos)) {
      // '+'/'-' only directly after an exponent marker or at the start.
      if ((text_[end] == '+' || text_[end] == '-') && end != pos_ &&
          text_[end - 1] != 'e' && text_[end - 1] != 'E') {
        break;
      }
      ++end;
    }
    if (end == pos_) error("expected a number");
    double v = 0.0;
    try {
      v = parse_double(text_.substr(pos_, end - pos_));
    } catch (const std::invalid_argument&) {
      error("malformed number");
    }
    pos_ = end;
    skip();
    return v;
  }

  int integer() {
    skip();
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) error("expected an integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    skip();
    return v;
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char take() { return at_end() ? '\0' : text_[pos_++]; }
  void expect(char c) {
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void error(const std::string& what) const {
    throw std::invalid_argument("loss expression '" + std::string(text_) + "', column " +
                                std::to_string(pos_ + 1) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string compact(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return format_double(v);
}

}  // namespace

std::vector<LossTerm> parse_loss_expr(std::string_view text) { return Parser(text).parse(); }

std::string format_loss_expr(const std::vector<LossTerm>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const double w = std::abs(t.weight);
    if (t.weight < 0.0) {
      out += i ? " - " : "-";
    } else if (i) {
      out += " + ";
    }
    if (w != 1.0) out += compact(w) + "*";
    out += "E(" + compact(t.spec.p) + "," + compact(t.spec.q) + "," + std::to_string(t.spec.i0) +
           ";PD" + std::to_string(t.spec.k) + ")";
  }
  return out;
}

}  // namespace topograd::cli
