#include <cctype>
#include <stdexcept>

#include "equislice/element.hpp"

namespace equislice {
namespace {

class Parser {
 public:
  Parser(const ContextPtr& ctx, const std::string& text) : ctx_(ctx), s_(text) {}

  TruncatedElement parse() {
    TruncatedElement r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos_) + " in \"" + s_ +
                                "\": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  TruncatedElement expr() {
    TruncatedElement r = term();
    while (true) {
      if (accept('+')) {
        r += term();
      } else if (accept('-')) {
        r -= term();
      } else {
        return r;
      }
    }
  }

  TruncatedElement term() {
    TruncatedElement r = unary();
    while (true) {
      if (accept('*')) {
        r = r * unary();
      } else if (accept('/')) {
        TruncatedElement d = unary();
        r = r * invert_unit(d);
      } else {
        return r;
      }
    }
  }

  TruncatedElement unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  long signed_int() {
    bool paren = accept('(');
    bool neg = false;
    if (accept('-')) neg = true;
    else accept('+');
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    long v = std::stol(s_.substr(start, pos_ - start));
    if (paren && !accept(')')) fail("expected ')'");
    return neg ? -v : v;
  }

  TruncatedElement power() {
    TruncatedElement base = atom();
    if (accept('^')) {
      long e = signed_int();
      if (e < INT8_MIN || e > INT8_MAX) fail("exponent out of range");
      return base.pow(static_cast<int>(e));
    }
    return base;
  }

  TruncatedElement atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      TruncatedElement r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return TruncatedElement::constant(ctx_, Scalar::parse_rational(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_' || s_[pos_] == '\''))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      int idx = ctx_->index(name);
      if (idx >= 0) return TruncatedElement::variable(ctx_, idx);
      if (name.rfind("zeta", 0) == 0 && name.size() > 4) {
        int n = std::stoi(name.substr(4));
        return TruncatedElement::constant(ctx_, Scalar::zeta(n));
      }
      fail("unknown variable '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const ContextPtr& ctx_;
  std::string s_;
  size_t pos_ = 0;
};

}  // namespace

TruncatedElement parse_element(const ContextPtr& ctx, const std::string& text) {
  return Parser(ctx, text).parse();
}

}  // namespace equislice
