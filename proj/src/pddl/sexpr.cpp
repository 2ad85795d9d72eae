#include "pddlforge/pddl/sexpr.hpp"

#include <cctype>

#include "pddlforge/pddl/errors.hpp"

namespace pddlforge::pddl {

bool SExpr::is_token(std::string_view lowercase) const { return !is_list && lower() == lowercase; }

std::string SExpr::lower() const {
  std::string out = token;
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_top() {
    skip_space();
    if (at_end()) throw ParseError("empty input", line_, col_);
    SExpr e = read();
    skip_space();
    if (!at_end()) throw ParseError("unexpected text after top-level expression", line_, col_);
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = col_;
    char c = peek();
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c != '(') {
      size_t start = pos_;
      while (!at_end()) {
        char d = peek();
        if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
        advance();
      }
      e.token = std::string(text_.substr(start, pos_ - start));
      return e;
    }
    e.is_list = true;
    advance();
    while (true) {
      skip_space();
      if (at_end()) throw ParseError("unterminated '('", e.line, e.column);
      if (peek() == ')') {
        advance();
        return e;
      }
      e.items.push_back(read());
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

SExpr read_sexpr(std::string_view text) { return Reader(text).read_top(); }

}  // namespace pddlforge::pddl
