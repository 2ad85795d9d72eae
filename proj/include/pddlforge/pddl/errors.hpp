#pragma once

#include <string>

#include "pddlforge/error.hpp"
#include "pddlforge/pddl/ast.hpp"

namespace pddlforge::pddl {

/// Lexical or syntactic error, annotated with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A requirement or construct outside the supported PDDL subset.
class UnsupportedFeature : public ParseError {
 public:
  UnsupportedFeature(std::string feature, int line, int column);

  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

/// Well-formed text that is inconsistent: unknown names, arity or type mismatch.
class SemanticError : public Error {
 public:
  using Error::Error;
};

class NonGroundError : public Error {
 public:
  explicit NonGroundError(const Literal& literal);
};

class PreconditionViolated : public Error {
 public:
  explicit PreconditionViolated(Literal failed);

  const Literal& failed_literal() const { return failed_; }

 private:
  Literal failed_;
};

}  // namespace pddlforge::pddl
