#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace causal {

// Base of every error the engine raises. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidModel : public Error {
 public:
  using Error::Error;
};

class CyclicModel : public Error {
 public:
  explicit CyclicModel(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class UnknownVariable : public Error {
 public:
  explicit UnknownVariable(const std::string& name)
      : Error("unknown variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnknownContext : public Error {
 public:
  explicit UnknownContext(const std::string& name) : Error("unknown context '" + name + "'") {}
};

class ValueOutOfRange : public Error {
 public:
  using Error::Error;
};

class DuplicateDefinition : public Error {
 public:
  explicit DuplicateDefinition(const std::string& name)
      : Error("duplicate definition of '" + name + "'") {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class MalformedFormula : public Error {
 public:
  using Error::Error;
};

// A causality query whose effect contains an intervention prefix.
class MalformedPhi : public Error {
 public:
  MalformedPhi() : Error("the effect must be a boolean combination of primitive events") {}
};

class MissingNormalityOrder : public Error {
 public:
  MissingNormalityOrder() : Error("the extended rule variant needs a normality order") {}
};

class SearchBudgetExceeded : public Error {
 public:
  explicit SearchBudgetExceeded(std::uint64_t limit)
      : Error("search budget of " + std::to_string(limit) + " solves exceeded"), limit_(limit) {}
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class NotAWitness : public Error {
 public:
  using Error::Error;
};

class WitnessEqualsActual : public Error {
 public:
  WitnessEqualsActual()
      : Error("the contingency values coincide with the actual values; nothing to kill") {}
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class NoWitness : public Error {
 public:
  NoWitness() : Error("no witness exists under the plain definition") {}
};

}  // namespace causal
