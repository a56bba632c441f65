#pragma once

#include <stdexcept>
#include <string>

namespace qcone {

enum class ErrorKind {
  InvalidMatrix,
  NonpositivePivot,
  DimensionMismatch,
  ModelError,
  ParseError,
  InvalidParameter,
  SizeCapExceeded,
  RequiresNonnegative,
  InvalidWitness,
  InvalidColoring,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qcone
