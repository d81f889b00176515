#pragma once

#include <stdexcept>
#include <string>

namespace min2lin {

enum class ErrorKind {
  ModulusOutOfRange,
  ResidueOutOfRange,
  TableTooLarge,
  Syntax,
  TooManyVariables,
  UnknownHeader,
  PartialAssignment,
  NonSimple,
  NotACut,
  BoundExceeded,
  ModeMismatch,
  Divisibility,
  InstanceTooLarge,
  UnknownKind,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace min2lin
