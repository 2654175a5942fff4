#pragma once

#include <stdexcept>
#include <string>

namespace apc {

/// Groups errors by how a command-line caller should react to them.
enum class ErrorCategory {
  Validation,     ///< malformed input, bad parameters, bad topology
  Singular,       ///< a feedback resolvent or linear system has no inverse
  ClassOrDim,     ///< gate class or dimension precondition violated
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ErrorCategory category)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  virtual const char* kind() const noexcept = 0;

 private:
  ErrorCategory category_;
};

#define APC_DEFINE_ERROR(Name, Category)                                 \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(what, Category) {}    \
    const char* kind() const noexcept override { return #Name; }         \
  };

APC_DEFINE_ERROR(DimError, ErrorCategory::ClassOrDim)
APC_DEFINE_ERROR(ClassError, ErrorCategory::ClassOrDim)
APC_DEFINE_ERROR(DegenerateStateError, ErrorCategory::Validation)
APC_DEFINE_ERROR(AxisError, ErrorCategory::Validation)
APC_DEFINE_ERROR(IndexError, ErrorCategory::Validation)
APC_DEFINE_ERROR(SymmetryError, ErrorCategory::Validation)
APC_DEFINE_ERROR(ParamError, ErrorCategory::Validation)
APC_DEFINE_ERROR(GraphError, ErrorCategory::Validation)
APC_DEFINE_ERROR(ControlEncodingError, ErrorCategory::Validation)
APC_DEFINE_ERROR(OrderError, ErrorCategory::Validation)
APC_DEFINE_ERROR(ModeError, ErrorCategory::Validation)
APC_DEFINE_ERROR(ParseError, ErrorCategory::Validation)
APC_DEFINE_ERROR(LoopSingularError, ErrorCategory::Singular)

#undef APC_DEFINE_ERROR

}  // namespace apc
