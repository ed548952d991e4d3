#pragma once

#include <stdexcept>
#include <string>

namespace linex {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LINEX_DEFINE_ERROR(Name) \
  class Name : public Error {    \
   public:                       \
    using Error::Error;          \
  }

LINEX_DEFINE_ERROR(DivisionByZero);
LINEX_DEFINE_ERROR(FieldMismatch);
LINEX_DEFINE_ERROR(ShapeMismatch);
LINEX_DEFINE_ERROR(DomainError);
LINEX_DEFINE_ERROR(BudgetExceeded);
LINEX_DEFINE_ERROR(PreconditionViolated);
LINEX_DEFINE_ERROR(ParseError);
LINEX_DEFINE_ERROR(ZeroFunction);
LINEX_DEFINE_ERROR(NotInKernelRelation);
LINEX_DEFINE_ERROR(RankNotOne);
LINEX_DEFINE_ERROR(NotIndicator);
LINEX_DEFINE_ERROR(NotQuasiregular);
LINEX_DEFINE_ERROR(NotRational);
LINEX_DEFINE_ERROR(InconsistentRestriction);
LINEX_DEFINE_ERROR(DomainOverlap);
LINEX_DEFINE_ERROR(HypothesisUnmet);
LINEX_DEFINE_ERROR(NoNegativeEigenvalue);
LINEX_DEFINE_ERROR(GeneratorSearchFailed);

#undef LINEX_DEFINE_ERROR

}  // namespace linex
