#pragma once

#include <stdexcept>
#include <string>

namespace ctfactor {

/// Base of every error raised by the library. The CLI maps these to exit
/// code 2 (user/input error) unless they are InternalError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CTFACTOR_DEFINE_ERROR(Name)            \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  }

CTFACTOR_DEFINE_ERROR(NotPositiveDefinite);
CTFACTOR_DEFINE_ERROR(DimensionMismatch);
CTFACTOR_DEFINE_ERROR(DomainError);
CTFACTOR_DEFINE_ERROR(IndexError);
CTFACTOR_DEFINE_ERROR(TooLarge);
CTFACTOR_DEFINE_ERROR(EmptyCliqueSet);
CTFACTOR_DEFINE_ERROR(MissingTruth);
CTFACTOR_DEFINE_ERROR(InvalidVariance);
CTFACTOR_DEFINE_ERROR(GenerationFailure);
CTFACTOR_DEFINE_ERROR(InvalidSpec);
CTFACTOR_DEFINE_ERROR(InvalidModel);
CTFACTOR_DEFINE_ERROR(ParseError);
CTFACTOR_DEFINE_ERROR(ConstantColumn);
CTFACTOR_DEFINE_ERROR(InternalError);

#undef CTFACTOR_DEFINE_ERROR

}  // namespace ctfactor
