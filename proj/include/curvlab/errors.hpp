#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CURVLAB_ERROR_TYPE(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  };

CURVLAB_ERROR_TYPE(IndexOutOfRange)
CURVLAB_ERROR_TYPE(InconsistentSymmetry)
CURVLAB_ERROR_TYPE(BianchiViolation)
CURVLAB_ERROR_TYPE(DimensionMismatch)
CURVLAB_ERROR_TYPE(DegeneratePlane)
CURVLAB_ERROR_TYPE(NotUnit)
CURVLAB_ERROR_TYPE(NegativeSectional)
CURVLAB_ERROR_TYPE(DimensionTooSmall)
CURVLAB_ERROR_TYPE(BadFrame)
CURVLAB_ERROR_TYPE(EvenDimension)
CURVLAB_ERROR_TYPE(UnknownChecker)
CURVLAB_ERROR_TYPE(ConfigInvalid)
CURVLAB_ERROR_TYPE(BadParams)
CURVLAB_ERROR_TYPE(HypothesisNotMet)
CURVLAB_ERROR_TYPE(SamplerFailed)
CURVLAB_ERROR_TYPE(ParseError)

#undef CURVLAB_ERROR_TYPE

}  // namespace curvlab
