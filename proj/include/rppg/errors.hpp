#pragma once

#include <stdexcept>
#include <string>

namespace rppg {

// Base type for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define RPPG_ERROR_TYPE(Name)                                \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(what) {}  \
  }

RPPG_ERROR_TYPE(MissingFile);
RPPG_ERROR_TYPE(CorruptHeader);
RPPG_ERROR_TYPE(InvariantViolation);
RPPG_ERROR_TYPE(IoFailure);
RPPG_ERROR_TYPE(EmptyRoi);
RPPG_ERROR_TYPE(NoLandmarks);
RPPG_ERROR_TYPE(BandAboveNyquist);
RPPG_ERROR_TYPE(EmptyBand);
RPPG_ERROR_TYPE(FlatSignal);
RPPG_ERROR_TYPE(ConstantInput);
RPPG_ERROR_TYPE(EmptyList);
RPPG_ERROR_TYPE(SingularDesign);
RPPG_ERROR_TYPE(TooFewObservations);
RPPG_ERROR_TYPE(SpecInvalid);
RPPG_ERROR_TYPE(UnknownColumn);

#undef RPPG_ERROR_TYPE

}  // namespace rppg
