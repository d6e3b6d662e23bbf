#pragma once

#include <stdexcept>
#include <string>

namespace ghc {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GHC_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

GHC_DEFINE_ERROR(InvalidModulus);
GHC_DEFINE_ERROR(ZeroInverse);
GHC_DEFINE_ERROR(DimensionMismatch);
GHC_DEFINE_ERROR(Singular);
GHC_DEFINE_ERROR(InfeasibleSize);
GHC_DEFINE_ERROR(RankMismatch);
GHC_DEFINE_ERROR(NotAssociative);
GHC_DEFINE_ERROR(NoIdempotents);
GHC_DEFINE_ERROR(NotABand);
GHC_DEFINE_ERROR(InternalCheckFailed);
GHC_DEFINE_ERROR(RootNotInComponent);
GHC_DEFINE_ERROR(BasepointNotInComponent);
GHC_DEFINE_ERROR(NonInvertiblePairing);
GHC_DEFINE_ERROR(CellLiftObstruction);
GHC_DEFINE_ERROR(InvalidInput);
GHC_DEFINE_ERROR(IOError);

#undef GHC_DEFINE_ERROR

}  // namespace ghc
