#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lcone {

enum class ErrorKind {
  ZeroPivotNotPD,
  SingularMatrix,
  ZeroInput,
  NotPositiveDefinite,
  AffinelyDependent,
  NotAFacet,
  NotOnSingleFacet,
  NotATriangulation,
  EmptyRaySet,
  NonPSDRay,
  NotPointed,
  DimensionUnsupported,
  IncompleteDatabase,
  IncompatibleCheckpoint,
  ParseError,
  Internal,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Internal consistency check; throws ErrorKind::Internal on failure.
inline void ensure(bool cond, const char* what) {
  if (!cond) throw Error(ErrorKind::Internal, what);
}

}  // namespace lcone
