#pragma once

#include <stdexcept>
#include <string>

namespace weldlab {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A crossing or mass target was not reached inside the sampled window.
struct RangeExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SwallowedPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidCurve : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateCorrespondence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace weldlab
