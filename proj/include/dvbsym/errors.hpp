#pragma once

#include <stdexcept>
#include <string>

namespace dvbsym {

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// raised when a map does not respect required structure
struct CompatibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvarianceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ImmersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HomogeneityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw CompatibilityError(what);
}

}  // namespace dvbsym
