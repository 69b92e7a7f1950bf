#include "lsl/minkowski.hpp"

#include "lsl/errors.hpp"

namespace lsl {

const char* to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::timelike:
      return "timelike";
    case CausalCharacter::null:
      return "null";
    case CausalCharacter::spacelike:
      return "spacelike";
  }
  return "unknown";
}

CausalCharacter causal_character(const MinkowskiVec& a, std::optional<double> tol) {
  const double q = inner(a, a);
  const double band = tol ? *tol : 1e-10 * (1.0 + std::abs(q));
  if (band < 0.0) throw PreconditionError("causal_character: negative tolerance");
  if (q < -band) return CausalCharacter::timelike;
  if (q > band) return CausalCharacter::spacelike;
  return CausalCharacter::null;
}

}  // namespace lsl
