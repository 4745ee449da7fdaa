#pragma once

namespace volvol {

inline constexpr const char* kVersion = "0.1.0";

// Rational constants of the variance-of-variance combinations. Printed by
// --version so archived outputs can be tied to the exact coefficient set.
inline constexpr const char* kCoefficientSet =
    "chat=[453/280,486/35,1038/35] that=[3/4,12,36] alpha2=[453/280,486/35,346/1225]";

}  // namespace volvol
