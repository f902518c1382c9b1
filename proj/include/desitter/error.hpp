#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace desitter {

/// Failure categories surfaced by the library. The CLI maps them to exit codes
/// and to the machine-readable error block of its reports.
enum class ErrorKind {
  degenerate_span,        // null direction met while orthonormalizing
  rank_deficient,         // dependent input vectors
  invalid_radius,         // spherical radius at 0 or pi, or plane where a sphere is required
  too_few_samples,
  irregular_curve,        // vanishing speed
  inflection,             // vanishing curvature
  vertex,                 // k'^2 + k^2 tau^2 = 0
  zero_torsion,           // euclidean osculating-sphere formula undefined
  non_spacelike,          // tangent or span not space-like where required
  empty_intersection,     // affine plane misses de Sitter space
  orientation_incoherent, // osculating spheres cannot be oriented consistently
  precondition,
  parse,
};

std::string_view to_string(ErrorKind kind);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace desitter
