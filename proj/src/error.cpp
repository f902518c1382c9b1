#include "desitter/error.hpp"

namespace desitter {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_span: return "degenerate_span";
    case ErrorKind::rank_deficient: return "rank_deficient";
    case ErrorKind::invalid_radius: return "invalid_radius";
    case ErrorKind::too_few_samples: return "too_few_samples";
    case ErrorKind::irregular_curve: return "irregular_curve";
    case ErrorKind::inflection: return "inflection";
    case ErrorKind::vertex: return "vertex";
    case ErrorKind::zero_torsion: return "zero_torsion";
    case ErrorKind::non_spacelike: return "non_spacelike";
    case ErrorKind::empty_intersection: return "empty_intersection";
    case ErrorKind::orientation_incoherent: return "orientation_incoherent";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

}  // namespace desitter
