#pragma once

#include <stdexcept>
#include <string>

namespace dynmass {

/// Violated construction invariant of a domain type (bad grid, levels, params...).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Precondition {
  packet_near_boundary,
  unresolved_width,
  dimension_mismatch,
  zero_weights,
  incompatible_spaces,
  branch_deformed,
  boundary_violation,
  aliasing,
  superluminal,
  open_trajectory,
  too_few_samples,
  spread_dominated,
  mismatched_endpoints,
};

const char* to_string(Precondition p);

/// A numerical operation was called outside the regime where its result means anything.
class PreconditionError : public std::domain_error {
 public:
  PreconditionError(Precondition what, const std::string& detail)
      : std::domain_error(std::string(to_string(what)) + ": " + detail), what_(what) {}

  Precondition kind() const noexcept { return what_; }

 private:
  Precondition what_;
};

inline const char* to_string(Precondition p) {
  switch (p) {
    case Precondition::packet_near_boundary: return "packet-too-close-to-boundary";
    case Precondition::unresolved_width: return "width-unresolvable-on-grid";
    case Precondition::dimension_mismatch: return "dimension-mismatch";
    case Precondition::zero_weights: return "all-zero-weights";
    case Precondition::incompatible_spaces: return "incompatible-spaces";
    case Precondition::branch_deformed: return "branch-deformed";
    case Precondition::boundary_violation: return "boundary-violation";
    case Precondition::aliasing: return "aliasing";
    case Precondition::superluminal: return "superluminal";
    case Precondition::open_trajectory: return "open-trajectory";
    case Precondition::too_few_samples: return "too-few-samples";
    case Precondition::spread_dominated: return "spread-dominated";
    case Precondition::mismatched_endpoints: return "mismatched-endpoints";
  }
  return "unknown";
}

}  // namespace dynmass
