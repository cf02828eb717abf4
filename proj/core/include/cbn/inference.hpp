#pragma once

#include <vector>

#include "cbn/core.hpp"

namespace cbn {

enum class EvidenceMode { kObserved, kManipulated };

struct Evidence {
  int variable = 0;
  int state = 0;
  EvidenceMode mode = EvidenceMode::kObserved;
};

/// Targets are queried jointly; evidence may mix observed values with
/// manipulated ones. Manipulated evidence triggers intervention surgery
/// before conditioning, so it never creates back-door information flow.
struct Query {
  std::vector<int> targets;
  std::vector<Evidence> evidence;
};

/// Exact conditional distribution over the joint states of the targets,
/// ordered mixed-radix with the first target as the slowest digit. Computed
/// by variable elimination (min-degree order) after pruning variables that
/// are not ancestors of a target or evidence variable.
///
/// A target may coincide with a *manipulated* evidence variable (the result
/// is a point mass on the manipulated state); overlap with observed evidence
/// is rejected. Observed evidence with probability zero raises
/// ZeroProbabilityEvidence.
std::vector<double> query(const CausalNetwork& net, const Query& q);

/// Exact marginal distribution of one variable.
std::vector<double> marginal(const CausalNetwork& net, int variable);

}  // namespace cbn
