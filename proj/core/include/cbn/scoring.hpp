#pragma once

#include <vector>

#include "cbn/core.hpp"
#include "cbn/dataio.hpp"

namespace cbn {

/// Dirichlet hyperparameters, one positive value per (variable, joint parent
/// state, state) cell of a structure.
struct DirichletPrior {
  std::vector<std::vector<std::vector<double>>> alpha;  // [i][j][k]

  double alpha_row_total(int i, int j) const;
};

/// Manipulation-aware counts: a case contributes to variable i's cell only
/// when i was passively observed in that case. Parent states count no matter
/// how the parents attained them.
struct SufficientStats {
  std::vector<std::vector<std::vector<long long>>> counts;  // [i][j][k]

  long long row_total(int i, int j) const;
};

/// Log-space score of one structure: log prior, log marginal likelihood and
/// their sum.
struct StructureScore {
  double log_prior = 0.0;
  double log_marginal = 0.0;
  double log_joint = 0.0;
};

/// Tallies counts for every variable of `structure` from the dataset. Every
/// structure variable must appear in the dataset with an identical state
/// list; extra dataset columns are ignored.
SufficientStats tally_counts(const Dataset& dataset, const NetworkStructure& structure);

/// The uniform unit-ESS prior: alpha_ijk = 1 / (q_i * r_i), so each row
/// carries total weight 1 / q_i and each variable total weight 1. Gives
/// identical scores to Markov-equivalent structures on fully observed data.
DirichletPrior default_prior(const NetworkStructure& structure);

/// Closed-form log marginal likelihood of the data under a structure: the
/// Dirichlet-multinomial evaluated from sufficient statistics, entirely in
/// log space via lgamma.
double log_marginal_likelihood(const SufficientStats& stats, const DirichletPrior& prior);

StructureScore log_joint_score(double structure_log_prior, double log_marginal);

/// Posterior-mean parameters: CPT cell (i, j, k) becomes
/// (alpha_ijk + N_ijk) / (alpha_ij + N_ij).
CausalNetwork posterior_params(const SufficientStats& stats, const DirichletPrior& prior,
                               const NetworkStructure& structure);

/// Sequential form of the same quantity: the sum over cases of the log
/// one-step-ahead predictive probability of each passively observed value,
/// using counts from strictly earlier cases. Equal to
/// log_marginal_likelihood for every case order; kept as an independent
/// cross-check of the closed form.
double prequential_log_score(const Dataset& dataset, const NetworkStructure& structure,
                             const DirichletPrior& prior);

}  // namespace cbn
