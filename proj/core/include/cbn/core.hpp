#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cbn/error.hpp"

namespace cbn {

/// A discrete variable: a name plus an ordered list of at least two state labels.
struct Variable {
  std::string name;
  std::vector<std::string> states;

  int arity() const { return static_cast<int>(states.size()); }
  std::optional<int> state_index(std::string_view label) const;
};

/// Directed graph over discrete variables. Parents are kept in declaration
/// order; the joint parent-state index is mixed-radix with the first listed
/// parent as the slowest-varying digit.
///
/// Construction checks names, state labels, arities and the parent lists for
/// well-formedness but deliberately admits cyclic graphs; cycles are reported
/// by validate_network() and rejected by the operations that need a DAG.
class NetworkStructure {
 public:
  NetworkStructure() = default;
  NetworkStructure(std::vector<Variable> variables, std::vector<std::vector<int>> parents);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int i) const { return variables_.at(i); }
  const std::vector<int>& parents(int i) const { return parents_.at(i); }
  int arity(int i) const { return variables_.at(i).arity(); }

  /// Number of joint states of i's parents (1 for a parentless variable).
  int parent_state_count(int i) const;

  /// Index of the named variable; throws Error if absent.
  int index_of(std::string_view name) const;
  std::optional<int> find(std::string_view name) const;

  bool has_arc(int from, int to) const;
  bool is_acyclic() const;

  /// Parents-before-children order; throws Error naming a cycle otherwise.
  std::vector<int> topological_order() const;

  bool operator==(const NetworkStructure& other) const {
    return variables_ == other.variables_ && parents_ == other.parents_;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<int>> parents_;
  std::unordered_map<std::string, int> index_;
};

bool operator==(const Variable& a, const Variable& b);

/// One conditional probability table: row j (joint parent state) holds the
/// distribution over the variable's states.
using CptRow = std::vector<double>;
using Cpt = std::vector<CptRow>;

/// A causal Bayesian network: structure plus one CPT per variable.
struct CausalNetwork {
  NetworkStructure structure;
  std::vector<Cpt> cpts;
};

/// Outcome of validate_network: empty error list means the network is valid.
struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

/// Absolute tolerance for CPT row normalization checks.
inline constexpr double kRowSumTolerance = 1e-6;

/// Checks acyclicity, CPT dimensions (parent_state_count(i) rows of arity(i)
/// entries), entry ranges and row normalization. Never throws; all problems
/// are collected into the report.
ValidationReport validate_network(const CausalNetwork& net);

/// Mixed-radix index of a joint parent state, with the first listed parent
/// as the slowest digit. A parentless variable has the single index 0.
int joint_state_index(const NetworkStructure& net, int node, std::span<const int> parent_values);

/// Inverse of joint_state_index: the parent values encoded by index j.
std::vector<int> joint_state_values(const NetworkStructure& net, int node, int j);

/// Joint parent-state index of `node` under a full assignment of all variables.
int joint_state_from_case(const NetworkStructure& net, int node, std::span<const int> values);

/// All variables with a directed path into `node`, ascending; never contains
/// `node` itself.
std::vector<int> ancestors(const NetworkStructure& net, int node);

/// Classification of an unordered variable pair against a causal DAG.
struct PairClass {
  bool causally_related = false;
  bool confounded = false;
};

enum class ConfounderRule {
  /// z confounds (x, y) if z reaches x by a directed path avoiding y and
  /// reaches y by a directed path avoiding x. Default.
  kPathAvoiding,
  /// z confounds (x, y) if z is an ancestor of both, regardless of whether
  /// the connecting paths pass through x or y.
  kCommonAncestor,
};

/// causally_related iff x is an ancestor of y or vice versa; confounded per
/// the chosen rule, always requiring the confounder distinct from x and y.
PairClass classify_pair(const NetworkStructure& net, int x, int y,
                        ConfounderRule rule = ConfounderRule::kPathAvoiding);

/// An externally imposed assignment of one variable.
struct Manipulation {
  int variable = 0;
  int state = 0;
};

/// Intervention surgery: every manipulated variable loses its incoming arcs
/// and its CPT becomes a point mass on the manipulated state; everything
/// else is untouched. Idempotent for a fixed manipulation set.
CausalNetwork surgery(const CausalNetwork& net, std::span<const Manipulation> manipulations);

}  // namespace cbn
