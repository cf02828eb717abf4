#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbn/core.hpp"

namespace cbn {

/// One complete case: a state index per dataset variable plus a flag telling
/// whether that value was set by manipulation rather than observed.
struct CaseRecord {
  std::vector<int> values;
  std::vector<bool> manipulated;
};

/// A complete-case dataset over a fixed variable schema.
struct Dataset {
  std::vector<Variable> variables;
  std::vector<CaseRecord> cases;

  int num_variables() const { return static_cast<int>(variables.size()); }
  std::optional<int> find(std::string_view name) const;
  int index_of(std::string_view name) const;
};

/// Parses the case file format:
///
///   vars: X1{F,T}, X2{F,T}
///   T,F          # both observed
///   !T,F         # X1 manipulated to T, X2 observed as F
///
/// `#` starts a comment; blank lines are skipped. Every case must assign a
/// state to every variable. Throws ParseError with source location.
Dataset parse_dataset(std::string_view text);

/// Canonical text form; round-trips through parse_dataset exactly.
std::string write_dataset(const Dataset& dataset);

Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace cbn
