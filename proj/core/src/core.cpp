#include "cbn/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cbn {

namespace {

std::string join_path(const NetworkStructure& net, const std::vector<int>& nodes) {
  std::ostringstream out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) out << " -> ";
    out << net.variable(nodes[i]).name;
  }
  return out.str();
}

// Returns a directed cycle as a node sequence a -> ... -> a, or empty if none.
std::vector<int> find_cycle(const NetworkStructure& net) {
  const int n = net.num_variables();
  std::vector<int> color(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<int> stack, result;

  // Iterative DFS over the child relation (parents reversed).
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v)
    for (int p : net.parents(v)) children[p].push_back(v);

  std::vector<int> path;
  std::vector<std::pair<int, std::size_t>> frames;
  for (int start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    frames.push_back({start, 0});
    color[start] = 1;
    path.push_back(start);
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < children[v].size()) {
        int c = children[v][next++];
        if (color[c] == 1) {
          auto it = std::find(path.begin(), path.end(), c);
          result.assign(it, path.end());
          result.push_back(c);
          return result;
        }
        if (color[c] == 0) {
          color[c] = 1;
          path.push_back(c);
          frames.push_back({c, 0});
        }
      } else {
        color[v] = 2;
        path.pop_back();
        frames.pop_back();
      }
    }
  }
  return {};
}

std::vector<bool> ancestor_mask(const NetworkStructure& net, int node, int avoid = -1) {
  std::vector<bool> seen(net.num_variables(), false);
  std::vector<int> stack;
  for (int p : net.parents(node))
    if (p != avoid) stack.push_back(p);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    for (int p : net.parents(v))
      if (p != avoid) stack.push_back(p);
  }
  return seen;
}

}  // namespace

bool operator==(const Variable& a, const Variable& b) {
  return a.name == b.name && a.states == b.states;
}

std::optional<int> Variable::state_index(std::string_view label) const {
  for (std::size_t k = 0; k < states.size(); ++k)
    if (states[k] == label) return static_cast<int>(k);
  return std::nullopt;
}

NetworkStructure::NetworkStructure(std::vector<Variable> variables,
                                   std::vector<std::vector<int>> parents)
    : variables_(std::move(variables)), parents_(std::move(parents)) {
  const int n = static_cast<int>(variables_.size());
  if (static_cast<int>(parents_.size()) != n)
    throw Error("parent list count does not match variable count");
  for (int i = 0; i < n; ++i) {
    const Variable& v = variables_[i];
    if (v.name.empty()) throw Error("variable with empty name");
    if (v.arity() < 2) throw Error("variable '" + v.name + "' needs at least two states");
    for (std::size_t a = 0; a < v.states.size(); ++a)
      for (std::size_t b = a + 1; b < v.states.size(); ++b)
        if (v.states[a] == v.states[b])
          throw Error("variable '" + v.name + "' has duplicate state label '" + v.states[a] + "'");
    if (!index_.emplace(v.name, i).second)
      throw Error("duplicate variable name '" + v.name + "'");
  }
  for (int i = 0; i < n; ++i) {
    std::vector<bool> seen(n, false);
    for (int p : parents_[i]) {
      if (p < 0 || p >= n)
        throw Error("parent index out of range for variable '" + variables_[i].name + "'");
      if (seen[p])
        throw Error("duplicate parent '" + variables_[p].name + "' of variable '" +
                    variables_[i].name + "'");
      seen[p] = true;
    }
  }
}

int NetworkStructure::parent_state_count(int i) const {
  int q = 1;
  for (int p : parents_.at(i)) q *= arity(p);
  return q;
}

int NetworkStructure::index_of(std::string_view name) const {
  auto found = find(name);
  if (!found) throw Error("unknown variable '" + std::string(name) + "'");
  return *found;
}

std::optional<int> NetworkStructure::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool NetworkStructure::has_arc(int from, int to) const {
  const auto& ps = parents_.at(to);
  return std::find(ps.begin(), ps.end(), from) != ps.end();
}

bool NetworkStructure::is_acyclic() const { return find_cycle(*this).empty(); }

std::vector<int> NetworkStructure::topological_order() const {
  const int n = num_variables();
  std::vector<int> indegree(n, 0), order;
  order.reserve(n);
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v) {
    indegree[v] = static_cast<int>(parents_[v].size());
    for (int p : parents_[v]) children[p].push_back(v);
  }
  std::vector<int> ready;
  for (int v = n - 1; v >= 0; --v)
    if (indegree[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int c : children[v])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  if (static_cast<int>(order.size()) != n)
    throw Error("network contains a cycle: " + join_path(*this, find_cycle(*this)));
  return order;
}

ValidationReport validate_network(const CausalNetwork& net) {
  ValidationReport report;
  const NetworkStructure& s = net.structure;
  const int n = s.num_variables();

  auto cycle = find_cycle(s);
  if (!cycle.empty()) report.errors.push_back("cycle detected: " + join_path(s, cycle));

  if (static_cast<int>(net.cpts.size()) != n) {
    report.errors.push_back("expected " + std::to_string(n) + " CPTs, got " +
                            std::to_string(net.cpts.size()));
    return report;
  }
  for (int i = 0; i < n; ++i) {
    const Cpt& cpt = net.cpts[i];
    const std::string& name = s.variable(i).name;
    const int q = s.parent_state_count(i);
    const int r = s.arity(i);
    if (static_cast<int>(cpt.size()) != q) {
      report.errors.push_back("variable '" + name + "': expected " + std::to_string(q) +
                              " CPT rows, got " + std::to_string(cpt.size()));
      continue;
    }
    for (int j = 0; j < q; ++j) {
      const CptRow& row = cpt[j];
      if (static_cast<int>(row.size()) != r) {
        report.errors.push_back("variable '" + name + "', row " + std::to_string(j) +
                                ": expected " + std::to_string(r) + " entries, got " +
                                std::to_string(row.size()));
        continue;
      }
      double sum = 0.0;
      bool in_range = true;
      for (double v : row) {
        if (!(v >= 0.0 && v <= 1.0)) in_range = false;
        sum += v;
      }
      if (!in_range)
        report.errors.push_back("variable '" + name + "', row " + std::to_string(j) +
                                ": entry outside [0, 1]");
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg << "variable '" << name << "', row " << j << ": probabilities sum to " << sum;
        report.errors.push_back(msg.str());
      }
    }
  }
  return report;
}

int joint_state_index(const NetworkStructure& net, int node, std::span<const int> parent_values) {
  const auto& parents = net.parents(node);
  if (parent_values.size() != parents.size())
    throw Error("expected " + std::to_string(parents.size()) + " parent values for '" +
                net.variable(node).name + "', got " + std::to_string(parent_values.size()));
  int j = 0;
  for (std::size_t a = 0; a < parents.size(); ++a) {
    const int r = net.arity(parents[a]);
    const int v = parent_values[a];
    if (v < 0 || v >= r)
      throw Error("state index " + std::to_string(v) + " out of range for parent '" +
                  net.variable(parents[a]).name + "'");
    j = j * r + v;
  }
  return j;
}

std::vector<int> joint_state_values(const NetworkStructure& net, int node, int j) {
  const auto& parents = net.parents(node);
  if (j < 0 || j >= net.parent_state_count(node))
    throw Error("joint state index " + std::to_string(j) + " out of range for '" +
                net.variable(node).name + "'");
  std::vector<int> values(parents.size());
  for (std::size_t a = parents.size(); a-- > 0;) {
    const int r = net.arity(parents[a]);
    values[a] = j % r;
    j /= r;
  }
  return values;
}

int joint_state_from_case(const NetworkStructure& net, int node, std::span<const int> values) {
  if (values.size() != static_cast<std::size_t>(net.num_variables()))
    throw Error("case has wrong number of values");
  int j = 0;
  for (int p : net.parents(node)) j = j * net.arity(p) + values[p];
  return j;
}

std::vector<int> ancestors(const NetworkStructure& net, int node) {
  if (node < 0 || node >= net.num_variables()) throw Error("unknown node index");
  auto mask = ancestor_mask(net, node);
  std::vector<int> result;
  for (int v = 0; v < net.num_variables(); ++v)
    if (mask[v]) result.push_back(v);
  return result;
}

PairClass classify_pair(const NetworkStructure& net, int x, int y, ConfounderRule rule) {
  const int n = net.num_variables();
  if (x < 0 || x >= n || y < 0 || y >= n) throw Error("unknown node index");
  if (x == y) throw Error("classify_pair requires two distinct variables");

  PairClass pc;
  auto anc_x = ancestor_mask(net, x);
  auto anc_y = ancestor_mask(net, y);
  pc.causally_related = anc_x[y] || anc_y[x];

  if (rule == ConfounderRule::kCommonAncestor) {
    for (int z = 0; z < n && !pc.confounded; ++z)
      if (z != x && z != y && anc_x[z] && anc_y[z]) pc.confounded = true;
  } else {
    auto to_x = ancestor_mask(net, x, /*avoid=*/y);
    auto to_y = ancestor_mask(net, y, /*avoid=*/x);
    for (int z = 0; z < n && !pc.confounded; ++z)
      if (z != x && z != y && to_x[z] && to_y[z]) pc.confounded = true;
  }
  return pc;
}

CausalNetwork surgery(const CausalNetwork& net, std::span<const Manipulation> manipulations) {
  const NetworkStructure& s = net.structure;
  std::vector<bool> hit(s.num_variables(), false);
  for (const Manipulation& m : manipulations) {
    if (m.variable < 0 || m.variable >= s.num_variables())
      throw Error("unknown variable in manipulation set");
    if (m.state < 0 || m.state >= s.arity(m.variable))
      throw Error("manipulated state out of range for '" + s.variable(m.variable).name + "'");
    if (hit[m.variable])
      throw Error("variable '" + s.variable(m.variable).name + "' manipulated twice");
    hit[m.variable] = true;
  }

  std::vector<std::vector<int>> parents;
  parents.reserve(s.num_variables());
  for (int i = 0; i < s.num_variables(); ++i)
    parents.push_back(hit[i] ? std::vector<int>{} : s.parents(i));
  CausalNetwork result{NetworkStructure(s.variables(), std::move(parents)), net.cpts};
  for (const Manipulation& m : manipulations) {
    CptRow row(s.arity(m.variable), 0.0);
    row[m.state] = 1.0;
    result.cpts[m.variable] = Cpt{std::move(row)};
  }
  return result;
}

}  // namespace cbn
