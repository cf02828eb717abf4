#include "cbn/inference.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cbn {

namespace {

// A nonnegative table over a sorted list of variables; values are laid out
// mixed-radix with the first variable as the slowest digit.
struct Factor {
  std::vector<int> vars;   // ascending
  std::vector<int> card;   // aligned with vars
  std::vector<double> values;

  bool scalar() const { return vars.empty(); }
};

std::size_t table_size(const std::vector<int>& card) {
  std::size_t n = 1;
  for (int c : card) n *= static_cast<std::size_t>(c);
  return n;
}

// Strides of each result variable inside a source factor (0 if absent).
std::vector<std::size_t> strides_in(const std::vector<int>& result_vars,
                                    const Factor& source) {
  std::vector<std::size_t> strides(result_vars.size(), 0);
  std::vector<std::size_t> own(source.vars.size());
  std::size_t s = 1;
  for (std::size_t a = source.vars.size(); a-- > 0;) {
    own[a] = s;
    s *= static_cast<std::size_t>(source.card[a]);
  }
  for (std::size_t r = 0; r < result_vars.size(); ++r) {
    auto it = std::lower_bound(source.vars.begin(), source.vars.end(), result_vars[r]);
    if (it != source.vars.end() && *it == result_vars[r])
      strides[r] = own[it - source.vars.begin()];
  }
  return strides;
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  out.card.reserve(out.vars.size());
  for (int v : out.vars) {
    auto it = std::lower_bound(a.vars.begin(), a.vars.end(), v);
    if (it != a.vars.end() && *it == v)
      out.card.push_back(a.card[it - a.vars.begin()]);
    else {
      auto jt = std::lower_bound(b.vars.begin(), b.vars.end(), v);
      out.card.push_back(b.card[jt - b.vars.begin()]);
    }
  }
  out.values.assign(table_size(out.card), 0.0);

  auto sa = strides_in(out.vars, a);
  auto sb = strides_in(out.vars, b);
  std::vector<int> assign(out.vars.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t linear = 0; linear < out.values.size(); ++linear) {
    out.values[linear] = a.values[ia] * b.values[ib];
    for (std::size_t d = out.vars.size(); d-- > 0;) {
      if (++assign[d] < out.card[d]) {
        ia += sa[d];
        ib += sb[d];
        break;
      }
      assign[d] = 0;
      ia -= sa[d] * static_cast<std::size_t>(out.card[d] - 1);
      ib -= sb[d] * static_cast<std::size_t>(out.card[d] - 1);
    }
  }
  return out;
}

Factor sum_out(const Factor& f, int var) {
  auto it = std::lower_bound(f.vars.begin(), f.vars.end(), var);
  const std::size_t pos = it - f.vars.begin();
  Factor out;
  out.vars = f.vars;
  out.vars.erase(out.vars.begin() + pos);
  out.card = f.card;
  out.card.erase(out.card.begin() + pos);
  out.values.assign(table_size(out.card), 0.0);

  auto strides = strides_in(out.vars, f);
  std::size_t var_stride = 1;
  for (std::size_t a = f.vars.size(); a-- > pos + 1;)
    var_stride *= static_cast<std::size_t>(f.card[a]);

  std::vector<int> assign(out.vars.size(), 0);
  std::size_t base = 0;
  for (std::size_t linear = 0; linear < out.values.size(); ++linear) {
    double total = 0.0;
    for (int s = 0; s < f.card[pos]; ++s) total += f.values[base + var_stride * s];
    out.values[linear] = total;
    for (std::size_t d = out.vars.size(); d-- > 0;) {
      if (++assign[d] < out.card[d]) {
        base += strides[d];
        break;
      }
      assign[d] = 0;
      base -= strides[d] * static_cast<std::size_t>(out.card[d] - 1);
    }
  }
  return out;
}

Factor reduce(const Factor& f, int var, int state) {
  auto it = std::lower_bound(f.vars.begin(), f.vars.end(), var);
  const std::size_t pos = it - f.vars.begin();
  Factor out;
  out.vars = f.vars;
  out.vars.erase(out.vars.begin() + pos);
  out.card = f.card;
  out.card.erase(out.card.begin() + pos);
  out.values.reserve(table_size(out.card));

  std::size_t var_stride = 1;
  for (std::size_t a = f.vars.size(); a-- > pos + 1;)
    var_stride *= static_cast<std::size_t>(f.card[a]);
  const std::size_t block = var_stride;
  const std::size_t step = var_stride * static_cast<std::size_t>(f.card[pos]);
  for (std::size_t outer = 0; outer < f.values.size(); outer += step)
    for (std::size_t inner = 0; inner < block; ++inner)
      out.values.push_back(f.values[outer + static_cast<std::size_t>(state) * block + inner]);
  return out;
}

Factor cpt_factor(const CausalNetwork& net, int node) {
  const NetworkStructure& s = net.structure;
  Factor f;
  f.vars = s.parents(node);
  f.vars.push_back(node);
  std::sort(f.vars.begin(), f.vars.end());
  f.card.reserve(f.vars.size());
  for (int v : f.vars) f.card.push_back(s.arity(v));
  f.values.assign(table_size(f.card), 0.0);

  std::vector<int> assign(f.vars.size(), 0);
  std::vector<std::size_t> slot(s.num_variables(), 0);
  for (std::size_t a = 0; a < f.vars.size(); ++a) slot[f.vars[a]] = a;
  std::vector<int> parent_values(s.parents(node).size());
  for (std::size_t linear = 0; linear < f.values.size(); ++linear) {
    const auto& parents = s.parents(node);
    for (std::size_t p = 0; p < parents.size(); ++p) parent_values[p] = assign[slot[parents[p]]];
    int j = joint_state_index(s, node, parent_values);
    f.values[linear] = net.cpts[node][j][assign[slot[node]]];
    for (std::size_t d = f.vars.size(); d-- > 0;) {
      if (++assign[d] < f.card[d]) break;
      assign[d] = 0;
    }
  }
  return f;
}

// Min-degree elimination order over the interaction graph of the factors.
std::vector<int> elimination_order(const std::vector<Factor>& factors,
                                   const std::set<int>& keep) {
  std::map<int, std::set<int>> graph;
  for (const Factor& f : factors)
    for (int v : f.vars) {
      auto& adj = graph[v];
      for (int u : f.vars)
        if (u != v) adj.insert(u);
    }
  std::vector<int> order;
  std::set<int> remaining;
  for (auto& [v, _] : graph)
    if (!keep.count(v)) remaining.insert(v);
  while (!remaining.empty()) {
    int best = -1;
    std::size_t best_degree = 0;
    for (int v : remaining) {
      std::size_t degree = graph[v].size();
      if (best == -1 || degree < best_degree) {
        best = v;
        best_degree = degree;
      }
    }
    order.push_back(best);
    auto neighbors = graph[best];
    for (int u : neighbors) {
      graph[u].erase(best);
      for (int w : neighbors)
        if (w != u) graph[u].insert(w);
    }
    graph.erase(best);
    remaining.erase(best);
  }
  return order;
}

}  // namespace

std::vector<double> query(const CausalNetwork& net, const Query& q) {
  const NetworkStructure& s = net.structure;
  const int n = s.num_variables();
  if (q.targets.empty()) throw Error("query needs at least one target variable");

  std::vector<int> evidence_state(n, -1);
  std::vector<Manipulation> manipulations;
  for (const Evidence& e : q.evidence) {
    if (e.variable < 0 || e.variable >= n) throw Error("unknown evidence variable");
    if (e.state < 0 || e.state >= s.arity(e.variable))
      throw Error("evidence state out of range for '" + s.variable(e.variable).name + "'");
    if (evidence_state[e.variable] != -1)
      throw Error("variable '" + s.variable(e.variable).name + "' appears twice in evidence");
    evidence_state[e.variable] = e.state;
    if (e.mode == EvidenceMode::kManipulated)
      manipulations.push_back({e.variable, e.state});
  }
  std::vector<bool> manipulated(n, false);
  for (const Manipulation& m : manipulations) manipulated[m.variable] = true;

  std::vector<bool> is_target(n, false);
  for (int t : q.targets) {
    if (t < 0 || t >= n) throw Error("unknown target variable");
    if (is_target[t]) throw Error("duplicate target variable '" + s.variable(t).name + "'");
    if (evidence_state[t] != -1 && !manipulated[t])
      throw Error("target '" + s.variable(t).name + "' overlaps observed evidence");
    is_target[t] = true;
  }

  const CausalNetwork operated =
      manipulations.empty() ? net : surgery(net, manipulations);

  // Keep only ancestors of targets and evidence; everything else is barren.
  std::vector<bool> relevant(n, false);
  std::vector<int> frontier;
  auto mark = [&](int v) {
    if (!relevant[v]) {
      relevant[v] = true;
      frontier.push_back(v);
    }
  };
  for (int t : q.targets) mark(t);
  for (const Evidence& e : q.evidence) mark(e.variable);
  while (!frontier.empty()) {
    int v = frontier.back();
    frontier.pop_back();
    for (int p : operated.structure.parents(v)) mark(p);
  }

  std::vector<Factor> factors;
  bool zero_scalar = false;
  for (int v = 0; v < n; ++v) {
    if (!relevant[v]) continue;
    Factor f = cpt_factor(operated, v);
    for (int fv : std::vector<int>(f.vars))
      if (evidence_state[fv] != -1) f = reduce(f, fv, evidence_state[fv]);
    if (f.scalar()) {
      if (f.values[0] == 0.0) zero_scalar = true;
      continue;  // constants cancel in the final normalization
    }
    factors.push_back(std::move(f));
  }

  std::set<int> keep;
  for (int t : q.targets)
    if (evidence_state[t] == -1) keep.insert(t);

  for (int v : elimination_order(factors, keep)) {
    Factor merged;
    bool have = false;
    for (std::size_t idx = factors.size(); idx-- > 0;) {
      const Factor& f = factors[idx];
      if (std::binary_search(f.vars.begin(), f.vars.end(), v)) {
        merged = have ? multiply(merged, f) : f;
        have = true;
        factors.erase(factors.begin() + idx);
      }
    }
    if (have) factors.push_back(sum_out(merged, v));
  }

  Factor joint;
  joint.values = {1.0};
  for (const Factor& f : factors)
    if (!f.scalar())
      joint = joint.scalar() ? f : multiply(joint, f);
    else if (f.values[0] == 0.0)
      zero_scalar = true;

  // Expand to the requested target order, fixing manipulated targets.
  std::vector<int> out_card;
  out_card.reserve(q.targets.size());
  for (int t : q.targets) out_card.push_back(s.arity(t));
  std::vector<double> result(table_size(out_card), 0.0);

  std::vector<int> assign(q.targets.size(), 0);
  auto joint_strides = strides_in(q.targets, joint);
  double total = 0.0;
  for (std::size_t linear = 0; linear < result.size(); ++linear) {
    bool consistent = true;
    std::size_t src = 0;
    for (std::size_t d = 0; d < q.targets.size(); ++d) {
      const int t = q.targets[d];
      if (evidence_state[t] != -1 && assign[d] != evidence_state[t]) consistent = false;
      src += joint_strides[d] * static_cast<std::size_t>(assign[d]);
    }
    if (consistent && !zero_scalar) {
      result[linear] = joint.values[src];
      total += result[linear];
    }
    for (std::size_t d = q.targets.size(); d-- > 0;) {
      if (++assign[d] < out_card[d]) break;
      assign[d] = 0;
    }
  }

  if (total <= 0.0)
    throw ZeroProbabilityEvidence("conditioning event has probability zero");
  for (double& v : result) v /= total;
  return result;
}

std::vector<double> marginal(const CausalNetwork& net, int variable) {
  return query(net, Query{{variable}, {}});
}

}  // namespace cbn
