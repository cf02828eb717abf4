#include "cbn/sampler.hpp"

namespace cbn {

namespace {

CaseRecord draw_in_order(const CausalNetwork& net, std::span<const int> topo_order,
                         std::span<const Manipulation> manipulations, Rng& rng) {
  const NetworkStructure& s = net.structure;
  CaseRecord record;
  record.values.assign(s.num_variables(), 0);
  record.manipulated.assign(s.num_variables(), false);
  for (const Manipulation& m : manipulations) {
    if (m.variable < 0 || m.variable >= s.num_variables())
      throw Error("unknown variable in manipulation set");
    if (m.state < 0 || m.state >= s.arity(m.variable))
      throw Error("manipulated state out of range for '" + s.variable(m.variable).name + "'");
    record.values[m.variable] = m.state;
    record.manipulated[m.variable] = true;
  }
  for (int v : topo_order) {
    if (record.manipulated[v]) continue;  // incoming arcs are cut for this case
    const int j = joint_state_from_case(s, v, record.values);
    record.values[v] = rng.categorical(net.cpts[v][j]);
  }
  return record;
}

}  // namespace

CaseRecord draw_case(const CausalNetwork& net, std::span<const Manipulation> manipulations,
                     Rng& rng) {
  return draw_in_order(net, net.structure.topological_order(), manipulations, rng);
}

CaseRecord draw_manipulated_case(const CausalNetwork& net, int target, Rng& rng) {
  const NetworkStructure& s = net.structure;
  if (target < 0 || target >= s.num_variables()) throw Error("unknown manipulation target");
  const Manipulation m{target, rng.below(s.arity(target))};
  return draw_case(net, std::span<const Manipulation>(&m, 1), rng);
}

Dataset generate_mix(const CausalNetwork& net, const MixSpec& spec) {
  const NetworkStructure& s = net.structure;
  if (spec.x == spec.y) throw Error("mix requires two distinct variables");
  if (spec.x < 0 || spec.x >= s.num_variables() || spec.y < 0 || spec.y >= s.num_variables())
    throw Error("unknown variable in mix spec");
  if (spec.m < 0 || spec.n < 0) throw Error("case counts cannot be negative");
  if (spec.m % 2 != 0) throw Error("experimental case count m must be even");

  const auto topo = s.topological_order();
  Dataset dataset;
  dataset.variables = {s.variable(spec.x), s.variable(spec.y)};
  dataset.cases.reserve(static_cast<std::size_t>(spec.m + spec.n));

  const long long half = spec.m / 2;
  for (long long i = 0; i < spec.m + spec.n; ++i) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(i));
    CaseRecord full;
    if (i < half) {
      const Manipulation m{spec.x, rng.below(s.arity(spec.x))};
      full = draw_in_order(net, topo, std::span<const Manipulation>(&m, 1), rng);
    } else if (i < spec.m) {
      const Manipulation m{spec.y, rng.below(s.arity(spec.y))};
      full = draw_in_order(net, topo, std::span<const Manipulation>(&m, 1), rng);
    } else {
      full = draw_in_order(net, topo, {}, rng);
    }
    CaseRecord projected;
    projected.values = {full.values[spec.x], full.values[spec.y]};
    projected.manipulated = {full.manipulated[spec.x], full.manipulated[spec.y]};
    dataset.cases.push_back(std::move(projected));
  }
  return dataset;
}

}  // namespace cbn
