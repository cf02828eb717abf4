#pragma once

#include <cstdint>
#include <span>

#include "cbn/core.hpp"
#include "cbn/dataio.hpp"
#include "cbn/rng.hpp"

namespace cbn {

/// Recipe for one mixed dataset over a variable pair: m/2 cases manipulating
/// x (uniform over its states) with y observed, m/2 manipulating y with x
/// observed, and n cases with both passively observed. m must be even.
struct MixSpec {
  int x = 0;
  int y = 0;
  long long m = 0;
  long long n = 0;
  std::uint64_t seed = 0;
};

/// Ancestral (logic) sampling of one complete case. Manipulated variables
/// are fixed to their given states with incoming influence cut, exactly as
/// if sampling the surgically modified network; their cells are flagged
/// manipulated, everything else observed.
CaseRecord draw_case(const CausalNetwork& net, std::span<const Manipulation> manipulations,
                     Rng& rng);

/// Draws the manipulation state uniformly over the target's states, then
/// samples the rest of the case under that manipulation.
CaseRecord draw_manipulated_case(const CausalNetwork& net, int target, Rng& rng);

/// Generates the MixSpec composition and projects each full-network case
/// onto the two columns (x, y). Case i always uses the random stream
/// Rng::stream(seed, i), so the output is byte-identical no matter how
/// generation is scheduled.
Dataset generate_mix(const CausalNetwork& net, const MixSpec& spec);

}  // namespace cbn
