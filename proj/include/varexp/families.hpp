#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "varexp/atoms.hpp"
#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/mixed.hpp"

namespace varexp {

using Rng = std::mt19937_64;

/// Independent deterministic sub-stream per (seed, label): suites pull
/// their own generator so reordering one suite never shifts another.
Rng family_rng(std::uint64_t seed, const std::string& label);

/// 3..8 half-open blocks with heights in [-2, 2], all inside |x| <= A/2.
GridFunction random_step(const Grid& g, Rng& rng);

/// 1..4 Gaussians, centres in [-A/4, A/4], widths in [0.2, 1.5], plus an
/// optional cosine modulation; decays well below the box-edge budget.
GridFunction random_gaussian_mix(const Grid& g, Rng& rng);

/// Fixed 10-function panel (index 0..9): Gaussians of several widths, a
/// modulated pair, a compact bump, a two-bump sum, a step, odd and
/// high-frequency entries.  Every member vanishes beyond |x| = 1.5 to
/// machine precision, so the panel serves the small decomposition box
/// and the default box alike.
GridFunction standard_function(const Grid& g, int index);

/// Smooth exponent with values in [lo, hi]: base level plus 1..3 bumps.
Exponent random_smooth_exponent(const Grid& g, Rng& rng, double lo, double hi);

/// Two-piece exponent with a jump at a random split inside |x| < A/2.
Exponent random_twopiece_exponent(const Grid& g, Rng& rng, double lo, double hi);

/// Fixed-count coefficient draw at level j: one cube (kind 0) or a
/// 17-cube cluster (kind 1) at a uniform offset inside the level box,
/// standard normal coefficients.  A count growing with the level would
/// dilute transfer ratios like count^{-(1/p0-1/p1)}.
CoeffLevel random_coeff_level(const Grid& g, Rng& rng, int j, int kind);

/// One alternating draw per level 0..Jmax.
CoeffField random_coeff_field(const Grid& g, int Jmax, Rng& rng);

/// `count` Gaussian mixes scaled by 2^{-0.4 nu}.
FunctionSequence random_sequence(const Grid& g, int count, Rng& rng);

}  // namespace varexp
