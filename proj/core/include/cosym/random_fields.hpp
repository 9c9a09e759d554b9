#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "cosym/variational.hpp"

namespace cosym {

using Rng = std::mt19937_64;

// Truncated Fourier series with modes |k| <= max_mode per axis and
// coefficients decaying like 1/(1 + |k|^2), rescaled so that the grid sup
// equals amplitude. On a twisted grid the series depends on t only, which
// keeps it single-valued across the seam; on flat grids all three axes vary.
ScalarField random_smooth_field(const GridPtr& grid, Rng& rng, double amplitude, int max_mode = 3);

// Sum over n of b(t + n) psi(L^{-n} x) with a Gaussian bump b and a smooth
// torus function psi. Single-valued on the twisted quotient and varying in
// every direction. Only the first few terms are resolvable, so the bump width
// is kept small.
ScalarField seam_bump_field(const GridPtr& grid, Rng& rng, double amplitude, double width = 0.4,
                            int torus_mode = 1);

// Independent value on each L-orbit of the torus grid, constant in t, so that
// its derivative along the fiber vanishes exactly.
ScalarField orbit_constant_field(const GridPtr& grid, Rng& rng, double amplitude);

// Symmetric (0,2) field sum c_ab e^a e^b over a coframe with random smooth
// coefficients c_ab of sup at most amplitude.
TensorField random_symmetric_field(const GridPtr& grid, const std::array<TensorField, 3>& coframe,
                                   Rng& rng, double amplitude, int max_mode = 3);

// Coordinate coframe (dt, dx, dy).
std::array<TensorField, 3> coordinate_coframe(const GridPtr& grid);
// (alpha, v+ flat, v- flat) of a critical frame. Products of two flats are
// single-valued for either sign of lambda; mixed products with alpha need
// lambda > 0.
std::array<TensorField, 3> critical_coframe(const AlmostCosymplecticStructure& s,
                                            const CriticalFrame& frame);

Deformation random_deformation(const GridPtr& grid, Rng& rng, double amplitude, int max_mode = 3);

}  // namespace cosym
