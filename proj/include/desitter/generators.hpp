#pragma once

#include "desitter/periodic_curve.hpp"

#include <cstdint>

namespace desitter {

/// Circle of radius R in the xy-plane, period 2 pi.
PeriodicCurve circle_curve(double radius, int samples);

/// Ellipse with semi-axes a, b in the xy-plane, period 2 pi.
PeriodicCurve ellipse_curve(double a, double b, int samples);

/// ((R + r cos qt) cos pt, (R + r cos qt) sin pt, r sin qt), period 2 pi.
/// (p, q) = (2, 3) is the trefoil.
PeriodicCurve torus_knot_curve(int p, int q, double major, double minor, int samples);

/// Trefoil knot: torus_knot_curve(2, 3, 2, 1, samples).
PeriodicCurve trefoil_curve(int samples);

/// (2,3) torus knot on a randomly drawn torus (R in [1.8, 2.4], r in [0.8, 1.1])
/// plus a seeded Fourier perturbation of modes 1..4 with amplitude ~ amplitude.
/// Deterministic in the seed.
PeriodicCurve perturbed_knot_curve(std::uint64_t seed, int samples, double amplitude = 0.06);

/// Trefoil pushed radially onto the sphere of given center and radius, period 2 pi.
PeriodicCurve spherical_knot_curve(const Eigen::Vector3d& center, double radius, int samples);

}  // namespace desitter
