#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "gridlight/grid.hpp"

// Analytic and brute-force references used to validate simulator output.
// This module must stay independent of the wavefield and collapse
// engines; it may only consume topology descriptions.

namespace gridlight::oracle {

using Complex = std::complex<double>;

struct PathSumResult {
    Complex amplitude{0.0, 0.0};
    long path_count = 0;
    std::vector<grid::NodeId> dominant_path;  // source, knots, target
    double dominant_length = 0.0;             // optical length of the dominant path
};

/// Footnote-style two-way combination: P1 + P2 + 2*sqrt(P1*P2)*cos(phi),
/// clamped to [0, (sqrt(P1)+sqrt(P2))^2].
double two_path_probability(double p1, double p2, double phi);

/// Obstructed alternative: P1 + P2, no interference term.
double no_interference_probability(double p1, double p2);

/// Mach-Zehnder outcome table: clear -> {D1: 1, D2: 0};
/// obstructed path 2 -> {D1: 0.25, D2: 0.25, bomb: 0.5}.
std::map<std::string, double> mz_probabilities(bool bomb_on_path2);

/// Two-slit screen distribution. The screen spans bins*bin_width node
/// rows centered on the barrier midline at distance L; each node row is
/// evaluated with the two-path formula and rows are aggregated per bin.
std::vector<double> double_slit_pattern(double slit_separation, double screen_distance,
                                        double lambda, int bins, int bin_width);

/// Same geometry without the interference term (which-way / one slit
/// blocked). p1 and p2 are the per-slit weights.
std::vector<double> no_interference_pattern(double p1, double p2, int bins);

/// Brute-force phase sum over a family of monotone-forward paths through
/// the lattice. Paths are piecewise-linear with one free knot per column
/// where the medium changes (plus optional evenly spaced knot columns);
/// paths whose geometric length exceeds max_path_length are excluded,
/// which bounds the transverse excursion. Throws a resource error if the
/// family exceeds ~1e7 paths.
PathSumResult path_sum(const grid::Topology& topology, grid::NodeId source,
                       grid::NodeId target, double lambda, double max_path_length,
                       int knot_stride = 0);

/// Phase sum over single-bounce mirror paths: source -> (x, mirror_row)
/// -> target for every column x.
PathSumResult reflect_path_sum(const grid::Topology& topology, grid::NodeId source,
                               grid::NodeId target, int mirror_row, double lambda,
                               double max_path_length);

/// Fermat refraction angle, degrees. Throws on total internal reflection.
double snell_angle(double theta1_degrees, double n1, double n2);

/// cos^2 of the relative analyzer angle, degrees.
double malus(double delta_degrees);

/// Correlation E(a, b) of the sequential entangled-pair resolution
/// protocol, computed by closed-form enumeration of the two first-branch
/// outcomes. Equals -cos(2*(a-b)).
double entangled_correlation(double a_degrees, double b_degrees);

/// CHSH statistic |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
double chsh(double a, double a_prime, double b, double b_prime);

} // namespace gridlight::oracle
