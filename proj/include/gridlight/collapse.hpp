#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridlight/rng.hpp"
#include "gridlight/wavefield.hpp"

namespace gridlight::collapse {

/// One reboot-lottery result: the discrete detection event.
struct CollapseEvent {
    long tick = 0;
    std::string site;     // sink label or "node:x,y"
    int entity = 0;       // photon id
    std::string outcome;  // outcome label as sampled
};

/// Extract outcome probabilities from a fully absorbed field. Sink
/// masses are the probabilities; throws if spreading mass remains.
std::map<std::string, double> detection_probabilities(const wave::AmplitudeField& field);

/// Winner-takes-all sample over outcome weights. Weights must sum to
/// 1 within 1e-9; sampling itself renormalizes exactly.
CollapseEvent reboot_lottery(const std::map<std::string, double>& probabilities,
                             rng::ShotRng& rng, int entity = 0, long tick = 0);

/// Sample a bin index from a normalized histogram.
int sample_bin(const std::vector<double>& probabilities, rng::ShotRng& rng);

/// All-or-nothing Malus measurement. On pass the photon exits
/// repolarized to the analyzer axis.
bool measure_polarization(wave::Photon& photon, double analyzer_degrees, rng::ShotRng& rng);

/// Spin measurement on any axis: magnitude exactly hbar, sign sampled
/// from the photon's spin amplitude split. Each measurement is a fresh
/// sample; previous outcomes carry no memory.
double measure_spin(const wave::Photon& photon, double axis_degrees, rng::ShotRng& rng);

/// Two branch photons served by one merged instruction pool with
/// anti-correlated polarization instruction sets.
struct EntangledPair {
    wave::Photon branch_a;
    wave::Photon branch_b;
    bool resolved = false;
    std::optional<std::pair<int, bool>> resolution;  // (first branch, first outcome)

    /// Clockwise minus anti-clockwise instruction weight; zero while the
    /// pool is shared.
    double net_spin_content() const { return 0.0; }
};

EntangledPair merge_entangled(grid::NodeId source_node, double lambda);

struct BranchMeasurement {
    int branch = 0;  // 0 = A, 1 = B
    double analyzer_degrees = 0.0;
};

/// Sequential resolution: the first measurement collapses the shared
/// pool (pass probability 1/2) and instantly fixes the partner to the
/// orthogonal definite state; the second measurement is plain Malus
/// against that state. Returns (first outcome, second outcome) as
/// pass=true / absorbed=false.
std::pair<bool, bool> resolve_entangled(EntangledPair& pair, BranchMeasurement first,
                                        BranchMeasurement second, rng::ShotRng& rng);

} // namespace gridlight::collapse
