#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gridlight/grid.hpp"

namespace gridlight::wave {

using Complex = grid::Complex;

enum class PhotonStatus { spreading, collapsed, absorbed };

/// An entity program: wavelength, polarization plane and lifecycle.
struct Photon {
    int id = 0;
    double lambda = 2.0;         // nodes, >= 2
    double polarization = 0.0;   // degrees in [0, 180)
    PhotonStatus status = PhotonStatus::spreading;
    grid::NodeId birth_node{};
    long birth_tick = 0;

    grid::NodeId collapse_node{};
    std::string absorbed_sink;
    long event_tick = 0;
    double spin_up_weight = 0.5;

    void collapse_at(grid::NodeId node, long tick);
    void absorb_into(std::string sink, long tick);
};

struct Envelope {
    enum class Kind { plane_segment, gaussian } kind = Kind::gaussian;
    double sigma = 4.0;  // gaussian width, nodes
    int extent = 1;      // plane segment height, nodes
    static Envelope gaussian(double sigma) { return {Kind::gaussian, sigma, 0}; }
    static Envelope plane_segment(int extent) { return {Kind::plane_segment, 0.0, extent}; }
};

struct PacketStats {
    double sigma_x = 0.0;
    double sigma_k = 0.0;
    double centroid = 0.0;
};

/// Per-entity amplitude map plus sink ledger. Lattice fields store one
/// complex amplitude per node and stencil direction; graph fields store
/// one per edge.
class AmplitudeField {
  public:
    AmplitudeField() = default;
    AmplitudeField(const grid::Topology& topology, int photon_id);

    const grid::Topology& topology() const { return *topo_; }
    int photon_id() const { return photon_id_; }
    long tick() const { return tick_; }
    int directions() const { return dirs_; }

    Complex& amp(std::uint32_t node, int dir) { return amps_[node * dirs_ + dir]; }
    Complex amp(std::uint32_t node, int dir) const { return amps_[node * dirs_ + dir]; }
    std::vector<Complex>& raw() { return amps_; }
    const std::vector<Complex>& raw() const { return amps_; }

    /// |psi|^2 at a node, summed over stencil directions.
    double node_probability(grid::NodeId node) const;
    /// Residual spreading mass, excluding sinks.
    double total_probability() const;
    /// Residual plus every sink; the conserved "processing" total.
    double conserved_total() const;

    void normalize();

    std::map<std::string, double>& sinks() { return sinks_; }
    const std::map<std::string, double>& sinks() const { return sinks_; }
    void add_sink_mass(const std::string& label, double mass, long tick);
    /// First tick at which a sink received mass above 1e-15, if any.
    std::optional<long> first_arrival(const std::string& label) const;

    /// Per-node screen flux, keyed by screen label.
    const std::map<std::string, std::unordered_map<std::uint32_t, double>>&
    screen_flux() const { return screen_flux_; }
    std::map<std::string, std::unordered_map<std::uint32_t, double>>&
    screen_flux() { return screen_flux_; }

    /// Field-level obstruction: amplitude reaching these nodes is
    /// diverted into the given sink each tick.
    void block_nodes(const std::vector<grid::NodeId>& nodes, const std::string& sink);
    const std::unordered_set<std::uint32_t>& blocked() const { return blocked_; }
    const std::string& block_sink() const { return block_sink_; }

    bool absorbing_boundary = false;
    /// Polarizer pass branches are repolarized to the last axis crossed.
    std::optional<double> repolarize_to;
    double lambda = 8.0;        // copied from the photon at emission
    double polarization = 0.0;  // degrees, used by lattice polarizer nodes

    void advance_tick() { ++tick_; }

  private:
    const grid::Topology* topo_ = nullptr;
    int photon_id_ = 0;
    int dirs_ = 4;
    long tick_ = 0;
    std::vector<Complex> amps_;
    std::map<std::string, double> sinks_;
    std::map<std::string, long> first_arrival_;
    std::map<std::string, std::unordered_map<std::uint32_t, double>> screen_flux_;
    std::unordered_set<std::uint32_t> blocked_;
    std::string block_sink_ = "obstacle";
};

std::pair<Photon, AmplitudeField> emit(const grid::Topology& topology,
                                       grid::NodeId source_node, double lambda,
                                       double polarization, const Envelope& envelope);

/// Emit on an optical graph: unit amplitude on the source output edge.
std::pair<Photon, AmplitudeField> emit_graph(const grid::Topology& topology,
                                             double lambda, double polarization);

/// One tick of the lattice engine: local unitary coin + neighbor shift
/// with per-hop phase 2*pi*n/lambda, then element and obstruction actions.
void step_lattice(AmplitudeField& field, const grid::Topology& topology);

/// One tick of the graph engine: every element scatters its input-edge
/// amplitudes one hop downstream.
void step_graph(AmplitudeField& field, const grid::Topology& topology);

/// Run the graph engine until residual mass is below eps.
void run_graph_to_completion(AmplitudeField& field, const grid::Topology& topology,
                             double eps = 1e-15);

/// Malus projection at field level: pass branch scaled by cos(delta),
/// the sin^2(delta) share diverted to the polarizer's absorb sink.
void apply_polarizer(AmplitudeField& field, const Photon& photon, double axis_degrees,
                     const std::string& absorb_label = "polarizer");

void block(AmplitudeField& field, const std::vector<grid::NodeId>& nodes,
           const std::string& sink = "obstacle");

/// Position spread from |psi|^2 along x; wavenumber spread from the
/// discrete Fourier power spectrum of the column-summed amplitude.
PacketStats packet_stats(const AmplitudeField& field);

} // namespace gridlight::wave
