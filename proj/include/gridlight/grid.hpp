#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gridlight::grid {

using Complex = std::complex<double>;

enum class TopologyKind { lattice2d, optical_graph };
enum class Stencil { four, eight };

enum class ElementKind {
    source,
    beam_splitter,
    mirror,
    phase_shifter,
    polarizer,
    detector,
    absorber,
    slit_mask,
    screen,
};

/// A node-attached or graph optical element. Non-terminating elements
/// carry a unitary scattering matrix over their ports; terminating ones
/// divert probability flux into a labeled sink.
struct OpticalElement {
    ElementKind kind = ElementKind::absorber;
    double angle = 0.0;   // phase in radians (phase_shifter) or axis in degrees (polarizer)
    std::string label;    // sink label for terminating elements and screens

    static OpticalElement source();
    static OpticalElement beam_splitter();
    static OpticalElement mirror();
    static OpticalElement phase_shifter(double phase_radians);
    static OpticalElement polarizer(double axis_degrees, std::string absorb_label);
    static OpticalElement detector(std::string label);
    static OpticalElement absorber(std::string label);
    static OpticalElement slit_mask(std::string label);
    static OpticalElement screen(std::string label);

    int input_ports() const;
    int output_ports() const;
    /// Detectors and absorbers terminate flux into their sink.
    bool terminating() const;
    /// Scattering matrix (outputs x inputs); only defined for
    /// source/beam_splitter/mirror/phase_shifter.
    std::vector<std::vector<Complex>> scattering() const;
};

/// Checks ||S v|| = ||v|| for `trials` random port vectors.
bool unitary_scattering(const OpticalElement& element, double tol = 1e-12,
                        int trials = 100, std::uint64_t seed = 7);

/// Inclusive rectangle in lattice coordinates.
struct Rect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool contains(int x, int y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
};

struct NodeId {
    std::uint32_t index = 0;
    auto operator<=>(const NodeId&) const = default;
};

class Topology {
  public:
    struct GraphEdge {
        std::uint32_t from_element = 0, from_port = 0;
        std::uint32_t to_element = 0, to_port = 0;
    };

    static Topology build_lattice(
        int width, int height,
        const std::vector<std::pair<Rect, double>>& media_regions = {},
        const std::vector<std::pair<Rect, OpticalElement>>& masks = {},
        Stencil stencil = Stencil::four);

    static Topology build_optical_graph(std::vector<OpticalElement> elements,
                                        std::vector<GraphEdge> edges);

    TopologyKind kind() const { return kind_; }
    Stencil stencil() const { return stencil_; }
    int width() const { return width_; }
    int height() const { return height_; }
    std::uint32_t node_count() const { return node_count_; }

    NodeId node_at(int x, int y) const;
    int x_of(NodeId node) const { return static_cast<int>(node.index) % width_; }
    int y_of(NodeId node) const { return static_cast<int>(node.index) / width_; }

    /// The only nodes from which `node` may receive amplitude in one tick.
    std::vector<NodeId> neighbors(NodeId node) const;

    /// Refractive index at the node; phase and group delay scale by it.
    double medium(NodeId node) const;
    double hop_delay(NodeId node) const { return medium(node); }

    const OpticalElement* element_at(NodeId node) const;

    // Optical-graph access.
    const std::vector<OpticalElement>& elements() const { return elements_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    std::uint32_t source_element() const { return source_element_; }
    /// edge ids feeding element's input ports, indexed by port.
    const std::vector<int>& in_edges(std::uint32_t element) const;
    /// edge ids leaving element's output ports, indexed by port.
    const std::vector<int>& out_edges(std::uint32_t element) const;

  private:
    void check_node(NodeId node) const;

    TopologyKind kind_ = TopologyKind::lattice2d;
    Stencil stencil_ = Stencil::four;
    int width_ = 0, height_ = 0;
    std::uint32_t node_count_ = 0;
    std::vector<double> medium_;
    std::unordered_map<std::uint32_t, OpticalElement> lattice_elements_;

    std::vector<OpticalElement> elements_;
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<int>> in_edges_;
    std::vector<std::vector<int>> out_edges_;
    std::uint32_t source_element_ = 0;
};

} // namespace gridlight::grid
