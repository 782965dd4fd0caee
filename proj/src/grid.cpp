#include "gridlight/grid.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "gridlight/rng.hpp"

namespace gridlight::grid {

namespace {
const Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
} // namespace

OpticalElement OpticalElement::source() { return {ElementKind::source}; }
OpticalElement OpticalElement::beam_splitter() { return {ElementKind::beam_splitter}; }
OpticalElement OpticalElement::mirror() { return {ElementKind::mirror}; }
OpticalElement OpticalElement::phase_shifter(double phase_radians) {
    return {ElementKind::phase_shifter, phase_radians};
}
OpticalElement OpticalElement::polarizer(double axis_degrees, std::string absorb_label) {
    return {ElementKind::polarizer, axis_degrees, std::move(absorb_label)};
}
OpticalElement OpticalElement::detector(std::string label) {
    return {ElementKind::detector, 0.0, std::move(label)};
}
OpticalElement OpticalElement::absorber(std::string label) {
    return {ElementKind::absorber, 0.0, std::move(label)};
}
OpticalElement OpticalElement::slit_mask(std::string label) {
    return {ElementKind::slit_mask, 0.0, std::move(label)};
}
OpticalElement OpticalElement::screen(std::string label) {
    return {ElementKind::screen, 0.0, std::move(label)};
}

int OpticalElement::input_ports() const {
    switch (kind) {
        case ElementKind::source: return 0;
        case ElementKind::beam_splitter: return 2;
        default: return 1;
    }
}

int OpticalElement::output_ports() const {
    switch (kind) {
        case ElementKind::source: return 1;
        case ElementKind::beam_splitter: return 2;
        case ElementKind::mirror:
        case ElementKind::phase_shifter:
        case ElementKind::polarizer: return 1;
        default: return 0; // detector, absorber, slit_mask, screen
    }
}

bool OpticalElement::terminating() const {
    return kind == ElementKind::detector || kind == ElementKind::absorber ||
           kind == ElementKind::slit_mask || kind == ElementKind::screen;
}

std::vector<std::vector<Complex>> OpticalElement::scattering() const {
    switch (kind) {
        case ElementKind::beam_splitter:
            // Symmetric convention: transmit 1/sqrt(2), reflect i/sqrt(2).
            return {{kInvSqrt2, kI * kInvSqrt2}, {kI * kInvSqrt2, kInvSqrt2}};
        case ElementKind::mirror:
            return {{kI}};
        case ElementKind::phase_shifter:
            return {{std::exp(kI * angle)}};
        case ElementKind::source:
            return {{1.0}};
        default:
            throw std::logic_error("element has no scattering matrix");
    }
}

bool unitary_scattering(const OpticalElement& element, double tol, int trials,
                        std::uint64_t seed) {
    auto s = element.scattering();
    const std::size_t n = s.size();
    if (n == 0 || s[0].size() != n) return false;
    rng::ShotRng gen(seed, 0);
    for (int t = 0; t < trials; ++t) {
        std::vector<Complex> v(n);
        double norm_in = 0.0;
        for (auto& c : v) {
            c = Complex(gen.next_double() * 2.0 - 1.0, gen.next_double() * 2.0 - 1.0);
            norm_in += std::norm(c);
        }
        double norm_out = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += s[i][j] * v[j];
            norm_out += std::norm(acc);
        }
        if (std::fabs(std::sqrt(norm_out) - std::sqrt(norm_in)) > tol * std::sqrt(norm_in)) {
            return false;
        }
    }
    return true;
}

Topology Topology::build_lattice(
    int width, int height,
    const std::vector<std::pair<Rect, double>>& media_regions,
    const std::vector<std::pair<Rect, OpticalElement>>& masks, Stencil stencil) {
    if (width < 4 || height < 4) {
        throw std::invalid_argument("lattice must be at least 4x4 nodes");
    }
    Topology t;
    t.kind_ = TopologyKind::lattice2d;
    t.stencil_ = stencil;
    t.width_ = width;
    t.height_ = height;
    t.node_count_ = static_cast<std::uint32_t>(width) * static_cast<std::uint32_t>(height);
    t.medium_.assign(t.node_count_, 1.0);

    auto check_rect = [&](const Rect& r) {
        if (r.x0 < 0 || r.y0 < 0 || r.x1 >= width || r.y1 >= height || r.x0 > r.x1 ||
            r.y0 > r.y1) {
            throw std::invalid_argument("region rectangle outside lattice bounds");
        }
    };

    // Media regions paint in order; later regions overwrite earlier ones.
    for (const auto& [rect, n] : media_regions) {
        check_rect(rect);
        if (n < 1.0) throw std::invalid_argument("medium index must be >= 1");
        for (int y = rect.y0; y <= rect.y1; ++y) {
            for (int x = rect.x0; x <= rect.x1; ++x) {
                t.medium_[static_cast<std::uint32_t>(y) * width + x] = n;
            }
        }
    }

    for (const auto& [rect, element] : masks) {
        check_rect(rect);
        for (int y = rect.y0; y <= rect.y1; ++y) {
            for (int x = rect.x0; x <= rect.x1; ++x) {
                std::uint32_t idx = static_cast<std::uint32_t>(y) * width + x;
                auto it = t.lattice_elements_.find(idx);
                if (it != t.lattice_elements_.end() &&
                    (it->second.kind != element.kind || it->second.label != element.label)) {
                    throw std::invalid_argument("overlapping contradictory element masks");
                }
                t.lattice_elements_[idx] = element;
            }
        }
    }
    return t;
}

Topology Topology::build_optical_graph(std::vector<OpticalElement> elements,
                                       std::vector<GraphEdge> edges) {
    Topology t;
    t.kind_ = TopologyKind::optical_graph;
    t.node_count_ = static_cast<std::uint32_t>(elements.size());
    t.width_ = static_cast<int>(elements.size());
    t.height_ = 1;
    t.elements_ = std::move(elements);
    t.edges_ = std::move(edges);

    int sources = 0;
    for (std::size_t i = 0; i < t.elements_.size(); ++i) {
        if (t.elements_[i].kind == ElementKind::source) {
            sources++;
            t.source_element_ = static_cast<std::uint32_t>(i);
        }
        t.in_edges_.emplace_back(t.elements_[i].input_ports(), -1);
        t.out_edges_.emplace_back(t.elements_[i].output_ports(), -1);
    }
    if (sources != 1) {
        throw std::invalid_argument("optical graph needs exactly one source");
    }

    for (std::size_t e = 0; e < t.edges_.size(); ++e) {
        const auto& edge = t.edges_[e];
        if (edge.from_element >= t.elements_.size() || edge.to_element >= t.elements_.size()) {
            throw std::invalid_argument("edge references unknown element");
        }
        auto& out = t.out_edges_[edge.from_element];
        auto& in = t.in_edges_[edge.to_element];
        if (edge.from_port >= out.size() || edge.to_port >= in.size()) {
            throw std::invalid_argument("edge references unknown port");
        }
        if (out[edge.from_port] != -1 || in[edge.to_port] != -1) {
            throw std::invalid_argument("port connected more than once");
        }
        out[edge.from_port] = static_cast<int>(e);
        in[edge.to_port] = static_cast<int>(e);
    }
    // Unconnected input ports are vacuum inputs (amplitude 0); output
    // ports must all land somewhere or flux leaks out of the ledger.
    for (std::size_t i = 0; i < t.elements_.size(); ++i) {
        for (int e : t.out_edges_[i]) {
            if (e < 0) throw std::invalid_argument("dangling output port");
        }
    }

    // Reject directed cycles: only terminating elements absorb flux, and
    // they have no output ports, so any cycle would circulate forever.
    std::vector<int> indegree(t.elements_.size(), 0);
    for (const auto& edge : t.edges_) indegree[edge.to_element]++;
    std::queue<std::uint32_t> ready;
    for (std::size_t i = 0; i < t.elements_.size(); ++i) {
        if (indegree[i] == 0) ready.push(static_cast<std::uint32_t>(i));
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        std::uint32_t i = ready.front();
        ready.pop();
        visited++;
        for (int e : t.out_edges_[i]) {
            if (--indegree[t.edges_[e].to_element] == 0) {
                ready.push(t.edges_[e].to_element);
            }
        }
    }
    if (visited != t.elements_.size()) {
        throw std::invalid_argument("optical graph has a cycle with no terminating element");
    }
    t.medium_.assign(t.node_count_, 1.0);
    return t;
}

NodeId Topology::node_at(int x, int y) const {
    if (kind_ != TopologyKind::lattice2d || x < 0 || y < 0 || x >= width_ || y >= height_) {
        throw std::domain_error("node coordinates outside lattice");
    }
    return {static_cast<std::uint32_t>(y) * static_cast<std::uint32_t>(width_) +
            static_cast<std::uint32_t>(x)};
}

void Topology::check_node(NodeId node) const {
    if (node.index >= node_count_) throw std::domain_error("invalid node id");
}

std::vector<NodeId> Topology::neighbors(NodeId node) const {
    check_node(node);
    std::vector<NodeId> result;
    if (kind_ == TopologyKind::lattice2d) {
        int x = x_of(node);
        int y = y_of(node);
        static constexpr int dx4[] = {1, -1, 0, 0};
        static constexpr int dy4[] = {0, 0, 1, -1};
        static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
        static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
        int n = stencil_ == Stencil::four ? 4 : 8;
        const int* dx = stencil_ == Stencil::four ? dx4 : dx8;
        const int* dy = stencil_ == Stencil::four ? dy4 : dy8;
        for (int k = 0; k < n; ++k) {
            int nx = x + dx[k];
            int ny = y + dy[k];
            if (nx >= 0 && ny >= 0 && nx < width_ && ny < height_) {
                result.push_back(node_at(nx, ny));
            }
        }
    } else {
        // Undirected channel view: upstream feeders first, then downstream.
        for (int e : in_edges_[node.index]) {
            if (e >= 0) result.push_back({edges_[e].from_element});
        }
        for (int e : out_edges_[node.index]) result.push_back({edges_[e].to_element});
    }
    return result;
}

double Topology::medium(NodeId node) const {
    check_node(node);
    return medium_[node.index];
}

const OpticalElement* Topology::element_at(NodeId node) const {
    check_node(node);
    if (kind_ == TopologyKind::lattice2d) {
        auto it = lattice_elements_.find(node.index);
        return it == lattice_elements_.end() ? nullptr : &it->second;
    }
    return &elements_[node.index];
}

const std::vector<int>& Topology::in_edges(std::uint32_t element) const {
    return in_edges_.at(element);
}

const std::vector<int>& Topology::out_edges(std::uint32_t element) const {
    return out_edges_.at(element);
}

} // namespace gridlight::grid
