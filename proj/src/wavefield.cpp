#include "gridlight/wavefield.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gridlight/units.hpp"

namespace gridlight::wave {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

std::atomic<int> g_next_photon_id{1};

// Direction order matches Topology::neighbors.
constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
constexpr int kOpp[8] = {1, 0, 3, 2, 7, 6, 5, 4};

double deg2rad(double deg) { return deg * kPi / 180.0; }

} // namespace

void Photon::collapse_at(grid::NodeId node, long tick) {
    if (status != PhotonStatus::spreading) {
        throw std::logic_error("photon already collapsed or absorbed");
    }
    status = PhotonStatus::collapsed;
    collapse_node = node;
    event_tick = tick;
}

void Photon::absorb_into(std::string sink, long tick) {
    if (status != PhotonStatus::spreading) {
        throw std::logic_error("photon already collapsed or absorbed");
    }
    status = PhotonStatus::absorbed;
    absorbed_sink = std::move(sink);
    event_tick = tick;
}

AmplitudeField::AmplitudeField(const grid::Topology& topology, int photon_id)
    : topo_(&topology), photon_id_(photon_id) {
    if (topology.kind() == grid::TopologyKind::lattice2d) {
        dirs_ = topology.stencil() == grid::Stencil::four ? 4 : 8;
        amps_.assign(static_cast<std::size_t>(topology.node_count()) * dirs_, 0.0);
    } else {
        dirs_ = 1;
        amps_.assign(topology.edges().size(), 0.0);
    }
}

double AmplitudeField::node_probability(grid::NodeId node) const {
    double p = 0.0;
    for (int d = 0; d < dirs_; ++d) p += std::norm(amps_[node.index * dirs_ + d]);
    return p;
}

double AmplitudeField::total_probability() const {
    double p = 0.0;
    for (const auto& a : amps_) p += std::norm(a);
    return p;
}

double AmplitudeField::conserved_total() const {
    double p = total_probability();
    for (const auto& [label, mass] : sinks_) p += mass;
    return p;
}

void AmplitudeField::normalize() {
    double p = total_probability();
    if (p <= 0.0) throw std::domain_error("cannot normalize an empty field");
    double scale = 1.0 / std::sqrt(p);
    for (auto& a : amps_) a *= scale;
}

void AmplitudeField::add_sink_mass(const std::string& label, double mass, long tick) {
    if (mass <= 0.0) return;
    sinks_[label] += mass;
    if (mass > 1e-15 && !first_arrival_.count(label)) first_arrival_[label] = tick;
}

std::optional<long> AmplitudeField::first_arrival(const std::string& label) const {
    auto it = first_arrival_.find(label);
    if (it == first_arrival_.end()) return std::nullopt;
    return it->second;
}

void AmplitudeField::block_nodes(const std::vector<grid::NodeId>& nodes,
                                 const std::string& sink) {
    block_sink_ = sink;
    for (auto n : nodes) blocked_.insert(n.index);
}

std::pair<Photon, AmplitudeField> emit(const grid::Topology& topology,
                                       grid::NodeId source_node, double lambda,
                                       double polarization, const Envelope& envelope) {
    if (topology.kind() != grid::TopologyKind::lattice2d) {
        throw std::invalid_argument("emit requires a lattice topology");
    }
    units::require_wavelength(lambda);
    if (envelope.kind == Envelope::Kind::gaussian && envelope.sigma < 1.0) {
        throw std::domain_error("gaussian envelope needs sigma >= 1 node");
    }
    if (source_node.index >= topology.node_count()) {
        throw std::domain_error("invalid source node");
    }

    Photon photon;
    photon.id = g_next_photon_id.fetch_add(1);
    photon.lambda = lambda;
    photon.polarization = polarization;
    photon.birth_node = source_node;

    AmplitudeField field(topology, photon.id);
    field.lambda = lambda;
    field.polarization = polarization;

    const int x0 = topology.x_of(source_node);
    const int y0 = topology.y_of(source_node);
    const double k0 = 2.0 * kPi / lambda;

    if (envelope.kind == Envelope::Kind::gaussian) {
        const double s2 = 4.0 * envelope.sigma * envelope.sigma;
        const int reach = static_cast<int>(std::ceil(envelope.sigma * 6.0));
        for (int y = std::max(0, y0 - reach); y <= std::min(topology.height() - 1, y0 + reach); ++y) {
            for (int x = std::max(0, x0 - reach); x <= std::min(topology.width() - 1, x0 + reach); ++x) {
                double r2 = static_cast<double>(x - x0) * (x - x0) +
                            static_cast<double>(y - y0) * (y - y0);
                Complex a = std::exp(-r2 / s2) * std::exp(kI * (k0 * x));
                field.amp(topology.node_at(x, y).index, 0) = a;
            }
        }
    } else {
        int half = envelope.extent / 2;
        for (int y = std::max(0, y0 - half); y <= std::min(topology.height() - 1, y0 + half); ++y) {
            field.amp(topology.node_at(x0, y).index, 0) = std::exp(kI * (k0 * x0));
        }
    }
    field.normalize();
    return {photon, field};
}

std::pair<Photon, AmplitudeField> emit_graph(const grid::Topology& topology,
                                             double lambda, double polarization) {
    if (topology.kind() != grid::TopologyKind::optical_graph) {
        throw std::invalid_argument("emit_graph requires an optical graph");
    }
    units::require_wavelength(lambda);
    Photon photon;
    photon.id = g_next_photon_id.fetch_add(1);
    photon.lambda = lambda;
    photon.polarization = polarization;
    photon.birth_node = grid::NodeId{topology.source_element()};

    AmplitudeField field(topology, photon.id);
    field.lambda = lambda;
    field.polarization = polarization;
    int out = topology.out_edges(topology.source_element()).at(0);
    field.raw()[out] = 1.0;
    return {photon, field};
}

void step_lattice(AmplitudeField& field, const grid::Topology& topology) {
    if (topology.kind() != grid::TopologyKind::lattice2d) {
        throw std::invalid_argument("step_lattice requires a lattice topology");
    }
    const int dirs = field.directions();
    const int w = topology.width();
    const int h = topology.height();
    const long tick = field.tick() + 1;
    std::vector<Complex> next(field.raw().size(), 0.0);

    // Read phase: coin + per-hop phase at the occupied node, then shift
    // into the write buffer. Each node only feeds its stencil neighbors.
    std::vector<Complex> v(dirs);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t node = static_cast<std::uint32_t>(y) * w + x;
            Complex sum = 0.0;
            for (int d = 0; d < dirs; ++d) sum += field.amp(node, d);
            if (sum == Complex{} ) {
                bool empty = true;
                for (int d = 0; d < dirs; ++d) {
                    if (field.amp(node, d) != Complex{}) { empty = false; break; }
                }
                if (empty) continue;
            }
            // Grover coin: out_d = (2/dirs) * sum - a_d.
            const double g = 2.0 / dirs;
            const double phase = 2.0 * kPi * topology.medium(grid::NodeId{node}) / field.lambda;
            const Complex rot = std::polar(1.0, phase);
            for (int d = 0; d < dirs; ++d) {
                v[d] = (g * sum - field.amp(node, d)) * rot;
            }
            for (int d = 0; d < dirs; ++d) {
                int nx = x + kDx[d];
                int ny = y + kDy[d];
                if (nx >= 0 && ny >= 0 && nx < w && ny < h) {
                    next[(static_cast<std::uint32_t>(ny) * w + nx) * dirs + d] += v[d];
                } else if (field.absorbing_boundary) {
                    field.add_sink_mass("boundary", std::norm(v[d]), tick);
                } else {
                    next[node * dirs + kOpp[d]] += v[d];
                }
            }
        }
    }
    field.raw().swap(next);
    field.advance_tick();

    // Element and obstruction actions at the newly occupied nodes.
    auto drain_node = [&](std::uint32_t node, const std::string& label, bool screen) {
        double mass = 0.0;
        for (int d = 0; d < dirs; ++d) {
            mass += std::norm(field.amp(node, d));
            field.amp(node, d) = 0.0;
        }
        if (mass > 0.0) {
            field.add_sink_mass(label, mass, tick);
            if (screen) field.screen_flux()[label][node] += mass;
        }
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t node = static_cast<std::uint32_t>(y) * w + x;
            if (field.blocked().count(node)) {
                drain_node(node, field.block_sink(), false);
                continue;
            }
            const auto* element = topology.element_at(grid::NodeId{node});
            if (!element) continue;
            switch (element->kind) {
                case grid::ElementKind::slit_mask:
                case grid::ElementKind::absorber:
                case grid::ElementKind::detector:
                    drain_node(node, element->label, false);
                    break;
                case grid::ElementKind::screen:
                    drain_node(node, element->label, true);
                    break;
                case grid::ElementKind::phase_shifter: {
                    const Complex rot = std::polar(1.0, element->angle);
                    for (int d = 0; d < dirs; ++d) field.amp(node, d) *= rot;
                    break;
                }
                case grid::ElementKind::polarizer: {
                    double delta = deg2rad(field.polarization - element->angle);
                    double c = std::cos(delta);
                    double mass = field.node_probability(grid::NodeId{node});
                    for (int d = 0; d < dirs; ++d) field.amp(node, d) *= c;
                    field.add_sink_mass(element->label.empty() ? "polarizer" : element->label,
                                        mass * (1.0 - c * c), tick);
                    field.repolarize_to = element->angle;
                    break;
                }
                default:
                    break;
            }
        }
    }
}

void step_graph(AmplitudeField& field, const grid::Topology& topology) {
    if (topology.kind() != grid::TopologyKind::optical_graph) {
        throw std::invalid_argument("step_graph requires an optical graph");
    }
    const long tick = field.tick() + 1;
    std::vector<Complex> next(field.raw().size(), 0.0);
    const auto& elements = topology.elements();

    for (std::uint32_t i = 0; i < elements.size(); ++i) {
        const auto& element = elements[i];
        const auto& in = topology.in_edges(i);
        if (in.empty()) continue;
        std::vector<Complex> input(in.size());
        bool any = false;
        for (std::size_t p = 0; p < in.size(); ++p) {
            // An unconnected input port is a vacuum input.
            input[p] = in[p] >= 0 ? field.raw()[in[p]] : Complex{};
            if (input[p] != Complex{}) any = true;
        }
        if (!any) continue;

        if (element.terminating()) {
            double mass = 0.0;
            for (const auto& a : input) mass += std::norm(a);
            field.add_sink_mass(element.label, mass, tick);
            continue;
        }
        if (element.kind == grid::ElementKind::polarizer) {
            double delta = deg2rad(field.polarization - element.angle);
            double c = std::cos(delta);
            double mass = std::norm(input[0]);
            next[topology.out_edges(i)[0]] += input[0] * c;
            field.add_sink_mass(element.label.empty() ? "polarizer" : element.label,
                                mass * (1.0 - c * c), tick);
            field.repolarize_to = element.angle;
            continue;
        }
        auto s = element.scattering();
        const auto& out = topology.out_edges(i);
        for (std::size_t r = 0; r < out.size(); ++r) {
            Complex acc = 0.0;
            for (std::size_t cidx = 0; cidx < in.size(); ++cidx) acc += s[r][cidx] * input[cidx];
            next[out[r]] += acc;
        }
    }
    field.raw().swap(next);
    field.advance_tick();
}

void run_graph_to_completion(AmplitudeField& field, const grid::Topology& topology,
                             double eps) {
    const long limit = static_cast<long>(topology.elements().size()) +
                       static_cast<long>(topology.edges().size()) + 16;
    for (long t = 0; t < limit; ++t) {
        if (field.total_probability() < eps) return;
        step_graph(field, topology);
    }
    if (field.total_probability() >= eps) {
        throw std::runtime_error("graph field failed to drain into sinks");
    }
}

void apply_polarizer(AmplitudeField& field, const Photon& photon, double axis_degrees,
                     const std::string& absorb_label) {
    if (photon.status != PhotonStatus::spreading) {
        throw std::logic_error("polarizer applies to a spreading photon");
    }
    double delta = deg2rad(photon.polarization - axis_degrees);
    double c = std::cos(delta);
    double mass = field.total_probability();
    for (auto& a : field.raw()) a *= c;
    field.add_sink_mass(absorb_label, mass * (1.0 - c * c), field.tick());
    field.repolarize_to = axis_degrees;
}

void block(AmplitudeField& field, const std::vector<grid::NodeId>& nodes,
           const std::string& sink) {
    field.block_nodes(nodes, sink);
    // Amplitude already sitting on an obstructed node is diverted now.
    const int dirs = field.directions();
    for (auto n : nodes) {
        double mass = 0.0;
        for (int d = 0; d < dirs; ++d) {
            mass += std::norm(field.amp(n.index, d));
            field.amp(n.index, d) = 0.0;
        }
        field.add_sink_mass(sink, mass, field.tick());
    }
}

PacketStats packet_stats(const AmplitudeField& field) {
    const auto& topology = field.topology();
    if (topology.kind() != grid::TopologyKind::lattice2d) {
        throw std::invalid_argument("packet_stats requires a lattice field");
    }
    const int w = topology.width();
    const int h = topology.height();
    const int dirs = field.directions();

    // Position spread from the x-marginal of |psi|^2.
    double total = 0.0;
    double mx = 0.0;
    double mx2 = 0.0;
    std::vector<Complex> signal(w, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t node = static_cast<std::uint32_t>(y) * w + x;
            double p = 0.0;
            for (int d = 0; d < dirs; ++d) {
                p += std::norm(field.amp(node, d));
                signal[x] += field.amp(node, d);
            }
            total += p;
            mx += p * x;
            mx2 += p * static_cast<double>(x) * x;
        }
    }
    if (total <= 0.0) throw std::domain_error("packet_stats on an empty field");
    mx /= total;
    mx2 /= total;

    PacketStats stats;
    stats.centroid = mx;
    stats.sigma_x = std::sqrt(std::max(0.0, mx2 - mx * mx));

    // Wavenumber spread from a dense DFT of the column-summed amplitude.
    const int m = 8192;
    double ptot = 0.0;
    double mk = 0.0;
    double mk2 = 0.0;
    for (int j = 0; j < m; ++j) {
        double k = -kPi + 2.0 * kPi * j / m;
        Complex f = 0.0;
        for (int x = 0; x < w; ++x) {
            if (signal[x] != Complex{}) f += signal[x] * std::polar(1.0, -k * x);
        }
        double p = std::norm(f);
        ptot += p;
        mk += p * k;
        mk2 += p * k * k;
    }
    if (ptot > 0.0) {
        mk /= ptot;
        mk2 /= ptot;
        stats.sigma_k = std::sqrt(std::max(0.0, mk2 - mk * mk));
    }
    return stats;
}

} // namespace gridlight::wave
