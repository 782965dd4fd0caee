#include "gridlight/collapse.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gridlight/units.hpp"

namespace gridlight::collapse {

namespace {

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

double wrap_angle(double deg) {
    double a = std::fmod(deg, 180.0);
    return a < 0.0 ? a + 180.0 : a;
}

} // namespace

std::map<std::string, double> detection_probabilities(const wave::AmplitudeField& field) {
    if (field.total_probability() >= 1e-9) {
        throw std::runtime_error("field not yet absorbed; probabilities not ready");
    }
    auto probs = field.sinks();
    double sum = 0.0;
    for (const auto& [label, mass] : probs) sum += mass;
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw std::runtime_error("sink masses do not sum to 1");
    }
    return probs;
}

CollapseEvent reboot_lottery(const std::map<std::string, double>& probabilities,
                             rng::ShotRng& rng, int entity, long tick) {
    double sum = 0.0;
    for (const auto& [label, p] : probabilities) {
        if (p < -1e-12) throw std::invalid_argument("negative outcome weight");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("lottery weights must sum to 1");
    }
    double u = rng.next_double() * sum;
    double acc = 0.0;
    const std::string* last = nullptr;
    for (const auto& [label, p] : probabilities) {
        acc += p;
        last = &label;
        if (u < acc) break;
    }
    CollapseEvent event;
    event.tick = tick;
    event.entity = entity;
    event.site = *last;
    event.outcome = *last;
    return event;
}

int sample_bin(const std::vector<double>& probabilities, rng::ShotRng& rng) {
    double sum = 0.0;
    for (double p : probabilities) sum += p;
    if (sum <= 0.0) throw std::invalid_argument("empty histogram");
    double u = rng.next_double() * sum;
    double acc = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        acc += probabilities[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probabilities.size()) - 1;
}

bool measure_polarization(wave::Photon& photon, double analyzer_degrees, rng::ShotRng& rng) {
    double c = std::cos(deg2rad(photon.polarization - analyzer_degrees));
    bool pass = rng.next_double() < c * c;
    if (pass) photon.polarization = wrap_angle(analyzer_degrees);
    return pass;
}

double measure_spin(const wave::Photon& photon, double /*axis_degrees*/, rng::ShotRng& rng) {
    bool up = rng.next_double() < photon.spin_up_weight;
    return up ? units::GridUnits::hbar : -units::GridUnits::hbar;
}

EntangledPair merge_entangled(grid::NodeId source_node, double lambda) {
    units::require_wavelength(lambda);
    EntangledPair pair;
    static std::atomic<int> next_id{1u << 20};
    pair.branch_a.id = next_id.fetch_add(1);
    pair.branch_b.id = next_id.fetch_add(1);
    pair.branch_a.lambda = lambda;
    pair.branch_b.lambda = lambda;
    pair.branch_a.birth_node = source_node;
    pair.branch_b.birth_node = source_node;
    return pair;
}

std::pair<bool, bool> resolve_entangled(EntangledPair& pair, BranchMeasurement first,
                                        BranchMeasurement second, rng::ShotRng& rng) {
    if (pair.resolved) throw std::logic_error("entangled pair already resolved");
    if (first.branch == second.branch || first.branch < 0 || first.branch > 1 ||
        second.branch < 0 || second.branch > 1) {
        throw std::invalid_argument("resolution needs the two distinct branches");
    }

    // The shared pool is maximally undetermined: the first analyzer
    // passes with probability 1/2 and fixes that branch's polarization.
    bool first_pass = rng.next_double() < 0.5;
    double first_pol = wrap_angle(first_pass ? first.analyzer_degrees
                                             : first.analyzer_degrees + 90.0);
    // The partner instantly takes the orthogonal definite state.
    double partner_pol = wrap_angle(first_pol + 90.0);

    wave::Photon& first_photon = first.branch == 0 ? pair.branch_a : pair.branch_b;
    wave::Photon& second_photon = second.branch == 0 ? pair.branch_a : pair.branch_b;
    first_photon.polarization = first_pol;
    second_photon.polarization = partner_pol;

    bool second_pass = measure_polarization(second_photon, second.analyzer_degrees, rng);

    pair.resolved = true;
    pair.resolution = {first.branch, first_pass};
    return {first_pass, second_pass};
}

} // namespace gridlight::collapse
