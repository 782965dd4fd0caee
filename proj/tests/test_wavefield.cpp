#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "gridlight/grid.hpp"
#include "gridlight/wavefield.hpp"

using namespace gridlight;
using grid::OpticalElement;
using grid::Rect;
using grid::Topology;
using Edge = Topology::GraphEdge;

TEST_CASE("emission normalizes and validates") {
    auto t = Topology::build_lattice(32, 32);
    auto [photon, field] = wave::emit(t, t.node_at(16, 16), 8.0, 30.0,
                                      wave::Envelope::gaussian(3.0));
    CHECK(field.total_probability() == doctest::Approx(1.0));
    CHECK(photon.lambda == 8.0);
    CHECK(photon.polarization == 30.0);
    CHECK(photon.status == wave::PhotonStatus::spreading);
    CHECK(field.lambda == 8.0);

    CHECK_THROWS_AS(wave::emit(t, t.node_at(16, 16), 1.5, 0.0,
                               wave::Envelope::gaussian(3.0)),
                    std::domain_error);
    CHECK_THROWS_AS(wave::emit(t, t.node_at(16, 16), 8.0, 0.0,
                               wave::Envelope::gaussian(0.5)),
                    std::domain_error);
}

TEST_CASE("photon lifecycle transitions happen exactly once") {
    auto t = Topology::build_lattice(8, 8);
    auto [photon, field] = wave::emit(t, t.node_at(4, 4), 4.0, 0.0,
                                      wave::Envelope::gaussian(1.0));
    photon.collapse_at(t.node_at(2, 2), 7);
    CHECK(photon.status == wave::PhotonStatus::collapsed);
    CHECK(photon.event_tick == 7);
    CHECK_THROWS_AS(photon.collapse_at(t.node_at(1, 1), 8), std::logic_error);
    CHECK_THROWS_AS(photon.absorb_into("sink", 8), std::logic_error);
}

TEST_CASE("lattice step conserves processing exactly (reflective walls)") {
    auto t = Topology::build_lattice(24, 24);
    auto [photon, field] = wave::emit(t, t.node_at(12, 12), 4.0, 0.0,
                                      wave::Envelope::gaussian(2.0));
    for (int i = 0; i < 500; ++i) wave::step_lattice(field, t);
    CHECK(std::fabs(field.conserved_total() - 1.0) < 1e-10);
    CHECK(field.tick() == 500);
}

TEST_CASE("absorbing boundary moves mass into the boundary sink") {
    auto t = Topology::build_lattice(16, 16);
    auto [photon, field] = wave::emit(t, t.node_at(8, 8), 4.0, 0.0,
                                      wave::Envelope::gaussian(2.0));
    field.absorbing_boundary = true;
    for (int i = 0; i < 300; ++i) wave::step_lattice(field, t);
    // The Grover coin has a localized component, so part of the packet
    // never reaches the walls; the travelling part must be absorbed.
    CHECK(field.sinks().at("boundary") > 0.5);
    CHECK(std::fabs(field.conserved_total() - 1.0) < 1e-10);
}

TEST_CASE("front speed never exceeds one node per tick") {
    auto t = Topology::build_lattice(64, 64);
    wave::AmplitudeField field(t, 1);
    field.lambda = 8.0;
    field.amp(t.node_at(32, 32).index, 0) = 1.0;
    const int ticks = 20;
    for (int i = 0; i < ticks; ++i) wave::step_lattice(field, t);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            if (field.node_probability(t.node_at(x, y)) > 0.0) {
                CHECK(std::abs(x - 32) + std::abs(y - 32) <= ticks);
            }
        }
    }
}

TEST_CASE("propagation is linear in the field") {
    auto t = Topology::build_lattice(8, 8);
    wave::AmplitudeField f1(t, 1), f2(t, 2), combo(t, 3);
    f1.lambda = f2.lambda = combo.lambda = 4.0;
    const std::complex<double> alpha{0.3, -0.8}, beta{1.1, 0.25};
    for (std::size_t i = 0; i < f1.raw().size(); ++i) {
        f1.raw()[i] = {std::sin(0.1 * i), std::cos(0.2 * i)};
        f2.raw()[i] = {std::cos(0.3 * i), std::sin(0.05 * i)};
        combo.raw()[i] = alpha * f1.raw()[i] + beta * f2.raw()[i];
    }
    wave::step_lattice(f1, t);
    wave::step_lattice(f2, t);
    wave::step_lattice(combo, t);
    for (std::size_t i = 0; i < f1.raw().size(); ++i) {
        CHECK(std::abs(combo.raw()[i] - alpha * f1.raw()[i] - beta * f2.raw()[i]) < 1e-12);
    }
}

TEST_CASE("detector nodes drain into labeled sinks with first-arrival ticks") {
    std::vector<std::pair<Rect, OpticalElement>> masks = {
        {Rect{14, 0, 15, 15}, OpticalElement::detector("right")}};
    auto t = Topology::build_lattice(16, 16, {}, masks);
    auto [photon, field] = wave::emit(t, t.node_at(4, 8), 4.0, 0.0,
                                      wave::Envelope::gaussian(1.5));
    field.absorbing_boundary = true;
    for (int i = 0; i < 200; ++i) wave::step_lattice(field, t);
    CHECK(field.sinks().at("right") > 0.0);
    auto arrival = field.first_arrival("right");
    REQUIRE(arrival.has_value());
    CHECK(*arrival >= 1);  // the envelope tail is one hop from the column
    CHECK_FALSE(field.first_arrival("nope").has_value());
    CHECK(std::fabs(field.conserved_total() - 1.0) < 1e-10);
}

TEST_CASE("blocking diverts amplitude into an obstacle sink") {
    auto t = Topology::build_lattice(16, 16);
    auto [photon, field] = wave::emit(t, t.node_at(8, 8), 4.0, 0.0,
                                      wave::Envelope::gaussian(2.0));
    wave::block(field, {t.node_at(8, 8)}, "wall");
    CHECK(field.sinks().at("wall") > 0.0);
    for (int i = 0; i < 50; ++i) wave::step_lattice(field, t);
    CHECK(std::fabs(field.conserved_total() - 1.0) < 1e-10);
    CHECK(field.node_probability(t.node_at(8, 8)) == 0.0);
}

TEST_CASE("field-level polarizer implements Malus with repolarization") {
    auto t = Topology::build_lattice(8, 8);
    auto [photon, field] = wave::emit(t, t.node_at(4, 4), 4.0, 0.0,
                                      wave::Envelope::gaussian(1.0));
    wave::apply_polarizer(field, photon, 60.0, "pol");
    CHECK(field.total_probability() == doctest::Approx(0.25));  // cos^2(60)
    CHECK(field.sinks().at("pol") == doctest::Approx(0.75));
    CHECK(field.repolarize_to.value() == 60.0);
    CHECK(std::fabs(field.conserved_total() - 1.0) < 1e-12);
}

TEST_CASE("graph engine: Mach-Zehnder dark port cancels in amplitude") {
    std::vector<OpticalElement> elements = {
        OpticalElement::source(),        OpticalElement::beam_splitter(),
        OpticalElement::mirror(),        OpticalElement::mirror(),
        OpticalElement::beam_splitter(), OpticalElement::detector("D1"),
        OpticalElement::detector("D2"),
    };
    std::vector<Edge> edges = {
        {0, 0, 1, 0}, {1, 0, 2, 0}, {1, 1, 3, 0},
        {2, 0, 4, 0}, {3, 0, 4, 1}, {4, 1, 5, 0}, {4, 0, 6, 0},
    };
    auto t = Topology::build_optical_graph(elements, edges);
    auto [photon, field] = wave::emit_graph(t, 8.0, 0.0);
    CHECK(field.total_probability() == doctest::Approx(1.0));
    wave::run_graph_to_completion(field, t);
    CHECK(field.sinks().at("D1") == doctest::Approx(1.0));
    double d2 = field.sinks().count("D2") ? field.sinks().at("D2") : 0.0;
    CHECK(std::sqrt(d2) < 1e-12);
    CHECK(std::fabs(field.conserved_total() - 1.0) < 1e-12);
}

TEST_CASE("graph engine: vacuum input ports contribute zero amplitude") {
    std::vector<OpticalElement> elements = {
        OpticalElement::source(),
        OpticalElement::beam_splitter(),
        OpticalElement::detector("T"),
        OpticalElement::detector("R"),
    };
    std::vector<Edge> edges = {{0, 0, 1, 0}, {1, 0, 2, 0}, {1, 1, 3, 0}};
    auto t = Topology::build_optical_graph(elements, edges);
    auto [photon, field] = wave::emit_graph(t, 8.0, 0.0);
    wave::run_graph_to_completion(field, t);
    CHECK(field.sinks().at("T") == doctest::Approx(0.5));
    CHECK(field.sinks().at("R") == doctest::Approx(0.5));
}

TEST_CASE("phase shifter inserts a pure phase without losing mass") {
    std::vector<OpticalElement> elements = {
        OpticalElement::source(),
        OpticalElement::phase_shifter(1.0),
        OpticalElement::detector("D"),
    };
    std::vector<Edge> edges = {{0, 0, 1, 0}, {1, 0, 2, 0}};
    auto t = Topology::build_optical_graph(elements, edges);
    auto [photon, field] = wave::emit_graph(t, 8.0, 0.0);
    wave::run_graph_to_completion(field, t);
    CHECK(field.sinks().at("D") == doctest::Approx(1.0));
}

TEST_CASE("media slow the phase accumulation per hop") {
    // Same geometry, denser medium: the per-tick phase at each node is
    // 2*pi*n/lambda, so after one step amplitudes differ by the n ratio.
    auto vac = Topology::build_lattice(8, 8);
    auto dense = Topology::build_lattice(8, 8, {{Rect{0, 0, 7, 7}, 1.5}});
    wave::AmplitudeField f1(vac, 1), f2(dense, 2);
    f1.lambda = f2.lambda = 8.0;
    f1.amp(vac.node_at(4, 4).index, 0) = 1.0;
    f2.amp(dense.node_at(4, 4).index, 0) = 1.0;
    wave::step_lattice(f1, vac);
    wave::step_lattice(f2, dense);
    auto a1 = f1.amp(vac.node_at(5, 4).index, 0);
    auto a2 = f2.amp(dense.node_at(5, 4).index, 0);
    CHECK(std::abs(a1) == doctest::Approx(std::abs(a2)));
    CHECK(std::arg(a2 / a1) == doctest::Approx(2.0 * 3.14159265358979 * 0.5 / 8.0));
}

TEST_CASE("gaussian packets sit at the uncertainty floor") {
    auto t = Topology::build_lattice(128, 96);
    for (double sigma : {3.0, 5.0}) {
        auto [photon, field] = wave::emit(t, t.node_at(64, 48), 8.0, 0.0,
                                          wave::Envelope::gaussian(sigma));
        auto stats = wave::packet_stats(field);
        CHECK(stats.sigma_x == doctest::Approx(sigma).epsilon(0.02));
        CHECK(stats.sigma_x * stats.sigma_k == doctest::Approx(0.5).epsilon(0.02));
        CHECK(stats.centroid == doctest::Approx(64.0).epsilon(0.01));
    }
}
