#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gridlight/oracle.hpp"

using namespace gridlight;
using grid::Rect;
using grid::Topology;

constexpr double kPi = std::numbers::pi;

TEST_CASE("two-path combination formula") {
    CHECK(oracle::two_path_probability(0.5, 0.5, 0.0) == doctest::Approx(2.0));
    CHECK(oracle::two_path_probability(0.5, 0.5, kPi) == doctest::Approx(0.0));
    CHECK(oracle::two_path_probability(0.5, 0.5, kPi / 2.0) == doctest::Approx(1.0));
    CHECK(oracle::two_path_probability(0.25, 0.0, 1.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(oracle::two_path_probability(-0.1, 0.5, 0.0), std::domain_error);
    CHECK(oracle::no_interference_probability(0.3, 0.4) == doctest::Approx(0.7));
    CHECK_THROWS_AS(oracle::no_interference_probability(0.8, 0.8), std::domain_error);
}

TEST_CASE("Mach-Zehnder outcome tables") {
    auto clear = oracle::mz_probabilities(false);
    CHECK(clear.at("D1") == 1.0);
    CHECK(clear.at("D2") == 0.0);
    auto bomb = oracle::mz_probabilities(true);
    CHECK(bomb.at("D1") == 0.25);
    CHECK(bomb.at("D2") == 0.25);
    CHECK(bomb.at("bomb") == 0.5);
}

TEST_CASE("double-slit pattern is normalized, symmetric, centrally peaked") {
    auto p = oracle::double_slit_pattern(80.0, 800.0, 8.0, 25, 16);
    REQUIRE(p.size() == 25);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
    for (int b = 0; b < 12; ++b) CHECK(p[b] == doctest::Approx(p[24 - b]).epsilon(1e-9));
    // All fringe peaks have equal height; the midline bin must be one of
    // the local maxima.
    CHECK(p[12] > p[11]);
    CHECK(p[12] > p[13]);
    // Fringes: some bins well below the uniform level.
    CHECK(*std::min_element(p.begin(), p.end()) < 0.5 / 25.0);
    CHECK_THROWS_AS(oracle::double_slit_pattern(80.0, 10.0, 8.0, 25, 16),
                    std::domain_error);
}

TEST_CASE("no-interference pattern is flat") {
    auto p = oracle::no_interference_pattern(0.5, 0.5, 10);
    for (double b : p) CHECK(b == doctest::Approx(0.1));
    CHECK_THROWS_AS(oracle::no_interference_pattern(0.0, 0.0, 10), std::domain_error);
}

TEST_CASE("free-lattice path sum: dominant path is straight") {
    auto t = Topology::build_lattice(128, 64);
    auto src = t.node_at(4, 20);
    auto dst = t.node_at(104, 44);
    double straight = std::hypot(100.0, 24.0);
    auto sum = oracle::path_sum(t, src, dst, 8.0, straight + 6.0, 25);
    REQUIRE(sum.path_count > 0);
    CHECK(sum.dominant_length == doctest::Approx(straight).epsilon(0.01));
    for (std::size_t i = 1; i + 1 < sum.dominant_path.size(); ++i) {
        auto node = sum.dominant_path[i];
        double line_y = 20.0 + 24.0 * (t.x_of(node) - 4.0) / 100.0;
        CHECK(std::fabs(t.y_of(node) - line_y) <= 1.0);
    }
}

TEST_CASE("two-media path sum bends per Snell") {
    const int half = 200;
    const int width = 10 + 2 * half + 6;
    auto t = Topology::build_lattice(width, 320,
                                     {{Rect{10 + half, 0, width - 1, 319}, 1.5}});
    auto src = t.node_at(10, 20);
    double cross_y = 20.0 + half * std::tan(30.0 * kPi / 180.0);
    double theta2 = oracle::snell_angle(30.0, 1.0, 1.5);
    int target_y = static_cast<int>(std::lround(cross_y + half * std::tan(theta2 * kPi / 180.0)));
    auto dst = t.node_at(10 + 2 * half, target_y);

    double straight = std::hypot(2.0 * half, target_y - 20.0);
    auto sum = oracle::path_sum(t, src, dst, 8.0, straight + 60.0);
    REQUIRE(sum.dominant_path.size() == 3);
    auto knot = sum.dominant_path[1];
    double t1 = std::atan2(t.y_of(knot) - 20.0, half) * 180.0 / kPi;
    double t2 = std::atan2(target_y - t.y_of(knot), half) * 180.0 / kPi;
    CHECK(std::fabs(t2 - oracle::snell_angle(t1, 1.0, 1.5)) <= 1.0);
    CHECK(std::fabs(t2 - 19.47) <= 1.0);
}

TEST_CASE("path enumeration is capped") {
    auto t = Topology::build_lattice(256, 100);
    CHECK_THROWS_AS(
        oracle::path_sum(t, t.node_at(0, 50), t.node_at(255, 50), 8.0, 1e9, 10),
        std::runtime_error);
}

TEST_CASE("mirror path sum: specular bounce dominates") {
    auto t = Topology::build_lattice(200, 100);
    auto sum = oracle::reflect_path_sum(t, t.node_at(20, 80), t.node_at(180, 80), 10,
                                        8.0, 400.0);
    REQUIRE(sum.dominant_path.size() == 3);
    CHECK(t.x_of(sum.dominant_path[1]) == 100);  // midpoint by symmetry
    CHECK(sum.path_count == 200);
}

TEST_CASE("Snell angle and total internal reflection") {
    CHECK(oracle::snell_angle(30.0, 1.0, 1.5) == doctest::Approx(19.4712).epsilon(1e-4));
    CHECK(oracle::snell_angle(0.0, 1.0, 1.5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(oracle::snell_angle(80.0, 1.5, 1.0), std::domain_error);
}

TEST_CASE("Malus law values") {
    CHECK(oracle::malus(0.0) == doctest::Approx(1.0));
    CHECK(oracle::malus(30.0) == doctest::Approx(0.75));
    CHECK(oracle::malus(45.0) == doctest::Approx(0.5));
    CHECK(oracle::malus(60.0) == doctest::Approx(0.25));
    CHECK(oracle::malus(90.0) == doctest::Approx(0.0));
}

TEST_CASE("entangled correlation equals -cos(2 delta)") {
    for (double a : {0.0, 17.0, 45.0}) {
        for (double b : {0.0, 22.5, 60.0, 90.0}) {
            CHECK(oracle::entangled_correlation(a, b) ==
                  doctest::Approx(-std::cos(2.0 * (a - b) * kPi / 180.0)).epsilon(1e-12));
        }
    }
    CHECK(oracle::entangled_correlation(33.0, 33.0) == doctest::Approx(-1.0));
}

TEST_CASE("CHSH at the canonical angles reaches 2*sqrt(2)") {
    CHECK(oracle::chsh(0.0, 45.0, 22.5, 67.5) ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    // Same-basis settings stay at the classical bound.
    CHECK(oracle::chsh(0.0, 90.0, 0.0, 90.0) <= 2.0 + 1e-12);
}
