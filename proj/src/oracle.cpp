#include "gridlight/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gridlight::oracle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long kEnumerationLimit = 10'000'000;

double deg2rad(double deg) { return deg * kPi / 180.0; }

struct Point {
    double x, y;
};

double segment_geometric_length(const Point& a, const Point& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

// Optical length of a straight segment, sampling the medium once per
// unit x step along the line.
double segment_optical_length(const grid::Topology& topo, const Point& a, const Point& b) {
    int x0 = static_cast<int>(std::lround(a.x));
    int x1 = static_cast<int>(std::lround(b.x));
    if (x1 <= x0) return segment_geometric_length(a, b) * 1.0;
    double slope = (b.y - a.y) / (b.x - a.x);
    double step = std::sqrt(1.0 + slope * slope);
    double total = 0.0;
    for (int x = x0; x < x1; ++x) {
        double ymid = a.y + slope * (x + 0.5 - a.x);
        int yi = std::clamp(static_cast<int>(std::lround(ymid)), 0, topo.height() - 1);
        int xi = std::clamp(x, 0, topo.width() - 1);
        total += step * topo.medium(topo.node_at(xi, yi));
    }
    return total;
}

} // namespace

double two_path_probability(double p1, double p2, double phi) {
    if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0) {
        throw std::domain_error("path probabilities must lie in [0, 1]");
    }
    double p = p1 + p2 + 2.0 * std::sqrt(p1 * p2) * std::cos(phi);
    double s = std::sqrt(p1) + std::sqrt(p2);
    return std::clamp(p, 0.0, s * s);
}

double no_interference_probability(double p1, double p2) {
    if (p1 < 0.0 || p2 < 0.0 || p1 + p2 > 1.0 + 1e-12) {
        throw std::domain_error("probabilities must be non-negative and sum to <= 1");
    }
    return p1 + p2;
}

std::map<std::string, double> mz_probabilities(bool bomb_on_path2) {
    if (bomb_on_path2) {
        return {{"D1", 0.25}, {"D2", 0.25}, {"bomb", 0.5}};
    }
    return {{"D1", 1.0}, {"D2", 0.0}};
}

std::vector<double> double_slit_pattern(double slit_separation, double screen_distance,
                                        double lambda, int bins, int bin_width) {
    if (slit_separation <= 0.0 || screen_distance <= 0.0 || lambda < 2.0 || bins < 2 ||
        bin_width < 1) {
        throw std::domain_error("degenerate double-slit geometry");
    }
    if (screen_distance < slit_separation) {
        throw std::domain_error("screen must be in the far field");
    }
    const int n = bins * bin_width;
    std::vector<double> pattern(bins, 0.0);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        double y = j - (n - 1) / 2.0;
        double r1 = std::hypot(screen_distance, y - slit_separation / 2.0);
        double r2 = std::hypot(screen_distance, y + slit_separation / 2.0);
        double phi = 2.0 * kPi * (r1 - r2) / lambda;
        double p = two_path_probability(0.5, 0.5, phi);
        pattern[j / bin_width] += p;
        total += p;
    }
    for (auto& p : pattern) p /= total;
    return pattern;
}

std::vector<double> no_interference_pattern(double p1, double p2, int bins) {
    double mass = no_interference_probability(p1, p2);
    if (bins < 2) throw std::domain_error("need at least two bins");
    if (mass <= 0.0) throw std::domain_error("no transmitted mass");
    // Per-slit envelopes are flat over the modeled angular span, so the
    // incoherent sum is uniform across bins.
    return std::vector<double>(bins, 1.0 / bins);
}

PathSumResult path_sum(const grid::Topology& topology, grid::NodeId source,
                       grid::NodeId target, double lambda, double max_path_length,
                       int knot_stride) {
    if (topology.kind() != grid::TopologyKind::lattice2d) {
        throw std::invalid_argument("path_sum requires a lattice topology");
    }
    const int sx = topology.x_of(source);
    const int sy = topology.y_of(source);
    const int tx = topology.x_of(target);
    const int ty = topology.y_of(target);
    if (tx <= sx) throw std::invalid_argument("target must lie forward of the source");

    // Knot columns: wherever the medium changes along x, plus optional
    // evenly spaced columns; one free transverse coordinate per knot.
    std::vector<int> knot_columns;
    for (int x = sx + 1; x < tx; ++x) {
        bool boundary = false;
        for (int y = 0; y < topology.height() && !boundary; ++y) {
            boundary = topology.medium(topology.node_at(x, y)) !=
                       topology.medium(topology.node_at(x - 1, y));
        }
        if (boundary) knot_columns.push_back(x);
    }
    if (knot_stride > 0) {
        for (int x = sx + knot_stride; x < tx; x += knot_stride) {
            if (std::find(knot_columns.begin(), knot_columns.end(), x) == knot_columns.end()) {
                knot_columns.push_back(x);
            }
        }
        std::sort(knot_columns.begin(), knot_columns.end());
    }
    if (knot_columns.empty()) knot_columns.push_back((sx + tx) / 2);

    const int h = topology.height();
    double family_size = 1.0;
    for (std::size_t i = 0; i < knot_columns.size(); ++i) family_size *= h;
    if (family_size > static_cast<double>(kEnumerationLimit)) {
        throw std::runtime_error("path enumeration bound exceeded");
    }

    PathSumResult result;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> ys(knot_columns.size(), 0);
    std::vector<int> best_ys;

    const long combos = static_cast<long>(family_size);
    for (long combo = 0; combo < combos; ++combo) {
        long rem = combo;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            ys[i] = static_cast<int>(rem % h);
            rem /= h;
        }
        std::vector<Point> pts;
        pts.push_back({static_cast<double>(sx), static_cast<double>(sy)});
        for (std::size_t i = 0; i < ys.size(); ++i) {
            pts.push_back({static_cast<double>(knot_columns[i]), static_cast<double>(ys[i])});
        }
        pts.push_back({static_cast<double>(tx), static_cast<double>(ty)});

        double geometric = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            geometric += segment_geometric_length(pts[i - 1], pts[i]);
        }
        if (geometric > max_path_length) continue;

        double optical = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            optical += segment_optical_length(topology, pts[i - 1], pts[i]);
        }
        result.amplitude += std::polar(1.0, 2.0 * kPi * optical / lambda);
        result.path_count++;
        if (optical < best) {
            best = optical;
            best_ys = ys;
        }
    }

    if (result.path_count > 0) {
        result.dominant_length = best;
        result.dominant_path.push_back(source);
        for (std::size_t i = 0; i < best_ys.size(); ++i) {
            result.dominant_path.push_back(topology.node_at(knot_columns[i], best_ys[i]));
        }
        result.dominant_path.push_back(target);
    }
    return result;
}

PathSumResult reflect_path_sum(const grid::Topology& topology, grid::NodeId source,
                               grid::NodeId target, int mirror_row, double lambda,
                               double max_path_length) {
    if (topology.kind() != grid::TopologyKind::lattice2d) {
        throw std::invalid_argument("reflect_path_sum requires a lattice topology");
    }
    if (mirror_row < 0 || mirror_row >= topology.height()) {
        throw std::invalid_argument("mirror row outside lattice");
    }
    const Point s{static_cast<double>(topology.x_of(source)),
                  static_cast<double>(topology.y_of(source))};
    const Point t{static_cast<double>(topology.x_of(target)),
                  static_cast<double>(topology.y_of(target))};

    PathSumResult result;
    double best = std::numeric_limits<double>::infinity();
    int best_x = -1;
    for (int x = 0; x < topology.width(); ++x) {
        Point bounce{static_cast<double>(x), static_cast<double>(mirror_row)};
        double geometric =
            segment_geometric_length(s, bounce) + segment_geometric_length(bounce, t);
        if (geometric > max_path_length) continue;
        // Vacuum mirror geometry: optical = geometric; the bounce itself
        // contributes the mirror's fixed i factor, common to all paths.
        result.amplitude += std::polar(1.0, 2.0 * kPi * geometric / lambda + kPi / 2.0);
        result.path_count++;
        if (geometric < best) {
            best = geometric;
            best_x = x;
        }
    }
    if (result.path_count > 0) {
        result.dominant_length = best;
        result.dominant_path = {source, topology.node_at(best_x, mirror_row), target};
    }
    return result;
}

double snell_angle(double theta1_degrees, double n1, double n2) {
    double s = n1 * std::sin(deg2rad(theta1_degrees)) / n2;
    if (std::fabs(s) > 1.0) {
        throw std::domain_error("total internal reflection");
    }
    return std::asin(s) * 180.0 / kPi;
}

double malus(double delta_degrees) {
    double c = std::cos(deg2rad(delta_degrees));
    return c * c;
}

double entangled_correlation(double a_degrees, double b_degrees) {
    // First branch passes its analyzer with probability 1/2; enumerate
    // both cases and apply Malus to the partner's definite state.
    double p_pass_given_first_pass = malus(b_degrees - (a_degrees + 90.0));
    double p_pass_given_first_absorb = malus(b_degrees - a_degrees);
    double e_given_pass = 2.0 * p_pass_given_first_pass - 1.0;
    double e_given_absorb = 2.0 * p_pass_given_first_absorb - 1.0;
    return 0.5 * (e_given_pass - e_given_absorb);
}

double chsh(double a, double a_prime, double b, double b_prime) {
    return std::fabs(entangled_correlation(a, b) - entangled_correlation(a, b_prime) +
                     entangled_correlation(a_prime, b) +
                     entangled_correlation(a_prime, b_prime));
}

} // namespace gridlight::oracle
