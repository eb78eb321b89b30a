#pragma once

#include <string>
#include <vector>

#include "wormnav/random.hpp"

namespace wormnav {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Axis-aligned rectangle [mm].
struct Bounds {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 100.0;
    double y_max = 100.0;

    bool contains(Vec2 p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
};

// Gaussian hill (amplitude > 0) or valley (amplitude < 0).
struct Bump {
    Vec2 center;      // [mm]
    double amplitude; // [mM]
    double width;     // standard deviation [mm]
};

// Static concentration landscape: baseline + sum of Gaussian bumps.
struct ScalarField {
    std::vector<Bump> bumps;
    double baseline = 40.0;  // [mM]
    Bounds bounds;

    // 10 cm x 10 cm plate, one hill to 70 mM and one valley to 10 mM over a 40 mM floor.
    static ScalarField default_arena();
    // Hills act as obstacles, the valley as the destination.
    static ScalarField obstacle_arena();

    void validate() const;
};

// Throws std::domain_error outside the field bounds.
double concentration_at(const ScalarField& field, Vec2 position);
// Analytic spatial gradient [mM/mm].
Vec2 gradient_at(const ScalarField& field, Vec2 position);

enum class NoiseKind { none, salt_pepper };

struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double corruption_probability = 0.1;
    double max_magnitude = 12.0;  // [mM]

    static NoiseModel salt_pepper(double probability = 0.1, double magnitude = 12.0) {
        return {NoiseKind::salt_pepper, probability, magnitude};
    }
    void validate() const;
};

// Sensor reading. Salt-and-pepper corruption adds, with the configured
// probability, a perturbation of uniform magnitude in [0, max] and random
// sign. Readings never go below 0 mM.
double sense(const ScalarField& field, const NoiseModel& noise, Vec2 position, Rng& rng);

// Row-major samples on an nx-by-ny lattice spanning the bounds (corners included).
struct FieldGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;  // values[j * nx + i] at (xs[i], ys[j])

    double at(std::size_t i, std::size_t j) const { return values[j * nx + i]; }
};

FieldGrid sample_grid(const ScalarField& field, std::size_t nx, std::size_t ny);

// Number of closed iso-contours at `level` (connected components of the
// super/sub-level set that do not touch the grid border).
int count_closed_contours(const FieldGrid& grid, double level);

} // namespace wormnav
