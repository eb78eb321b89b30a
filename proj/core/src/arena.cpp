#include "wormnav/arena.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wormnav/errors.hpp"

namespace wormnav {

ScalarField ScalarField::default_arena() {
    ScalarField f;
    f.baseline = 40.0;
    f.bounds = {0.0, 0.0, 100.0, 100.0};
    f.bumps = {
        {{65.0, 65.0}, 30.0, 20.0},   // hill, peak 70 mM
        {{75.0, 22.0}, -30.0, 10.0},  // valley, floor 10 mM
    };
    return f;
}

ScalarField ScalarField::obstacle_arena() {
    ScalarField f;
    f.baseline = 40.0;
    f.bounds = {0.0, 0.0, 100.0, 100.0};
    f.bumps = {
        {{45.0, 70.0}, 40.0, 9.0},    // obstacle
        {{70.0, 40.0}, 40.0, 9.0},    // obstacle
        {{80.0, 80.0}, -35.0, 14.0},  // destination
    };
    return f;
}

void ScalarField::validate() const {
    if (!(bounds.x_max > bounds.x_min && bounds.y_max > bounds.y_min))
        throw config_error("arena.bounds", "empty rectangle");
    for (std::size_t i = 0; i < bumps.size(); ++i) {
        const auto& b = bumps[i];
        const std::string f = "arena.bumps[" + std::to_string(i) + "]";
        if (!(b.width > 0.0)) throw config_error(f + ".width", "must be positive");
        if (!std::isfinite(b.amplitude) || !std::isfinite(b.center.x) || !std::isfinite(b.center.y))
            throw config_error(f, "non-finite value");
    }
    if (!std::isfinite(baseline)) throw config_error("arena.baseline", "non-finite value");
}

double concentration_at(const ScalarField& field, Vec2 p) {
    if (!field.bounds.contains(p)) throw std::domain_error("concentration_at: position outside arena");
    double c = field.baseline;
    for (const auto& b : field.bumps) {
        const double dx = p.x - b.center.x, dy = p.y - b.center.y;
        c += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * b.width * b.width));
    }
    return c;
}

Vec2 gradient_at(const ScalarField& field, Vec2 p) {
    Vec2 g;
    for (const auto& b : field.bumps) {
        const double dx = p.x - b.center.x, dy = p.y - b.center.y;
        const double w2 = b.width * b.width;
        const double k = -b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * w2)) / w2;
        g.x += k * dx;
        g.y += k * dy;
    }
    return g;
}

void NoiseModel::validate() const {
    if (!(corruption_probability >= 0.0 && corruption_probability <= 1.0))
        throw config_error("noise.corruption_probability", "must lie in [0, 1]");
    if (!(max_magnitude >= 0.0)) throw config_error("noise.max_magnitude", "must be non-negative");
}

double sense(const ScalarField& field, const NoiseModel& noise, Vec2 position, Rng& rng) {
    const double clean = concentration_at(field, position);
    if (noise.kind == NoiseKind::none) return clean;
    // Always draw three numbers so the stream advances identically per reading.
    const double hit = uniform01(rng);
    const double magnitude = uniform01(rng) * noise.max_magnitude;
    const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    if (hit >= noise.corruption_probability) return clean;
    return std::max(0.0, clean + sign * magnitude);
}

FieldGrid sample_grid(const ScalarField& field, std::size_t nx, std::size_t ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("sample_grid: need at least 2x2 samples");
    FieldGrid g;
    g.nx = nx;
    g.ny = ny;
    const auto& b = field.bounds;
    for (std::size_t i = 0; i < nx; ++i)
        g.xs.push_back(b.x_min + (b.x_max - b.x_min) * static_cast<double>(i) / static_cast<double>(nx - 1));
    for (std::size_t j = 0; j < ny; ++j)
        g.ys.push_back(b.y_min + (b.y_max - b.y_min) * static_cast<double>(j) / static_cast<double>(ny - 1));
    g.values.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) g.values.push_back(concentration_at(field, {g.xs[i], g.ys[j]}));
    return g;
}

namespace {

// Components of the cells selected by `inside` that stay clear of the border.
template <typename Pred>
int count_interior_components(const FieldGrid& grid, Pred inside) {
    const std::size_t nx = grid.nx, ny = grid.ny;
    std::vector<int> label(nx * ny, 0);
    int closed = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < nx * ny; ++start) {
        if (label[start] != 0 || !inside(grid.values[start])) continue;
        bool touches_border = false;
        stack.assign(1, start);
        label[start] = 1;
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const std::size_t i = k % nx, j = k / nx;
            if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) touches_border = true;
            const auto visit = [&](std::size_t n) {
                if (label[n] == 0 && inside(grid.values[n])) {
                    label[n] = 1;
                    stack.push_back(n);
                }
            };
            if (i > 0) visit(k - 1);
            if (i + 1 < nx) visit(k + 1);
            if (j > 0) visit(k - nx);
            if (j + 1 < ny) visit(k + nx);
        }
        if (!touches_border) ++closed;
    }
    return closed;
}

} // namespace

int count_closed_contours(const FieldGrid& grid, double level) {
    return count_interior_components(grid, [level](double v) { return v > level; }) +
           count_interior_components(grid, [level](double v) { return v < level; });
}

} // namespace wormnav
