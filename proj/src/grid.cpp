#include "ericksen/grid.hpp"

#include <stdexcept>
#include <string>

namespace ericksen {

void Grid::check() const {
    if (dims != 2 && dims != 3) throw std::invalid_argument("grid: dims must be 2 or 3");
    if (!(h > 0.0)) throw std::invalid_argument("grid: spacing h must be positive");
    for (int a = 0; a < dims; ++a) {
        if (shape[static_cast<std::size_t>(a)] < 8) {
            throw std::invalid_argument("grid: axis " + std::to_string(a) + " has fewer than 8 cells");
        }
    }
    if (dims == 2 && shape[2] != 1) throw std::invalid_argument("grid: 2D grids need shape[2] == 1");
}

std::ptrdiff_t Grid::neighbor(std::size_t idx, int axis, int offset) const {
    const auto c = coords(idx);
    const int n = shape[static_cast<std::size_t>(axis)];
    int v = c[static_cast<std::size_t>(axis)] + offset;
    if (v < 0 || v >= n) {
        if (!periodic[static_cast<std::size_t>(axis)]) return -1;
        v = (v + n) % n;
    }
    auto moved = c;
    moved[static_cast<std::size_t>(axis)] = v;
    return static_cast<std::ptrdiff_t>(index(moved[0], moved[1], moved[2]));
}

Grid make_box_grid(int dims, int cells_per_side, double length, bool periodic_all) {
    Grid g;
    g.dims = dims;
    g.shape = {cells_per_side, cells_per_side, dims == 3 ? cells_per_side : 1};
    g.h = length / cells_per_side;
    g.periodic = {periodic_all, periodic_all, dims == 3 && periodic_all};
    g.check();
    return g;
}

}  // namespace ericksen
