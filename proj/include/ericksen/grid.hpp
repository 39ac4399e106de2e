#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ericksen/vec3.hpp"

namespace ericksen {

/// Uniform cell-centred box grid. 2D grids use shape[2] == 1 and ignore the third axis.
struct Grid {
    int dims = 2;
    std::array<int, 3> shape{8, 8, 1};
    double h = 0.125;
    Vec3 origin;
    std::array<bool, 3> periodic{false, false, false};

    /// Throws std::invalid_argument on h <= 0, dims not in {2, 3}, or fewer than 8 cells on an
    /// active axis.
    void check() const;

    std::size_t size() const {
        return static_cast<std::size_t>(shape[0]) * static_cast<std::size_t>(shape[1]) *
               static_cast<std::size_t>(shape[2]);
    }
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(shape[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(shape[1]) * static_cast<std::size_t>(k));
    }
    std::array<int, 3> coords(std::size_t idx) const {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(shape[0]));
        const std::size_t rest = idx / static_cast<std::size_t>(shape[0]);
        const int j = static_cast<int>(rest % static_cast<std::size_t>(shape[1]));
        const int k = static_cast<int>(rest / static_cast<std::size_t>(shape[1]));
        return {i, j, k};
    }
    Vec3 center(int i, int j, int k) const {
        return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h,
                dims == 3 ? origin.z + (k + 0.5) * h : 0.0};
    }
    Vec3 center(std::size_t idx) const {
        const auto c = coords(idx);
        return center(c[0], c[1], c[2]);
    }
    double cell_volume() const { return dims == 3 ? h * h * h : h * h; }
    double extent(int axis) const { return shape[static_cast<std::size_t>(axis)] * h; }

    /// Neighbour index along `axis` at offset +-1, wrapping on periodic axes; -1 when the
    /// neighbour lies outside a non-periodic box.
    std::ptrdiff_t neighbor(std::size_t idx, int axis, int offset) const;
    /// Index stride of one step along `axis`.
    std::size_t stride(int axis) const {
        return axis == 0 ? 1 : (axis == 1 ? static_cast<std::size_t>(shape[0])
                                          : static_cast<std::size_t>(shape[0]) * static_cast<std::size_t>(shape[1]));
    }
};

/// Unit square/cube grid with n cells per side.
Grid make_box_grid(int dims, int cells_per_side, double length, bool periodic_all);

}  // namespace ericksen
