#pragma once

#include <cmath>
#include <cstdlib>

namespace uavaoi {

/// Planar position in metres. The base station sits at the origin.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;

    double squared_norm() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

inline double squared_distance(Vec2 a, Vec2 b) { return (a - b).squared_norm(); }
inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Integer cell coordinates; (0, 0) is the centre cell holding the base station.
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(Cell, Cell) = default;
};

inline int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

} // namespace uavaoi
