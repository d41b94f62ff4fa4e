#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <vector>

#include "nehari/types.hpp"

namespace nehari {

// I = [j 2^k, (j+1) 2^k) with k <= 0 inside [0,1).
struct DyadicInterval {
    int scale = 0;
    std::int64_t position = 0;

    double length() const;
    double left() const;
    double right() const;
    double center() const;

    // Nesting in the inclusive sense: this ⊇ other.
    bool contains(const DyadicInterval& other) const;
    bool disjoint(const DyadicInterval& other) const;
    bool inside_unit() const;

    DyadicInterval left_child() const { return {scale - 1, 2 * position}; }
    DyadicInterval right_child() const { return {scale - 1, 2 * position + 1}; }
    DyadicInterval parent() const;

    auto operator<=>(const DyadicInterval&) const = default;
};

struct DyadicRectangle {
    std::vector<DyadicInterval> sides;

    DyadicRectangle() = default;
    explicit DyadicRectangle(std::vector<DyadicInterval> s) : sides(std::move(s)) {}
    DyadicRectangle(DyadicInterval a, DyadicInterval b) : sides{a, b} {}

    std::size_t dim() const { return sides.size(); }
    const DyadicInterval& side(std::size_t s) const { return sides.at(s); }
    double area() const;
    bool contains(const DyadicRectangle& other) const;
    bool disjoint(const DyadicRectangle& other) const;

    // Lexicographic by (scales, positions).
    std::strong_ordering operator<=>(const DyadicRectangle& other) const;
    bool operator==(const DyadicRectangle& other) const = default;
};

class Grid {
public:
    Grid(int depth, int dim);

    int depth() const { return depth_; }
    int dim() const { return dim_; }
    std::int64_t per_axis() const { return std::int64_t{1} << depth_; }
    std::int64_t size() const;
    double weight() const;  // 2^{-nd}
    double step() const { return 1.0 / static_cast<double>(per_axis()); }

    // The interval spans at least min_cells finest cells.
    bool resolves(const DyadicInterval& I, std::int64_t min_cells = 1) const;
    std::int64_t first_cell(const DyadicInterval& I) const;
    std::int64_t cell_count(const DyadicInterval& I) const;

    bool operator==(const Grid&) const = default;

private:
    int depth_;
    int dim_;
};

// Samples on [0,1)^d, axis 0 slowest: index = i0 * N + i1.
class Signal {
public:
    explicit Signal(Grid grid);
    Signal(Grid grid, std::vector<cplx> samples);

    const Grid& grid() const { return grid_; }
    const std::vector<cplx>& samples() const { return samples_; }
    std::vector<cplx>& samples() { return samples_; }
    std::size_t size() const { return samples_.size(); }
    cplx& operator[](std::size_t i) { return samples_[i]; }
    const cplx& operator[](std::size_t i) const { return samples_[i]; }
    cplx& at(std::int64_t i0, std::int64_t i1) { return samples_[i0 * grid_.per_axis() + i1]; }
    const cplx& at(std::int64_t i0, std::int64_t i1) const { return samples_[i0 * grid_.per_axis() + i1]; }

    cplx mean() const;
    Signal conj() const;

    Signal& operator+=(const Signal& o);
    Signal& operator-=(const Signal& o);
    Signal& operator*=(cplx c);
    friend Signal operator+(Signal a, const Signal& b) { return a += b; }
    friend Signal operator-(Signal a, const Signal& b) { return a -= b; }
    friend Signal operator*(Signal a, cplx c) { return a *= c; }
    friend Signal operator*(cplx c, Signal a) { return a *= c; }
    // Pointwise product.
    friend Signal operator*(const Signal& a, const Signal& b);

private:
    Grid grid_;
    std::vector<cplx> samples_;
};

// <f,g> = sum f conj(g) 2^{-nd}.
cplx inner(const Signal& f, const Signal& g);
double norm2(const Signal& f);
double max_abs_diff(const Signal& f, const Signal& g);

// Boolean mask over finest cells.
struct CellMask {
    Grid grid;
    std::vector<std::uint8_t> cells;

    explicit CellMask(Grid g) : grid(g), cells(static_cast<std::size_t>(g.size()), 0) {}
    std::int64_t count() const;
    double measure() const;
    bool covers(const DyadicRectangle& R) const;
    void add(const DyadicRectangle& R);
    bool operator==(const CellMask&) const = default;
};

struct RectangleCollection {
    Grid grid;
    std::vector<DyadicRectangle> members;

    CellMask shadow() const;
};

// h^0 (eps = 0) or h^1 (eps = 1) for I, L2-normalized.
Signal haar_function(int eps, const DyadicInterval& I, const Grid& grid);
// Tensor product of h^0 over the sides of R.
Signal haar_rectangle(const DyadicRectangle& R, const Grid& grid);
// g_I = -h_{I_left} + h_{I_right}.
Signal shifted_haar_g(const DyadicInterval& I, const Grid& grid);
// Sign of h_J at a point: -1 on the left half, +1 on the right, 0 outside.
int haar_sign(const DyadicInterval& J, double x);

std::vector<DyadicInterval> enumerate_intervals(const Grid& grid, double min_side);
std::vector<DyadicRectangle> enumerate_rectangles(const Grid& grid, double min_side);

// Tr_y f(x) = f(x - y) and Dil^2_s f(x) = s^{-1/2} f(x/s), for continuous callables.
template <class F>
auto translate(F f, double y) {
    return [f, y](double x) { return f(x - y); };
}
template <class F>
auto dilate(F f, double s) {
    return [f, s](double x) { return f(x / s) / std::sqrt(s); };
}

}  // namespace nehari
