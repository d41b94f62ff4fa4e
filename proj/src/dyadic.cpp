#include "nehari/dyadic.hpp"

#include <algorithm>
#include <cmath>

namespace nehari {

double DyadicInterval::length() const { return std::ldexp(1.0, scale); }
double DyadicInterval::left() const { return std::ldexp(static_cast<double>(position), scale); }
double DyadicInterval::right() const { return std::ldexp(static_cast<double>(position + 1), scale); }
double DyadicInterval::center() const { return std::ldexp(static_cast<double>(position) + 0.5, scale); }

bool DyadicInterval::contains(const DyadicInterval& o) const {
    if (o.scale > scale) return false;
    return (o.position >> (scale - o.scale)) == position;
}

bool DyadicInterval::disjoint(const DyadicInterval& o) const { return !contains(o) && !o.contains(*this); }

bool DyadicInterval::inside_unit() const {
    return scale <= 0 && position >= 0 && position < (std::int64_t{1} << -scale);
}

DyadicInterval DyadicInterval::parent() const {
    if (scale >= 0) throw ValidationError("the unit interval has no parent");
    return {scale + 1, position >> 1};
}

double DyadicRectangle::area() const {
    double a = 1.0;
    for (const auto& s : sides) a *= s.length();
    return a;
}

bool DyadicRectangle::contains(const DyadicRectangle& o) const {
    if (o.dim() != dim()) return false;
    for (std::size_t s = 0; s < dim(); ++s)
        if (!sides[s].contains(o.sides[s])) return false;
    return true;
}

bool DyadicRectangle::disjoint(const DyadicRectangle& o) const {
    for (std::size_t s = 0; s < dim(); ++s)
        if (sides[s].disjoint(o.sides[s])) return true;
    return false;
}

std::strong_ordering DyadicRectangle::operator<=>(const DyadicRectangle& o) const {
    if (auto c = dim() <=> o.dim(); c != 0) return c;
    for (std::size_t s = 0; s < dim(); ++s)
        if (auto c = sides[s].scale <=> o.sides[s].scale; c != 0) return c;
    for (std::size_t s = 0; s < dim(); ++s)
        if (auto c = sides[s].position <=> o.sides[s].position; c != 0) return c;
    return std::strong_ordering::equal;
}

Grid::Grid(int depth, int dim) : depth_(depth), dim_(dim) {
    if (depth < 1 || depth > 24) throw ValidationError("grid depth must be in [1, 24]");
    if (dim < 1 || dim > 3) throw ValidationError("grid dimension must be in [1, 3]");
}

std::int64_t Grid::size() const {
    std::int64_t s = 1;
    for (int i = 0; i < dim_; ++i) s *= per_axis();
    return s;
}

double Grid::weight() const { return std::ldexp(1.0, -depth_ * dim_); }

bool Grid::resolves(const DyadicInterval& I, std::int64_t min_cells) const {
    return I.inside_unit() && -I.scale <= depth_ && cell_count(I) >= min_cells;
}

std::int64_t Grid::first_cell(const DyadicInterval& I) const { return I.position << (depth_ + I.scale); }
std::int64_t Grid::cell_count(const DyadicInterval& I) const { return std::int64_t{1} << (depth_ + I.scale); }

Signal::Signal(Grid grid) : grid_(grid), samples_(static_cast<std::size_t>(grid.size())) {}

Signal::Signal(Grid grid, std::vector<cplx> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != static_cast<std::size_t>(grid_.size()))
        throw ValidationError("sample count does not match grid");
}

cplx Signal::mean() const {
    cplx s = 0;
    for (const auto& v : samples_) s += v;
    return s * grid_.weight();
}

Signal Signal::conj() const {
    Signal r = *this;
    for (auto& v : r.samples_) v = std::conj(v);
    return r;
}

static void require_same(const Grid& a, const Grid& b) {
    if (!(a == b)) throw ValidationError("signals live on different grids");
}

Signal& Signal::operator+=(const Signal& o) {
    require_same(grid_, o.grid_);
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += o.samples_[i];
    return *this;
}

Signal& Signal::operator-=(const Signal& o) {
    require_same(grid_, o.grid_);
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= o.samples_[i];
    return *this;
}

Signal& Signal::operator*=(cplx c) {
    for (auto& v : samples_) v *= c;
    return *this;
}

Signal operator*(const Signal& a, const Signal& b) {
    require_same(a.grid(), b.grid());
    Signal r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= b[i];
    return r;
}

cplx inner(const Signal& f, const Signal& g) {
    require_same(f.grid(), g.grid());
    cplx s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
    return s * f.grid().weight();
}

double norm2(const Signal& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

double max_abs_diff(const Signal& f, const Signal& g) {
    require_same(f.grid(), g.grid());
    double m = 0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
    return m;
}

std::int64_t CellMask::count() const { return std::count(cells.begin(), cells.end(), std::uint8_t{1}); }

double CellMask::measure() const { return static_cast<double>(count()) * grid.weight(); }

// Visit every finest cell of R (d = 1 or 2).
template <class F>
static void for_cells(const Grid& g, const DyadicRectangle& R, F&& f) {
    if (static_cast<int>(R.dim()) != g.dim()) throw ValidationError("rectangle dimension does not match grid");
    for (const auto& s : R.sides)
        if (!g.resolves(s)) throw ResolutionError("scale below grid resolution");
    const std::int64_t N = g.per_axis();
    if (g.dim() == 1) {
        const auto a = g.first_cell(R.side(0));
        for (std::int64_t i = 0; i < g.cell_count(R.side(0)); ++i) f(a + i);
        return;
    }
    if (g.dim() != 2) throw ValidationError("cell masks support d <= 2");
    const auto a0 = g.first_cell(R.side(0)), a1 = g.first_cell(R.side(1));
    for (std::int64_t i = 0; i < g.cell_count(R.side(0)); ++i)
        for (std::int64_t j = 0; j < g.cell_count(R.side(1)); ++j) f((a0 + i) * N + a1 + j);
}

bool CellMask::covers(const DyadicRectangle& R) const {
    bool all = true;
    for_cells(grid, R, [&](std::int64_t c) { all = all && cells[static_cast<std::size_t>(c)]; });
    return all;
}

void CellMask::add(const DyadicRectangle& R) {
    for_cells(grid, R, [&](std::int64_t c) { cells[static_cast<std::size_t>(c)] = 1; });
}

CellMask RectangleCollection::shadow() const {
    CellMask m(grid);
    for (const auto& R : members) m.add(R);
    return m;
}

int haar_sign(const DyadicInterval& J, double x) {
    if (x < J.left() || x >= J.right()) return 0;
    return x < J.center() ? -1 : 1;
}

Signal haar_function(int eps, const DyadicInterval& I, const Grid& grid) {
    if (grid.dim() != 1) throw ValidationError("haar_function needs a 1D grid");
    if (eps != 0 && eps != 1) throw ValidationError("eps must be 0 or 1");
    if (!grid.resolves(I, eps == 0 ? 2 : 1)) throw ResolutionError("scale below grid resolution");
    Signal h(grid);
    const double a = 1.0 / std::sqrt(I.length());
    const auto first = grid.first_cell(I), cnt = grid.cell_count(I);
    for (std::int64_t i = 0; i < cnt; ++i) {
        double v = a;
        if (eps == 0) v = i < cnt / 2 ? -a : a;
        h[static_cast<std::size_t>(first + i)] = v;
    }
    return h;
}

Signal haar_rectangle(const DyadicRectangle& R, const Grid& grid) {
    if (static_cast<int>(R.dim()) != grid.dim() || grid.dim() > 2)
        throw ValidationError("rectangle dimension does not match grid");
    const Grid line(grid.depth(), 1);
    if (grid.dim() == 1) return haar_function(0, R.side(0), line);
    const Signal a = haar_function(0, R.side(0), line), b = haar_function(0, R.side(1), line);
    Signal r(grid);
    const auto N = grid.per_axis();
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = 0; j < N; ++j) r.at(i, j) = a[i] * b[j];
    return r;
}

Signal shifted_haar_g(const DyadicInterval& I, const Grid& grid) {
    if (!grid.resolves(I, 4)) throw ResolutionError("scale below grid resolution");
    return haar_function(0, I.right_child(), grid) - haar_function(0, I.left_child(), grid);
}

std::vector<DyadicInterval> enumerate_intervals(const Grid& grid, double min_side) {
    if (min_side < grid.step() * (1 - 1e-12)) throw ResolutionError("scale below grid resolution");
    std::vector<DyadicInterval> out;
    for (int k = 0; k >= -grid.depth(); --k) {
        if (std::ldexp(1.0, k) < min_side * (1 - 1e-12)) break;
        for (std::int64_t j = 0; j < (std::int64_t{1} << -k); ++j) out.push_back({k, j});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<DyadicRectangle> enumerate_rectangles(const Grid& grid, double min_side) {
    const auto axis = enumerate_intervals(grid, min_side);
    std::vector<DyadicRectangle> out{DyadicRectangle{}};
    for (int s = 0; s < grid.dim(); ++s) {
        std::vector<DyadicRectangle> next;
        next.reserve(out.size() * axis.size());
        for (const auto& r : out)
            for (const auto& I : axis) {
                auto sides = r.sides;
                sides.push_back(I);
                next.emplace_back(std::move(sides));
            }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace nehari
