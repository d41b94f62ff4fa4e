#include "nehari/transforms.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "nehari/meyer.hpp"

namespace nehari {

Spectrum::Spectrum(Grid grid) : grid_(grid), modes_(static_cast<std::size_t>(grid.size())) {}

Spectrum::Spectrum(Grid grid, std::vector<cplx> modes) : grid_(grid), modes_(std::move(modes)) {
    if (modes_.size() != static_cast<std::size_t>(grid_.size()))
        throw ValidationError("mode count does not match grid");
}

std::int64_t Spectrum::frequency(std::int64_t index, std::int64_t N) { return index <= N / 2 ? index : index - N; }

std::int64_t Spectrum::index(std::int64_t k, std::int64_t N) { return ((k % N) + N) % N; }

cplx& Spectrum::mode(std::int64_t k) { return modes_[index(k, grid_.per_axis())]; }
cplx Spectrum::mode(std::int64_t k) const { return modes_[index(k, grid_.per_axis())]; }

cplx& Spectrum::mode(std::int64_t k0, std::int64_t k1) {
    const auto N = grid_.per_axis();
    return modes_[index(k0, N) * N + index(k1, N)];
}

cplx Spectrum::mode(std::int64_t k0, std::int64_t k1) const {
    const auto N = grid_.per_axis();
    return modes_[index(k0, N) * N + index(k1, N)];
}

namespace {

// In-place transform of every line along one axis (d <= 2).
void transform_axis(std::vector<cplx>& data, const Grid& g, int axis, bool forward) {
    const auto N = g.per_axis();
    Eigen::FFT<double> fft;
    std::vector<cplx> line(N), out(N);
    const std::int64_t lines = g.size() / N;
    const std::int64_t stride = (g.dim() == 2 && axis == 0) ? N : 1;
    for (std::int64_t l = 0; l < lines; ++l) {
        const std::int64_t base = (g.dim() == 2 && axis == 0) ? l : l * N;
        for (std::int64_t i = 0; i < N; ++i) line[i] = data[base + i * stride];
        if (forward) {
            fft.fwd(out, line);
            for (auto& v : out) v /= static_cast<double>(N);
        } else {
            fft.inv(out, line);
            for (auto& v : out) v *= static_cast<double>(N);
        }
        for (std::int64_t i = 0; i < N; ++i) data[base + i * stride] = out[i];
    }
}

void require_low_dim(const Grid& g) {
    if (g.dim() > 2) throw ValidationError("transforms support d <= 2");
}

template <class Keep>
Signal filter(const Signal& f, Keep keep) {
    Spectrum s = fourier(f);
    const auto N = f.grid().per_axis();
    if (f.grid().dim() == 1) {
        for (std::int64_t i = 0; i < N; ++i) s.modes()[i] *= keep(Spectrum::frequency(i, N), 0);
    } else {
        for (std::int64_t i = 0; i < N; ++i)
            for (std::int64_t j = 0; j < N; ++j)
                s.modes()[i * N + j] *= keep(Spectrum::frequency(i, N), Spectrum::frequency(j, N));
    }
    return inverse_fourier(s);
}

void check_axis(const Signal& f, int axis) {
    if (axis < 0 || axis >= f.grid().dim()) throw ValidationError("axis out of range");
}

}  // namespace

Spectrum fourier(const Signal& f) {
    require_low_dim(f.grid());
    std::vector<cplx> data = f.samples();
    for (int a = 0; a < f.grid().dim(); ++a) transform_axis(data, f.grid(), a, true);
    return Spectrum(f.grid(), std::move(data));
}

Signal inverse_fourier(const Spectrum& s) {
    require_low_dim(s.grid());
    std::vector<cplx> data = s.modes();
    for (int a = 0; a < s.grid().dim(); ++a) transform_axis(data, s.grid(), a, false);
    return Signal(s.grid(), std::move(data));
}

Signal analytic_projection(Sign sign, int axis, const Signal& f) {
    check_axis(f, axis);
    return filter(f, [&](std::int64_t k0, std::int64_t k1) {
        const auto k = axis == 0 ? k0 : k1;
        return (sign == Sign::plus ? k > 0 : k < 0) ? 1.0 : 0.0;
    });
}

Signal product_projection(const std::vector<Sign>& sigma, const Signal& f) {
    if (static_cast<int>(sigma.size()) != f.grid().dim()) throw ValidationError("sigma length must equal d");
    return filter(f, [&](std::int64_t k0, std::int64_t k1) {
        const std::int64_t k[2] = {k0, k1};
        for (std::size_t a = 0; a < sigma.size(); ++a)
            if (sigma[a] == Sign::plus ? k[a] <= 0 : k[a] >= 0) return 0.0;
        return 1.0;
    });
}

Signal hardy_projection(const Signal& f) {
    const int d = f.grid().dim();
    return filter(f, [&](std::int64_t k0, std::int64_t k1) { return (k0 >= 0 && (d == 1 || k1 >= 0)) ? 1.0 : 0.0; });
}

Signal hilbert_transform(int axis, const Signal& f) {
    check_axis(f, axis);
    return filter(f, [&](std::int64_t k0, std::int64_t k1) {
        const auto k = axis == 0 ? k0 : k1;
        return cplx(0, k > 0 ? -1.0 : (k < 0 ? 1.0 : 0.0));
    });
}

std::int64_t heap_index(const DyadicInterval& I) { return (std::int64_t{1} << -I.scale) + I.position; }

DyadicInterval heap_interval(std::int64_t h) {
    int l = 0;
    while ((std::int64_t{2} << l) <= h) ++l;
    return {-l, h - (std::int64_t{1} << l)};
}

namespace {

// Orthonormal Haar transform of cell values along one line, in place.
void haar_line(cplx* v, std::int64_t N, std::int64_t stride, std::vector<cplx>& tmp) {
    tmp.assign(N, 0);
    std::vector<cplx> avg(N);
    for (std::int64_t i = 0; i < N; ++i) avg[i] = v[i * stride];
    for (std::int64_t len = N; len > 1; len /= 2) {
        const std::int64_t half = len / 2;
        const double size = 1.0 / static_cast<double>(half);  // |I| at this level
        for (std::int64_t j = 0; j < half; ++j) {
            const cplx l = avg[2 * j], r = avg[2 * j + 1];
            tmp[half + j] = std::sqrt(size) * (r - l) / 2.0;
            avg[j] = (l + r) / 2.0;
        }
    }
    tmp[0] = avg[0];
    for (std::int64_t i = 0; i < N; ++i) v[i * stride] = tmp[i];
}

void haar_line_inverse(cplx* v, std::int64_t N, std::int64_t stride, std::vector<cplx>& tmp) {
    tmp.assign(N, 0);
    std::vector<cplx> avg(N), next(N);
    avg[0] = v[0];
    for (std::int64_t half = 1; half < N; half *= 2) {
        const double size = 1.0 / static_cast<double>(half);
        for (std::int64_t j = 0; j < half; ++j) {
            const cplx d = v[(half + j) * stride] / std::sqrt(size);
            next[2 * j] = avg[j] - d;
            next[2 * j + 1] = avg[j] + d;
        }
        std::copy(next.begin(), next.begin() + 2 * half, avg.begin());
    }
    for (std::int64_t i = 0; i < N; ++i) v[i * stride] = avg[i];
}

template <class Line>
void for_lines(std::vector<cplx>& data, const Grid& g, Line line) {
    const auto N = g.per_axis();
    std::vector<cplx> tmp;
    if (g.dim() == 1) {
        line(data.data(), N, 1, tmp);
        return;
    }
    for (std::int64_t r = 0; r < N; ++r) line(data.data() + r * N, N, 1, tmp);
    for (std::int64_t c = 0; c < N; ++c) line(data.data() + c, N, N, tmp);
}

}  // namespace

HaarCoefficients haar_analysis(const Signal& f) {
    require_low_dim(f.grid());
    HaarCoefficients c{f.grid(), f.samples()};
    for_lines(c.table, f.grid(), haar_line);
    return c;
}

Signal haar_synthesis(const HaarCoefficients& c) {
    std::vector<cplx> data = c.table;
    for_lines(data, c.grid, haar_line_inverse);
    return Signal(c.grid, std::move(data));
}

cplx HaarCoefficients::coefficient(const DyadicRectangle& R) const {
    if (static_cast<int>(R.dim()) != grid.dim()) throw ValidationError("rectangle dimension does not match grid");
    for (const auto& s : R.sides)
        if (!grid.resolves(s, 2)) throw ResolutionError("scale below grid resolution");
    if (grid.dim() == 1) return table[heap_index(R.side(0))];
    return table[heap_index(R.side(0)) * grid.per_axis() + heap_index(R.side(1))];
}

std::vector<std::pair<DyadicRectangle, cplx>> HaarCoefficients::wavelets() const {
    std::vector<std::pair<DyadicRectangle, cplx>> out;
    const auto N = grid.per_axis();
    if (grid.dim() == 1) {
        for (std::int64_t h = 1; h < N; ++h) out.push_back({DyadicRectangle({heap_interval(h)}), table[h]});
    } else {
        for (std::int64_t a = 1; a < N; ++a)
            for (std::int64_t b = 1; b < N; ++b)
                out.push_back({DyadicRectangle(heap_interval(a), heap_interval(b)), table[a * N + b]});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

double HaarCoefficients::energy() const {
    double s = 0;
    for (const auto& v : table) s += std::norm(v);
    return s;
}

namespace {

// Cell averages at every dyadic level along one axis: level l has 2^l entries.
std::vector<std::vector<cplx>> pyramid(const std::vector<cplx>& cells) {
    std::vector<std::vector<cplx>> levels;
    levels.push_back(cells);
    while (levels.back().size() > 1) {
        const auto& fine = levels.back();
        std::vector<cplx> coarse(fine.size() / 2);
        for (std::size_t j = 0; j < coarse.size(); ++j) coarse[j] = (fine[2 * j] + fine[2 * j + 1]) / 2.0;
        levels.push_back(std::move(coarse));
    }
    std::reverse(levels.begin(), levels.end());
    return levels;
}

}  // namespace

Signal dyadic_maximal(const Signal& f) {
    if (f.grid().dim() != 1) throw ValidationError("dyadic_maximal needs d = 1");
    const auto lv = pyramid(f.samples());
    const auto n = f.grid().depth();
    Signal m(f.grid());
    for (std::size_t x = 0; x < f.size(); ++x) {
        double best = 0;
        for (int l = 0; l <= n; ++l) best = std::max(best, std::abs(lv[l][x >> (n - l)]));
        m[x] = best;
    }
    return m;
}

Signal strong_maximal(const Signal& f) {
    if (f.grid().dim() != 2) throw ValidationError("strong_maximal needs d = 2");
    const auto N = f.grid().per_axis();
    const int n = f.grid().depth();
    // rows[l1][i0] holds the level-l1 averages of row i0.
    std::vector<std::vector<std::vector<cplx>>> rows(n + 1, std::vector<std::vector<cplx>>(N));
    for (std::int64_t i = 0; i < N; ++i) {
        std::vector<cplx> r(f.samples().begin() + i * N, f.samples().begin() + (i + 1) * N);
        auto p = pyramid(r);
        for (int l = 0; l <= n; ++l) rows[l][i] = std::move(p[l]);
    }
    Signal m(f.grid());
    for (int l1 = 0; l1 <= n; ++l1) {
        const std::int64_t w1 = std::int64_t{1} << l1;
        for (std::int64_t j = 0; j < w1; ++j) {
            std::vector<cplx> col(N);
            for (std::int64_t i = 0; i < N; ++i) col[i] = rows[l1][i][j];
            const auto p = pyramid(col);
            for (int l0 = 0; l0 <= n; ++l0)
                for (std::int64_t i = 0; i < N; ++i) {
                    const double a = std::abs(p[l0][i >> (n - l0)]);
                    const std::int64_t c1 = N >> l1;
                    for (std::int64_t y = j * c1; y < (j + 1) * c1; ++y)
                        if (a > m.at(i, y).real()) m.at(i, y) = a;
                }
        }
    }
    return m;
}

Signal square_function(const Signal& f, WaveletFamily family) {
    RectCoefficients coeffs;
    if (family == WaveletFamily::haar) {
        coeffs = haar_analysis(f).wavelets();
    } else {
        coeffs = MeyerFamily(f.grid()).analysis(f);
    }
    std::vector<double> acc(f.size(), 0.0);
    CellMask scratch(f.grid());
    for (const auto& [R, c] : coeffs) {
        const double e = std::norm(c) / R.area();
        if (e == 0) continue;
        std::fill(scratch.cells.begin(), scratch.cells.end(), 0);
        scratch.add(R);
        for (std::size_t i = 0; i < acc.size(); ++i)
            if (scratch.cells[i]) acc[i] += e;
    }
    Signal s(f.grid());
    for (std::size_t i = 0; i < acc.size(); ++i) s[i] = std::sqrt(acc[i]);
    return s;
}

}  // namespace nehari
