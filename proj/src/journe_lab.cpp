#include "nehari/journe_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nehari/transforms.hpp"

namespace nehari {

namespace {

void require_plane(const Grid& g, const char* what) {
    if (g.dim() != 2) throw ValidationError(std::string(what) + " needs d = 2");
}

std::size_t table_index(const Grid& g, const DyadicRectangle& R) {
    return static_cast<std::size_t>(heap_index(R.side(0)) * g.per_axis() + heap_index(R.side(1)));
}

// Squared coefficient with transform roundoff dropped, so exact enumeration sees the true support.
double weight_of(const HaarCoefficients& c, std::size_t i, double scale) {
    const double w = std::norm(c.table[i]);
    return w > 1e-26 * scale ? w : 0;
}

double peak_energy(const HaarCoefficients& c) {
    double m = 0;
    for (std::size_t i = 1; i < c.table.size(); ++i) m = std::max(m, std::norm(c.table[i]));
    return m;
}

CellMask level_set(const CellMask& m) {
    Signal ind(m.grid);
    for (std::size_t i = 0; i < ind.size(); ++i) ind[i] = m.cells[i];
    const Signal M = strong_maximal(ind);
    CellMask out(m.grid);
    for (std::size_t i = 0; i < M.size(); ++i) out.cells[i] = M[i].real() > 0.5;
    return out;
}

// Original-unit measure of a window mask.
double window_measure(const CellMask& V) { return V.measure() * 16; }

}  // namespace

Grid embedding_window(const Grid& grid) {
    require_plane(grid, "embedding_window");
    return Grid(grid.depth() + 2, 2);
}

CellMask to_window(const CellMask& U) {
    const Grid w = embedding_window(U.grid);
    const auto N = U.grid.per_axis(), W = w.per_axis();
    CellMask out(w);
    for (std::int64_t a = 0; a < N; ++a)
        for (std::int64_t b = 0; b < N; ++b)
            if (U.cells[static_cast<std::size_t>(a * N + b)]) out.cells[static_cast<std::size_t>((a + 2 * N) * W + b + 2 * N)] = 1;
    return out;
}

CellMask enlarged_set(const CellMask& U) { return level_set(level_set(to_window(U))); }

double largest_dilation(const DyadicRectangle& R, const CellMask& V) {
    require_plane(V.grid, "largest_dilation");
    const auto W = V.grid.per_axis();
    const double h = 4.0 / static_cast<double>(W);
    const double c[2] = {R.side(0).center(), R.side(1).center()};
    const double w[2] = {R.side(0).length(), R.side(1).length()};
    // Everything beyond the window counts as outside V.
    double mu = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 2; ++s) mu = std::min(mu, 2 * std::min(c[s] + 2, 2 - c[s]) / w[s]);
    for (std::int64_t a = 0; a < W; ++a)
        for (std::int64_t b = 0; b < W; ++b) {
            if (V.cells[static_cast<std::size_t>(a * W + b)]) continue;
            const double lo[2] = {-2 + static_cast<double>(a) * h, -2 + static_cast<double>(b) * h};
            double need = 0;
            for (int s = 0; s < 2; ++s) {
                const double dist = std::max({0.0, lo[s] - c[s], c[s] - lo[s] - h});
                need = std::max(need, 2 * dist / w[s]);
            }
            mu = std::min(mu, need);
        }
    return std::max(mu, 1.0);
}

double embeddedness(const DyadicRectangle& R, const CellMask& U) {
    require_plane(U.grid, "embeddedness");
    if (!U.covers(R)) throw ValidationError("embeddedness needs R inside U");
    return largest_dilation(R, enlarged_set(U));
}

EmbeddingReport embedding_report(const CellMask& U) {
    require_plane(U.grid, "embedding_report");
    EmbeddingReport rep{enlarged_set(U), {}, U.measure(), 0};
    rep.V_measure = window_measure(rep.V);
    for (const auto& R : enumerate_rectangles(U.grid, 2 * U.grid.step()))
        if (U.covers(R)) rep.emb.emplace(R, largest_dilation(R, rep.V));
    return rep;
}

Signal damped_projection(const Signal& f, const EmbeddingReport& emb, double eps) {
    require_plane(f.grid(), "damped_projection");
    const HaarCoefficients c = haar_analysis(f);
    HaarCoefficients out{f.grid(), std::vector<cplx>(c.table.size(), 0)};
    for (const auto& [R, e] : emb.emb) {
        const auto i = table_index(f.grid(), R);
        out.table[i] = c.table[i] * std::pow(e, -eps);
    }
    return haar_synthesis(out);
}

DampedCheck journe_damped_check(const Signal& f, const CellMask& U, double eps) {
    require_plane(f.grid(), "journe_damped_check");
    if (U.grid != f.grid()) throw ValidationError("mask and signal grids differ");
    const EmbeddingReport emb = embedding_report(U);
    const HaarCoefficients c = haar_analysis(f);
    const double scale = peak_energy(c);
    // The book is filled from the damped coefficients directly; resynthesis would only add roundoff.
    CoefficientBook book{f.grid(), {}, {}};
    for (const auto& [R, e] : emb.emb) book.add(R, weight_of(c, table_index(f.grid(), R), scale) * std::pow(e, -2 * eps));
    DampedCheck out;
    out.lhs_bmo = bmo_product(book, BmoMode::exact).value;
    out.rhs_rect_bmo = bmo_rect(f).value;
    out.ratio = out.rhs_rect_bmo > 0 ? out.lhs_bmo / out.rhs_rect_bmo : 0;
    return out;
}

JourneViolation::JourneViolation(std::vector<DyadicRectangle> offenders, double v, double b)
    : ValidationError("candidate (V, Emb) violates the embedding conditions"),
      dilation_offenders(std::move(offenders)),
      V_measure(v),
      bound(b) {}

JourneD1Report journe_inequality_checker_d1(const Signal& f, const std::vector<DyadicRectangle>& family,
                                            const CellMask& V, const std::map<DyadicRectangle, double>& emb,
                                            double eta) {
    const Grid& g = f.grid();
    require_plane(g, "journe_inequality_checker_d1");
    if (V.grid != embedding_window(g)) throw ValidationError("V must live on the embedding window");
    JourneD1Report rep;
    rep.shadow_measure = RectangleCollection{g, family}.shadow().measure();
    rep.V_measure = window_measure(V);
    std::vector<DyadicRectangle> offenders;
    for (const auto& R : family) {
        const auto it = emb.find(R);
        if (it == emb.end()) throw ValidationError("Emb missing for a family rectangle");
        if (largest_dilation(R, V) < it->second * (1 - 1e-12)) offenders.push_back(R);
    }
    // The bound is taken as <= so that V = sh with eta = 0 passes.
    const double bound = (1 + eta) * rep.shadow_measure;
    if (!offenders.empty() || rep.V_measure > bound * (1 + 1e-12)) throw JourneViolation(offenders, rep.V_measure, bound);

    const HaarCoefficients c = haar_analysis(f);
    const double scale = peak_energy(c);
    CoefficientBook book{g, {}, {}};
    for (const auto& R : family) book.add(R, weight_of(c, table_index(g, R), scale) * std::pow(emb.at(R), -8.0));
    rep.lhs = bmo_product(book, BmoMode::exact).value;
    rep.rhs = bmo_minus1(f).value;
    rep.K = rep.rhs > 0 ? rep.lhs / rep.rhs : 0;
    return rep;
}

CarlesonSymbol carleson_family(int n, std::uint64_t seed, CarlesonLayout layout) {
    if (n < 0) throw ValidationError("carleson_family needs n >= 0");
    const Grid g(layout == CarlesonLayout::star ? n + 2 : n + 1, 2);
    std::mt19937_64 rng(seed);
    auto sign = [&] { return (rng() & 1) ? 1.0 : -1.0; };
    CarlesonSymbol out{Signal(g), CoefficientBook{g, {}, {}}, {}};
    HaarCoefficients table{g, std::vector<cplx>(static_cast<std::size_t>(g.size()), 0)};
    auto put = [&](const DyadicRectangle& R, double w) {
        out.rectangles.push_back(R);
        out.book.add(R, w * w);
        table.table[table_index(g, R)] = w;
    };
    for (int a = 0; a <= n; ++a) {
        if (layout == CarlesonLayout::staircase) {
            put(DyadicRectangle({-a, 0}, {a - n, 0}), sign() * std::sqrt(std::ldexp(1.0, -n)));
            continue;
        }
        if (layout == CarlesonLayout::star) {
            // Sides 2^{-a-1} and 2^{a-n-1} with a corner at the centre.
            const std::int64_t px = std::int64_t{1} << a, py = std::int64_t{1} << (n - a);
            for (std::int64_t qx = 0; qx < 2; ++qx)
                for (std::int64_t qy = 0; qy < 2; ++qy)
                    put(DyadicRectangle({-a - 1, px - 1 + qx}, {a - n - 1, py - 1 + qy}), sign() * std::sqrt(std::ldexp(1.0, -n - 2)));
            continue;
        }
        for (std::int64_t p = 0; p < (std::int64_t{1} << a); ++p)
            for (std::int64_t q = 0; q < (std::int64_t{1} << (n - a)); ++q) put(DyadicRectangle({-a, p}, {a - n, q}), sign());
    }
    out.b = haar_synthesis(table);
    return out;
}

CarlesonRatio carleson_ratio(int n, std::uint64_t seed, BmoMode mode, CarlesonLayout layout) {
    const CarlesonSymbol c = carleson_family(n, seed, layout);
    const BmoReport p = bmo_product(c.book, mode);
    CarlesonRatio r{n, p.value, bmo_rect(c.book).value, 0, p.exactness};
    r.ratio = r.rect > 0 ? r.product / r.rect : 0;
    return r;
}

std::vector<JourneMember> journe_members(const CarlesonSymbol& star, int n, bool symmetric) {
    if (star.rectangles.size() != 4 * static_cast<std::size_t>(n + 1)) throw ValidationError("expected the star layout at this n");
    std::vector<JourneMember> out;
    // Rectangles come four per level, quadrant-minor.
    for (std::uint32_t S = 1; S < (1u << (n + 1)); ++S)
        for (std::uint32_t Q = symmetric ? 15 : 1; Q < 16; ++Q) {
            JourneMember m{S, Q, {}};
            for (std::size_t i = 0; i < star.rectangles.size(); ++i)
                if ((S >> (i / 4)) & (Q >> (i % 4)) & 1) m.rectangles.push_back(star.rectangles[i]);
            out.push_back(std::move(m));
        }
    return out;
}

JourneFamilyStudy journe_family_study(int n, std::uint64_t seed, double eps, bool symmetric) {
    const CarlesonSymbol c = carleson_family(n, seed, CarlesonLayout::star);
    JourneFamilyStudy out;
    for (const auto& m : journe_members(c, n, symmetric))
        out.damped.push_back(journe_damped_check(c.b, RectangleCollection{c.b.grid(), m.rectangles}.shadow(), eps).ratio);
    std::vector<double> sorted = out.damped;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    out.max = sorted.back();
    out.median = m % 2 ? sorted[m / 2] : (sorted[m / 2 - 1] + sorted[m / 2]) / 2;
    out.undamped = carleson_ratio(n, seed, BmoMode::exact, CarlesonLayout::star).ratio;
    return out;
}

}  // namespace nehari
