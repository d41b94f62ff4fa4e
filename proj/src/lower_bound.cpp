#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "nehari/journe_lab.hpp"

namespace nehari {

namespace {

SparseSpectrum analytic_modes(const MeyerAtom& a) {
    SparseSpectrum out;
    for (const auto& e : a.spectrum)
        if (e.first > 0) out.push_back(e);
    return out;
}

// Window cells of an original dyadic interval: [-2,2) is read at scale k - 2.
DyadicInterval window_interval(const DyadicInterval& I) {
    return {I.scale - 2, I.position + (std::int64_t{1} << (1 - I.scale))};
}

bool window_covers(const CellMask& V, const DyadicRectangle& R) {
    return V.covers(DyadicRectangle(window_interval(R.side(0)), window_interval(R.side(1))));
}

Signal keep(const MeyerFamily& fam, const RectCoefficients& all, const std::vector<bool>& mask,
            const std::vector<double>& scale = {}) {
    RectCoefficients c;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (mask[i]) c.push_back({all[i].first, scale.empty() ? all[i].second : all[i].second * scale[i]});
    return fam.synthesis(c, MeyerPart::analytic);
}

std::map<DyadicRectangle, cplx> coefficient_map(const MeyerFamily& fam, const Signal& b) {
    std::map<DyadicRectangle, cplx> m;
    for (const auto& [R, c] : fam.analysis(b, MeyerPart::analytic)) m.emplace(R, c);
    return m;
}

double family_energy(const MeyerFamily& fam, const Signal& b, const std::vector<DyadicRectangle>& family) {
    const auto m = coefficient_map(fam, b);
    double s = 0;
    for (const auto& R : family) {
        const auto it = m.find(R);
        if (it == m.end()) throw ValidationError("rectangle is not in the Meyer family of the grid");
        s += std::norm(it->second);
    }
    return s;
}

struct Quadrants {
    double pp = 0, mm = 0, pm = 0, mp = 0;  // squared norms over strict sign quadrants
};

Quadrants quadrants(const Signal& g) {
    const Spectrum s = fourier(g);
    const auto N = g.grid().per_axis();
    Quadrants q;
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = 0; j < N; ++j) {
            const auto k0 = Spectrum::frequency(i, N), k1 = Spectrum::frequency(j, N);
            const double e = std::norm(s.modes()[static_cast<std::size_t>(i * N + j)]);
            if (k0 > 0 && k1 > 0) q.pp += e;
            if (k0 < 0 && k1 < 0) q.mm += e;
            if (k0 > 0 && k1 < 0) q.pm += e;
            if (k0 < 0 && k1 > 0) q.mp += e;
        }
    return q;
}

}  // namespace

HijReport hij_check(const MeyerFamily& fam) {
    if (fam.grid().dim() != 1) throw ValidationError("hij_check needs a 1D family");
    HijReport r;
    r.far_top_mode = std::numeric_limits<std::int64_t>::min();
    r.near_low_mode = std::numeric_limits<std::int64_t>::max();
    for (const auto& I : fam.atoms())
        for (const auto& J : fam.atoms()) {
            const double li = I.interval.length(), lj = J.interval.length();
            const bool far = 8 * lj < li, near = 8 * li < lj;
            if (!far && !near) continue;
            const auto p = spectrum_product(analytic_modes(I), spectrum_conj(analytic_modes(J)));
            for (const auto& [k, c] : p) {
                if (c == cplx(0)) continue;
                if (far) r.far_top_mode = std::max(r.far_top_mode, k);
                if (near) r.near_low_mode = std::min(r.near_low_mode, k);
            }
            (far ? r.far_pairs : r.near_pairs) += 1;
        }
    return r;
}

Signal normalize_for_family(const Signal& b, const std::vector<DyadicRectangle>& family) {
    const MeyerFamily fam(b.grid());
    const double e = family_energy(fam, b, family);
    if (e == 0) throw ValidationError("symbol has no energy on the collection");
    const double sh = RectangleCollection{b.grid(), family}.shadow().measure();
    return b * cplx(std::sqrt(sh / e));
}

LowerBoundReport lower_bound_experiment(const Signal& b, const std::vector<DyadicRectangle>& family,
                                        const LowerBoundParams& params) {
    const Grid& g = b.grid();
    if (g.dim() != 2) throw ValidationError("lower_bound_experiment needs d = 2");
    if (family.empty()) throw ValidationError("empty collection");
    const MeyerFamily fam(g);
    LowerBoundReport rep;
    rep.params = params;
    const CellMask sh = RectangleCollection{g, family}.shadow();
    rep.shadow_measure = sh.measure();
    const double energy = family_energy(fam, b, family);
    if (std::abs(energy - rep.shadow_measure) > 1e-9 * rep.shadow_measure)
        throw ValidationError("symbol is not normalized on the collection");

    const CellMask V = enlarged_set(sh);
    rep.V_measure = V.measure() * 16;
    rep.V_within_eta0 = rep.V_measure < (1 + params.eta0) * rep.shadow_measure;

    // Partition of the Meyer rectangles: U, inside V but not in U, the rest.
    const RectCoefficients all = fam.analysis(b, MeyerPart::analytic);
    const std::size_t K = all.size();
    std::vector<bool> inU(K), inNear(K);
    std::vector<double> emb(K, 0);
    auto& P = rep.parts;
    P.family = family;
    for (std::size_t i = 0; i < K; ++i) {
        const DyadicRectangle& R = all[i].first;
        inU[i] = std::find(family.begin(), family.end(), R) != family.end();
        inNear[i] = !inU[i] && window_covers(V, R);
        if (inU[i]) emb[i] = largest_dilation(R, V);
        ++(inU[i] ? P.in_family : inNear[i] ? P.near : P.rest);
    }
    P.alpha = keep(fam, all, inU);
    P.beta = keep(fam, all, inNear);
    P.gamma = b - P.alpha - P.beta;
    rep.additivity_defect = max_abs_diff(b, P.alpha + P.beta + P.gamma);

    std::vector<double> damp(K, 0);
    for (std::size_t i = 0; i < K; ++i)
        if (inU[i]) damp[i] = std::pow(emb[i], -4.0);
    P.alpha_tilde = keep(fam, all, inU, damp);

    // Chain for alpha.
    const Signal abs2 = P.alpha * P.alpha.conj();
    rep.h_b_alpha = norm2(hardy_projection(b * P.alpha.conj()));
    rep.p_abs2 = norm2(hardy_projection(abs2));
    rep.l4_squared = lp_norm(P.alpha, 4) * lp_norm(P.alpha, 4);
    rep.coefficient_l2 = std::sqrt(energy);
    Signal centred = abs2;
    const cplx mean = abs2.mean();
    for (auto& x : centred.samples()) x -= mean;
    rep.centered_abs2 = norm2(centred);
    rep.symmetry_ratio = rep.centered_abs2 > 0 ? rep.p_abs2 / rep.centered_abs2 : 0;
    rep.symmetry_bound_holds = rep.symmetry_ratio >= 0.5 - 1e-12;
    const Quadrants q = quadrants(abs2);
    rep.quadrant_defect = std::abs(std::sqrt(q.pp) - std::sqrt(q.mm)) + std::abs(std::sqrt(q.pm) - std::sqrt(q.mp));

    rep.h_beta_alpha = norm2(hardy_projection(P.beta * P.alpha.conj()));
    rep.beta_alpha_l4 = lp_norm(P.beta, 4) * lp_norm(P.alpha, 4);

    // Embeddedness slices of alpha.
    double top = 1;
    for (std::size_t i = 0; i < K; ++i)
        if (inU[i]) top = std::max(top, emb[i]);
    const int levels = static_cast<int>(std::floor(std::log2(top))) + 1;
    Signal sum(g);
    for (int n = 1; n <= levels; ++n) {
        std::vector<bool> in(K);
        SliceRow row{n, 0, 0, 0};
        for (std::size_t i = 0; i < K; ++i) {
            in[i] = inU[i] && emb[i] >= std::ldexp(1.0, n - 1) && emb[i] < std::ldexp(1.0, n);
            row.count += in[i];
        }
        P.slices.push_back(keep(fam, all, in));
        sum += P.slices.back();
        row.alpha_norm = norm2(P.slices.back());
        row.h_gamma_alpha = norm2(hardy_projection(P.gamma * P.slices.back().conj()));
        rep.slices.push_back(row);
    }
    rep.slice_defect = max_abs_diff(P.alpha, sum);

    rep.bmo_minus1_b = bmo_minus1(b, WaveletFamily::meyer).value;
    // Roundoff coefficients off the collection would only slow the greedy search.
    const CoefficientBook raw = meyer_book(P.alpha_tilde);
    const double peak = raw.weights.empty() ? 0 : *std::max_element(raw.weights.begin(), raw.weights.end());
    CoefficientBook book{g, {}, {}};
    for (std::size_t i = 0; i < raw.rects.size(); ++i)
        if (raw.weights[i] > 1e-26 * peak) book.add(raw.rects[i], raw.weights[i]);
    rep.alpha_tilde_bmo = bmo_product(book, BmoMode::heuristic).value;
    rep.hij = hij_check(MeyerFamily(Grid(g.depth(), 1)));
    return rep;
}

}  // namespace nehari
