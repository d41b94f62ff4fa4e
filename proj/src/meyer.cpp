#include "nehari/meyer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "nehari/transforms.hpp"

namespace nehari {

using std::numbers::pi;

double meyer_nu(double t) {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    return t * t * t * t * (35 - 84 * t + 70 * t * t - 20 * t * t * t);
}

double meyer_profile(double xi) {
    const double a = std::abs(xi);
    if (a < 2 * pi / 3 || a > 8 * pi / 3) return 0;
    if (a <= 4 * pi / 3) return std::sin(pi / 2 * meyer_nu(3 * a / (2 * pi) - 1));
    return std::cos(pi / 2 * meyer_nu(3 * a / (4 * pi) - 1));
}

cplx meyer_mother_hat(double xi) {
    const double p = meyer_profile(xi);
    if (p == 0) return 0;
    return p * std::polar(1.0, -xi / 2);
}

cplx meyer_father_hat(double xi) {
    cplx s = 0;
    if (xi == 0) return s;
    double x = 2 * xi;
    // Terms vanish once 2^m |xi| leaves the band from above.
    while (std::abs(x) <= 8 * pi / 3) {
        s -= meyer_mother_hat(x);
        x *= 2;
    }
    return s;
}

namespace {

Signal from_sparse(const SparseSpectrum& sp, const Grid& g) {
    Spectrum s(g);
    for (const auto& [k, c] : sp) s.mode(k) = c;
    return inverse_fourier(s);
}

}  // namespace

MeyerFamily::MeyerFamily(Grid grid) : grid_(grid), axis_(grid.depth(), 1) {
    if (grid.depth() < min_depth) throw ResolutionError("Meyer family needs grid depth >= 5");
    if (grid.dim() > 2) throw ValidationError("Meyer family supports d <= 2");
    for (int l = 0; l <= finest_level(); ++l) {
        const double L = std::ldexp(1.0, l);
        const std::int64_t kmax = static_cast<std::int64_t>(std::floor(4 * L / 3)) + 1;
        for (std::int64_t j = 0; j < (std::int64_t{1} << l); ++j) {
            SparseSpectrum spectrum, father;
            const double amp = 1 / std::sqrt(L);
            for (std::int64_t k = -kmax; k <= kmax; ++k) {
                if (k == 0) continue;
                const double xi = 2 * pi * static_cast<double>(k) / L;
                const double p = meyer_profile(xi);
                if (p != 0) {
                    const double phase = -2 * pi * static_cast<double>(k) * (static_cast<double>(j) + 0.5) / L;
                    spectrum.push_back({k, amp * p * std::polar(1.0, phase)});
                }
                const cplx fh = meyer_father_hat(xi);
                if (fh != 0.0) {
                    const double phase = -2 * pi * static_cast<double>(k) * static_cast<double>(j) / L;
                    father.push_back({k, amp * fh * std::polar(1.0, phase)});
                }
            }
            SparseSpectrum pos, neg;
            for (const auto& e : spectrum) (e.first > 0 ? pos : neg).push_back(e);
            Signal w = from_sparse(spectrum, axis_), u = from_sparse(neg, axis_), v = from_sparse(pos, axis_),
                   W = from_sparse(father, axis_);
            atoms_.push_back(MeyerAtom{DyadicInterval{-l, j}, std::move(spectrum), std::move(father), std::move(w),
                                       std::move(u), std::move(v), std::move(W)});
        }
    }
}

std::size_t MeyerFamily::index_of(const DyadicInterval& I) const {
    const int l = -I.scale;
    if (l < 0 || l > finest_level() || !I.inside_unit()) throw ResolutionError("interval outside the Meyer family");
    return static_cast<std::size_t>((std::int64_t{1} << l) - 1 + I.position);
}

const MeyerAtom& MeyerFamily::atom(const DyadicInterval& I) const { return atoms_[index_of(I)]; }

const Signal& MeyerFamily::part_of(const MeyerAtom& a, MeyerPart part) const {
    switch (part) {
        case MeyerPart::analytic: return a.v;
        case MeyerPart::antianalytic: return a.u;
        default: return a.w;
    }
}

RectCoefficients MeyerFamily::analysis(const Signal& f, MeyerPart part) const {
    if (!(f.grid() == grid_)) throw ValidationError("signal grid does not match the family");
    const auto N = axis_.per_axis();
    const auto K = static_cast<Eigen::Index>(atoms_.size());
    CMatrix A(K, N);
    for (Eigen::Index a = 0; a < K; ++a) {
        const Signal& s = part_of(atoms_[a], part);
        for (std::int64_t x = 0; x < N; ++x) A(a, x) = std::conj(s[x]) / static_cast<double>(N);
    }
    RectCoefficients out;
    if (grid_.dim() == 1) {
        CVector F(N);
        for (std::int64_t x = 0; x < N; ++x) F(x) = f[x];
        const CVector c = A * F;
        for (Eigen::Index a = 0; a < K; ++a) out.push_back({DyadicRectangle({atoms_[a].interval}), c(a)});
    } else {
        CMatrix F(N, N);
        for (std::int64_t x = 0; x < N; ++x)
            for (std::int64_t y = 0; y < N; ++y) F(x, y) = f.at(x, y);
        const CMatrix C = A * F * A.transpose();
        for (Eigen::Index a = 0; a < K; ++a)
            for (Eigen::Index b = 0; b < K; ++b)
                out.push_back({DyadicRectangle(atoms_[a].interval, atoms_[b].interval), C(a, b)});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

Signal MeyerFamily::synthesis(const RectCoefficients& c, MeyerPart part) const {
    Signal f(grid_);
    const auto N = axis_.per_axis();
    for (const auto& [R, v] : c) {
        if (v == 0.0) continue;
        if (grid_.dim() == 1) {
            const Signal& s = part_of(atom(R.side(0)), part);
            for (std::int64_t x = 0; x < N; ++x) f[x] += v * s[x];
        } else {
            const Signal& s = part_of(atom(R.side(0)), part);
            const Signal& t = part_of(atom(R.side(1)), part);
            for (std::int64_t x = 0; x < N; ++x) {
                const cplx sx = v * s[x];
                if (sx == 0.0) continue;
                for (std::int64_t y = 0; y < N; ++y) f.at(x, y) += sx * t[y];
            }
        }
    }
    return f;
}

SparseSpectrum spectrum_product(const SparseSpectrum& a, const SparseSpectrum& b) {
    std::map<std::int64_t, cplx> acc;
    for (const auto& [k, x] : a)
        for (const auto& [l, y] : b) acc[k + l] += x * y;
    SparseSpectrum out;
    for (const auto& [k, v] : acc)
        if (v != 0.0) out.push_back({k, v});
    return out;
}

SparseSpectrum spectrum_conj(const SparseSpectrum& a) {
    SparseSpectrum out;
    for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back({-it->first, std::conj(it->second)});
    return out;
}

}  // namespace nehari
