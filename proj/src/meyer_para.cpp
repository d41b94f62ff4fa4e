#include <map>

#include "nehari/paraproducts.hpp"

namespace nehari {

namespace {

using ScalePair = std::array<int, 2>;

// Delta U on every scale pair (2D) or scale (1D, second entry 0).
std::map<ScalePair, Signal> delta_blocks(const MeyerFamily& fam, const Signal& f) {
    std::map<ScalePair, RectCoefficients> groups;
    for (const auto& rc : fam.analysis(f, MeyerPart::antianalytic)) {
        const auto& R = rc.first;
        groups[{R.side(0).scale, R.dim() > 1 ? R.side(1).scale : 0}].push_back(rc);
    }
    std::map<ScalePair, Signal> out;
    for (const auto& [key, c] : groups) out.emplace(key, fam.synthesis(c, MeyerPart::antianalytic));
    return out;
}

void accumulate_product(Signal& out, const Signal& a, const Signal& b) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a[i] * std::conj(b[i]);
}

}  // namespace

std::vector<Signal> meyer_delta_U(const MeyerFamily& fam, const Signal& f) {
    if (fam.grid().dim() != 1) throw ValidationError("meyer_delta_U needs a 1D family");
    auto blocks = delta_blocks(fam, f);
    std::vector<Signal> out;
    for (int l = 0; l <= fam.finest_level(); ++l) out.push_back(blocks.at({-l, 0}));
    return out;
}

Signal meyer_para_1d(const MeyerFamily& fam, const Signal& b, const Signal& phi, int offset, bool cumulative) {
    const auto db = meyer_delta_U(fam, b), dp = meyer_delta_U(fam, phi);
    const int L = fam.finest_level();
    // U at scale j collects levels 0 .. -j.
    std::vector<Signal> up;
    Signal run(fam.grid());
    for (int l = 0; l <= L; ++l) {
        run += dp[static_cast<std::size_t>(l)];
        up.push_back(run);
    }
    Signal out(fam.grid());
    for (int l = 0; l <= L; ++l) {
        const int lp = l - offset;  // level of scale j + offset
        if (lp < 0) continue;
        const int lc = std::min(lp, L);
        if (!cumulative && lp > L) continue;
        accumulate_product(out, db[static_cast<std::size_t>(l)],
                           cumulative ? up[static_cast<std::size_t>(lc)] : dp[static_cast<std::size_t>(lp)]);
    }
    return out;
}

Signal meyer_para_multi(const MeyerFamily& fam, const Signal& b, const Signal& phi, std::array<bool, 2> J,
                        std::array<int, 2> k) {
    if (fam.grid().dim() != 2) throw ValidationError("meyer_para_multi needs a 2D family");
    if (std::abs(k[0]) > 8 || std::abs(k[1]) > 8) throw ValidationError("offset must satisfy |k|_inf <= 8");
    const int L = fam.finest_level();
    const auto db = delta_blocks(fam, b), dp = delta_blocks(fam, phi);
    auto in_range = [&](int l) { return l >= 0 && l <= L; };
    Signal out(fam.grid());
    for (int l0 = 0; l0 <= L; ++l0)
        for (int l1 = 0; l1 <= L; ++l1) {
            const int t0 = l0 - k[0], t1 = l1 - k[1];
            // Levels admitted per axis: exactly t_s on J, every level <= t_s (coarser scales) off J.
            Signal second(fam.grid());
            bool any = false;
            for (int m0 = 0; m0 <= L; ++m0) {
                if (J[0] ? m0 != t0 : m0 > t0) continue;
                for (int m1 = 0; m1 <= L; ++m1) {
                    if (J[1] ? m1 != t1 : m1 > t1) continue;
                    second += dp.at({-m0, -m1});
                    any = true;
                }
            }
            if (!any || !in_range(l0) || !in_range(l1)) continue;
            accumulate_product(out, db.at({-l0, -l1}), second);
        }
    return out;
}

SeparatedRatio separated_para_ratio(const MeyerFamily& fam, int A, std::array<bool, 2> J, std::array<int, 2> k) {
    if (fam.grid().dim() != 2) throw ValidationError("separated_para_ratio needs a 2D family");
    if (A < 2) throw ValidationError("separation needs A >= 2");
    const int l = fam.finest_level();
    const std::int64_t count = std::int64_t{1} << l;
    if (2 * A > count) throw ResolutionError("grid too coarse for the requested separation");
    const DyadicInterval I{-l, 0}, T{-l, A};
    const Signal b = fam.synthesis({{DyadicRectangle(I, I), 1}}, MeyerPart::antianalytic);
    const Signal phi = fam.synthesis({{DyadicRectangle(T, T), 1}}, MeyerPart::antianalytic);
    const Signal out = meyer_para_multi(fam, b, phi, J, k);
    return {A, norm2(out) / (bmo_rect(b, WaveletFamily::meyer).value * norm2(phi))};
}

}  // namespace nehari
