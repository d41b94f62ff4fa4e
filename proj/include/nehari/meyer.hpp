#pragma once

#include <utility>
#include <vector>

#include "nehari/dyadic.hpp"

namespace nehari {

// Smooth step with nu(t) + nu(1 - t) = 1 on [0,1].
double meyer_nu(double t);
// |w^(xi)|: supported on 2pi/3 <= |xi| <= 8pi/3.
double meyer_profile(double xi);
// w^(xi) = e^{-i xi/2} |w^(xi)|, so w is centered at 1/2.
cplx meyer_mother_hat(double xi);
// W^(xi) = -sum_{m>=1} w^(2^m xi), the low-pass partner with w^ = W^ - W^(./2).
cplx meyer_father_hat(double xi);

using SparseSpectrum = std::vector<std::pair<std::int64_t, cplx>>;

struct MeyerAtom {
    DyadicInterval interval;
    SparseSpectrum spectrum;  // nonzero modes of w_I
    SparseSpectrum father;    // nonzero modes of W_I
    Signal w, u, v, W;        // u = P_- w, v = P_+ w
};

enum class MeyerPart { full, analytic, antianalytic };

using RectCoefficients = std::vector<std::pair<DyadicRectangle, cplx>>;

// Periodized Meyer wavelets on the axis grid for 2^{-n+4} <= |I| <= 1.
class MeyerFamily {
public:
    explicit MeyerFamily(Grid grid);

    static constexpr int min_depth = 5;

    const Grid& grid() const { return grid_; }
    const Grid& axis_grid() const { return axis_; }
    int finest_level() const { return axis_.depth() - 4; }
    const std::vector<MeyerAtom>& atoms() const { return atoms_; }
    const MeyerAtom& atom(const DyadicInterval& I) const;
    std::size_t index_of(const DyadicInterval& I) const;

    const Signal& part_of(const MeyerAtom& a, MeyerPart part) const;
    // <f, phi_R> with phi = w, v or u, over all family rectangles (tensor in 2D).
    RectCoefficients analysis(const Signal& f, MeyerPart part = MeyerPart::full) const;
    Signal synthesis(const RectCoefficients& c, MeyerPart part = MeyerPart::full) const;

private:
    Grid grid_;
    Grid axis_;
    std::vector<MeyerAtom> atoms_;
};

// Exact sparse convolution of two spectra; used for band arithmetic.
SparseSpectrum spectrum_product(const SparseSpectrum& a, const SparseSpectrum& b);
SparseSpectrum spectrum_conj(const SparseSpectrum& a);

}  // namespace nehari
