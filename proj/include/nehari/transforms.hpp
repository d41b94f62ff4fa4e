#pragma once

#include <vector>

#include "nehari/dyadic.hpp"

namespace nehari {

// Normalized Fourier coefficients f^(k) = 2^{-nd} sum f(x) e^{-2 pi i k.x}, stored in
// the same layout as the samples with index = k mod N per axis.
class Spectrum {
public:
    explicit Spectrum(Grid grid);
    Spectrum(Grid grid, std::vector<cplx> modes);

    const Grid& grid() const { return grid_; }
    const std::vector<cplx>& modes() const { return modes_; }
    std::vector<cplx>& modes() { return modes_; }

    // Frequency for a storage index along one axis, in {-N/2+1, ..., N/2}.
    static std::int64_t frequency(std::int64_t index, std::int64_t N);
    static std::int64_t index(std::int64_t k, std::int64_t N);

    cplx& mode(std::int64_t k);
    cplx mode(std::int64_t k) const;
    cplx& mode(std::int64_t k0, std::int64_t k1);
    cplx mode(std::int64_t k0, std::int64_t k1) const;

private:
    Grid grid_;
    std::vector<cplx> modes_;
};

Spectrum fourier(const Signal& f);
Signal inverse_fourier(const Spectrum& s);

enum class Sign { plus, minus };

// Keeps k > 0 (plus) or k < 0 (minus) along axis; k = 0 goes to neither.
Signal analytic_projection(Sign sign, int axis, const Signal& f);
// P_sigma = tensor of per-axis projections; sigma.size() must equal d.
Signal product_projection(const std::vector<Sign>& sigma, const Signal& f);
// Keeps k >= 0 on every axis (H^2 with constants).
Signal hardy_projection(const Signal& f);
// Multiplier -i sgn(k) along axis.
Signal hilbert_transform(int axis, const Signal& f);

// Tensor Haar coefficients. Per axis, heap index 0 is the constant and 2^l + j is
// h^0 of [j 2^-l, (j+1) 2^-l). Entry (a, b) in 2D is <f, phi_a (x) phi_b>.
struct HaarCoefficients {
    Grid grid;
    std::vector<cplx> table;

    cplx mean() const { return table[0]; }
    cplx coefficient(const DyadicRectangle& R) const;
    // Rectangles carrying h^0 on every axis, in lexicographic order, with values.
    std::vector<std::pair<DyadicRectangle, cplx>> wavelets() const;
    // Sum of |c|^2 over the whole table.
    double energy() const;
};

std::int64_t heap_index(const DyadicInterval& I);
DyadicInterval heap_interval(std::int64_t h);

HaarCoefficients haar_analysis(const Signal& f);
Signal haar_synthesis(const HaarCoefficients& c);

Signal dyadic_maximal(const Signal& f);
Signal strong_maximal(const Signal& f);

enum class WaveletFamily { haar, meyer };

Signal square_function(const Signal& f, WaveletFamily family);

}  // namespace nehari
