#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nehari/dyadic.hpp"
#include "nehari/meyer.hpp"
#include "nehari/transforms.hpp"

namespace nehari {

enum class BasisKind { fourier_modes, grid_cells, wavelet_indices, generic };

struct Basis {
    BasisKind kind = BasisKind::generic;
    std::int64_t size = 0;
    std::string label;

    bool operator==(const Basis&) const = default;
};

struct OperatorMatrix {
    CMatrix entries;
    Basis domain;
    Basis codomain;

    OperatorMatrix adjoint() const;
};

OperatorMatrix make_operator(CMatrix entries, BasisKind kind = BasisKind::generic, const std::string& label = "");
// a * b, defined when a.domain == b.codomain.
OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);

enum class NormMethod { automatic, dense, power };

struct NormOptions {
    NormMethod method = NormMethod::automatic;
    double tolerance = 1e-10;
    int max_iterations = 10000;
    Eigen::Index dense_limit = 4096;
    std::uint64_t seed = 0x5eed;
};

double operator_norm(const CMatrix& a, const NormOptions& opt = {});
double operator_norm(const OperatorMatrix& a, const NormOptions& opt = {});

double lp_norm(const Signal& f, double p);

// Squared wavelet coefficients |<b, w_R>|^2 for the rectangles where they are nonzero.
struct CoefficientBook {
    Grid grid;
    std::vector<DyadicRectangle> rects;
    std::vector<double> weights;

    void add(const DyadicRectangle& R, double w);
    CoefficientBook swapped() const;  // exchange the two axes (d = 2)
};

CoefficientBook haar_book(const Signal& b);
CoefficientBook meyer_book(const Signal& b, MeyerPart part = MeyerPart::full);
CoefficientBook book_for(const Signal& b, WaveletFamily family);

enum class Exactness { exact, lower_bound };
enum class BmoMode { exact, heuristic };

struct BmoReport {
    double value = 0;
    std::vector<DyadicRectangle> witness;  // rectangles whose union is the maximizing set
    std::optional<CellMask> witness_mask;
    Exactness exactness = Exactness::exact;
};

// (|U|^{-1} sum_{R in book, R inside U} w_R)^{1/2}.
double bmo_form(const CoefficientBook& book, const CellMask& U);
// Same with the sum restricted to listed rectangles and U = their shadow.
double bmo_form_members(const CoefficientBook& book, const std::vector<DyadicRectangle>& members);

BmoReport bmo_dyadic(const Signal& b, WaveletFamily family = WaveletFamily::haar);
BmoReport bmo_dyadic(const CoefficientBook& book);
// Mean of bmo_dyadic over 8 circular shifts by multiples of ceil(N/3) cells.
double bmo_dyadic_shift_average(const Signal& b, int shifts = 8);

// Largest subset enumeration allowed by exact product BMO.
inline constexpr std::size_t exact_bmo_limit = 20;

BmoReport bmo_product(const Signal& b, BmoMode mode = BmoMode::exact, WaveletFamily family = WaveletFamily::haar);
BmoReport bmo_product(const CoefficientBook& book, BmoMode mode = BmoMode::exact);
BmoReport bmo_rect(const Signal& b, WaveletFamily family = WaveletFamily::haar);
BmoReport bmo_rect(const CoefficientBook& book);
BmoReport bmo_minus1(const Signal& b, WaveletFamily family = WaveletFamily::haar);
BmoReport bmo_minus1(const CoefficientBook& book);

}  // namespace nehari
