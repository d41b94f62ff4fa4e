#pragma once

#include <vector>

#include "nehari/norms.hpp"

namespace nehari {

// alpha_k for k = first, first+1, ...; zero outside the stored range.
struct IndexedSequence {
    std::int64_t first = 0;
    std::vector<cplx> values;

    cplx at(std::int64_t k) const;
    std::int64_t last() const { return first + static_cast<std::int64_t>(values.size()) - 1; }
};

// Analytic coefficients b^(k), 0 <= k_i < degree, row-major in 2D.
struct SymbolCoefficients {
    int dim = 1;
    std::int64_t degree = 0;
    std::vector<cplx> values;

    static SymbolCoefficients one_d(std::vector<cplx> v);
    static SymbolCoefficients two_d(std::int64_t degree, std::vector<cplx> v);

    cplx at(std::int64_t k) const;
    cplx at(std::int64_t k0, std::int64_t k1) const;
    // sum b^(k) e^{2 pi i k.x} sampled on the grid (aliases if the grid is too coarse).
    Signal to_signal(const Grid& grid) const;
};

enum class HankelFlavor { matrix, operator_h2, little_product };

struct HankelOp {
    OperatorMatrix matrix;
    HankelFlavor flavor = HankelFlavor::matrix;
    IndexedSequence sequence;  // 1D flavors only
};

// h_ij = alpha_{i+j} and t_ij = alpha_{i-j}, 0 <= i,j < M.
HankelOp hankel_matrix(const IndexedSequence& alpha, std::int64_t M);
OperatorMatrix toeplitz_matrix(const IndexedSequence& alpha, std::int64_t M);

// ||H S - S* H|| over the interior block (last row and column dropped).
double check_intertwining(const CMatrix& H);

// Smallest depth n with 2^n >= 4 M.
int depth_for_degree(std::int64_t M);

// Matrix of phi -> P_{k>=0}(b conj(phi)) on modes 0..M-1, computed on the grid of b.
// Needs 2^n >= 4M so products do not alias into the retained modes.
HankelOp hankel_operator_1d(const Signal& b, std::int64_t M);
HankelOp hankel_operator_1d(const SymbolCoefficients& b);

// Little Hankel phi -> P_{k1,k2>=0}(b conj(phi)) on bi-modes [0,M)^2, index i0*M + i1.
HankelOp little_hankel(const Signal& b, std::int64_t M);
// Entry formula b^(i+j) per axis; no grid involved.
HankelOp little_hankel(const SymbolCoefficients& b);

// Multiplier window: modes [-M, M]^d in lexicographic order.
std::vector<std::vector<std::int64_t>> mode_window(int dim, std::int64_t M);
// M_b on the window: entry (k, l) = b^(k - l), read from the spectrum of b.
CMatrix multiplication_matrix(const Signal& b, std::int64_t M);
// Diagonal -i sgn(k_axis) on the window.
CMatrix hilbert_matrix(int dim, int axis, std::int64_t M);
// Iterated commutator [...[M_b, H_a1], ..., H_ak] on the window.
OperatorMatrix commutator_matrix(const Signal& b, const std::vector<int>& axes, std::int64_t M);

struct BlockIdentityReport {
    double product_identity_defect = 0;  // C P_s = prod_j (-i s_j - H_j) M_b P_s for every sign pattern s
    double block_defect = 0;             // P_{-s} C P_s = (-2i)^d prod(s_j) P_{-s} M_b P_s, other nonzero-mode blocks 0
    double printed_table_residual = 0;   // d = 1 four-block table with its alternative factor and phase
};

BlockIdentityReport block_identity_check(const Signal& b, std::int64_t M);

enum class BmoVariant { dyadic, dyadic_shifted, meyer, product_exact, product_heuristic };

struct NehariRatio {
    double hankel_norm = 0;
    double bmo_value = 0;
    double ratio = 0;
    Exactness exactness = Exactness::exact;
};

// ||H_b|| against the BMO norm of the analytic part sampled on a depth-n grid.
NehariRatio nehari_ratio(const SymbolCoefficients& b, BmoVariant variant, int depth);

}  // namespace nehari
