#pragma once

#include <array>
#include <string>
#include <vector>

#include "nehari/meyer.hpp"
#include "nehari/norms.hpp"

namespace nehari {

// psi (x) phi acts as f -> psi <f, phi>, with <f, phi> = integral of f conj(phi).
CMatrix rank_one(const Signal& psi, const Signal& phi);

struct RankOneTerm {
    cplx coefficient;
    Signal psi;
    Signal phi;
};

struct ParaproductPiece {
    std::string label;
    std::vector<RankOneTerm> terms;

    CMatrix matrix(const Grid& grid) const;
};

struct ParaproductPieces {
    Grid grid;
    std::vector<ParaproductPiece> pieces;

    CMatrix total() const;
};

// sum_I (<b, h_I> / sqrt|I|) <f, h^1_I> h_I.
Signal para_haar(const Signal& b, const Signal& f);
// Matrix of f -> para_haar(b, f) on grid cells.
CMatrix para_haar_matrix(const Signal& b);

struct ParaNorm {
    double norm = 0;
    double bmo = 0;
    double ratio = 0;
    bool skipped = false;  // b = 0
};

ParaNorm para_norm_ratio(const Signal& b);

// G f = sum_I <f, h_I> g_I over I with resolvable children.
Signal dyadic_shift_G(const Signal& f);
CMatrix dyadic_shift_matrix(const Grid& grid);
// G_left = sum_J h_{J_left} (x) h_J.
CMatrix g_left_matrix(const Grid& grid);

// [M_b, G_left] on grid cells.
CMatrix commutator_Gleft(const Signal& b);

struct DecompositionReport {
    ParaproductPieces pieces;
    double residual = 0;                // max entry of sum(pieces) - [M_b, G_left]
    double printed_table_residual = 0;  // same with the constants of the printed case table
};

// Expands [M_b, G_left] = sum_{I,J} <b, h_I> [M_{h_I}, h_{J_left} (x) h_J] case by case.
DecompositionReport decompose_commutator_Gleft(const Signal& b);

}  // namespace nehari

namespace nehari {

// Signals on [0,1) are read as functions on the line vanishing outside [0,1); outputs are
// cell averages on [0,1).
enum class TranslationMeasure { logarithmic, uniform };  // dy/y from the grid step, or dy/Y

struct PetermichlParams {
    double Y = 8;
    int s_steps = 64;
    int y_steps = 64;
    TranslationMeasure measure = TranslationMeasure::uniform;
    int coarsest_scale = 6;  // dyadic lengths up to 2^coarsest_scale before dilation
};

// Average of Tr_{-y} Dil_{1/s} G Dil_s Tr_y over y in [0, Y) and s in [1, 2] (ds/s), by the
// midpoint rule; every shifted dyadic interval is integrated exactly against the cells.
Signal petermichl_apply(const Signal& f, const PetermichlParams& params = {});

// Cell averages of the Hilbert transform on the line, (1/pi) p.v. int f(t) / (x - t) dt.
Signal line_hilbert(const Signal& f);
CMatrix line_hilbert_matrix(const Grid& grid);

struct PetermichlFit {
    cplx c = 0;                 // least-squares multiple of H
    double relative_error = 0;  // ||avg - c H|| / ||c H||
};

PetermichlFit petermichl_fit(const Signal& f, const PetermichlParams& params = {});

struct PetermichlMatrix {
    OperatorMatrix average;
    PetermichlFit fit;  // over all matrix entries
};

PetermichlMatrix petermichl_average(const Grid& grid, const PetermichlParams& params = {});

}  // namespace nehari

namespace nehari {

// Scales are indexed by j with |I| = 2^j, so j runs from -finest_level() up to 0.
// Delta U_j f = sum_{|I| = 2^j} <f, u_I> u_I with u the antianalytic part of the Meyer wavelet.
std::vector<Signal> meyer_delta_U(const MeyerFamily& fam, const Signal& f);  // entry i is scale j = -i

// sum_j (Delta U_j b) conj(U_{j+offset} phi) with U_j = sum_{k >= j} Delta U_k; with
// cumulative = false the second factor is Delta U_{j+offset} phi.
Signal meyer_para_1d(const MeyerFamily& fam, const Signal& b, const Signal& phi, int offset = 0, bool cumulative = true);

// d = 2: sum_j (Delta U_j b) conj(U_{j+k, J} phi). Axes in J take the exact scale j_s + k_s,
// the others every scale >= j_s + k_s.
Signal meyer_para_multi(const MeyerFamily& fam, const Signal& b, const Signal& phi, std::array<bool, 2> J,
                        std::array<int, 2> k);

struct SeparatedRatio {
    int A = 0;
    double ratio = 0;  // ||output|| / (bmo_rect(b) ||phi||)
};

// b = u_{R'} with R' = I x I at the finest family scale and phi = u_R with R the translate of R'
// by A |I| along both axes, so A R misses R'.
SeparatedRatio separated_para_ratio(const MeyerFamily& fam, int A, std::array<bool, 2> J, std::array<int, 2> k);

}  // namespace nehari
