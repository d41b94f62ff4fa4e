#pragma once

#include <vector>

#include "nehari/hankel.hpp"

namespace nehari {

// U = [[X, C], [A, B]] with X unknown of shape C.rows() x A.cols().
struct BlockProblem {
    CMatrix A;  // lower-left
    CMatrix B;  // lower-right
    CMatrix C;  // upper-right
};

struct ParrottOptions {
    double tolerance = 1e-9;  // relative width of the final golden-section bracket
    int max_iterations = 200;  // per one-dimensional search
};

struct ParrottResult {
    CMatrix X;
    double achieved_norm = 0;
    double closed_form = 0;    // max(||[A B]||, ||[C; B]||)
    double printed_bound = 0;  // max(||A||, ||B||, ||C||)
};

CMatrix assemble(const BlockProblem& p, const CMatrix& X);

// Fills X one entry at a time, bottom row first and right to left; each entry is a scalar
// convex minimization solved by nested golden-section search over its real and imaginary parts.
ParrottResult parrott_min(const BlockProblem& p, const ParrottOptions& opt = {});

// Prepends a_{first-1} chosen by parrott_min; entries beyond the stored sequence are zero.
HankelOp extend_hankel_step(const HankelOp& H, const ParrottOptions& opt = {});

struct BoundedSymbol {
    IndexedSequence coefficients;  // a_k for k = first .. last
    Signal beta;                   // sum a_k e^{2 pi i k x} on a circle grid
    double sup_norm = 0;
    double hankel_norm = 0;
    std::vector<double> ratio_by_step;  // sup_norm / hankel_norm after 0..K steps
};

// sup |sum a_k e^{2 pi i k x}| by dense sampling and local golden-section refinement.
double trig_sup_norm(const IndexedSequence& a);

BoundedSymbol recover_bounded_symbol(const HankelOp& H, int steps, const ParrottOptions& opt = {});

}  // namespace nehari
