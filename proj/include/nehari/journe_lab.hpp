#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "nehari/meyer.hpp"
#include "nehari/norms.hpp"

namespace nehari {

// Embeddedness lives on a non-periodic window [-2,2)^2 at depth n + 2, so [0,1)^2 is the
// block of window cells starting at 2N along both axes and stays dyadic.
Grid embedding_window(const Grid& grid);
CellMask to_window(const CellMask& U);
// {MM 1_{MM 1_U > 1/2} > 1/2} with strict thresholds, on the window.
CellMask enlarged_set(const CellMask& U);

// sup{mu : the mu-dilate of R about its center meets no cell outside V}, clamped below at 1.
// R is in [0,1)^2 units; V is a window mask.
double largest_dilation(const DyadicRectangle& R, const CellMask& V);
double embeddedness(const DyadicRectangle& R, const CellMask& U);

struct EmbeddingReport {
    CellMask V;  // window mask
    std::map<DyadicRectangle, double> emb;
    double U_measure = 0;
    double V_measure = 0;  // in [0,1)^2 units
};

// Emb(R; U) for every Haar-resolvable dyadic R inside U.
EmbeddingReport embedding_report(const CellMask& U);

// Haar coefficient table of f restricted to rectangles inside U, each scaled by Emb^{-eps}.
Signal damped_projection(const Signal& f, const EmbeddingReport& emb, double eps);

struct DampedCheck {
    double lhs_bmo = 0;       // exact product BMO of the damped projection
    double rhs_rect_bmo = 0;  // bmo_rect(f)
    double ratio = 0;         // 0 when f has no rectangular BMO
};

DampedCheck journe_damped_check(const Signal& f, const CellMask& U, double eps);

// The d-1 inequality check over a supplied candidate (V, Emb).
struct JourneViolation : ValidationError {
    std::vector<DyadicRectangle> dilation_offenders;  // Emb(R) R not inside V
    double V_measure = 0;
    double bound = 0;  // (1 + eta) |sh|
    JourneViolation(std::vector<DyadicRectangle> offenders, double v, double b);
};

struct JourneD1Report {
    double shadow_measure = 0;
    double V_measure = 0;
    double lhs = 0;  // product BMO of sum_{R in family} Emb(R)^{-2d} <f, w_R> w_R
    double rhs = 0;  // bmo_minus1(f)
    double K = 0;    // lhs / rhs
};

// Throws JourneViolation when a dilate leaves V or |V| > (1 + eta)|sh|.
JourneD1Report journe_inequality_checker_d1(const Signal& f, const std::vector<DyadicRectangle>& family,
                                            const CellMask& V, const std::map<DyadicRectangle, double>& emb,
                                            double eta);

enum class CarlesonLayout {
    staircase,   // R_a = [0, 2^-a) x [0, 2^{a-n}), weight |R_a|^{1/2}
    fixed_area,  // every dyadic R with |R| = 2^-n, weight 1
    star,        // the staircase reflected into the four quadrants around (1/2, 1/2)
};

struct CarlesonSymbol {
    Signal b;
    CoefficientBook book;
    std::vector<DyadicRectangle> rectangles;
};

// Signs are drawn from seed. The grid has depth n + 1 (n + 2 for star) so every rectangle is
// Haar-resolvable.
CarlesonSymbol carleson_family(int n, std::uint64_t seed = 0, CarlesonLayout layout = CarlesonLayout::staircase);

struct CarlesonRatio {
    int n = 0;
    double product = 0;
    double rect = 0;
    double ratio = 0;
    Exactness exactness = Exactness::exact;
};

CarlesonRatio carleson_ratio(int n, std::uint64_t seed = 0, BmoMode mode = BmoMode::exact,
                             CarlesonLayout layout = CarlesonLayout::staircase);

// U = unions of star rectangles: levels from the bit mask S, quadrants from Q. Symmetric families
// use all four quadrants.
struct JourneMember {
    std::uint32_t levels = 0;
    std::uint32_t quadrants = 0;
    std::vector<DyadicRectangle> rectangles;
};

std::vector<JourneMember> journe_members(const CarlesonSymbol& star, int n, bool symmetric);

// Damped checks of the star symbol over the members above.
struct JourneFamilyStudy {
    std::vector<double> damped;  // one ratio per U, levels-major
    double max = 0;
    double median = 0;
    double undamped = 0;  // bmo_product / bmo_rect of the symbol itself
};

JourneFamilyStudy journe_family_study(int n, std::uint64_t seed, double eps, bool symmetric = true);

}  // namespace nehari

namespace nehari {

// Scale cases of P_+(v_I conj v_J) for the Meyer family, by exact band arithmetic.
struct HijReport {
    std::size_t far_pairs = 0;    // 8|J| < |I|
    std::int64_t far_top_mode = 0;  // largest mode of any such product; < 0 means P_+ kills it
    std::size_t near_pairs = 0;   // 8|I| < |J|
    std::int64_t near_low_mode = 0;  // smallest mode of any such product; > 0 means it is analytic
};

HijReport hij_check(const MeyerFamily& fam);

struct LowerBoundParams {
    double eta0 = 0.1;  // allowed |V| / |sh| - 1
    double eta_minus1 = 0.01;
    double eta_J = 0.01;
};

struct SymbolDecomposition {
    std::vector<DyadicRectangle> family;  // the collection U
    Signal alpha{Grid(1, 2)}, beta{Grid(1, 2)}, gamma{Grid(1, 2)};
    Signal alpha_tilde{Grid(1, 2)};  // Emb^{-4} damped alpha
    std::vector<Signal> slices;  // entry n - 1 uses Emb in [2^{n-1}, 2^n)
    std::size_t in_family = 0, near = 0, rest = 0;  // partition of the Meyer rectangles
};

struct SliceRow {
    int n = 0;
    std::size_t count = 0;
    double alpha_norm = 0;
    double h_gamma_alpha = 0;  // ||P_+(gamma conj alpha_n)||_2
};

struct LowerBoundReport {
    SymbolDecomposition parts;
    double shadow_measure = 0;
    double V_measure = 0;
    bool V_within_eta0 = false;

    double h_b_alpha = 0;      // ||P_+(b conj alpha)||_2
    double p_abs2 = 0;         // ||P_+ |alpha|^2||_2
    double l4_squared = 0;     // ||alpha||_4^2
    double coefficient_l2 = 0;  // (sum over U of |<b, v_R>|^2)^{1/2}
    double centered_abs2 = 0;  // || |alpha|^2 - mean ||_2
    double symmetry_ratio = 0;  // p_abs2 / centered_abs2, set against 2^{-d/2}
    bool symmetry_bound_holds = false;
    double quadrant_defect = 0;  // | ||P_{++} g|| - ||P_{--} g|| | + | ||P_{+-} g|| - ||P_{-+} g|| |, g = |alpha|^2

    double h_beta_alpha = 0;
    double beta_alpha_l4 = 0;  // ||beta||_4 ||alpha||_4
    std::vector<SliceRow> slices;

    double additivity_defect = 0;  // max |b - alpha - beta - gamma|
    double slice_defect = 0;       // max |alpha - sum of slices|
    double bmo_minus1_b = 0;       // Meyer family
    double alpha_tilde_bmo = 0;    // heuristic product BMO, a lower bound
    LowerBoundParams params;
    HijReport hij;
};

// Scales b so that the sum over U of |<b, v_R>|^2 equals |sh(U)|; throws if that sum is zero.
Signal normalize_for_family(const Signal& b, const std::vector<DyadicRectangle>& family);

// b must already be normalized (relative tolerance 1e-9).
LowerBoundReport lower_bound_experiment(const Signal& b, const std::vector<DyadicRectangle>& family,
                                        const LowerBoundParams& params = {});

}  // namespace nehari
