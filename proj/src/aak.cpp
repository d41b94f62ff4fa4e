#include "nehari/aak.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nehari {

CMatrix assemble(const BlockProblem& p, const CMatrix& X) {
    const auto top = p.C.rows(), left = p.A.cols();
    if (p.A.rows() != p.B.rows() || p.C.cols() != p.B.cols() || X.rows() != top || X.cols() != left)
        throw ValidationError("block shapes do not compose");
    CMatrix U(top + p.A.rows(), left + p.B.cols());
    U << X, p.C, p.A, p.B;
    return U;
}

namespace {

// Largest singular value; eigenvalues of the smaller Gram matrix are enough here.
double spectral(const CMatrix& U) {
    if (U.size() == 0) return 0;
    const CMatrix G = U.rows() <= U.cols() ? CMatrix(U * U.adjoint()) : CMatrix(U.adjoint() * U);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(G, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

constexpr double golden = 0.6180339887498949;

template <class F>
double golden_min(F f, double lo, double hi, double tol, int cap, double& arg) {
    double a = lo, b = hi;
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < cap && b - a > tol; ++it) {
        if (f1 <= f2) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - golden * (b - a), f1 = f(x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + golden * (b - a), f2 = f(x2);
        }
    }
    arg = f1 <= f2 ? x1 : x2;
    return std::min(f1, f2);
}

// min over x in C of ||U with U(r, c) = x||, a convex function of (Re x, Im x).
cplx scalar_min(CMatrix& U, Eigen::Index r, Eigen::Index c, double radius, const ParrottOptions& opt) {
    if (radius == 0) return 0;
    const double tol = opt.tolerance * radius * 1e-3;
    auto at = [&](double re, double im) {
        U(r, c) = cplx(re, im);
        return spectral(U);
    };
    // Partial minimization of a jointly convex function stays convex, so nesting is exact.
    auto outer = [&](double re) {
        double im;
        return golden_min([&](double y) { return at(re, y); }, -radius, radius, tol, opt.max_iterations, im);
    };
    double re, im;
    golden_min(outer, -radius, radius, tol, opt.max_iterations, re);
    golden_min([&](double y) { return at(re, y); }, -radius, radius, tol, opt.max_iterations, im);
    U(r, c) = cplx(re, im);
    return {re, im};
}

}  // namespace

ParrottResult parrott_min(const BlockProblem& p, const ParrottOptions& opt) {
    const auto top = p.C.rows(), left = p.A.cols();
    ParrottResult res;
    res.X = CMatrix::Zero(top, left);
    CMatrix U = assemble(p, res.X);
    CMatrix AB(p.A.rows(), left + p.B.cols());
    AB << p.A, p.B;
    CMatrix CB(top + p.B.rows(), p.C.cols());
    CB << p.C, p.B;
    res.closed_form = std::max(spectral(AB), spectral(CB));
    res.printed_bound = std::max({spectral(p.A), spectral(p.B), spectral(p.C)});
    // Entry (i, j) lives in rows {i..top-1} + lower rows and columns {j..left-1} + right columns;
    // every other entry of that submatrix is known by the time it is filled.
    for (Eigen::Index i = top - 1; i >= 0; --i)
        for (Eigen::Index j = left - 1; j >= 0; --j) {
            CMatrix S = U.bottomRightCorner(U.rows() - i, U.cols() - j);
            S(0, 0) = 0;
            const double radius = spectral(S) * 1.01 + 1e-300;
            res.X(i, j) = scalar_min(S, 0, 0, radius, opt);
            U(i, j) = res.X(i, j);
        }
    res.achieved_norm = spectral(U);
    const double scale = std::max(1.0, res.closed_form);
    if (res.achieved_norm > res.closed_form + 1e-6 * scale)
        throw ConvergenceError("parrott search stalled above the completion bound", res.closed_form, res.achieved_norm);
    return res;
}

HankelOp extend_hankel_step(const HankelOp& H, const ParrottOptions& opt) {
    if (H.flavor == HankelFlavor::little_product) throw ValidationError("extension needs a one-parameter Hankel matrix");
    const auto M = H.matrix.entries.rows();
    const auto& a = H.sequence;
    // h_00 = a_o with o = 0 for plain Hankel matrices and o = first after an extension.
    const std::int64_t o = std::min<std::int64_t>(a.first, 0);
    // Extended entries a_{o-1+i+j}; X is the corner, C the rest of row 0, A the rest of column 0.
    BlockProblem p;
    p.C.resize(1, M);
    p.A.resize(M, 1);
    p.B.resize(M, M);
    for (Eigen::Index j = 0; j < M; ++j) p.C(0, j) = a.at(o + j);
    for (Eigen::Index i = 0; i < M; ++i) p.A(i, 0) = a.at(o + i);
    for (Eigen::Index i = 0; i < M; ++i)
        for (Eigen::Index j = 0; j < M; ++j) p.B(i, j) = a.at(o + 1 + i + j);
    const ParrottResult r = parrott_min(p, opt);
    IndexedSequence next{o - 1, {}};
    next.values.push_back(r.X(0, 0));
    for (std::int64_t k = o; k <= a.last(); ++k) next.values.push_back(a.at(k));
    HankelOp out = hankel_matrix(next, M + 1);
    for (Eigen::Index i = 0; i <= M; ++i)
        for (Eigen::Index j = 0; j <= M; ++j) out.matrix.entries(i, j) = next.at(next.first + i + j);
    return out;
}

double trig_sup_norm(const IndexedSequence& a) {
    using std::numbers::pi;
    if (a.values.empty()) return 0;
    const auto span = static_cast<double>(a.values.size());
    auto eval = [&](double x) {
        cplx s = 0;
        for (std::size_t i = 0; i < a.values.size(); ++i)
            s += a.values[i] * std::polar(1.0, 2 * pi * static_cast<double>(a.first + static_cast<std::int64_t>(i)) * x);
        return std::abs(s);
    };
    int n = 6;
    while (std::ldexp(1.0, n) < 32 * span) ++n;
    const Grid g(n, 1);
    const auto N = g.per_axis();
    Spectrum s(g);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        // Frequencies reduced mod N are harmless: only |beta| at sample points is read.
        s.mode(a.first + static_cast<std::int64_t>(i)) += a.values[i];
    }
    if (static_cast<double>(N) / 2 <= std::max(std::abs(static_cast<double>(a.first)), std::abs(static_cast<double>(a.last()))))
        throw ResolutionError("trig_sup_norm grid too coarse");
    const Signal v = inverse_fourier(s);
    std::vector<std::pair<double, std::int64_t>> peaks;
    for (std::int64_t x = 0; x < N; ++x) {
        const double m = std::abs(v[x]);
        if (m >= std::abs(v[(x + N - 1) % N]) && m >= std::abs(v[(x + 1) % N])) peaks.push_back({m, x});
    }
    std::sort(peaks.rbegin(), peaks.rend());
    double best = peaks.empty() ? 0 : peaks.front().first;
    const double h = 1.0 / static_cast<double>(N);
    for (std::size_t k = 0; k < std::min<std::size_t>(peaks.size(), 16); ++k) {
        const double c = static_cast<double>(peaks[k].second) * h;
        double arg;
        const double m = -golden_min([&](double x) { return -eval(x); }, c - h, c + h, 1e-15, 200, arg);
        best = std::max(best, m);
    }
    return best;
}

BoundedSymbol recover_bounded_symbol(const HankelOp& H, int steps, const ParrottOptions& opt) {
    if (steps < 0) throw ValidationError("steps must be >= 0");
    const double hn = operator_norm(H.matrix);
    HankelOp cur = H;
    BoundedSymbol out{cur.sequence, Signal(Grid(1, 1)), 0, hn, {}};
    for (int k = 0;; ++k) {
        out.ratio_by_step.push_back(hn > 0 ? trig_sup_norm(cur.sequence) / hn : 0);
        if (k == steps) break;
        cur = extend_hankel_step(cur, opt);
    }
    out.coefficients = cur.sequence;
    out.sup_norm = trig_sup_norm(cur.sequence);
    const auto& a = out.coefficients;
    const auto reach = std::max(std::abs(a.first), std::abs(a.last()));
    int n = 1;
    while ((std::int64_t{1} << n) < 4 * (reach + 1)) ++n;
    Spectrum s(Grid(n, 1));
    for (std::int64_t k = a.first; k <= a.last(); ++k) s.mode(k) = a.at(k);
    out.beta = inverse_fourier(s);
    return out;
}

}  // namespace nehari
