#include <cmath>
#include <numbers>

#include "nehari/paraproducts.hpp"

namespace nehari {

namespace {

struct Quadrature {
    std::vector<double> nodes, weights;
};

Quadrature dilations(int steps) {
    Quadrature q;
    for (int i = 0; i < steps; ++i) {
        q.nodes.push_back(std::exp2((i + 0.5) / steps));
        q.weights.push_back(1.0 / steps);
    }
    return q;
}

Quadrature translations(const PetermichlParams& p, double step) {
    Quadrature q;
    const double lo = std::log(step), hi = std::log(p.Y);
    for (int j = 0; j < p.y_steps; ++j) {
        const double t = (j + 0.5) / p.y_steps;
        q.nodes.push_back(p.measure == TranslationMeasure::uniform ? t * p.Y : std::exp(lo + t * (hi - lo)));
        q.weights.push_back(1.0 / p.y_steps);
    }
    return q;
}

// Integrals over [0,1) cells of piecewise constants added on arbitrary intervals.
class CellAccumulator {
public:
    explicit CellAccumulator(std::int64_t N) : N_(N), h_(1.0 / static_cast<double>(N)), full_(N + 1, 0), part_(N, 0) {}

    void add(double a, double b, double v) {
        a = std::max(a, 0.0), b = std::min(b, 1.0);
        if (b <= a) return;
        const auto ia = std::min(N_ - 1, static_cast<std::int64_t>(a / h_));
        const auto ib = std::min(N_ - 1, static_cast<std::int64_t>(b / h_));
        if (ia == ib) {
            part_[ia] += v * (b - a);
            return;
        }
        part_[ia] += v * ((ia + 1) * h_ - a);
        part_[ib] += v * (b - ib * h_);
        full_[ia + 1] += v;
        full_[ib] -= v;
    }

    std::vector<double> averages() const {
        std::vector<double> out(N_);
        double run = 0;
        for (std::int64_t i = 0; i < N_; ++i) {
            run += full_[i];
            out[i] = run + part_[i] / h_;
        }
        return out;
    }

private:
    std::int64_t N_;
    double h_;
    std::vector<double> full_, part_;
};

}  // namespace

Signal petermichl_apply(const Signal& f, const PetermichlParams& p) {
    const Grid& g = f.grid();
    if (g.dim() != 1) throw ValidationError("petermichl_apply needs a 1D grid");
    if (p.s_steps < 1 || p.y_steps < 1) throw ValidationError("quadrature needs at least one step");
    const double h = g.step();
    if (p.Y <= h) throw ResolutionError("translation range below grid resolution");
    const auto N = g.per_axis();
    // Real and imaginary parts run separately through the same real-valued operator.
    std::vector<double> cum_re(N + 1, 0), cum_im(N + 1, 0);
    for (std::int64_t i = 0; i < N; ++i) {
        cum_re[i + 1] = cum_re[i] + f[i].real() * h;
        cum_im[i + 1] = cum_im[i] + f[i].imag() * h;
    }
    auto F = [&](const std::vector<double>& cum, double x) {
        if (x <= 0) return 0.0;
        if (x >= 1) return cum[N];
        const double u = x / h;
        const auto i = std::min(N - 1, static_cast<std::int64_t>(u));
        return cum[i] + (cum[i + 1] - cum[i]) * (u - static_cast<double>(i));
    };
    const Quadrature qs = dilations(p.s_steps), qy = translations(p, h);
    CellAccumulator acc_re(N), acc_im(N);
    for (std::size_t a = 0; a < qs.nodes.size(); ++a)
        for (std::size_t b = 0; b < qy.nodes.size(); ++b) {
            const double s = qs.nodes[a], y = qy.nodes[b], w = qs.weights[a] * qy.weights[b];
            // Conjugating G by Dil_s Tr_y swaps the dyadic grid for {I / s - y}.
            for (int k = -g.depth(); k <= p.coarsest_scale; ++k) {
                const double L = std::ldexp(1.0, k) / s, q = L / 4;
                const auto j0 = static_cast<std::int64_t>(std::floor(y / L)) - 1;
                const auto j1 = static_cast<std::int64_t>(std::floor((1 + y) / L)) + 1;
                const double norm = 1 / std::sqrt(L), gnorm = std::sqrt(2.0) / std::sqrt(L);
                for (std::int64_t j = j0; j <= j1; ++j) {
                    const double lo = static_cast<double>(j) * L - y, hi = lo + L;
                    if (hi <= 0 || lo >= 1) continue;
                    const double mid = lo + L / 2;
                    // <f, h_I> with h_I = -|I|^{-1/2} on the left half
                    const double cr = norm * (F(cum_re, hi) - 2 * F(cum_re, mid) + F(cum_re, lo));
                    const double ci = norm * (F(cum_im, hi) - 2 * F(cum_im, mid) + F(cum_im, lo));
                    if (cr == 0 && ci == 0) continue;
                    // g_I = h_{I_right} - h_{I_left} = sqrt2 |I|^{-1/2} (+, -, -, +) on quarters
                    const double sign[4] = {1, -1, -1, 1};
                    for (int t = 0; t < 4; ++t) {
                        const double v = w * gnorm * sign[t];
                        acc_re.add(lo + t * q, lo + (t + 1) * q, v * cr);
                        acc_im.add(lo + t * q, lo + (t + 1) * q, v * ci);
                    }
                }
            }
        }
    const auto re = acc_re.averages(), im = acc_im.averages();
    Signal out(g);
    for (std::int64_t i = 0; i < N; ++i) out[i] = cplx(re[i], im[i]);
    return out;
}

CMatrix line_hilbert_matrix(const Grid& g) {
    if (g.dim() != 1) throw ValidationError("line_hilbert needs a 1D grid");
    const auto N = g.per_axis();
    const double h = g.step();
    auto Phi = [](double u) { return u == 0 ? 0.0 : u * std::log(std::abs(u)) - u; };
    std::vector<double> D(2 * N + 1);
    for (std::int64_t m = -N; m <= N; ++m) {
        const double x = static_cast<double>(m) * h;
        D[m + N] = (Phi(x + h) - 2 * Phi(x) + Phi(x - h)) / (std::numbers::pi * h);
    }
    CMatrix H(N, N);
    for (std::int64_t a = 0; a < N; ++a)
        for (std::int64_t c = 0; c < N; ++c) H(a, c) = D[a - c + N];
    return H;
}

Signal line_hilbert(const Signal& f) {
    const CMatrix H = line_hilbert_matrix(f.grid());
    Signal out(f.grid());
    for (Eigen::Index a = 0; a < H.rows(); ++a) {
        cplx s = 0;
        for (Eigen::Index c = 0; c < H.cols(); ++c) s += H(a, c) * f[c];
        out[a] = s;
    }
    return out;
}

namespace {

PetermichlFit fit_multiple(const CVector& avg, const CVector& hf) {
    PetermichlFit r;
    const double den = hf.squaredNorm();
    if (den == 0) throw ValidationError("Hilbert transform vanishes; nothing to fit");
    r.c = hf.dot(avg) / den;
    const double scale = std::abs(r.c) * std::sqrt(den);
    r.relative_error = scale > 0 ? (avg - r.c * hf).norm() / scale : INFINITY;
    return r;
}

CVector to_vector(const Signal& s) {
    CVector v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

}  // namespace

PetermichlFit petermichl_fit(const Signal& f, const PetermichlParams& params) {
    return fit_multiple(to_vector(petermichl_apply(f, params)), to_vector(line_hilbert(f)));
}

PetermichlMatrix petermichl_average(const Grid& g, const PetermichlParams& params) {
    const auto N = static_cast<Eigen::Index>(g.per_axis());
    CMatrix A(N, N);
    for (Eigen::Index c = 0; c < N; ++c) {
        Signal e(g);
        e[static_cast<std::size_t>(c)] = 1;
        A.col(c) = to_vector(petermichl_apply(e, params));
    }
    const CMatrix H = line_hilbert_matrix(g);
    const PetermichlFit fit = fit_multiple(A.reshaped(), CMatrix(H).reshaped());
    return {make_operator(std::move(A), BasisKind::grid_cells, "cells of [0,1)"), fit};
}

}  // namespace nehari
