#include "nehari/hankel.hpp"

#include <cmath>
#include <numbers>

namespace nehari {

cplx IndexedSequence::at(std::int64_t k) const {
    if (k < first || k > last()) return 0;
    return values[static_cast<std::size_t>(k - first)];
}

SymbolCoefficients SymbolCoefficients::one_d(std::vector<cplx> v) {
    SymbolCoefficients s;
    s.dim = 1;
    s.degree = static_cast<std::int64_t>(v.size());
    s.values = std::move(v);
    return s;
}

SymbolCoefficients SymbolCoefficients::two_d(std::int64_t degree, std::vector<cplx> v) {
    if (static_cast<std::int64_t>(v.size()) != degree * degree) throw ValidationError("2D symbol needs degree^2 values");
    SymbolCoefficients s;
    s.dim = 2;
    s.degree = degree;
    s.values = std::move(v);
    return s;
}

cplx SymbolCoefficients::at(std::int64_t k) const {
    if (dim != 1) throw ValidationError("1D access on a 2D symbol");
    return (k >= 0 && k < degree) ? values[k] : cplx(0);
}

cplx SymbolCoefficients::at(std::int64_t k0, std::int64_t k1) const {
    if (dim != 2) throw ValidationError("2D access on a 1D symbol");
    return (k0 >= 0 && k0 < degree && k1 >= 0 && k1 < degree) ? values[k0 * degree + k1] : cplx(0);
}

Signal SymbolCoefficients::to_signal(const Grid& grid) const {
    if (grid.dim() != dim) throw ValidationError("symbol and grid dimensions differ");
    using std::numbers::pi;
    const auto N = grid.per_axis();
    // Direct evaluation so coarse grids sample the polynomial rather than fold its spectrum by hand.
    std::vector<cplx> e(static_cast<std::size_t>(N * degree));
    for (std::int64_t x = 0; x < N; ++x)
        for (std::int64_t k = 0; k < degree; ++k)
            e[x * degree + k] = std::polar(1.0, 2 * pi * static_cast<double>((k * x) % N) / static_cast<double>(N));
    Signal s(grid);
    if (dim == 1) {
        for (std::int64_t x = 0; x < N; ++x)
            for (std::int64_t k = 0; k < degree; ++k) s[x] += values[k] * e[x * degree + k];
    } else {
        for (std::int64_t x = 0; x < N; ++x)
            for (std::int64_t y = 0; y < N; ++y) {
                cplx acc = 0;
                for (std::int64_t k0 = 0; k0 < degree; ++k0)
                    for (std::int64_t k1 = 0; k1 < degree; ++k1)
                        acc += values[k0 * degree + k1] * e[x * degree + k0] * e[y * degree + k1];
                s.at(x, y) = acc;
            }
    }
    return s;
}

HankelOp hankel_matrix(const IndexedSequence& alpha, std::int64_t M) {
    CMatrix h(M, M);
    for (std::int64_t i = 0; i < M; ++i)
        for (std::int64_t j = 0; j < M; ++j) h(i, j) = alpha.at(i + j);
    return {make_operator(std::move(h), BasisKind::fourier_modes, "modes 0..M-1"), HankelFlavor::matrix, alpha};
}

OperatorMatrix toeplitz_matrix(const IndexedSequence& alpha, std::int64_t M) {
    CMatrix t(M, M);
    for (std::int64_t i = 0; i < M; ++i)
        for (std::int64_t j = 0; j < M; ++j) t(i, j) = alpha.at(i - j);
    return make_operator(std::move(t), BasisKind::fourier_modes, "modes 0..M-1");
}

double check_intertwining(const CMatrix& H) {
    const auto M = H.rows();
    if (M != H.cols()) throw ValidationError("intertwining needs a square matrix");
    if (M < 2) return 0;
    // (H S)(i,j) = H(i, j+1) and (S* H)(i,j) = H(i+1, j) on the interior.
    const CMatrix d = H.block(0, 1, M - 1, M - 1) - H.block(1, 0, M - 1, M - 1);
    return d.norm();
}

int depth_for_degree(std::int64_t M) {
    int n = 1;
    while ((std::int64_t{1} << n) < 4 * M) ++n;
    return n;
}

namespace {

void require_resolution(const Grid& g, std::int64_t M) {
    if (g.per_axis() < 4 * M) throw ResolutionError("grid needs N >= 4M for alias-free Hankel products");
}

}  // namespace

HankelOp hankel_operator_1d(const Signal& b, std::int64_t M) {
    if (b.grid().dim() != 1) throw ValidationError("hankel_operator_1d needs d = 1");
    require_resolution(b.grid(), M);
    const auto N = b.grid().per_axis();
    CMatrix h(M, M);
    for (std::int64_t j = 0; j < M; ++j) {
        Signal phi(b.grid());
        for (std::int64_t x = 0; x < N; ++x)
            phi[x] = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>((j * x) % N) / static_cast<double>(N));
        const Spectrum out = fourier(hardy_projection(b * phi.conj()));
        for (std::int64_t i = 0; i < M; ++i) h(i, j) = out.mode(i);
    }
    const Spectrum sb = fourier(b);
    IndexedSequence seq{0, {}};
    for (std::int64_t k = 0; k <= 2 * M - 2; ++k) seq.values.push_back(sb.mode(k));
    return {make_operator(std::move(h), BasisKind::fourier_modes, "modes 0..M-1"), HankelFlavor::operator_h2, seq};
}

HankelOp hankel_operator_1d(const SymbolCoefficients& b) {
    if (b.dim != 1) throw ValidationError("hankel_operator_1d needs a 1D symbol");
    return hankel_operator_1d(b.to_signal(Grid(depth_for_degree(b.degree), 1)), b.degree);
}

HankelOp little_hankel(const Signal& b, std::int64_t M) {
    if (b.grid().dim() != 2) throw ValidationError("little_hankel needs d = 2");
    require_resolution(b.grid(), M);
    const auto N = b.grid().per_axis();
    CMatrix h(M * M, M * M);
    for (std::int64_t j0 = 0; j0 < M; ++j0)
        for (std::int64_t j1 = 0; j1 < M; ++j1) {
            Signal phi(b.grid());
            for (std::int64_t x = 0; x < N; ++x)
                for (std::int64_t y = 0; y < N; ++y)
                    phi.at(x, y) = std::polar(1.0, 2 * std::numbers::pi *
                                                       static_cast<double>((j0 * x + j1 * y) % N) / static_cast<double>(N));
            const Spectrum out = fourier(hardy_projection(b * phi.conj()));
            for (std::int64_t i0 = 0; i0 < M; ++i0)
                for (std::int64_t i1 = 0; i1 < M; ++i1) h(i0 * M + i1, j0 * M + j1) = out.mode(i0, i1);
        }
    return {make_operator(std::move(h), BasisKind::fourier_modes, "bi-modes [0,M)^2"), HankelFlavor::little_product, {}};
}

HankelOp little_hankel(const SymbolCoefficients& b) {
    if (b.dim != 2) throw ValidationError("little_hankel needs a 2D symbol");
    const auto M = b.degree;
    CMatrix h(M * M, M * M);
    for (std::int64_t i0 = 0; i0 < M; ++i0)
        for (std::int64_t i1 = 0; i1 < M; ++i1)
            for (std::int64_t j0 = 0; j0 < M; ++j0)
                for (std::int64_t j1 = 0; j1 < M; ++j1) h(i0 * M + i1, j0 * M + j1) = b.at(i0 + j0, i1 + j1);
    return {make_operator(std::move(h), BasisKind::fourier_modes, "bi-modes [0,M)^2"), HankelFlavor::little_product, {}};
}

std::vector<std::vector<std::int64_t>> mode_window(int dim, std::int64_t M) {
    std::vector<std::vector<std::int64_t>> out{{}};
    for (int a = 0; a < dim; ++a) {
        std::vector<std::vector<std::int64_t>> next;
        for (const auto& p : out)
            for (std::int64_t k = -M; k <= M; ++k) {
                auto q = p;
                q.push_back(k);
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

CMatrix multiplication_matrix(const Signal& b, std::int64_t M) {
    const int d = b.grid().dim();
    if (d > 2) throw ValidationError("multiplication_matrix supports d <= 2");
    if (b.grid().per_axis() < 4 * M + 1) throw ResolutionError("grid needs N > 4M to hold differences of window modes");
    const Spectrum s = fourier(b);
    const auto w = mode_window(d, M);
    const auto K = static_cast<Eigen::Index>(w.size());
    CMatrix m(K, K);
    for (Eigen::Index r = 0; r < K; ++r)
        for (Eigen::Index c = 0; c < K; ++c)
            m(r, c) = d == 1 ? s.mode(w[r][0] - w[c][0]) : s.mode(w[r][0] - w[c][0], w[r][1] - w[c][1]);
    return m;
}

CMatrix hilbert_matrix(int dim, int axis, std::int64_t M) {
    const auto w = mode_window(dim, M);
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(w.size()));
    for (std::size_t r = 0; r < w.size(); ++r) {
        const auto k = w[r][axis];
        h(r, r) = cplx(0, k > 0 ? -1.0 : (k < 0 ? 1.0 : 0.0));
    }
    return h;
}

OperatorMatrix commutator_matrix(const Signal& b, const std::vector<int>& axes, std::int64_t M) {
    const int d = b.grid().dim();
    CMatrix c = multiplication_matrix(b, M);
    for (int a : axes) {
        if (a < 0 || a >= d) throw ValidationError("axis out of range");
        const CMatrix h = hilbert_matrix(d, a, M);
        c = c * h - h * c;
    }
    return make_operator(std::move(c), BasisKind::fourier_modes, "mode window [-M,M]^d");
}

namespace {

// Diagonal projection on window modes whose signs match the pattern (+1 / -1 per axis).
CMatrix sign_projection(const std::vector<std::vector<std::int64_t>>& w, const std::vector<int>& s) {
    CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(w.size()));
    for (std::size_t r = 0; r < w.size(); ++r) {
        bool ok = true;
        for (std::size_t a = 0; a < s.size(); ++a) ok = ok && (s[a] > 0 ? w[r][a] > 0 : w[r][a] < 0);
        if (ok) p(r, r) = 1;
    }
    return p;
}

std::vector<std::vector<int>> sign_patterns(int d) {
    std::vector<std::vector<int>> out{{}};
    for (int a = 0; a < d; ++a) {
        std::vector<std::vector<int>> next;
        for (const auto& p : out)
            for (int s : {1, -1}) {
                auto q = p;
                q.push_back(s);
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

BlockIdentityReport block_identity_check(const Signal& b, std::int64_t M) {
    const int d = b.grid().dim();
    if (d < 1 || d > 2) throw ValidationError("block identity needs d in {1, 2}");
    std::vector<int> axes;
    for (int a = 0; a < d; ++a) axes.push_back(a);
    const CMatrix C = commutator_matrix(b, axes, M).entries;
    const CMatrix Mb = multiplication_matrix(b, M);
    const auto w = mode_window(d, M);
    const auto K = static_cast<Eigen::Index>(w.size());
    BlockIdentityReport rep;
    for (const auto& s : sign_patterns(d)) {
        const CMatrix Ps = sign_projection(w, s);
        CMatrix factor = CMatrix::Identity(K, K);
        for (int a = 0; a < d; ++a) factor = (cplx(0, -s[a]) * CMatrix::Identity(K, K) - hilbert_matrix(d, a, M)) * factor;
        rep.product_identity_defect = std::max(rep.product_identity_defect, (C * Ps - factor * Mb * Ps).norm());
        double sign = 1;
        std::vector<int> neg;
        for (int v : s) sign *= v, neg.push_back(-v);
        const cplx c = std::pow(cplx(0, -2), d) * sign;
        for (const auto& t : sign_patterns(d)) {
            const CMatrix Pt = sign_projection(w, t);
            const CMatrix expect = t == neg ? CMatrix(c * Pt * Mb * Ps) : CMatrix::Zero(K, K);
            rep.block_defect = std::max(rep.block_defect, (Pt * C * Ps - expect).norm());
        }
    }
    if (d == 1) {
        const CMatrix Pp = sign_projection(w, {1}), Pm = sign_projection(w, {-1});
        rep.printed_table_residual = std::max({(Pp * C * Pp).norm(), (Pm * C * Pm).norm(),
                                               (Pp * C * Pm + Pp * Mb * Pm).norm(), (Pm * C * Pp - Pm * Mb * Pp).norm()});
    }
    return rep;
}

NehariRatio nehari_ratio(const SymbolCoefficients& b, BmoVariant variant, int depth) {
    NehariRatio r;
    if (b.dim == 1) {
        r.hankel_norm = operator_norm(hankel_operator_1d(b).matrix);
        SymbolCoefficients pos = b;
        if (pos.degree > 0) pos.values[0] = 0;
        const Signal p = pos.to_signal(Grid(depth, 1));
        switch (variant) {
            case BmoVariant::dyadic: r.bmo_value = bmo_dyadic(p).value; break;
            case BmoVariant::dyadic_shifted: r.bmo_value = bmo_dyadic_shift_average(p); break;
            case BmoVariant::meyer: r.bmo_value = bmo_dyadic(p, WaveletFamily::meyer).value; break;
            default: throw ValidationError("product BMO variants need a 2D symbol");
        }
    } else {
        r.hankel_norm = operator_norm(little_hankel(b).matrix);
        // P_(+,+) b evaluated at the grid points; coarse grids sample rather than project.
        SymbolCoefficients pos = b;
        for (std::int64_t k = 0; k < b.degree; ++k) pos.values[k] = pos.values[k * b.degree] = 0;
        const Signal p = pos.to_signal(Grid(depth, 2));
        BmoReport rep;
        switch (variant) {
            case BmoVariant::product_exact: rep = bmo_product(p, BmoMode::exact); break;
            case BmoVariant::product_heuristic: rep = bmo_product(p, BmoMode::heuristic); break;
            default: throw ValidationError("2D symbols need a product BMO variant");
        }
        r.bmo_value = rep.value;
        r.exactness = rep.exactness;
    }
    if (r.bmo_value <= 1e-14 * std::max(1.0, r.hankel_norm)) {
        if (r.hankel_norm > 1e-14) throw ValidationError("BMO value 0 with nonzero Hankel norm: inconsistent truncation");
        throw ValidationError("symbol is constant");
    }
    r.ratio = r.hankel_norm / r.bmo_value;
    return r;
}

}  // namespace nehari
