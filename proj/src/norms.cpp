#include "nehari/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

namespace nehari {

OperatorMatrix OperatorMatrix::adjoint() const { return {entries.adjoint(), codomain, domain}; }

OperatorMatrix make_operator(CMatrix entries, BasisKind kind, const std::string& label) {
    Basis dom{kind, entries.cols(), label}, cod{kind, entries.rows(), label};
    return {std::move(entries), dom, cod};
}

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (!(a.domain == b.codomain)) throw ValidationError("composition needs matching bases");
    return {a.entries * b.entries, b.domain, a.codomain};
}

double operator_norm(const CMatrix& a, const NormOptions& opt) {
    if (a.size() == 0) return 0.0;
    const bool dense = opt.method == NormMethod::dense ||
                       (opt.method == NormMethod::automatic && std::min(a.rows(), a.cols()) <= opt.dense_limit);
    if (dense) {
        Eigen::BDCSVD<CMatrix> svd(a);
        return svd.singularValues()(0);
    }
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd;
    CVector v(a.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {nd(rng), nd(rng)};
    v.normalize();
    double sigma = 0;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const CVector w = a * v;
        const double s = w.norm();
        if (s == 0) return 0.0;
        CVector z = a.adjoint() * w;
        v = z / z.norm();
        if (it > 0 && std::abs(s - sigma) <= opt.tolerance * s) return s;
        sigma = s;
    }
    throw ConvergenceError("power iteration reached its cap", sigma, a.norm());
}

double operator_norm(const OperatorMatrix& a, const NormOptions& opt) { return operator_norm(a.entries, opt); }

double lp_norm(const Signal& f, double p) {
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& v : f.samples()) m = std::max(m, std::abs(v));
        return m;
    }
    if (p < 1) throw ValidationError("p must be >= 1");
    double s = 0;
    for (const auto& v : f.samples()) s += std::pow(std::abs(v), p);
    return std::pow(s * f.grid().weight(), 1 / p);
}

void CoefficientBook::add(const DyadicRectangle& R, double w) {
    if (w == 0) return;
    rects.push_back(R);
    weights.push_back(w);
}

CoefficientBook CoefficientBook::swapped() const {
    CoefficientBook out{grid, {}, {}};
    for (std::size_t i = 0; i < rects.size(); ++i) out.add(DyadicRectangle(rects[i].side(1), rects[i].side(0)), weights[i]);
    return out;
}

CoefficientBook haar_book(const Signal& b) {
    CoefficientBook book{b.grid(), {}, {}};
    for (const auto& [R, c] : haar_analysis(b).wavelets()) book.add(R, std::norm(c));
    return book;
}

CoefficientBook meyer_book(const Signal& b, MeyerPart part) {
    CoefficientBook book{b.grid(), {}, {}};
    for (const auto& [R, c] : MeyerFamily(b.grid()).analysis(b, part)) book.add(R, std::norm(c));
    return book;
}

CoefficientBook book_for(const Signal& b, WaveletFamily family) {
    return family == WaveletFamily::haar ? haar_book(b) : meyer_book(b);
}

double bmo_form(const CoefficientBook& book, const CellMask& U) {
    const double m = U.measure();
    if (m == 0) return 0;
    double s = 0;
    for (std::size_t i = 0; i < book.rects.size(); ++i)
        if (U.covers(book.rects[i])) s += book.weights[i];
    return std::sqrt(s / m);
}

double bmo_form_members(const CoefficientBook& book, const std::vector<DyadicRectangle>& members) {
    const CellMask U = RectangleCollection{book.grid, members}.shadow();
    const double m = U.measure();
    if (m == 0) return 0;
    double s = 0;
    for (std::size_t i = 0; i < book.rects.size(); ++i)
        if (std::find(members.begin(), members.end(), book.rects[i]) != members.end()) s += book.weights[i];
    return std::sqrt(s / m);
}

namespace {

// Subtree sums over heap-indexed intervals down to single cells (index < 2N).
struct HeapTable {
    std::int64_t H;  // 2N
    int dim;
    std::vector<double> t;

    HeapTable(const Grid& g) : H(2 * g.per_axis()), dim(g.dim()), t(static_cast<std::size_t>(dim == 1 ? H : H * H), 0.0) {}

    double& at(std::int64_t a, std::int64_t b = 0) { return t[static_cast<std::size_t>(dim == 1 ? a : a * H + b)]; }

    void accumulate(int axis) {
        for (std::int64_t h = H / 2 - 1; h >= 1; --h) {
            if (dim == 1) {
                at(h) += at(2 * h) + at(2 * h + 1);
                continue;
            }
            for (std::int64_t o = 1; o < H; ++o) {
                if (axis == 0)
                    at(h, o) += at(2 * h, o) + at(2 * h + 1, o);
                else
                    at(o, h) += at(o, 2 * h) + at(o, 2 * h + 1);
            }
        }
    }
};

HeapTable load(const CoefficientBook& book) {
    HeapTable t(book.grid);
    for (std::size_t i = 0; i < book.rects.size(); ++i) {
        const auto& R = book.rects[i];
        if (book.grid.dim() == 1)
            t.at(heap_index(R.side(0))) += book.weights[i];
        else
            t.at(heap_index(R.side(0)), heap_index(R.side(1))) += book.weights[i];
    }
    return t;
}

BmoReport finish(const CoefficientBook& book, double value, std::vector<DyadicRectangle> witness, Exactness ex) {
    BmoReport r;
    r.value = value;
    r.exactness = ex;
    if (!witness.empty()) r.witness_mask = RectangleCollection{book.grid, witness}.shadow();
    r.witness = std::move(witness);
    return r;
}

// Best value over tables indexed by heap pairs; sum/area.
BmoReport best_rectangle(const CoefficientBook& book, HeapTable& t) {
    double best = 0;
    std::vector<DyadicRectangle> witness;
    if (book.grid.dim() == 1) {
        for (std::int64_t a = 1; a < t.H; ++a) {
            const auto I = heap_interval(a);
            const double v = t.at(a) / I.length();
            if (v > best) best = v, witness = {DyadicRectangle({I})};
        }
    } else {
        for (std::int64_t a = 1; a < t.H; ++a)
            for (std::int64_t b = 1; b < t.H; ++b) {
                const auto I = heap_interval(a), J = heap_interval(b);
                const double v = t.at(a, b) / (I.length() * J.length());
                if (v > best) best = v, witness = {DyadicRectangle(I, J)};
            }
    }
    return finish(book, std::sqrt(best), std::move(witness), Exactness::exact);
}

void require_dim(const CoefficientBook& book, int d, const char* what) {
    if (book.grid.dim() != d) throw ValidationError(std::string(what) + " needs d = " + std::to_string(d));
}

using Bits = std::vector<std::uint64_t>;

Bits rect_bits(const Grid& g, const DyadicRectangle& R) {
    CellMask m(g);
    m.add(R);
    Bits b((m.cells.size() + 63) / 64, 0);
    for (std::size_t c = 0; c < m.cells.size(); ++c)
        if (m.cells[c]) b[c / 64] |= std::uint64_t{1} << (c % 64);
    return b;
}

bool covered(const Bits& r, const Bits& u) {
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] & ~u[i]) return false;
    return true;
}

std::int64_t popcount(const Bits& u) {
    std::int64_t c = 0;
    for (auto w : u) c += std::popcount(w);
    return c;
}

double value_on(const std::vector<Bits>& rb, const std::vector<double>& w, const Bits& u, double cell) {
    const auto cnt = popcount(u);
    if (cnt == 0) return 0;
    double s = 0;
    for (std::size_t i = 0; i < rb.size(); ++i)
        if (covered(rb[i], u)) s += w[i];
    return s / (static_cast<double>(cnt) * cell);
}

std::vector<DyadicRectangle> covered_members(const CoefficientBook& book, const std::vector<Bits>& rb, const Bits& u) {
    std::vector<DyadicRectangle> out;
    for (std::size_t i = 0; i < rb.size(); ++i)
        if (covered(rb[i], u)) out.push_back(book.rects[i]);
    return out;
}

BmoReport product_exact(const CoefficientBook& book) {
    const Grid& g = book.grid;
    const double cell = g.weight();
    std::vector<Bits> rb;
    for (const auto& R : book.rects) rb.push_back(rect_bits(g, R));
    double best = 0;
    Bits best_u;
    const auto cells = static_cast<std::size_t>(g.size());
    if (cells <= exact_bmo_limit) {
        // Every union of finest cells.
        std::vector<std::uint32_t> r32;
        for (const auto& b : rb) r32.push_back(static_cast<std::uint32_t>(b[0]));
        for (std::uint32_t u = 1; u < (std::uint32_t{1} << cells); ++u) {
            double s = 0;
            for (std::size_t i = 0; i < r32.size(); ++i)
                if ((r32[i] & ~u) == 0) s += book.weights[i];
            const double v = s / (std::popcount(u) * cell);
            if (v > best) best = v, best_u = Bits{u};
        }
    } else if (rb.size() <= exact_bmo_limit) {
        // Only shadows of supported rectangles can be optimal: shrinking U to the
        // union of the supported rectangles it contains keeps the sum and lowers |U|.
        const std::size_t S = rb.size();
        for (std::uint32_t sub = 1; sub < (std::uint32_t{1} << S); ++sub) {
            Bits u(rb[0].size(), 0);
            for (std::size_t i = 0; i < S; ++i)
                if (sub >> i & 1)
                    for (std::size_t k = 0; k < u.size(); ++k) u[k] |= rb[i][k];
            const double v = value_on(rb, book.weights, u, cell);
            if (v > best) best = v, best_u = u;
        }
    } else {
        throw ValidationError("exact product BMO needs at most 20 cells or 20 nonzero coefficients; use heuristic mode");
    }
    if (best == 0) return finish(book, 0, {}, Exactness::exact);
    auto witness = covered_members(book, rb, best_u);
    BmoReport r = finish(book, std::sqrt(best), witness, Exactness::exact);
    CellMask m(g);
    for (std::size_t c = 0; c < cells; ++c) m.cells[c] = (best_u[c / 64] >> (c % 64)) & 1;
    r.witness_mask = m;
    return r;
}

BmoReport product_heuristic(const CoefficientBook& book) {
    BmoReport rect = bmo_rect(book);
    double best = rect.value * rect.value;
    std::vector<DyadicRectangle> witness = rect.witness;
    const double cell = book.grid.weight();
    std::vector<Bits> rb;
    for (const auto& R : book.rects) rb.push_back(rect_bits(book.grid, R));
    for (std::size_t seed = 0; seed < rb.size(); ++seed) {
        Bits u = rb[seed];
        double cur = value_on(rb, book.weights, u, cell);
        for (;;) {
            double step = cur;
            std::size_t pick = rb.size();
            for (std::size_t i = 0; i < rb.size(); ++i) {
                if (covered(rb[i], u)) continue;
                Bits t = u;
                for (std::size_t k = 0; k < t.size(); ++k) t[k] |= rb[i][k];
                const double v = value_on(rb, book.weights, t, cell);
                if (v > step) step = v, pick = i;
            }
            if (pick == rb.size()) break;
            for (std::size_t k = 0; k < u.size(); ++k) u[k] |= rb[pick][k];
            cur = step;
        }
        if (cur > best) best = cur, witness = covered_members(book, rb, u);
    }
    return finish(book, std::sqrt(best), witness, Exactness::lower_bound);
}

}  // namespace

BmoReport bmo_dyadic(const CoefficientBook& book) {
    require_dim(book, 1, "bmo_dyadic");
    HeapTable t = load(book);
    t.accumulate(0);
    return best_rectangle(book, t);
}

BmoReport bmo_dyadic(const Signal& b, WaveletFamily family) { return bmo_dyadic(book_for(b, family)); }

double bmo_dyadic_shift_average(const Signal& b, int shifts) {
    if (b.grid().dim() != 1) throw ValidationError("bmo_dyadic_shift_average needs d = 1");
    const auto N = b.grid().per_axis();
    const auto step = (N + 2) / 3;
    double sum = 0;
    for (int s = 0; s < shifts; ++s) {
        Signal t(b.grid());
        const auto off = (s * step) % N;
        for (std::int64_t x = 0; x < N; ++x) t[(x + off) % N] = b[x];
        sum += bmo_dyadic(t).value;
    }
    return sum / shifts;
}

BmoReport bmo_rect(const CoefficientBook& book) {
    require_dim(book, 2, "bmo_rect");
    HeapTable t = load(book);
    t.accumulate(1);
    t.accumulate(0);
    return best_rectangle(book, t);
}

BmoReport bmo_rect(const Signal& b, WaveletFamily family) { return bmo_rect(book_for(b, family)); }

BmoReport bmo_minus1(const CoefficientBook& book) {
    require_dim(book, 2, "bmo_minus1");
    // Fix side I on one axis. A collection sharing I has shadow I x E with E the union of
    // its other sides; by the mediant inequality the best E is a single member side J,
    // and then the collection is every member with other side inside J.
    const HeapTable raw = load(book);
    double best = 0;
    std::vector<DyadicRectangle> witness;
    for (int axis = 0; axis < 2; ++axis) {
        HeapTable t = load(book);
        t.accumulate(1 - axis);
        for (std::int64_t a = 1; a < t.H; ++a)
            for (std::int64_t b = 1; b < t.H; ++b) {
                const auto fixed = axis == 0 ? a * t.H + b : b * t.H + a;
                if (raw.t[static_cast<std::size_t>(fixed)] == 0) continue;
                const auto I = heap_interval(a), J = heap_interval(b);
                const double v = t.t[static_cast<std::size_t>(fixed)] / (I.length() * J.length());
                if (v <= best) continue;
                best = v;
                witness.clear();
                for (const auto& R : book.rects)
                    if (R.side(axis) == I && J.contains(R.side(1 - axis))) witness.push_back(R);
            }
    }
    return finish(book, std::sqrt(best), std::move(witness), Exactness::exact);
}

BmoReport bmo_minus1(const Signal& b, WaveletFamily family) { return bmo_minus1(book_for(b, family)); }

BmoReport bmo_product(const CoefficientBook& book, BmoMode mode) {
    require_dim(book, 2, "bmo_product");
    return mode == BmoMode::exact ? product_exact(book) : product_heuristic(book);
}

BmoReport bmo_product(const Signal& b, BmoMode mode, WaveletFamily family) {
    return bmo_product(book_for(b, family), mode);
}

}  // namespace nehari
