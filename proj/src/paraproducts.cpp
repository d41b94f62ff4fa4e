#include "nehari/paraproducts.hpp"

#include <cmath>
#include <map>

#include "nehari/transforms.hpp"

namespace nehari {

namespace {

void require_line(const Grid& g, const char* what) {
    if (g.dim() != 1) throw ValidationError(std::string(what) + " needs a 1D grid");
}

CMatrix as_column(const Signal& f) {
    CMatrix c(static_cast<Eigen::Index>(f.size()), 1);
    for (std::size_t i = 0; i < f.size(); ++i) c(static_cast<Eigen::Index>(i), 0) = f[i];
    return c;
}

void add_rank_one(CMatrix& m, cplx coef, const Signal& psi, const Signal& phi, double weight) {
    m.noalias() += (coef * weight) * as_column(psi) * as_column(phi).adjoint();
}

}  // namespace

CMatrix rank_one(const Signal& psi, const Signal& phi) {
    if (psi.grid() != phi.grid()) throw ValidationError("rank_one needs a common grid");
    return as_column(psi) * as_column(phi).adjoint() * psi.grid().weight();
}

CMatrix ParaproductPiece::matrix(const Grid& grid) const {
    const auto N = static_cast<Eigen::Index>(grid.size());
    CMatrix m = CMatrix::Zero(N, N);
    for (const auto& t : terms) add_rank_one(m, t.coefficient, t.psi, t.phi, grid.weight());
    return m;
}

CMatrix ParaproductPieces::total() const {
    const auto N = static_cast<Eigen::Index>(grid.size());
    CMatrix m = CMatrix::Zero(N, N);
    for (const auto& p : pieces) m += p.matrix(grid);
    return m;
}

Signal para_haar(const Signal& b, const Signal& f) {
    require_line(b.grid(), "para_haar");
    if (b.grid() != f.grid()) throw ValidationError("para_haar needs a common grid");
    const HaarCoefficients cb = haar_analysis(b), cf = haar_analysis(f);
    const int n = b.grid().depth();
    // Dyadic averages <f>_I, built top-down from the Haar coefficients of f.
    HaarCoefficients out{b.grid(), std::vector<cplx>(cb.table.size(), 0)};
    std::vector<cplx> avg(cb.table.size(), 0);
    avg[1] = cf.mean();
    // Direct recursion: <f>_{I_left} = <f>_I - c_I |I|^{-1/2}, <f>_{I_right} = <f>_I + c_I |I|^{-1/2}.
    for (std::int64_t h = 1; h < (std::int64_t{1} << n); ++h) {
        const DyadicInterval I = heap_interval(h);
        const double inv = 1.0 / std::sqrt(I.length());
        if (2 * h + 1 < (std::int64_t{1} << n)) {
            avg[static_cast<std::size_t>(2 * h)] = avg[static_cast<std::size_t>(h)] - cf.table[static_cast<std::size_t>(h)] * inv;
            avg[static_cast<std::size_t>(2 * h + 1)] = avg[static_cast<std::size_t>(h)] + cf.table[static_cast<std::size_t>(h)] * inv;
        }
        out.table[static_cast<std::size_t>(h)] = cb.table[static_cast<std::size_t>(h)] * avg[static_cast<std::size_t>(h)];
    }
    return haar_synthesis(out);
}

CMatrix para_haar_matrix(const Signal& b) {
    const Grid& g = b.grid();
    const auto N = static_cast<Eigen::Index>(g.size());
    CMatrix m(N, N);
    for (Eigen::Index c = 0; c < N; ++c) {
        Signal e(g);
        e[static_cast<std::size_t>(c)] = 1;
        m.col(c) = as_column(para_haar(b, e));
    }
    return m;
}

ParaNorm para_norm_ratio(const Signal& b) {
    ParaNorm r;
    r.bmo = bmo_dyadic(b).value;
    if (r.bmo == 0) {
        r.skipped = true;
        return r;
    }
    r.norm = operator_norm(para_haar_matrix(b));
    r.ratio = r.norm / r.bmo;
    return r;
}

Signal dyadic_shift_G(const Signal& f) {
    require_line(f.grid(), "dyadic_shift_G");
    const auto& g = f.grid();
    const HaarCoefficients c = haar_analysis(f);
    Signal out(g);
    for (const auto& J : enumerate_intervals(g, 4 * g.step())) {
        const cplx a = c.table[static_cast<std::size_t>(heap_index(J))];
        if (a == cplx(0)) continue;
        const Signal gj = shifted_haar_g(J, g);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * gj[i];
    }
    return out;
}

CMatrix dyadic_shift_matrix(const Grid& grid) {
    require_line(grid, "dyadic_shift_matrix");
    const auto N = static_cast<Eigen::Index>(grid.size());
    CMatrix m(N, N);
    for (Eigen::Index c = 0; c < N; ++c) {
        Signal e(grid);
        e[static_cast<std::size_t>(c)] = 1;
        m.col(c) = as_column(dyadic_shift_G(e));
    }
    return m;
}

CMatrix g_left_matrix(const Grid& grid) {
    require_line(grid, "g_left_matrix");
    const auto N = static_cast<Eigen::Index>(grid.size());
    CMatrix m = CMatrix::Zero(N, N);
    for (const auto& J : enumerate_intervals(grid, 4 * grid.step()))
        add_rank_one(m, 1, haar_function(0, J.left_child(), grid), haar_function(0, J, grid), grid.weight());
    return m;
}

CMatrix commutator_Gleft(const Signal& b) {
    const CMatrix G = g_left_matrix(b.grid());
    const CVector d = as_column(b).col(0);
    return d.asDiagonal() * G - G * d.asDiagonal();
}

DecompositionReport decompose_commutator_Gleft(const Signal& b) {
    const Grid& g = b.grid();
    require_line(g, "decompose_commutator_Gleft");
    const HaarCoefficients cb = haar_analysis(b);
    const auto Is = enumerate_intervals(g, 2 * g.step());
    const auto Js = enumerate_intervals(g, 4 * g.step());
    std::map<DyadicInterval, Signal> h0, h1;
    for (const auto& I : Is) {
        h0.emplace(I, haar_function(0, I, g));
        h1.emplace(I, haar_function(1, I, g));
    }

    const char* labels[] = {"I=J_left: h1_{J_left} x h_J",   "I=J_left: h_{J_left} x h_{J_left}",
                            "I=J_right: h_{J_left} x h_{J_right}", "I=J: h_{J_left} x h_J",
                            "I=J: h_{J_left} x h1_J",        "I<J_left: h_I x h_J",
                            "I<J_left: h_{J_left} x h_I",    "I<J_right: h_{J_left} x h_I"};
    DecompositionReport rep{{g, {}}, 0, 0};
    for (const char* l : labels) rep.pieces.pieces.push_back({l, {}});
    auto& P = rep.pieces.pieces;

    // Same expansion with the printed table, whose h is positive on the left half (minus ours),
    // rewritten in this basis; it has no I<J_right case.
    const auto N = static_cast<Eigen::Index>(g.size());
    CMatrix printed = CMatrix::Zero(N, N);
    const double w = g.weight(), r2 = std::sqrt(2.0);

    // In this convention h_J is -|J|^{-1/2} on J_left.
    const double s = -1;
    for (const auto& J : Js) {
        const DyadicInterval Jl = J.left_child(), Jr = J.right_child();
        const double kJ = 1 / std::sqrt(J.length());
        for (const auto& I : Is) {
            if (!J.contains(I)) continue;  // disjoint or J strictly inside I: zero
            const cplx beta = cb.table[static_cast<std::size_t>(heap_index(I))];
            if (beta == cplx(0)) continue;
            const cplx k = beta * kJ;
            const cplx kp = -beta * kJ;  // <b, h_I> with h positive on the left half
            if (I == Jl) {
                P[0].terms.push_back({r2 * k, h1.at(Jl), h0.at(J)});
                P[1].terms.push_back({-s * k, h0.at(Jl), h0.at(Jl)});
                // the ambiguous sign is taken to agree with the exact algebra
                add_rank_one(printed, -r2 * kp, h1.at(Jl), h0.at(J), w);
                add_rank_one(printed, -r2 * kp, h0.at(Jl), h0.at(Jl), w);
            } else if (I == Jr) {
                P[2].terms.push_back({s * k, h0.at(Jl), h0.at(Jr)});
                add_rank_one(printed, kp, h0.at(Jl), h0.at(Jr), w);
            } else if (I == J) {
                P[3].terms.push_back({s * k, h0.at(Jl), h0.at(J)});
                P[4].terms.push_back({-k, h0.at(Jl), h1.at(J)});
                add_rank_one(printed, -r2 * kp, h0.at(Jl), h0.at(J), w);
                add_rank_one(printed, kp, h0.at(Jl), h1.at(J), w);
            } else if (Jl.contains(I)) {
                const double sigma = haar_sign(Jl, I.center());
                P[5].terms.push_back({sigma * r2 * k, h0.at(I), h0.at(J)});
                P[6].terms.push_back({-s * k, h0.at(Jl), h0.at(I)});
                add_rank_one(printed, r2 * kp, h0.at(I), h0.at(J), w);
                add_rank_one(printed, -kp, h0.at(Jl), h0.at(I), w);
            } else {
                P[7].terms.push_back({s * k, h0.at(Jl), h0.at(I)});
            }
        }
    }
    const CMatrix target = commutator_Gleft(b);
    rep.residual = (rep.pieces.total() - target).cwiseAbs().maxCoeff();
    rep.printed_table_residual = (printed - target).cwiseAbs().maxCoeff();
    return rep;
}

}  // namespace nehari
