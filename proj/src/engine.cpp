#include "phigamma/engine.hpp"

#include <algorithm>
#include <climits>

namespace phigamma {

Space::Space(int rank, std::vector<Block> bs) : d(rank), blocks(std::move(bs)) {
    for (auto& b : blocks) {
        if (b.hi < b.lo) throw PreconditionError("empty window");
        off.push_back(dim);
        dim += d * b.width();
    }
}

ModuleEngine::Entry ModuleEngine::to_entry(const TruncatedLaurent& f, const char* what) {
    Entry e;
    int E = 0;
    e.f = f.scaled(E);
    if (E != 0) throw PreconditionError(std::string(what) + " entries must be integral");
    if (!e.f.empty() && e.f.lo < 0) throw PreconditionError(std::string(what) + " entries must be power series");
    e.known_top = f.tail() ? f.hi() + 1 : INT_MAX;
    return e;
}

ModuleEngine::ModuleEngine(const PhiGammaModule& M) : M_(M), ring_(series_ring(M.p, M.N)) {
    for (int i = 0; i < M.rank; ++i) {
        phi_.emplace_back();
        gam_.emplace_back();
        for (int j = 0; j < M.rank; ++j) {
            phi_.back().push_back(to_entry(M.phi[i][j], "Phi"));
            gam_.back().push_back(to_entry(M.gam[i][j], "Gam"));
        }
    }
    const Zq& R = ring_->R();
    for (int i = 0; i < M.rank; ++i)
        for (int j = 0; j < M.rank; ++j) {
            const PAdic& x = M.delta[i][j];
            if (i != j) {
                if (!x.is_zero()) throw PreconditionError("Delta must be diagonal");
                continue;
            }
            if (!x.is_unit() || x.denom_exp() != 0) throw PreconditionError("Delta entries must be units");
            u64 v = x.mantissa() % R.q;
            if (R.pow(v, M.p - 1) != 1) throw PreconditionError("Delta must have order dividing p-1");
            delta_.push_back(v);
        }
    c0_ = GammaElement::generator(M.p, M.N).c;
    omega_ = GammaElement::make(M.p, M.N, primitive_root(M.p), 0).c;
}

void ModuleEngine::ensure_phi_inverse() {
    if (have_phiinv_) return;
    LaurentMatrix inv = mat_inverse(M_.phi);
    phiinv_.clear();
    for (auto& row : inv) {
        phiinv_.emplace_back();
        for (auto& x : row) phiinv_.back().push_back(to_entry(x, "Phi^-1"));
    }
    have_phiinv_ = true;
}

int ModuleEngine::phi_pole(int L) {
    int pole = 0;
    int lowest = INT_MAX;
    for (auto& row : phi_)
        for (auto& e : row)
            if (!e.f.empty()) lowest = std::min(lowest, e.f.valuation());
    if (lowest == INT_MAX) lowest = 0;
    for (int k = 1; k <= L; ++k) {
        const ZL& f = ring_->phi_mono(-k);
        pole = std::max(pole, -(f.valuation() + lowest));
    }
    return pole;
}

int ModuleEngine::psi_top(int H) {
    ensure_phi_inverse();
    return psi_valuation_bound(*ring_, H);
}

int ModuleEngine::psi_pole(int L) {
    ensure_phi_inverse();
    return psi_pole_bound(*ring_, L);
}

std::vector<ZL> ModuleEngine::image(Op op, int k, int j, int kmin, int top) {
    const int d = M_.rank;
    std::vector<ZL> out(static_cast<std::size_t>(d));
    auto need = [](const Entry& e, int t) {
        if (e.known_top < t) throw PreconditionError("module entry not known far enough for the window");
    };
    switch (op) {
        case Op::Id:
            if (k < top) out[static_cast<std::size_t>(j)] = ZL::mono(k);
            break;
        case Op::Phi: {
            const ZL& f = ring_->phi_mono(k);
            for (int i = 0; i < d; ++i) {
                const Entry& e = phi_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (e.f.empty()) continue;
                need(e, top - f.valuation());
                out[static_cast<std::size_t>(i)] = ring_->mul(e.f, f, top);
            }
            break;
        }
        case Op::Gam: {
            const auto& tab = ring_->gamma_table(c0_, kmin, top);
            const ZL& g = tab[static_cast<std::size_t>(k - kmin)];
            for (int i = 0; i < d; ++i) {
                const Entry& e = gam_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (e.f.empty()) continue;
                need(e, top - k);
                out[static_cast<std::size_t>(i)] = ring_->mul(e.f, g, top);
            }
            break;
        }
        case Op::Psi: {
            ensure_phi_inverse();
            for (int i = 0; i < d; ++i) {
                const Entry& e = phiinv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (e.f.empty()) continue;
                if (e.known_top != INT_MAX && psi_valuation_bound(*ring_, e.known_top + k) < top)
                    throw PreconditionError("Phi^-1 not known far enough for psi on the window");
                ZL x = e.f;
                x.lo += k;
                ZL y = ring_->psi(x);
                out[static_cast<std::size_t>(i)] = ring_->mul(y, ZL::mono(0), top);
            }
            break;
        }
    }
    return out;
}

Mat ModuleEngine::assemble(const Space& src, const Space& dst, const std::vector<BlockOp>& ops) {
    const Zq& R = ring_->R();
    Mat A(dst.dim, src.dim);
    for (auto& op : ops) {
        const Block& sb = src.blocks[static_cast<std::size_t>(op.sb)];
        const Block& db = dst.blocks[static_cast<std::size_t>(op.db)];
        const u64 s = R.from(op.scale);
        for (int j = 0; j < src.d; ++j)
            for (int k = sb.lo; k < sb.hi; ++k) {
                auto imgs = image(op.op, k, j, sb.lo, db.hi);
                const int col = src.index(op.sb, j, k);
                for (int i = 0; i < dst.d; ++i) {
                    const ZL& f = imgs[static_cast<std::size_t>(i)];
                    for (std::size_t t = 0; t < f.c.size(); ++t) {
                        if (!f.c[t]) continue;
                        int e = f.lo + static_cast<int>(t);
                        if (e >= db.hi) break;
                        if (e < db.lo) throw PreconditionError("image leaves the target window");
                        u64& x = A(dst.index(op.db, i, e), col);
                        x = R.add(x, R.mul(s, f.c[t]));
                    }
                }
            }
    }
    return A;
}

Projection ModuleEngine::project(const Space& sp) {
    const Zq& R = ring_->R();
    const int P1 = static_cast<int>(M_.p - 1);
    const u64 inv = R.inv(R.from(P1));
    std::vector<u64> wpow(static_cast<std::size_t>(P1));
    {
        u64 w = omega_ % R.q;
        wpow[0] = 1;
        for (int t = 1; t < P1; ++t) wpow[static_cast<std::size_t>(t)] = R.mul(wpow[static_cast<std::size_t>(t - 1)], w);
    }
    struct Col {
        int b, j, k;
        std::vector<u64> v;
    };
    std::vector<Col> cols;
    for (int b = 0; b < static_cast<int>(sp.blocks.size()); ++b) {
        const Block& bl = sp.blocks[static_cast<std::size_t>(b)];
        std::vector<const std::vector<ZL>*> tabs;
        for (int t = 1; t < P1; ++t) {
            u64 c = GammaElement::make(M_.p, M_.N, R.pow(primitive_root(M_.p), static_cast<u64>(t)) % M_.p, 0).c;
            tabs.push_back(&ring_->gamma_table(c, bl.lo, bl.hi));
        }
        for (int j = 0; j < sp.d; ++j) {
            const u64 dj = delta_[static_cast<std::size_t>(j)];
            std::vector<int> cls;
            for (int k = bl.lo; k < bl.hi; ++k) {
                int r = ((k % P1) + P1) % P1;
                if (R.mul(dj, wpow[static_cast<std::size_t>(r)]) == 1) cls.push_back(k);
            }
            std::vector<std::vector<u64>> vs(cls.size());
            // Columns e(pi^k e_j) are unitriangular on the class rows; clear the other class rows.
            for (std::size_t ci = cls.size(); ci-- > 0;) {
                const int k = cls[ci];
                std::vector<u64> v(static_cast<std::size_t>(bl.width()), 0);
                v[static_cast<std::size_t>(k - bl.lo)] = 1;
                u64 djt = 1;
                for (int t = 1; t < P1; ++t) {
                    djt = R.mul(djt, dj);
                    const ZL& g = (*tabs[static_cast<std::size_t>(t - 1)])[static_cast<std::size_t>(k - bl.lo)];
                    for (std::size_t s = 0; s < g.c.size(); ++s) {
                        int e = g.lo + static_cast<int>(s);
                        if (e >= bl.hi) break;
                        if (!g.c[s]) continue;
                        auto& x = v[static_cast<std::size_t>(e - bl.lo)];
                        x = R.add(x, R.mul(djt, g.c[s]));
                    }
                }
                for (auto& x : v) x = R.mul(x, inv);
                for (std::size_t cj = ci + 1; cj < cls.size(); ++cj) {
                    u64 f = v[static_cast<std::size_t>(cls[cj] - bl.lo)];
                    if (!f) continue;
                    const auto& w = vs[cj];
                    for (std::size_t s = 0; s < v.size(); ++s)
                        if (w[s]) v[s] = R.sub(v[s], R.mul(f, w[s]));
                }
                vs[ci] = std::move(v);
            }
            for (std::size_t ci = 0; ci < cls.size(); ++ci) cols.push_back({b, j, cls[ci], std::move(vs[ci])});
        }
    }
    Projection pr;
    pr.S = Mat(sp.dim, static_cast<int>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const Col& col = cols[c];
        const Block& bl = sp.blocks[static_cast<std::size_t>(col.b)];
        pr.rows.push_back(sp.index(col.b, col.j, col.k));
        pr.keys.push_back({col.b, col.j, col.k});
        for (int e = bl.lo; e < bl.hi; ++e) {
            u64 x = col.v[static_cast<std::size_t>(e - bl.lo)];
            if (x) pr.S(sp.index(col.b, col.j, e), static_cast<int>(c)) = x;
        }
    }
    return pr;
}

Mat ModuleEngine::projector_matrix(const Block& bl) {
    const Zq& R = ring_->R();
    const int P1 = static_cast<int>(M_.p - 1);
    Space sp(M_.rank, {bl});
    Mat P(sp.dim, sp.dim);
    const u64 inv = R.inv(R.from(P1));
    for (int t = 0; t < P1; ++t) {
        u64 c = GammaElement::make(M_.p, M_.N, R.pow(primitive_root(M_.p), static_cast<u64>(t)) % M_.p, 0).c;
        const auto& tab = ring_->gamma_table(c, bl.lo, bl.hi);
        for (int j = 0; j < M_.rank; ++j) {
            u64 djt = R.pow(delta_[static_cast<std::size_t>(j)], static_cast<u64>(t));
            for (int k = bl.lo; k < bl.hi; ++k) {
                const ZL& g = tab[static_cast<std::size_t>(k - bl.lo)];
                for (std::size_t s = 0; s < g.c.size(); ++s) {
                    int e = g.lo + static_cast<int>(s);
                    if (e >= bl.hi) break;
                    u64& x = P(sp.index(0, j, e), sp.index(0, j, k));
                    x = R.add(x, R.mul(R.mul(djt, g.c[s]), inv));
                }
            }
        }
    }
    return P;
}

Mat ModuleEngine::restrict(const Mat& A, const Projection& src, const Projection& dst) const {
    Mat rows(static_cast<int>(dst.rows.size()), A.cols);
    for (std::size_t r = 0; r < dst.rows.size(); ++r)
        std::copy(A.row(dst.rows[r]), A.row(dst.rows[r]) + A.cols, rows.row(static_cast<int>(r)));
    return matmul(ring_->R(), rows, src.S);
}

Mat ModuleEngine::transfer(const Space& src, const Projection& ps, const Space& dst, const Projection& pd) const {
    Mat J(static_cast<int>(pd.rows.size()), ps.S.cols);
    for (std::size_t r = 0; r < pd.keys.size(); ++r) {
        auto [b, j, k] = pd.keys[r];
        const Block& sb = src.blocks[static_cast<std::size_t>(b)];
        if (k < sb.lo || k >= sb.hi) continue;
        const int row = src.index(b, j, k);
        std::copy(ps.S.row(row), ps.S.row(row) + ps.S.cols, J.row(static_cast<int>(r)));
    }
    (void)dst;
    return J;
}

}  // namespace phigamma
