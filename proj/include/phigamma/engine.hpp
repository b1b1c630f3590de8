#pragma once

#include <array>
#include <memory>
#include <vector>

#include "phigamma/matrix.hpp"
#include "phigamma/module.hpp"

namespace phigamma {

/// Exponent window [lo, hi) carrying all d basis vectors of the module.
struct Block {
    int lo = 0, hi = 0;
    int width() const { return hi - lo; }
};

/// Direct sum of windows; coordinate (b, j, k) sits at off[b] + j * width + (k - lo).
struct Space {
    int d = 0;
    std::vector<Block> blocks;
    std::vector<int> off;
    int dim = 0;

    Space() = default;
    Space(int rank, std::vector<Block> bs);
    int index(int b, int j, int k) const { return off[static_cast<std::size_t>(b)] + j * blocks[static_cast<std::size_t>(b)].width() + (k - blocks[static_cast<std::size_t>(b)].lo); }
};

/**
 * Image of the Delta-averaging projector on a space, with a basis whose
 * restriction to `rows` is the identity (so coordinates are read off rows).
 */
struct Projection {
    std::vector<int> rows;
    std::vector<std::array<int, 3>> keys;  // (block, basis index, exponent) of each row
    Mat S;  // dim x rows.size()
};

enum class Op { Id, Phi, Gam, Psi };

/// One block of an assembled map: scale * op from src block sb to dst block db.
struct BlockOp {
    int sb = 0, db = 0;
    Op op = Op::Id;
    i64 scale = 1;
};

/**
 * phi, gamma_c and psi of a module on flattened windows over Z/p^N.
 * Phi and Gam entries must be integral power series; psi further needs an
 * integral power-series inverse of Phi.
 */
class ModuleEngine {
public:
    explicit ModuleEngine(const PhiGammaModule& M);

    const PhiGammaModule& module() const { return M_; }
    SeriesRing& ring() { return *ring_; }
    const Zq& R() const { return ring_->R(); }
    u64 p() const { return M_.p; }
    int N() const { return M_.N; }
    int rank() const { return M_.rank; }
    u64 gamma0() const { return c0_; }
    u64 omega() const { return omega_; }

    /// Largest pole order of phi(pi^{-L} e_j) over j.
    int phi_pole(int L);
    /// psi(pi^H ...) lies in pi^{result}; psi(pi^{-L} ...) has poles of order <= psi_pole(L).
    int psi_top(int H);
    int psi_pole(int L);

    /// Images of pi^k e_j under op, one ZL per output basis vector, truncated below top.
    std::vector<ZL> image(Op op, int k, int j, int kmin, int top);

    Mat assemble(const Space& src, const Space& dst, const std::vector<BlockOp>& ops);
    Projection project(const Space& sp);
    /// Full matrix of the averaging projector on a single window.
    Mat projector_matrix(const Block& b);

    /// Projected coordinates of A (dst x src in full coordinates).
    Mat restrict(const Mat& A, const Projection& src, const Projection& dst) const;
    /// Identity on shared coordinates (truncation or inclusion), projected.
    Mat transfer(const Space& src, const Projection& ps, const Space& dst, const Projection& pd) const;

private:
    struct Entry {
        ZL f;
        int known_top = 0;
    };
    using EntryMatrix = std::vector<std::vector<Entry>>;
    static Entry to_entry(const TruncatedLaurent& f, const char* what);
    void ensure_phi_inverse();

    PhiGammaModule M_;
    std::shared_ptr<SeriesRing> ring_;
    EntryMatrix phi_, gam_, phiinv_;
    bool have_phiinv_ = false;
    std::vector<u64> delta_;
    u64 c0_ = 0, omega_ = 0;
};

}  // namespace phigamma
