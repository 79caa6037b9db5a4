#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocoo {

/// Occupation-number state over 2L spin-orbital modes.
///
/// Mode ordering is site-major with alpha before beta:
///   mode m = 2*site + spin,  site in [0, L),  spin 0 = alpha, 1 = beta.
/// A determinant like |1 1b 2 2b> is the bit pattern with modes 0,1,2,3 set.
struct FockState {
  std::uint32_t occ = 0;

  int particle_number() const { return std::popcount(occ); }

  bool occupied(int mode) const { return (occ >> mode) & 1u; }

  friend bool operator==(const FockState&, const FockState&) = default;
};

inline int mode_index(int site, int spin) { return 2 * site + spin; }

/// Fixed-(N, Sz) subspace of the 2^(2L) Fock space.
/// Basis states are ordered by ascending bit pattern, which is stable
/// across runs and platforms.
struct Sector {
  int n_sites = 0;
  int n_particles = 0;
  int sz_doubled = 0;  // 2*Sz = n_alpha - n_beta
  std::vector<FockState> basis;

  int dimension() const { return static_cast<int>(basis.size()); }

  /// Position of `occ` in the sector basis, or -1 if not a member.
  int index_of(std::uint32_t occ) const {
    int lo = 0, hi = dimension() - 1;
    while (lo <= hi) {
      int mid = (lo + hi) / 2;
      if (basis[mid].occ == occ) return mid;
      if (basis[mid].occ < occ)
        lo = mid + 1;
      else
        hi = mid - 1;
    }
    return -1;
  }
};

inline int alpha_count(std::uint32_t occ, int n_sites) {
  int n = 0;
  for (int s = 0; s < n_sites; ++s) n += (occ >> (2 * s)) & 1u;
  return n;
}

inline int beta_count(std::uint32_t occ, int n_sites) {
  int n = 0;
  for (int s = 0; s < n_sites; ++s) n += (occ >> (2 * s + 1)) & 1u;
  return n;
}

inline Sector enumerate_sector(int n_sites, int n_particles, int sz_doubled) {
  if (n_sites < 1 || n_sites > 15)
    throw std::invalid_argument("enumerate_sector: unsupported site count");
  if (n_particles < 0 || n_particles > 2 * n_sites)
    throw std::invalid_argument("enumerate_sector: particle count out of range");
  if (std::abs(sz_doubled) > n_particles ||
      ((n_particles - sz_doubled) % 2) != 0)
    throw std::invalid_argument("enumerate_sector: invalid (N, 2Sz) parity");

  Sector sec;
  sec.n_sites = n_sites;
  sec.n_particles = n_particles;
  sec.sz_doubled = sz_doubled;
  const std::uint32_t dim = 1u << (2 * n_sites);
  for (std::uint32_t occ = 0; occ < dim; ++occ) {
    const int na = alpha_count(occ, n_sites);
    const int nb = beta_count(occ, n_sites);
    if (na + nb == n_particles && na - nb == sz_doubled)
      sec.basis.push_back(FockState{occ});
  }
  return sec;
}

enum class OpKind { creation, annihilation };

/// Sparse creation/annihilation operator over the full 2^(2L) Fock space.
/// One entry per column: target[src] is the image state index (or -1 when
/// the action annihilates the state) and sign[src] the Jordan-Wigner phase
/// (-1)^(# occupied modes below `mode`).
struct ModeOperator {
  int n_modes = 0;
  int mode = 0;
  OpKind kind = OpKind::creation;
  std::vector<std::int32_t> target;
  std::vector<std::int8_t> sign;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    if (v.size() != static_cast<Eigen::Index>(target.size()))
      throw std::invalid_argument("ModeOperator::apply: dimension mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    for (Eigen::Index src = 0; src < v.size(); ++src)
      if (target[src] >= 0 && v[src] != 0.0)
        out[target[src]] += sign[src] * v[src];
    return out;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(target.size(), target.size());
    for (std::size_t src = 0; src < target.size(); ++src)
      if (target[src] >= 0) m(target[src], src) = sign[src];
    return m;
  }
};

inline int jordan_wigner_sign(std::uint32_t occ, int mode) {
  const std::uint32_t below = occ & ((1u << mode) - 1u);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

inline ModeOperator build_mode_operator(int n_sites, int mode, OpKind kind) {
  if (mode < 0 || mode >= 2 * n_sites)
    throw std::invalid_argument("build_mode_operator: mode out of range");
  ModeOperator op;
  op.n_modes = 2 * n_sites;
  op.mode = mode;
  op.kind = kind;
  const std::uint32_t dim = 1u << (2 * n_sites);
  op.target.assign(dim, -1);
  op.sign.assign(dim, 0);
  for (std::uint32_t src = 0; src < dim; ++src) {
    const bool occupied = (src >> mode) & 1u;
    if (kind == OpKind::creation ? occupied : !occupied) continue;
    op.target[src] = static_cast<std::int32_t>(src ^ (1u << mode));
    op.sign[src] = static_cast<std::int8_t>(jordan_wigner_sign(src, mode));
  }
  return op;
}

/// Applies a product of operators right-to-left: ops = {A, B, C} computes A B C v.
inline Eigen::VectorXd apply_operator_string(std::span<const ModeOperator> ops,
                                             const Eigen::VectorXd& v) {
  Eigen::VectorXd cur = v;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) cur = it->apply(cur);
  return cur;
}

/// Restriction of a full-space vector to a sector.
inline Eigen::VectorXd restrict_to_sector(const Eigen::VectorXd& full,
                                          const Sector& sector) {
  Eigen::VectorXd out(sector.dimension());
  for (int i = 0; i < sector.dimension(); ++i) out[i] = full[sector.basis[i].occ];
  return out;
}

/// S^2 restricted to a sector, built from S^2 = S- S+ + Sz (Sz + 1).
inline Eigen::MatrixXd spin_squared_sector(const Sector& sector) {
  const int L = sector.n_sites;
  const std::uint32_t dim = 1u << (2 * L);
  std::vector<ModeOperator> cre, ann;
  for (int m = 0; m < 2 * L; ++m) {
    cre.push_back(build_mode_operator(L, m, OpKind::creation));
    ann.push_back(build_mode_operator(L, m, OpKind::annihilation));
  }
  const int d = sector.dimension();
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v[sector.basis[col].occ] = 1.0;
    // S+ v, then S- (S+ v)
    Eigen::VectorXd sp = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < L; ++i)
      sp += cre[2 * i].apply(ann[2 * i + 1].apply(v));
    Eigen::VectorXd smsp = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < L; ++i)
      smsp += cre[2 * i + 1].apply(ann[2 * i].apply(sp));
    const double sz = 0.5 * sector.sz_doubled;
    Eigen::VectorXd total = smsp + sz * (sz + 1.0) * v;
    s2.col(col) = restrict_to_sector(total, sector);
  }
  return s2;
}

}  // namespace ocoo
