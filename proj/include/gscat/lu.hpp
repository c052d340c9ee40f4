#pragma once

// Dense LU for the small complex systems of the scattering problem. Partial
// pivoting is the fast path; if a pivot collapses the factorization is redone
// with complete pivoting and a numerical rank, which still solves consistent
// right-hand sides exactly (used for bound states that vanish on the tails).

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gscat/graph.hpp"
#include "gscat/scalar.hpp"

namespace gscat {

template <class C>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n) {
    if (n < 0 || n > kMaxVertices) throw std::out_of_range("SquareMatrix: size");
    a_.fill(C(0));
  }

  int size() const { return n_; }
  C& operator()(int i, int j) { return a_[std::size_t(i * kMaxVertices + j)]; }
  const C& operator()(int i, int j) const { return a_[std::size_t(i * kMaxVertices + j)]; }

 private:
  int n_ = 0;
  std::array<C, kMaxVertices * kMaxVertices> a_{};
};

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class R>
class LuFactorization {
 public:
  using C = Complex<R>;

  LuFactorization() = default;

  explicit LuFactorization(const SquareMatrix<C>& m) : lu_(m), n_(m.size()), rank_(m.size()) {
    using std::abs;
    for (int i = 0; i < n_; ++i) {
      row_perm_[std::size_t(i)] = i;
      col_perm_[std::size_t(i)] = i;
      for (int j = 0; j < n_; ++j) scale_ = std::max(scale_, abs1(m(i, j)));
    }
    if (!factor_partial()) {
      lu_ = m;
      for (int i = 0; i < n_; ++i) {
        row_perm_[std::size_t(i)] = i;
        col_perm_[std::size_t(i)] = i;
      }
      factor_complete();
    }
  }

  int size() const { return n_; }
  int rank() const { return rank_; }
  bool rank_deficient() const { return rank_ < n_; }

  /// Solves M x = b. In the rank-deficient case throws SingularSystem when b
  /// is outside the range of M.
  void solve(std::span<const C> b, std::span<C> x) const {
    using std::abs;
    std::array<C, kMaxVertices> y{};
    R bmax(0);
    for (int i = 0; i < n_; ++i) {
      y[std::size_t(i)] = b[std::size_t(row_perm_[std::size_t(i)])];
      bmax = std::max(bmax, abs1(y[std::size_t(i)]));
    }
    for (int i = 0; i < n_; ++i) {
      C acc = y[std::size_t(i)];
      for (int j = 0; j < std::min(i, rank_); ++j) acc -= lu_(i, j) * y[std::size_t(j)];
      y[std::size_t(i)] = acc;
    }
    if (rank_deficient()) {
      using std::sqrt;
      const R tol = sqrt(ScalarTraits<R>::epsilon()) * std::max(bmax, R(1));
      for (int i = rank_; i < n_; ++i) {
        if (abs1(y[std::size_t(i)]) > tol) throw SingularSystem("inconsistent right-hand side");
        y[std::size_t(i)] = C(0);
      }
    }
    for (int i = rank_ - 1; i >= 0; --i) {
      C acc = y[std::size_t(i)];
      for (int j = i + 1; j < rank_; ++j) acc -= lu_(i, j) * y[std::size_t(j)];
      y[std::size_t(i)] = acc * inv_pivot_[std::size_t(i)];
    }
    for (int i = 0; i < n_; ++i) x[std::size_t(col_perm_[std::size_t(i)])] = y[std::size_t(i)];
  }

  /// Basis of the numerical null space (empty at full rank), in the
  /// original column order.
  std::vector<std::array<C, kMaxVertices>> null_space() const {
    std::vector<std::array<C, kMaxVertices>> out;
    for (int f = rank_; f < n_; ++f) {
      std::array<C, kMaxVertices> y{};
      y[std::size_t(f)] = C(1);
      for (int i = rank_ - 1; i >= 0; --i) {
        C acc = -lu_(i, f);
        for (int j = i + 1; j < rank_; ++j) acc -= lu_(i, j) * y[std::size_t(j)];
        y[std::size_t(i)] = acc * inv_pivot_[std::size_t(i)];
      }
      std::array<C, kMaxVertices> x{};
      for (int i = 0; i < n_; ++i) x[std::size_t(col_perm_[std::size_t(i)])] = y[std::size_t(i)];
      out.push_back(x);
    }
    return out;
  }

 private:
  static R abs1(const C& z) {
    using std::abs;
    return R(abs(real(z)) + abs(imag(z)));
  }

  R pivot_floor() const { return R(1000) * ScalarTraits<R>::epsilon() * scale_; }

  bool factor_partial() {
    const R floor = pivot_floor();
    for (int j = 0; j < n_; ++j) {
      int p = j;
      R best = abs1(lu_(j, j));
      for (int i = j + 1; i < n_; ++i) {
        const R v = abs1(lu_(i, j));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (!(best > floor)) return false;
      if (p != j) {
        for (int c = 0; c < n_; ++c) std::swap(lu_(j, c), lu_(p, c));
        std::swap(row_perm_[std::size_t(j)], row_perm_[std::size_t(p)]);
      }
      eliminate(j);
    }
    return true;
  }

  void factor_complete() {
    const R floor = pivot_floor();
    for (int j = 0; j < n_; ++j) {
      int pr = j;
      int pc = j;
      R best(-1);
      for (int i = j; i < n_; ++i)
        for (int c = j; c < n_; ++c) {
          const R v = abs1(lu_(i, c));
          if (v > best) {
            best = v;
            pr = i;
            pc = c;
          }
        }
      if (!(best > floor)) {
        rank_ = j;
        return;
      }
      if (pr != j) {
        for (int c = 0; c < n_; ++c) std::swap(lu_(j, c), lu_(pr, c));
        std::swap(row_perm_[std::size_t(j)], row_perm_[std::size_t(pr)]);
      }
      if (pc != j) {
        for (int r = 0; r < n_; ++r) std::swap(lu_(r, j), lu_(r, pc));
        std::swap(col_perm_[std::size_t(j)], col_perm_[std::size_t(pc)]);
      }
      eliminate(j);
    }
  }

  void eliminate(int j) {
    const C inv = C(1) / lu_(j, j);
    inv_pivot_[std::size_t(j)] = inv;
    for (int i = j + 1; i < n_; ++i) {
      const C f = lu_(i, j) * inv;
      lu_(i, j) = f;
      if (f == C(0)) continue;
      for (int c = j + 1; c < n_; ++c) lu_(i, c) -= f * lu_(j, c);
    }
  }

  SquareMatrix<C> lu_;
  int n_ = 0;
  int rank_ = 0;
  R scale_ = R(0);
  std::array<int, kMaxVertices> row_perm_{};
  std::array<int, kMaxVertices> col_perm_{};
  std::array<C, kMaxVertices> inv_pivot_{};
};

}  // namespace gscat
