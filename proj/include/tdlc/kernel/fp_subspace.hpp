#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "tdlc/error.hpp"
#include "tdlc/kernel/lamp_window.hpp"

namespace tdlc::kernel {

/// A linear subspace of F_p^{[lo,hi]}, kept as a reduced row echelon basis.
class FpSubspace {
 public:
  using Vec = std::vector<int>;

  FpSubspace(int p, std::int64_t lo, std::int64_t hi, std::vector<Vec> rows) : p_(p), lo_(lo), hi_(hi) {
    if (hi < lo) throw Error("FpSubspace: empty coordinate range");
    for (auto& r : rows)
      if (static_cast<std::int64_t>(r.size()) != width()) throw Error("FpSubspace: row width mismatch");
    basis_ = rref(std::move(rows));
  }

  static FpSubspace full(int p, std::int64_t lo, std::int64_t hi) {
    std::vector<Vec> rows;
    for (std::int64_t i = lo; i <= hi; ++i) {
      Vec v(hi - lo + 1, 0);
      v[i - lo] = 1;
      rows.push_back(v);
    }
    return FpSubspace(p, lo, hi, rows);
  }

  static FpSubspace zero(int p, std::int64_t lo, std::int64_t hi) { return FpSubspace(p, lo, hi, {}); }

  /// Vectors vanishing on the coordinates in [vlo, vhi] (clipped to the range).
  static FpSubspace vanishing_on(int p, std::int64_t lo, std::int64_t hi, std::int64_t vlo, std::int64_t vhi) {
    std::vector<Vec> rows;
    for (std::int64_t i = lo; i <= hi; ++i) {
      if (i >= vlo && i <= vhi) continue;
      Vec v(hi - lo + 1, 0);
      v[i - lo] = 1;
      rows.push_back(v);
    }
    return FpSubspace(p, lo, hi, rows);
  }

  /// Solutions of c·x = 0 for each constraint row c.
  static FpSubspace from_constraints(int p, std::int64_t lo, std::int64_t hi, std::vector<Vec> constraints) {
    FpSubspace c(p, lo, hi, std::move(constraints));
    return FpSubspace(p, lo, hi, c.nullspace());
  }

  int p() const { return p_; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  std::int64_t width() const { return hi_ - lo_ + 1; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }

  bool contains(const Vec& v) const {
    auto rows = basis_;
    rows.push_back(v);
    return static_cast<int>(rref(std::move(rows)).size()) == dim();
  }

  /// Annihilator: all c with c·s = 0 for s in the subspace.
  std::vector<Vec> constraints() const { return nullspace(); }

  /// Same cylinder on a larger range: new coordinates are unconstrained.
  FpSubspace extended(std::int64_t lo, std::int64_t hi) const {
    if (lo > lo_ || hi < hi_) throw Error("FpSubspace::extended: range must grow");
    std::vector<Vec> rows;
    for (const auto& r : basis_) {
      Vec v(hi - lo + 1, 0);
      for (std::int64_t i = 0; i < width(); ++i) v[i + lo_ - lo] = r[i];
      rows.push_back(v);
    }
    for (std::int64_t i = lo; i <= hi; ++i) {
      if (i >= lo_ && i <= hi_) continue;
      Vec v(hi - lo + 1, 0);
      v[i - lo] = 1;
      rows.push_back(v);
    }
    return FpSubspace(p_, lo, hi, rows);
  }

  /// Image under the coordinate projection onto [lo, hi] ⊆ range.
  FpSubspace projected(std::int64_t lo, std::int64_t hi) const {
    if (lo < lo_ || hi > hi_) throw Error("FpSubspace::projected: range must shrink");
    std::vector<Vec> rows;
    for (const auto& r : basis_) rows.emplace_back(r.begin() + (lo - lo_), r.begin() + (hi - lo_ + 1));
    return FpSubspace(p_, lo, hi, rows);
  }

  /// Coordinates moved by s: (shifted v)_{i+s} = v_i.
  FpSubspace shifted(std::int64_t s) const {
    FpSubspace out = *this;
    out.lo_ += s;
    out.hi_ += s;
    return out;
  }

  FpSubspace intersect(const FpSubspace& other) const {
    if (other.lo_ != lo_ || other.hi_ != hi_ || other.p_ != p_) throw Error("FpSubspace::intersect: range mismatch");
    auto c = constraints();
    auto d = other.constraints();
    c.insert(c.end(), d.begin(), d.end());
    return from_constraints(p_, lo_, hi_, c);
  }

  friend bool operator==(const FpSubspace& a, const FpSubspace& b) {
    return a.p_ == b.p_ && a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.basis_ == b.basis_;
  }

  /// All p^dim vectors as codes of the lamp window of the given level; requires range = [-K, K].
  std::vector<Code> codes(const LampWindow& window, std::uint64_t cap) const {
    if (lo_ != -window.level() || hi_ != window.level()) throw Error("FpSubspace::codes: range is not the window");
    std::uint64_t count = 1;
    for (int i = 0; i < dim(); ++i) {
      count *= static_cast<std::uint64_t>(p_);
      if (count > cap) throw ResolutionTooFine(cap);
    }
    std::vector<Code> out;
    out.reserve(count);
    std::vector<int> coeff(dim(), 0);
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t t = c;
      for (int i = 0; i < dim(); ++i) {
        coeff[i] = static_cast<int>(t % p_);
        t /= p_;
      }
      Vec v(width(), 0);
      for (int i = 0; i < dim(); ++i)
        for (std::int64_t j = 0; j < width(); ++j) v[j] = (v[j] + coeff[i] * basis_[i][j]) % p_;
      out.push_back(window.encode(v));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int inv_mod(int a) const {
    for (int x = 1; x < p_; ++x)
      if ((a * x) % p_ == 1) return x;
    throw Error("FpSubspace: zero has no inverse");
  }

  std::vector<Vec> rref(std::vector<Vec> rows) const {
    for (auto& r : rows)
      for (auto& x : r) x = ((x % p_) + p_) % p_;
    std::size_t rank = 0;
    for (std::int64_t col = 0; col < width() && rank < rows.size(); ++col) {
      std::size_t piv = rank;
      while (piv < rows.size() && rows[piv][col] == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[rank]);
      const int iv = inv_mod(rows[rank][col]);
      for (auto& x : rows[rank]) x = (x * iv) % p_;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == rank || rows[r][col] == 0) continue;
        const int f = rows[r][col];
        for (std::int64_t j = 0; j < width(); ++j) rows[r][j] = ((rows[r][j] - f * rows[rank][j]) % p_ + p_) % p_;
      }
      ++rank;
    }
    rows.resize(rank);
    return rows;
  }

  std::vector<Vec> nullspace() const {
    std::vector<std::int64_t> pivots;
    for (const auto& r : basis_) {
      std::int64_t c = 0;
      while (r[c] == 0) ++c;
      pivots.push_back(c);
    }
    std::vector<Vec> out;
    for (std::int64_t free = 0; free < width(); ++free) {
      if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
      Vec v(width(), 0);
      v[free] = 1;
      for (std::size_t r = 0; r < basis_.size(); ++r) v[pivots[r]] = (p_ - basis_[r][free]) % p_;
      out.push_back(v);
    }
    return out;
  }

  int p_;
  std::int64_t lo_;
  std::int64_t hi_;
  std::vector<Vec> basis_;
};

}  // namespace tdlc::kernel
