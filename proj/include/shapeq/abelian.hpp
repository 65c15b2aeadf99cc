#pragma once

// Abelianized and mod-2 computations: square matrices over Z or GF(2), their
// image chains im A^0 >= im A^1 >= ..., and the stable-image data.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shapeq/error.hpp"
#include "shapeq/word.hpp"

namespace shapeq {

enum class Ring { Z, GF2 };

inline const char* ring_name(Ring r) { return r == Ring::Z ? "Z" : "GF2"; }

using Vector = std::vector<mpz_class>;

/// Square matrix; column j is the image of generator j. GF2 entries are kept
/// in {0, 1}.
class Matrix {
 public:
  Matrix(Ring ring, std::size_t dim) : ring_(ring), dim_(dim), entries_(dim * dim, 0) {
    if (dim == 0) throw InvalidArgument("matrix dimension must be positive");
  }

  /// Row-major construction. GF2 entries are reduced mod 2.
  Matrix(Ring ring, const std::vector<std::vector<mpz_class>>& rows)
      : Matrix(ring, rows.size()) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (rows[i].size() != dim_) throw InvalidArgument("matrix must be square");
      for (std::size_t j = 0; j < dim_; ++j) set(i, j, rows[i][j]);
    }
  }

  static Matrix identity(Ring ring, std::size_t dim) {
    Matrix m(ring, dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1);
    return m;
  }

  Ring ring() const noexcept { return ring_; }
  std::size_t dim() const noexcept { return dim_; }

  const mpz_class& at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

  void set(std::size_t i, std::size_t j, mpz_class value) {
    if (ring_ == Ring::GF2) value = normalize_gf2(value);
    entries_[i * dim_ + j] = std::move(value);
  }

  Vector column(std::size_t j) const {
    Vector v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v[i] = at(i, j);
    return v;
  }

  Vector apply(const Vector& v) const {
    Vector out(dim_, 0);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) out[i] += at(i, j) * v[j];
      if (ring_ == Ring::GF2) out[i] = normalize_gf2(out[i]);
    }
    return out;
  }

  /// Entrywise reduction mod 2.
  Matrix mod2() const {
    Matrix m(Ring::GF2, dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = normalize_gf2(entries_[k]);
    return m;
  }

  bool is_zero() const {
    for (const auto& e : entries_) {
      if (e != 0) return false;
    }
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.ring_ != b.ring_) throw RingMismatch("cannot multiply Z and GF2 matrices");
    if (a.dim_ != b.dim_) throw InvalidArgument("matrix dimensions differ");
    Matrix c(a.ring_, a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i) {
      for (std::size_t j = 0; j < a.dim_; ++j) {
        mpz_class s = 0;
        for (std::size_t k = 0; k < a.dim_; ++k) s += a.at(i, k) * b.at(k, j);
        c.set(i, j, std::move(s));
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.ring_ == b.ring_ && a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        if (j) out += ' ';
        out += at(i, j).get_str();
      }
      out += '\n';
    }
    return out;
  }

 private:
  static mpz_class normalize_gf2(const mpz_class& v) {
    return mpz_class(mpz_odd_p(v.get_mpz_t()) ? 1 : 0);
  }

  Ring ring_;
  std::size_t dim_;
  std::vector<mpz_class> entries_;
};

inline Matrix power(const Matrix& a, std::size_t n) {
  Matrix result = Matrix::identity(a.ring(), a.dim());
  for (std::size_t k = 0; k < n; ++k) result = result * a;
  return result;
}

/// Canonical basis of a subgroup of Z^d (Hermite normal form, positive
/// pivots, entries above each pivot reduced into [0, pivot)) or of a subspace
/// of GF(2)^d (reduced row echelon form). Equal subgroups have equal bases.
class ImageBasis {
 public:
  ImageBasis(Ring ring, std::size_t dim, std::vector<Vector> generators)
      : ring_(ring), dim_(dim) {
    echelonize(std::move(generators));
  }

  /// The whole ambient group.
  static ImageBasis full(Ring ring, std::size_t dim) {
    std::vector<Vector> gens;
    for (std::size_t i = 0; i < dim; ++i) {
      Vector e(dim, 0);
      e[i] = 1;
      gens.push_back(std::move(e));
    }
    return ImageBasis(ring, dim, std::move(gens));
  }

  Ring ring() const noexcept { return ring_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return vectors_.size(); }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// Coordinates of `v` in this basis, or nullopt when `v` is not a member.
  std::optional<Vector> coordinates(Vector v) const {
    Vector coords(vectors_.size(), 0);
    for (std::size_t k = 0; k < vectors_.size(); ++k) {
      const std::size_t p = pivots_[k];
      // Entries before this pivot must already be cleared.
      for (std::size_t c = k == 0 ? 0 : pivots_[k - 1] + 1; c < p; ++c) {
        if (v[c] != 0) return std::nullopt;
      }
      if (v[p] == 0) continue;
      if (!mpz_divisible_p(v[p].get_mpz_t(), vectors_[k][p].get_mpz_t())) {
        return std::nullopt;
      }
      mpz_class q = v[p] / vectors_[k][p];
      coords[k] = q;
      for (std::size_t c = p; c < dim_; ++c) {
        v[c] -= q * vectors_[k][c];
        if (ring_ == Ring::GF2) v[c] = mpz_odd_p(v[c].get_mpz_t()) ? 1 : 0;
      }
    }
    for (const auto& e : v) {
      if (e != 0) return std::nullopt;
    }
    return coords;
  }

  bool contains(const Vector& v) const { return coordinates(v).has_value(); }

  /// Every basis vector of `other` lies in this subgroup.
  bool contains(const ImageBasis& other) const {
    for (const auto& v : other.vectors_) {
      if (!contains(v)) return false;
    }
    return true;
  }

  friend bool operator==(const ImageBasis& a, const ImageBasis& b) {
    return a.ring_ == b.ring_ && a.dim_ == b.dim_ && a.vectors_ == b.vectors_;
  }

  std::string to_string() const {
    if (vectors_.empty()) return "0";
    std::string out;
    for (const auto& v : vectors_) {
      if (!out.empty()) out += ", ";
      out += '(';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += v[i].get_str();
      }
      out += ')';
    }
    return "span{" + out + "}";
  }

 private:
  void reduce_entry(mpz_class& x) const {
    if (ring_ == Ring::GF2) x = mpz_odd_p(x.get_mpz_t()) ? 1 : 0;
  }

  void echelonize(std::vector<Vector> rows) {
    for (auto& r : rows) {
      if (r.size() != dim_) throw InvalidArgument("vector length does not match dimension");
      for (auto& x : r) reduce_entry(x);
    }
    std::size_t top = 0;
    for (std::size_t col = 0; col < dim_ && top < rows.size(); ++col) {
      // Euclid on column `col` among rows [top, end) until one nonzero remains.
      while (true) {
        std::size_t best = rows.size();
        for (std::size_t r = top; r < rows.size(); ++r) {
          if (rows[r][col] == 0) continue;
          if (best == rows.size() || abs(rows[r][col]) < abs(rows[best][col])) best = r;
        }
        if (best == rows.size()) break;
        std::swap(rows[top], rows[best]);
        bool others = false;
        for (std::size_t r = top + 1; r < rows.size(); ++r) {
          if (rows[r][col] == 0) continue;
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[top][col].get_mpz_t());
          for (std::size_t c = col; c < dim_; ++c) {
            rows[r][c] -= q * rows[top][c];
            reduce_entry(rows[r][c]);
          }
          if (rows[r][col] != 0) others = true;
        }
        if (!others) break;
      }
      if (rows[top][col] == 0) continue;
      if (rows[top][col] < 0) {
        for (auto& x : rows[top]) x = -x;
      }
      // Reduce entries above the pivot into [0, pivot).
      for (std::size_t r = 0; r < top; ++r) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[top][col].get_mpz_t());
        if (q == 0) continue;
        for (std::size_t c = col; c < dim_; ++c) {
          rows[r][c] -= q * rows[top][c];
          reduce_entry(rows[r][c]);
        }
      }
      pivots_.push_back(col);
      ++top;
    }
    rows.resize(top);
    vectors_ = std::move(rows);
  }

  Ring ring_;
  std::size_t dim_;
  std::vector<Vector> vectors_;
  std::vector<std::size_t> pivots_;
};

/// Image of a subgroup under a matrix.
inline ImageBasis image_of(const Matrix& a, const ImageBasis& basis) {
  std::vector<Vector> gens;
  gens.reserve(basis.rank());
  for (const auto& v : basis.vectors()) gens.push_back(a.apply(v));
  return ImageBasis(a.ring(), a.dim(), std::move(gens));
}

enum class ChainVerdict {
  Stabilizes,
  NeverStabilizes,
  Inconclusive,  // step budget exhausted
};

struct MatrixChainReport {
  Ring ring = Ring::Z;
  std::vector<ImageBasis> images;  // im A^0, im A^1, ...
  ChainVerdict verdict = ChainVerdict::Inconclusive;
  /// First n with im A^n = im A^(n+1).
  std::optional<std::size_t> stabilization_index;
  std::optional<std::size_t> stable_rank;
  /// First n with rank im A^n = rank im A^(n+1); from there on A is
  /// injective on the images.
  std::optional<std::size_t> rank_equal_index;
  /// Whether A restricted to the stable image is a bijection onto it.
  std::optional<bool> restricted_invertible;

  bool stabilizes() const noexcept { return verdict == ChainVerdict::Stabilizes; }
  bool conclusive() const noexcept { return verdict != ChainVerdict::Inconclusive; }
  const ImageBasis& stable_image() const {
    if (!stabilization_index) throw NotStabilized("image chain did not stabilize");
    return images.at(*stabilization_index);
  }
};

inline constexpr std::size_t kDefaultMaxSteps = 64;

namespace detail {

/// Determinant by fraction-free (Bareiss) elimination.
inline mpz_class determinant(std::vector<Vector> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  mpz_class sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Matrix (rows = coordinates of A b_j) of A restricted to span(basis),
/// assuming A maps the span into itself.
inline std::vector<Vector> restricted_matrix(const Matrix& a, const ImageBasis& basis) {
  const std::size_t r = basis.rank();
  std::vector<Vector> m(r, Vector(r, 0));
  for (std::size_t j = 0; j < r; ++j) {
    auto coords = basis.coordinates(a.apply(basis.vectors()[j]));
    if (!coords) throw Error("stable image is not invariant under the matrix");
    for (std::size_t i = 0; i < r; ++i) m[i][j] = (*coords)[i];
  }
  return m;
}

inline bool is_unit(const mpz_class& det, Ring ring) {
  if (ring == Ring::GF2) return mpz_odd_p(det.get_mpz_t()) != 0;
  return det == 1 || det == -1;
}

}  // namespace detail

/// Computes im A^n until two consecutive images agree or `max_steps`
/// applications of A have been made.
///
/// Once two consecutive images have equal rank, A is injective on them and
/// the index [im A^n : im A^(n+1)] stays constant from then on; so an unequal
/// pair of equal rank means the chain never stabilizes. Over GF(2) equal
/// dimension forces equality, and the verdict is always reached by n <= dim.
inline MatrixChainReport image_chain(const Matrix& a, std::size_t max_steps = kDefaultMaxSteps) {
  if (max_steps == 0) throw InvalidArgument("max_steps must be positive");
  MatrixChainReport report;
  report.ring = a.ring();
  report.images.push_back(ImageBasis::full(a.ring(), a.dim()));
  for (std::size_t n = 0; n < max_steps; ++n) {
    report.images.push_back(image_of(a, report.images[n]));
    const ImageBasis& cur = report.images[n];
    const ImageBasis& next = report.images[n + 1];
    if (cur.rank() == next.rank() && !report.rank_equal_index) report.rank_equal_index = n;
    if (cur == next) {
      report.verdict = ChainVerdict::Stabilizes;
      report.stabilization_index = n;
      report.stable_rank = cur.rank();
      report.restricted_invertible =
          detail::is_unit(detail::determinant(detail::restricted_matrix(a, cur)), a.ring());
      return report;
    }
    if (cur.rank() == next.rank()) {
      report.verdict = ChainVerdict::NeverStabilizes;
      return report;
    }
  }
  return report;
}

/// Checks that A restricted to its stable image is a bijection of that
/// image, by computing the determinant of the restricted map. Throws
/// NotStabilized when the chain has no stable image.
inline bool stable_image_isomorphism_check(const Matrix& a,
                                           std::size_t max_steps = kDefaultMaxSteps) {
  MatrixChainReport chain = image_chain(a, max_steps);
  if (!chain.stabilizes()) {
    throw NotStabilized(chain.conclusive()
                            ? "image chain never stabilizes"
                            : "image chain not stabilized within " +
                                  std::to_string(max_steps) + " steps");
  }
  const ImageBasis& stable = chain.stable_image();
  auto restricted = detail::restricted_matrix(a, stable);
  return detail::is_unit(detail::determinant(std::move(restricted)), a.ring());
}

/// Matrix over Z whose column j counts, with sign, the occurrences of each
/// generator in the image of generator j. Conjugation abelianizes away.
inline Matrix abelianize(const FreeEndomorphism& phi) {
  if (phi.rank() == 0) throw InvalidArgument("cannot abelianize over an empty alphabet");
  Matrix m(Ring::Z, phi.rank());
  for (std::size_t j = 0; j < phi.rank(); ++j) {
    std::vector<long> counts(phi.rank(), 0);
    for (Letter l : phi.images()[j].letters()) counts[l.generator] += l.sign;
    for (std::size_t i = 0; i < phi.rank(); ++i) m.set(i, j, counts[i]);
  }
  return m;
}

struct HomologyVerdict {
  std::size_t degree = 0;
  std::size_t dimension = 0;  // dim of the stable image over GF(2)
  std::string text;
};

namespace detail {

inline std::string subscript(std::size_t n) {
  static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  std::string s = std::to_string(n);
  std::string out;
  for (char c : s) out += digits[c - '0'];
  return out;
}

}  // namespace detail

/// Reads A as the map induced on degree-d homology with Z_2 coefficients and
/// reports the dimension of the stable image as that of Ȟ_d(K; Z_2). With
/// `surface` set and d = 1, adds the wedge-of-circles shape.
inline HomologyVerdict homology_verdict(const Matrix& a, std::size_t degree, bool surface) {
  if (a.ring() != Ring::GF2) {
    throw RingMismatch("homology verdicts need a GF2 matrix (reduce mod 2 first)");
  }
  MatrixChainReport chain = image_chain(a, a.dim() + 1);
  HomologyVerdict v;
  v.degree = degree;
  v.dimension = chain.stable_rank.value();
  const std::string group = "Ȟ" + detail::subscript(degree) + "(K;ℤ₂)";
  v.text = v.dimension == 0 ? group + " = 0"
                            : group + " ≅ ℤ₂^" + std::to_string(v.dimension);
  if (surface && degree == 1) {
    if (v.dimension == 0) {
      v.text += "; K has the shape of a point (wedge of 0 circumferences)";
    } else {
      v.text += "; K has the shape of a wedge of " + std::to_string(v.dimension) +
                (v.dimension == 1 ? " circumference" : " circumferences");
    }
  }
  return v;
}

}  // namespace shapeq
