#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace classcover::detail {

// Prime-field arithmetic on small moduli; values are kept in [0, p).
inline int fp_pow(long long a, long long e, int p) {
  long long r = 1 % p;
  a %= p;
  if (a < 0) a += p;
  while (e > 0) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return static_cast<int>(r);
}

inline int fp_inv(int a, int p) { return fp_pow(a, p - 2, p); }

inline int primitive_root(int p) {
  if (p == 2) return 1;
  std::vector<int> factors;
  int m = p - 1;
  for (int d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  for (int g = 2; g < p; ++g) {
    bool ok = true;
    for (int f : factors)
      if (fp_pow(g, (p - 1) / f, p) == 1) ok = false;
    if (ok) return g;
  }
  return 1;
}

// Dense n x n matrix over F_p, row-major.
struct FpMatrix {
  int n = 0;
  int p = 2;
  std::vector<int> a;

  FpMatrix() = default;
  FpMatrix(int n_, int p_) : n(n_), p(p_), a(static_cast<std::size_t>(n_ * n_), 0) {}

  static FpMatrix identity(int n, int p) {
    FpMatrix m(n, p);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  int operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }

  friend FpMatrix operator*(const FpMatrix& x, const FpMatrix& y) {
    FpMatrix r(x.n, x.p);
    for (int i = 0; i < x.n; ++i)
      for (int k = 0; k < x.n; ++k) {
        const long long xik = x(i, k);
        if (!xik) continue;
        for (int j = 0; j < x.n; ++j) r(i, j) = static_cast<int>((r(i, j) + xik * y(k, j)) % x.p);
      }
    return r;
  }

  friend FpMatrix operator+(const FpMatrix& x, const FpMatrix& y) {
    FpMatrix r(x.n, x.p);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = (x.a[i] + y.a[i]) % x.p;
    return r;
  }

  FpMatrix scaled(int c) const {
    FpMatrix r(n, p);
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] = static_cast<int>(static_cast<long long>(a[i]) * c % p);
    return r;
  }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
};

inline int determinant(FpMatrix m) {
  const int n = m.n, p = m.p;
  long long det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (m(r, c)) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = (p - det) % p;
    }
    det = det * m(c, c) % p;
    const int iv = fp_inv(m(c, c), p);
    for (int r = c + 1; r < n; ++r) {
      if (!m(r, c)) continue;
      const long long f = static_cast<long long>(m(r, c)) * iv % p;
      for (int j = c; j < n; ++j) m(r, j) = static_cast<int>(((m(r, j) - f * m(c, j)) % p + p) % p);
    }
  }
  return static_cast<int>(det);
}

inline std::optional<FpMatrix> inverse(const FpMatrix& src) {
  const int n = src.n, p = src.p;
  FpMatrix m = src, r = FpMatrix::identity(n, p);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int row = c; row < n; ++row)
      if (m(row, c)) {
        piv = row;
        break;
      }
    if (piv < 0) return std::nullopt;
    for (int j = 0; j < n; ++j) {
      std::swap(m(piv, j), m(c, j));
      std::swap(r(piv, j), r(c, j));
    }
    const long long iv = fp_inv(m(c, c), p);
    for (int j = 0; j < n; ++j) {
      m(c, j) = static_cast<int>(m(c, j) * iv % p);
      r(c, j) = static_cast<int>(r(c, j) * iv % p);
    }
    for (int row = 0; row < n; ++row) {
      if (row == c || !m(row, c)) continue;
      const long long f = m(row, c);
      for (int j = 0; j < n; ++j) {
        m(row, j) = static_cast<int>(((m(row, j) - f * m(c, j)) % p + p) % p);
        r(row, j) = static_cast<int>(((r(row, j) - f * r(c, j)) % p + p) % p);
      }
    }
  }
  return r;
}

// Row-reduces `rows` (each of length cols) in place and returns the rank.
// Pivot columns are reported when requested.
inline int row_reduce(std::vector<std::vector<int>>& rows, int cols, int p, std::vector<int>* pivots = nullptr) {
  int rank = 0;
  for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[static_cast<std::size_t>(piv)], rows[static_cast<std::size_t>(rank)]);
    auto& pr = rows[static_cast<std::size_t>(rank)];
    const long long iv = fp_inv(pr[static_cast<std::size_t>(c)], p);
    for (auto& v : pr) v = static_cast<int>(v * iv % p);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank) continue;
      auto& row = rows[static_cast<std::size_t>(r)];
      const long long f = row[static_cast<std::size_t>(c)];
      if (!f) continue;
      for (int j = 0; j < cols; ++j)
        row[static_cast<std::size_t>(j)] =
            static_cast<int>(((row[static_cast<std::size_t>(j)] - f * pr[static_cast<std::size_t>(j)]) % p + p) % p);
    }
    if (pivots) pivots->push_back(c);
    ++rank;
  }
  rows.resize(static_cast<std::size_t>(rank));
  return rank;
}

inline int rank(const FpMatrix& m) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m.n));
  for (int i = 0; i < m.n; ++i) rows[static_cast<std::size_t>(i)].assign(m.a.begin() + i * m.n, m.a.begin() + (i + 1) * m.n);
  return row_reduce(rows, m.n, m.p);
}

}  // namespace classcover::detail
