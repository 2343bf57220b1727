#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "classcover/detail/fp.hpp"
#include "classcover/error.hpp"
#include "classcover/group_spec.hpp"
#include "classcover/perm_spectrum.hpp"

namespace classcover {

using detail::FpMatrix;

inline constexpr std::uint64_t kDefaultAlgebraCap = 10'000'000;

inline BigInt gl_order(int n, int p) {
  BigInt r = 1;
  BigInt pn = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(n));
  BigInt pi = 1;
  for (int i = 0; i < n; ++i) {
    r *= pn - pi;
    pi *= p;
  }
  return r;
}

inline BigInt sl_order(int n, int p) { return n == 0 ? BigInt(1) : gl_order(n, p) / (p - 1); }

inline double log_big(const BigInt& x) {
  if (x <= 0) return 0.0;
  const unsigned bits = boost::multiprecision::msb(x);
  if (bits < 900) return std::log(x.convert_to<double>());
  const unsigned shift = bits - 60;
  BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

inline bool is_sl(const FpMatrix& g) { return detail::determinant(g) == 1; }

// ---- polynomials over F_p, coefficient vectors low degree first ----
namespace detail {

using Poly = std::vector<int>;

inline Poly poly_trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline Poly poly_mod(Poly a, const Poly& m, int p) {
  a = poly_trim(std::move(a));
  const int dm = static_cast<int>(m.size()) - 1;
  const int lead_inv = fp_inv(m.back(), p);
  while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const long long f = static_cast<long long>(a.back()) * lead_inv % p;
    for (int i = 0; i <= dm; ++i) {
      auto& c = a[static_cast<std::size_t>(i + shift)];
      c = static_cast<int>(((c - f * m[static_cast<std::size_t>(i)]) % p + p) % p);
    }
    a = poly_trim(std::move(a));
  }
  return a;
}

// Monic irreducibles of degree d by sieving out products of lower degrees.
inline std::vector<Poly> monic_irreducibles(int d, int p) {
  std::vector<Poly> out;
  std::vector<int> c(static_cast<std::size_t>(d), 0);
  std::vector<std::vector<Poly>> lower(static_cast<std::size_t>(d));
  for (int e = 1; e <= d / 2; ++e) lower[static_cast<std::size_t>(e)] = monic_irreducibles(e, p);
  while (true) {
    Poly f(c.begin(), c.end());
    f.push_back(1);
    bool irreducible = d == 1 || f[0] != 0;
    for (int e = 1; irreducible && e <= d / 2; ++e)
      for (const auto& g : lower[static_cast<std::size_t>(e)])
        if (poly_mod(f, g, p).empty()) {
          irreducible = false;
          break;
        }
    if (irreducible) out.push_back(f);
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == p) c[i++] = 0;
    if (i == c.size()) break;
  }
  return out;
}

inline FpMatrix poly_eval(const Poly& f, const FpMatrix& g) {
  FpMatrix r(g.n, g.p);
  for (std::size_t i = f.size(); i-- > 0;) {
    r = r * g;
    for (int j = 0; j < g.n; ++j) r(j, j) = (r(j, j) + f[i]) % g.p;
  }
  return r;
}

inline FpMatrix companion(const Poly& f, int p) {
  const int k = static_cast<int>(f.size()) - 1;
  FpMatrix m(k, p);
  for (int i = 1; i < k; ++i) m(i, i - 1) = 1;
  for (int i = 0; i < k; ++i) m(i, k - 1) = (p - f[static_cast<std::size_t>(i)]) % p;
  return m;
}

inline int poly_at_one(const Poly& f, int p) {
  int s = 0;
  for (int c : f) s = (s + c) % p;
  return s;
}

inline FpMatrix block_diag(const std::vector<FpMatrix>& blocks, int p) {
  int n = 0;
  for (const auto& b : blocks) n += b.n;
  FpMatrix m(n, p);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.n; ++i)
      for (int j = 0; j < b.n; ++j) m(off + i, off + j) = b(i, j);
    off += b.n;
  }
  return m;
}

// Basis of {X : gX = Xg} as n*n vectors.
inline std::vector<std::vector<int>> centralizer_algebra_basis(const FpMatrix& g) {
  const int n = g.n, p = g.p, N = n * n;
  std::vector<std::vector<int>> eqs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> row(static_cast<std::size_t>(N), 0);
      for (int k = 0; k < n; ++k) {
        auto& a = row[static_cast<std::size_t>(k * n + j)];
        a = (a + g(i, k)) % p;
        auto& b = row[static_cast<std::size_t>(i * n + k)];
        b = ((b - g(k, j)) % p + p) % p;
      }
      eqs.push_back(std::move(row));
    }
  std::vector<int> pivots;
  row_reduce(eqs, N, p, &pivots);
  std::vector<bool> is_pivot(static_cast<std::size_t>(N), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<int>> basis;
  for (int f = 0; f < N; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<int> v(static_cast<std::size_t>(N), 0);
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<std::size_t>(pivots[r])] = (p - eqs[r][static_cast<std::size_t>(f)]) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace detail

inline std::size_t centralizer_algebra_dim(const FpMatrix& g) { return detail::centralizer_algebra_basis(g).size(); }

enum class CentralizerRoute { Auto, Enumerate, Formula };

// Counts det-1 members of the centralizer algebra of g.
inline BigInt centralizer_order_sl_enumerate(const FpMatrix& g, std::uint64_t algebra_cap = kDefaultAlgebraCap) {
  const auto basis = detail::centralizer_algebra_basis(g);
  const int p = g.p;
  double size = std::pow(static_cast<double>(p), static_cast<double>(basis.size()));
  if (size > static_cast<double>(algebra_cap))
    throw Error(ErrorKind::AlgebraTooLarge, "centralizer algebra has p^" + std::to_string(basis.size()) +
                                                " members, above cap " + std::to_string(algebra_cap));
  FpMatrix x(g.n, p);
  std::vector<int> digit(basis.size(), 0);
  std::uint64_t count = 0;
  while (true) {
    if (detail::determinant(x) == 1) ++count;
    std::size_t i = 0;
    for (; i < basis.size(); ++i) {
      for (std::size_t k = 0; k < x.a.size(); ++k) x.a[k] = (x.a[k] + basis[i][k]) % p;
      if (++digit[i] < p) break;
      digit[i] = 0;
    }
    if (i == basis.size()) break;
  }
  return BigInt(count);
}

// Primary-decomposition data: for each irreducible factor, its degree and
// the partition of its Jordan block sizes.
struct ElementaryDivisors {
  struct Part {
    detail::Poly phi;
    std::vector<int> blocks;  // descending
  };
  std::vector<Part> parts;
};

inline ElementaryDivisors elementary_divisors(const FpMatrix& g) {
  const int n = g.n, p = g.p;
  ElementaryDivisors ed;
  int covered = 0;
  for (int d = 1; d <= n && covered < n; ++d) {
    for (const auto& phi : detail::monic_irreducibles(d, p)) {
      if (covered >= n) break;
      const FpMatrix f = detail::poly_eval(phi, g);
      std::vector<int> ranks{n};
      FpMatrix power = FpMatrix::identity(n, p);
      while (true) {
        power = power * f;
        ranks.push_back(detail::rank(power));
        if (ranks.back() == ranks[ranks.size() - 2]) break;
      }
      if (ranks[1] == n) continue;
      // blocks of size >= k: (r_{k-1} - r_k)/d
      std::vector<int> at_least;
      for (std::size_t k = 1; k < ranks.size(); ++k) at_least.push_back((ranks[k - 1] - ranks[k]) / d);
      ElementaryDivisors::Part part{phi, {}};
      for (std::size_t k = 0; k < at_least.size(); ++k) {
        const int next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
        for (int c = 0; c < at_least[k] - next; ++c) part.blocks.push_back(static_cast<int>(k + 1));
      }
      std::sort(part.blocks.rbegin(), part.blocks.rend());
      for (int b : part.blocks) covered += b * d;
      ed.parts.push_back(std::move(part));
    }
  }
  return ed;
}

// |C_GL(g)| = prod_phi q^{sum (lambda'_i)^2} prod_i prod_{j<=m_i} (1 - q^-j),
// q = p^deg(phi); then the det-1 part has index (p-1)/gcd(p-1, gcd of blocks).
inline BigInt centralizer_order_sl_formula(const FpMatrix& g) {
  const int p = g.p;
  const auto ed = elementary_divisors(g);
  BigInt gl = 1;
  int block_gcd = 0;
  for (const auto& part : ed.parts) {
    const int d = static_cast<int>(part.phi.size()) - 1;
    const BigInt q = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(d));
    std::map<int, int> mult;
    for (int b : part.blocks) {
      ++mult[b];
      block_gcd = std::gcd(block_gcd, b);
    }
    long long exponent = 0;  // sum over i of (lambda'_i)^2
    for (int i = 1; i <= part.blocks.front(); ++i) {
      long long conj = 0;
      for (int b : part.blocks) conj += b >= i ? 1 : 0;
      exponent += conj * conj;
    }
    // q^{exponent} prod (1 - q^-j) = q^{exponent - sum j} prod (q^j - 1)
    long long sub = 0;
    BigInt factor = 1;
    for (auto [len, m] : mult)
      for (int j = 1; j <= m; ++j) {
        factor *= boost::multiprecision::pow(q, static_cast<unsigned>(j)) - 1;
        sub += j;
      }
    gl *= boost::multiprecision::pow(q, static_cast<unsigned>(exponent - sub)) * factor;
  }
  const int det_image = (p - 1) / std::gcd(p - 1, block_gcd);
  return gl / det_image;
}

inline BigInt centralizer_order_sl(const FpMatrix& g, CentralizerRoute route = CentralizerRoute::Auto,
                                   std::uint64_t algebra_cap = kDefaultAlgebraCap) {
  if (!is_sl(g)) throw Error(ErrorKind::PreconditionViolated, "matrix is not in SL");
  switch (route) {
    case CentralizerRoute::Enumerate: return centralizer_order_sl_enumerate(g, algebra_cap);
    case CentralizerRoute::Formula: return centralizer_order_sl_formula(g);
    case CentralizerRoute::Auto: {
      const double size = std::pow(static_cast<double>(g.p), static_cast<double>(centralizer_algebra_dim(g)));
      return size <= static_cast<double>(algebra_cap) ? centralizer_order_sl_enumerate(g, algebra_cap)
                                                      : centralizer_order_sl_formula(g);
    }
  }
  return 0;
}

struct BlockConstruction {
  int dim_v0 = 0;
  int dim_v1 = 0;  // = dim V2
  detail::Poly poly_v1;
  detail::Poly poly_v2;
};

struct SLSpectrumElement {
  FpMatrix g;
  BlockConstruction blocks;
  BigInt centralizer;
  BigInt class_size;
  SpectrumValue value;
  // |SL(dim V0, p)| <= |C| <= p^(1+2n) |SL(dim V0, p)|
  bool sandwich_holds = false;
  int center_order = 1;  // |Z(SL(n,p))| for the PSL sandwich
};

// dim V0 is the integer nearest sqrt(1-beta)*n of the parity of n (ties
// down), clamped to [n mod 2, n-2] so that g is never central.
inline int block_dim_v0(int n, double beta) {
  const double x = std::sqrt(std::max(0.0, 1.0 - beta)) * n;
  double lo = std::floor(x);
  if ((static_cast<long long>(lo) - n) % 2 != 0) lo -= 1;
  const double pick = (x - lo) <= (lo + 2 - x) ? lo : lo + 2;
  return static_cast<int>(std::clamp(pick, static_cast<double>(n % 2), static_cast<double>(n - 2)));
}

namespace detail {

// Monic degree-k polynomials with f(0) != 0 and f(1) != 0, in odometer order.
inline std::vector<Poly> fixed_point_free_polys(int k, int p) {
  std::vector<Poly> out;
  std::vector<int> c(static_cast<std::size_t>(k), 0);
  while (true) {
    Poly f(c.begin(), c.end());
    f.push_back(1);
    if (f[0] != 0 && poly_at_one(f, p) != 0) out.push_back(f);
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == p) c[i++] = 0;
    if (i == c.size()) break;
  }
  return out;
}

inline int companion_det(const Poly& f, int p) {
  const int k = static_cast<int>(f.size()) - 1;
  const int sign = k % 2 ? p - 1 : 1;
  return static_cast<int>(static_cast<long long>(sign) * f[0] % p);
}

}  // namespace detail

inline SLSpectrumElement spectrum_element_sl(int n, int p, double beta,
                                             CentralizerRoute route = CentralizerRoute::Auto,
                                             std::uint64_t algebra_cap = kDefaultAlgebraCap) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidSpec, "p must be prime");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorKind::OutOfRange, "beta must lie in [0,1]");
  if (n < 3) throw Error(ErrorKind::InfeasibleDecomposition, "need n >= 3 for V0 + V1 + V2");
  SLSpectrumElement out;
  BlockConstruction& b = out.blocks;
  b.dim_v0 = block_dim_v0(n, beta);
  b.dim_v1 = (n - b.dim_v0) / 2;
  if (b.dim_v1 < 1 || b.dim_v0 + 2 * b.dim_v1 != n)
    throw Error(ErrorKind::InfeasibleDecomposition, "no decomposition with equal positive dim V1 = dim V2");
  const auto polys = detail::fixed_point_free_polys(b.dim_v1, p);
  if (polys.empty())
    throw Error(ErrorKind::NoFixedPointFreeScalar,
                "no fixed-point-free cyclic block of dimension " + std::to_string(b.dim_v1) + " over F_" + std::to_string(p));
  bool found = false;
  for (const auto& f1 : polys) {
    const int want = detail::fp_inv(detail::companion_det(f1, p), p);
    std::optional<detail::Poly> same, other;
    for (const auto& f2 : polys) {
      if (detail::companion_det(f2, p) != want) continue;
      if (f2 == f1) {
        if (!same) same = f2;
      } else if (!other) {
        other = f2;
      }
    }
    if (other || same) {
      b.poly_v1 = f1;
      b.poly_v2 = other ? *other : *same;
      found = true;
      break;
    }
  }
  if (!found)
    throw Error(ErrorKind::NoFixedPointFreeScalar, "cannot balance block determinants to 1");
  std::vector<FpMatrix> blocks;
  if (b.dim_v0 > 0) blocks.push_back(FpMatrix::identity(b.dim_v0, p));
  blocks.push_back(detail::companion(b.poly_v1, p));
  blocks.push_back(detail::companion(b.poly_v2, p));
  out.g = detail::block_diag(blocks, p);
  out.centralizer = centralizer_order_sl(out.g, route, algebra_cap);
  const BigInt group = sl_order(n, p);
  out.class_size = group / out.centralizer;
  out.value = make_spectrum_value(log_big(out.class_size), log_big(group));
  const BigInt L = sl_order(b.dim_v0, p);
  out.sandwich_holds = L <= out.centralizer &&
                       out.centralizer <= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(1 + 2 * n)) * L;
  out.center_order = std::gcd(n, p - 1);
  return out;
}

inline std::string render_matrix(const FpMatrix& m) {
  std::string s;
  for (int i = 0; i < m.n; ++i) {
    if (i) s += ';';
    for (int j = 0; j < m.n; ++j) {
      if (j) s += ',';
      s += std::to_string(m(i, j));
    }
  }
  return s;
}

// Rows separated by ';', entries by ','.
inline FpMatrix parse_matrix(std::string_view text, int p) {
  std::vector<std::vector<int>> rows;
  std::string cur;
  std::vector<int> row;
  auto flush_entry = [&] {
    if (cur.empty()) throw Error(ErrorKind::ParseError, "matrix '" + std::string(text) + "': empty entry");
    row.push_back(((std::stoi(cur) % p) + p) % p);
    cur.clear();
  };
  for (char c : text) {
    if (c == ' ') continue;
    if (c == ',') {
      flush_entry();
    } else if (c == ';') {
      flush_entry();
      rows.push_back(std::move(row));
      row.clear();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      cur += c;
    } else {
      throw Error(ErrorKind::ParseError, "matrix '" + std::string(text) + "': bad character");
    }
  }
  flush_entry();
  rows.push_back(std::move(row));
  const int n = static_cast<int>(rows.size());
  FpMatrix m(n, p);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw Error(ErrorKind::ParseError, "matrix '" + std::string(text) + "' is not square");
    for (int j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

struct SLSpectrumRow {
  int n = 0;
  int p = 0;
  double beta = 0;
  int dim_v0 = 0;
  double h = 0;
};

inline std::string sl_spectrum_csv(const std::vector<SLSpectrumRow>& rows) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(6);
  s << "n,p,beta,dimV0,h\n";
  for (const auto& r : rows) s << r.n << ',' << r.p << ',' << r.beta << ',' << r.dim_v0 << ',' << r.h << '\n';
  return s.str();
}

}  // namespace classcover
