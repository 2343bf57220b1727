#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "classcover/detail/fp.hpp"
#include "classcover/detail/perm.hpp"
#include "classcover/element_set.hpp"
#include "classcover/error.hpp"

namespace classcover {

inline constexpr std::size_t kDefaultEnumerationCap = 2'000'000;
// Tables at or below this order get a materialised Cayley table.
inline constexpr std::size_t kCayleyCap = 1200;
inline constexpr Index kNoIndex = std::numeric_limits<Index>::max();

enum class FormKind { Permutation, Matrix };

// A fully enumerated finite group. Elements are indices 0..order-1 with the
// identity at 0. The handle is cheap to copy; the underlying data is shared
// and never modified after construction.
class GroupTable {
 public:
  struct Factor {
    std::shared_ptr<const GroupTable> group;
    std::vector<Index> embedding;  // factor index -> this table's index
  };

  GroupTable() = default;

  std::size_t order() const noexcept { return d_ ? d_->order : 0; }
  static constexpr Index identity() noexcept { return 0; }

  Index mul(Index a, Index b) const { return mul_data(*d_, a, b); }
  Index inv(Index a) const noexcept { return d_->inv[a]; }
  // x^g = g^-1 x g
  Index conj(Index x, Index g) const { return mul(inv(g), mul(x, g)); }
  // [x, y] = x^-1 y^-1 x y
  Index comm(Index x, Index y) const { return mul(mul(inv(x), inv(y)), mul(x, y)); }

  Index power(Index x, long long k) const {
    if (k < 0) {
      x = inv(x);
      k = -k;
    }
    Index r = identity();
    Index b = x;
    while (k > 0) {
      if (k & 1) r = mul(r, b);
      b = mul(b, b);
      k >>= 1;
    }
    return r;
  }

  std::size_t element_order(Index x) const {
    std::size_t k = 1;
    for (Index y = x; y != identity(); y = mul(y, x)) ++k;
    return k;
  }

  const std::vector<Index>& generators() const noexcept { return d_->gens; }
  const std::string& name() const noexcept { return d_->name; }
  const std::vector<Factor>& factors() const noexcept { return d_->factors; }
  std::optional<Index> distinguished() const noexcept { return d_->distinguished; }

  std::string render(Index x) const;
  std::optional<Index> parse_element(std::string_view text) const;

  // Permutation- and matrix-backed tables expose their canonical forms.
  bool has_forms() const noexcept { return d_->backend == Backend::Forms; }
  FormKind form_kind() const noexcept { return d_->fkind; }
  int form_degree() const noexcept { return d_->degree; }
  int form_modulus() const noexcept { return d_->modulus; }
  std::span<const std::uint16_t> form(Index x) const {
    return {d_->forms.data() + static_cast<std::size_t>(x) * d_->width, d_->width};
  }
  std::optional<Index> find_form(std::span<const std::uint16_t> f) const {
    if (!has_forms() || f.size() != d_->width) return std::nullopt;
    Index r = lookup(*d_, f.data());
    if (r == kNoIndex) return std::nullopt;
    return r;
  }

  // Subgroup and quotient tables are views over a parent.
  bool is_view() const noexcept { return d_->backend == Backend::View; }
  GroupTable parent() const {
    GroupTable g;
    g.d_ = d_->parent;
    return g;
  }
  Index parent_index(Index x) const noexcept { return d_->rep[x]; }
  // Maps a parent index to this view (kNoIndex outside a subgroup view).
  Index from_parent(Index x) const noexcept { return d_->proj[x]; }

  bool same_as(const GroupTable& o) const noexcept { return d_ == o.d_; }

  // ---- construction ----

  static GroupTable from_permutations(int degree, const std::vector<detail::Perm>& gens,
                                      std::size_t cap, std::string name) {
    auto d = std::make_shared<Data>();
    d->backend = Backend::Forms;
    d->fkind = FormKind::Permutation;
    d->degree = degree;
    d->width = static_cast<std::size_t>(degree);
    d->name = std::move(name);
    std::vector<std::vector<std::uint16_t>> g(gens.begin(), gens.end());
    enumerate_forms(*d, detail::identity_perm(degree), g, cap);
    return finish(std::move(d));
  }

  static GroupTable from_matrices(int n, int p, const std::vector<detail::FpMatrix>& gens,
                                  std::size_t cap, std::string name) {
    auto d = std::make_shared<Data>();
    d->backend = Backend::Forms;
    d->fkind = FormKind::Matrix;
    d->degree = n;
    d->modulus = p;
    d->width = static_cast<std::size_t>(n * n);
    d->name = std::move(name);
    auto to_form = [](const detail::FpMatrix& m) {
      std::vector<std::uint16_t> f(m.a.begin(), m.a.end());
      return f;
    };
    std::vector<std::vector<std::uint16_t>> g;
    for (const auto& m : gens) g.push_back(to_form(m));
    enumerate_forms(*d, to_form(detail::FpMatrix::identity(n, p)), g, cap);
    return finish(std::move(d));
  }

  static GroupTable direct_product(std::vector<GroupTable> comps, std::size_t cap, std::string name) {
    auto d = std::make_shared<Data>();
    d->backend = Backend::Product;
    d->name = std::move(name);
    std::size_t order = 1;
    for (const auto& c : comps) {
      if (order > cap / std::max<std::size_t>(c.order(), 1))
        throw Error(ErrorKind::CapExceeded, d->name + ": direct product exceeds enumeration cap");
      order *= c.order();
    }
    d->order = order;
    d->stride.assign(comps.size(), 1);
    for (std::size_t i = comps.size(); i-- > 1;) d->stride[i - 1] = d->stride[i] * comps[i].order();
    for (std::size_t i = 0; i < comps.size(); ++i) {
      std::vector<Index> emb(comps[i].order());
      for (std::size_t x = 0; x < comps[i].order(); ++x) emb[x] = static_cast<Index>(x * d->stride[i]);
      for (Index g : comps[i].generators()) d->gens.push_back(emb[g]);
      Factor f;
      f.group = std::make_shared<GroupTable>(comps[i]);
      f.embedding = std::move(emb);
      d->factors.push_back(std::move(f));
    }
    for (auto& c : comps) d->comps.push_back(c.d_);
    return finish(std::move(d));
  }

  // Table on the members of a subgroup H of parent; gens must generate H.
  static GroupTable subgroup(const GroupTable& parent, const ElementSet& H, std::vector<Index> gens,
                             std::string name) {
    auto d = std::make_shared<Data>();
    d->backend = Backend::View;
    d->name = std::move(name);
    d->parent = parent.d_;
    d->rep = H.members();
    d->order = d->rep.size();
    d->proj.assign(parent.order(), kNoIndex);
    for (std::size_t i = 0; i < d->rep.size(); ++i) d->proj[d->rep[i]] = static_cast<Index>(i);
    for (Index g : gens) {
      Index local = d->proj[g];
      if (local != identity() && std::find(d->gens.begin(), d->gens.end(), local) == d->gens.end())
        d->gens.push_back(local);
    }
    return finish(std::move(d));
  }

  // Table on cosets of a normal subgroup N; each coset is represented by its
  // least parent index. The projection parent -> quotient is from_parent().
  static GroupTable quotient(const GroupTable& parent, const ElementSet& N, std::string name) {
    auto d = std::make_shared<Data>();
    d->backend = Backend::View;
    d->name = std::move(name);
    d->parent = parent.d_;
    d->proj.assign(parent.order(), kNoIndex);
    const auto nm = N.members();
    for (Index x = 0; x < parent.order(); ++x) {
      if (d->proj[x] != kNoIndex) continue;
      const Index id = static_cast<Index>(d->rep.size());
      d->rep.push_back(x);
      for (Index n : nm) d->proj[parent.mul(x, n)] = id;
    }
    d->order = d->rep.size();
    for (Index g : parent.generators()) {
      Index q = d->proj[g];
      if (q != identity() && std::find(d->gens.begin(), d->gens.end(), q) == d->gens.end()) d->gens.push_back(q);
    }
    return finish(std::move(d));
  }

  // Returns a copy carrying product-factor data and/or a distinguished element.
  GroupTable annotated(std::vector<Factor> factors, std::optional<Index> distinguished, std::string name = {}) const {
    auto d = std::make_shared<Data>(*d_);
    d->factors = std::move(factors);
    d->distinguished = distinguished;
    if (!name.empty()) d->name = std::move(name);
    GroupTable g;
    g.d_ = std::move(d);
    return g;
  }

 private:
  enum class Backend { Forms, View, Product };

  struct Data {
    std::size_t order = 0;
    std::string name;
    std::vector<Index> gens;
    std::vector<Index> inv;
    std::vector<Index> cayley;
    Backend backend = Backend::Forms;

    FormKind fkind = FormKind::Permutation;
    int degree = 0;
    int modulus = 0;
    std::size_t width = 0;
    std::vector<std::uint16_t> forms;
    std::vector<Index> slots;
    std::size_t mask = 0;

    std::shared_ptr<Data> parent;
    std::vector<Index> rep;
    std::vector<Index> proj;

    std::vector<std::shared_ptr<Data>> comps;
    std::vector<std::size_t> stride;

    std::vector<Factor> factors;
    std::optional<Index> distinguished;
  };

  std::shared_ptr<Data> d_;

  static GroupTable wrap(const std::shared_ptr<Data>& d) {
    GroupTable g;
    g.d_ = d;
    return g;
  }

  static std::size_t hash_form(const std::uint16_t* f, std::size_t w) noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t i = 0; i < w; ++i) {
      h ^= f[i];
      h *= 0xff51afd7ed558ccdull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h ^ (h >> 32));
  }

  static Index lookup(const Data& d, const std::uint16_t* f) noexcept {
    std::size_t s = hash_form(f, d.width) & d.mask;
    while (true) {
      Index v = d.slots[s];
      if (v == kNoIndex) return kNoIndex;
      if (std::memcmp(d.forms.data() + static_cast<std::size_t>(v) * d.width, f, d.width * sizeof(std::uint16_t)) == 0)
        return v;
      s = (s + 1) & d.mask;
    }
  }

  static void rehash(Data& d, std::size_t capacity) {
    d.slots.assign(capacity, kNoIndex);
    d.mask = capacity - 1;
    for (Index i = 0; i < d.order; ++i) {
      std::size_t s = hash_form(d.forms.data() + static_cast<std::size_t>(i) * d.width, d.width) & d.mask;
      while (d.slots[s] != kNoIndex) s = (s + 1) & d.mask;
      d.slots[s] = i;
    }
  }

  static Index insert_form(Data& d, const std::uint16_t* f) {
    if ((d.order + 1) * 2 > d.slots.size()) rehash(d, std::max<std::size_t>(16, d.slots.size() * 2));
    std::size_t s = hash_form(f, d.width) & d.mask;
    while (d.slots[s] != kNoIndex) s = (s + 1) & d.mask;
    const Index id = static_cast<Index>(d.order);
    d.slots[s] = id;
    d.forms.insert(d.forms.end(), f, f + d.width);
    ++d.order;
    return id;
  }

  static void compose(const Data& d, const std::uint16_t* a, const std::uint16_t* b, std::uint16_t* out) noexcept {
    if (d.fkind == FormKind::Permutation) {
      for (std::size_t i = 0; i < d.width; ++i) out[i] = b[a[i]];
      return;
    }
    const int n = d.degree;
    const std::uint32_t p = static_cast<std::uint32_t>(d.modulus);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::uint32_t s = 0;
        for (int k = 0; k < n; ++k) s += static_cast<std::uint32_t>(a[i * n + k]) * b[k * n + j] % p;
        out[i * n + j] = static_cast<std::uint16_t>(s % p);
      }
  }

  static void enumerate_forms(Data& d, const std::vector<std::uint16_t>& id,
                              const std::vector<std::vector<std::uint16_t>>& gens, std::size_t cap) {
    insert_form(d, id.data());
    std::vector<std::uint16_t> buf(d.width);
    std::vector<Index> gen_ids;
    for (std::size_t q = 0; q < d.order; ++q) {
      for (const auto& g : gens) {
        compose(d, d.forms.data() + q * d.width, g.data(), buf.data());
        if (lookup(d, buf.data()) == kNoIndex) {
          if (d.order >= cap)
            throw Error(ErrorKind::CapExceeded, d.name + ": order exceeds enumeration cap " + std::to_string(cap));
          insert_form(d, buf.data());
        }
      }
    }
    for (const auto& g : gens) {
      Index gi = lookup(d, g.data());
      if (gi != identity() && std::find(d.gens.begin(), d.gens.end(), gi) == d.gens.end()) d.gens.push_back(gi);
    }
  }

  static Index mul_data(const Data& d, Index a, Index b) {
    if (!d.cayley.empty()) return d.cayley[static_cast<std::size_t>(a) * d.order + b];
    return mul_backend(d, a, b);
  }

  static Index mul_backend(const Data& d, Index a, Index b) {
    switch (d.backend) {
      case Backend::Forms: {
        std::array<std::uint16_t, 512> small;
        std::vector<std::uint16_t> big;
        std::uint16_t* out = small.data();
        if (d.width > small.size()) {
          big.resize(d.width);
          out = big.data();
        }
        compose(d, d.forms.data() + static_cast<std::size_t>(a) * d.width,
                d.forms.data() + static_cast<std::size_t>(b) * d.width, out);
        return lookup(d, out);
      }
      case Backend::View:
        return d.proj[mul_data(*d.parent, d.rep[a], d.rep[b])];
      case Backend::Product: {
        Index r = 0;
        for (std::size_t i = 0; i < d.comps.size(); ++i) {
          const std::size_t n = d.comps[i]->order;
          const Index ai = static_cast<Index>((a / d.stride[i]) % n);
          const Index bi = static_cast<Index>((b / d.stride[i]) % n);
          r += static_cast<Index>(mul_data(*d.comps[i], ai, bi) * d.stride[i]);
        }
        return r;
      }
    }
    return kNoIndex;
  }

  static Index inv_backend(const Data& d, Index a) {
    switch (d.backend) {
      case Backend::Forms: {
        std::vector<std::uint16_t> out(d.width);
        const std::uint16_t* f = d.forms.data() + static_cast<std::size_t>(a) * d.width;
        if (d.fkind == FormKind::Permutation) {
          for (std::size_t i = 0; i < d.width; ++i) out[f[i]] = static_cast<std::uint16_t>(i);
        } else {
          detail::FpMatrix m(d.degree, d.modulus);
          for (std::size_t i = 0; i < d.width; ++i) m.a[i] = f[i];
          auto mi = detail::inverse(m);
          for (std::size_t i = 0; i < d.width; ++i) out[i] = static_cast<std::uint16_t>(mi->a[i]);
        }
        return lookup(d, out.data());
      }
      case Backend::View:
        return d.proj[d.parent->inv[d.rep[a]]];
      case Backend::Product: {
        Index r = 0;
        for (std::size_t i = 0; i < d.comps.size(); ++i) {
          const std::size_t n = d.comps[i]->order;
          r += static_cast<Index>(d.comps[i]->inv[(a / d.stride[i]) % n] * d.stride[i]);
        }
        return r;
      }
    }
    return kNoIndex;
  }

  static GroupTable finish(std::shared_ptr<Data> d) {
    d->inv.resize(d->order);
    for (Index a = 0; a < d->order; ++a) d->inv[a] = inv_backend(*d, a);
    if (d->order <= kCayleyCap) {
      std::vector<Index> table(d->order * d->order);
      for (Index a = 0; a < d->order; ++a)
        for (Index b = 0; b < d->order; ++b) table[static_cast<std::size_t>(a) * d->order + b] = mul_backend(*d, a, b);
      d->cayley = std::move(table);
    }
    GroupTable g;
    g.d_ = std::move(d);
    return g;
  }
};

inline std::string GroupTable::render(Index x) const {
  const Data& d = *d_;
  switch (d.backend) {
    case Backend::Forms: {
      const std::uint16_t* f = d.forms.data() + static_cast<std::size_t>(x) * d.width;
      if (d.fkind == FormKind::Permutation) return detail::render_cycles(f, d.degree);
      std::string out;
      for (int i = 0; i < d.degree; ++i) {
        if (i) out += ';';
        for (int j = 0; j < d.degree; ++j) {
          if (j) out += ',';
          out += std::to_string(f[i * d.degree + j]);
        }
      }
      return out;
    }
    case Backend::View:
      return wrap(d.parent).render(d.rep[x]);
    case Backend::Product: {
      std::string out = "[";
      for (std::size_t i = 0; i < d.comps.size(); ++i) {
        if (i) out += " | ";
        out += wrap(d.comps[i]).render(static_cast<Index>((x / d.stride[i]) % d.comps[i]->order));
      }
      return out + "]";
    }
  }
  return {};
}

inline std::optional<Index> GroupTable::parse_element(std::string_view text) const {
  const Data& d = *d_;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "e" || text == "id") return identity();
  switch (d.backend) {
    case Backend::Forms: {
      std::vector<std::uint16_t> f;
      if (d.fkind == FormKind::Permutation) {
        f = detail::parse_cycles(text, d.degree);
      } else {
        std::vector<int> vals;
        std::string tok;
        for (char c : std::string(text) + ";") {
          if (c == ',' || c == ';') {
            if (tok.empty()) return std::nullopt;
            long long v = std::stoll(tok);
            vals.push_back(static_cast<int>(((v % d.modulus) + d.modulus) % d.modulus));
            tok.clear();
          } else if (c != ' ') {
            tok += c;
          }
        }
        if (vals.size() != d.width) return std::nullopt;
        f.assign(vals.begin(), vals.end());
      }
      Index r = lookup(d, f.data());
      if (r == kNoIndex) return std::nullopt;
      return r;
    }
    case Backend::View: {
      auto p = wrap(d.parent).parse_element(text);
      if (!p || d.proj[*p] == kNoIndex) return std::nullopt;
      return d.proj[*p];
    }
    case Backend::Product: {
      if (text.size() < 2 || text.front() != '[' || text.back() != ']') return std::nullopt;
      text = text.substr(1, text.size() - 2);
      std::vector<std::string_view> parts;
      int depth = 0;
      std::size_t start = 0;
      for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '[') ++depth;
        if (text[i] == ']') --depth;
        if (text[i] == '|' && depth == 0) {
          parts.push_back(text.substr(start, i - start));
          start = i + 1;
        }
      }
      parts.push_back(text.substr(start));
      if (parts.size() != d.comps.size()) return std::nullopt;
      Index r = 0;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        auto c = wrap(d.comps[i]).parse_element(parts[i]);
        if (!c) return std::nullopt;
        r += static_cast<Index>(*c * d.stride[i]);
      }
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace classcover
