#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace classcover {

using Index = std::uint32_t;

// Dense subset of {0, ..., universe-1}. The cardinality is kept in sync on
// every mutation so count() is O(1).
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}
  ElementSet(std::size_t universe, std::initializer_list<Index> members)
      : ElementSet(universe) {
    for (Index m : members) insert(m);
  }

  static ElementSet full(std::size_t universe) {
    ElementSet s(universe);
    for (std::size_t i = 0; i < universe; ++i) s.insert(static_cast<Index>(i));
    return s;
  }

  template <typename Range>
  static ElementSet from(std::size_t universe, const Range& members) {
    ElementSet s(universe);
    for (auto m : members) s.insert(static_cast<Index>(m));
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }
  std::size_t count() const noexcept { return card_; }
  bool empty() const noexcept { return card_ == 0; }

  bool contains(Index i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  // Returns true when i was not already present.
  bool insert(Index i) noexcept {
    std::uint64_t& w = words_[i >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (w & bit) return false;
    w |= bit;
    ++card_;
    return true;
  }

  bool erase(Index i) noexcept {
    std::uint64_t& w = words_[i >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (!(w & bit)) return false;
    w &= ~bit;
    --card_;
    return true;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int b = std::countr_zero(w);
        f(static_cast<Index>(wi * 64 + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
  }

  std::vector<Index> members() const {
    std::vector<Index> out;
    out.reserve(card_);
    for_each([&](Index i) { out.push_back(i); });
    return out;
  }

  // Smallest member, or universe() when empty.
  Index first() const noexcept {
    for (std::size_t wi = 0; wi < words_.size(); ++wi)
      if (words_[wi]) return static_cast<Index>(wi * 64 + std::countr_zero(words_[wi]));
    return static_cast<Index>(universe_);
  }

  bool is_subset_of(const ElementSet& o) const noexcept {
    for (std::size_t wi = 0; wi < words_.size(); ++wi)
      if (words_[wi] & ~o.words_[wi]) return false;
    return true;
  }

  ElementSet& operator|=(const ElementSet& o) noexcept {
    card_ = 0;
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      words_[wi] |= o.words_[wi];
      card_ += static_cast<std::size_t>(std::popcount(words_[wi]));
    }
    return *this;
  }

  ElementSet& operator&=(const ElementSet& o) noexcept {
    card_ = 0;
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      words_[wi] &= o.words_[wi];
      card_ += static_cast<std::size_t>(std::popcount(words_[wi]));
    }
    return *this;
  }

  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }

  friend bool operator==(const ElementSet& a, const ElementSet& b) noexcept {
    return a.universe_ == b.universe_ && a.card_ == b.card_ && a.words_ == b.words_;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull ^ card_;
    for (std::uint64_t w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  std::size_t universe_ = 0;
  std::size_t card_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const noexcept { return s.hash(); }
};

}  // namespace classcover
