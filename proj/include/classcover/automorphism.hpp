#pragma once

#include <string>
#include <vector>

#include "classcover/error.hpp"
#include "classcover/group_table.hpp"
#include "classcover/subgroup.hpp"

namespace classcover {

// A bijective homomorphism of a GroupTable onto itself, stored as the full
// index map together with the generator images it was built from.
class Automorphism {
 public:
  Automorphism() = default;

  Index operator()(Index x) const { return map_[x]; }
  const std::vector<Index>& map() const noexcept { return map_; }
  const std::vector<Index>& source_gens() const noexcept { return gens_; }
  const std::vector<Index>& source_images() const noexcept { return images_; }

  bool is_identity() const {
    for (Index x = 0; x < map_.size(); ++x)
      if (map_[x] != x) return false;
    return true;
  }

  Automorphism inverse() const {
    Automorphism r;
    r.map_.resize(map_.size());
    for (Index x = 0; x < map_.size(); ++x) r.map_[map_[x]] = x;
    for (Index g : images_) r.gens_.push_back(g);
    for (Index g : gens_) r.images_.push_back(g);
    return r;
  }

  // x -> other(this(x))
  Automorphism then(const Automorphism& other) const {
    Automorphism r;
    r.map_.resize(map_.size());
    for (Index x = 0; x < map_.size(); ++x) r.map_[x] = other.map_[map_[x]];
    r.gens_ = gens_;
    for (Index g : images_) r.images_.push_back(other.map_[g]);
    return r;
  }

  friend Automorphism automorphism_from_images(const GroupTable& G, const std::vector<Index>& gens,
                                               const std::vector<Index>& images);

 private:
  std::vector<Index> map_;
  std::vector<Index> gens_;
  std::vector<Index> images_;
};

// The unique homomorphism extending gens -> images. Well-definedness is
// checked on every edge x -> x*g of the Cayley graph, which makes the map
// multiplicative by induction on word length.
inline Automorphism automorphism_from_images(const GroupTable& G, const std::vector<Index>& gens,
                                             const std::vector<Index>& images) {
  if (gens.size() != images.size()) throw Error(ErrorKind::LengthMismatch, "gens and images differ in length");
  for (Index x : gens)
    if (x >= G.order()) throw Error(ErrorKind::OutOfRange, "generator index out of range");
  for (Index x : images)
    if (x >= G.order()) throw Error(ErrorKind::OutOfRange, "image index out of range");
  if (generated_subgroup(G, gens).order() != G.order())
    throw Error(ErrorKind::GensDoNotGenerate, "given elements do not generate the group");

  Automorphism a;
  a.gens_ = gens;
  a.images_ = images;
  a.map_.assign(G.order(), kNoIndex);
  a.map_[GroupTable::identity()] = GroupTable::identity();
  std::vector<Index> queue{GroupTable::identity()};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Index x = queue[q];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const Index y = G.mul(x, gens[k]);
      const Index fy = G.mul(a.map_[x], images[k]);
      if (a.map_[y] == kNoIndex) {
        a.map_[y] = fy;
        queue.push_back(y);
      } else if (a.map_[y] != fy) {
        throw Error(ErrorKind::NotHomomorphism,
                    "images do not extend to a homomorphism (conflict at " + G.render(y) + ")");
      }
    }
  }
  std::vector<bool> hit(G.order(), false);
  for (Index v : a.map_) {
    if (hit[v]) throw Error(ErrorKind::NotBijective, "homomorphism is not bijective");
    hit[v] = true;
  }
  return a;
}

// x -> a^-1 x a
inline Automorphism inner_automorphism(const GroupTable& G, Index a) {
  std::vector<Index> images;
  for (Index g : G.generators()) images.push_back(G.conj(g, a));
  return automorphism_from_images(G, G.generators(), images);
}

inline Automorphism identity_automorphism(const GroupTable& G) {
  return automorphism_from_images(G, G.generators(), G.generators());
}

}  // namespace classcover
