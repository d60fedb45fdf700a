#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "biprod/errors.hpp"

namespace biprod {

using Idx = long;

// Element of a finite abelian group, stored as a coordinate tuple reduced
// modulo the group's moduli. Elements carry no back-pointer to their group;
// every operation takes the group explicitly.
struct GroupElem {
  std::vector<long> c;

  bool operator==(const GroupElem&) const = default;
  bool operator<(const GroupElem& o) const { return c < o.c; }
};

// Z_{n_1} + ... + Z_{n_t} with the moduli kept exactly as given (they are a
// presentation, not a normal form). Elements are enumerated lexicographically
// by coordinates; index 0 is the zero tuple.
class FiniteAbelianGroup {
public:
  explicit FiniteAbelianGroup(std::vector<long> moduli);

  const std::vector<long>& moduli() const { return moduli_; }
  std::size_t rank() const { return moduli_.size(); }
  long order() const { return order_; }

  GroupElem zero() const;
  GroupElem generator(std::size_t j) const;

  // Reduces arbitrary integer coordinates into canonical range.
  GroupElem reduce(std::vector<long> coords) const;

  Idx index_of(const GroupElem& a) const;
  GroupElem element(Idx i) const;

  GroupElem add(const GroupElem& a, const GroupElem& b) const;
  GroupElem sub(const GroupElem& a, const GroupElem& b) const;
  GroupElem neg(const GroupElem& a) const;
  GroupElem scalar_mul(long k, const GroupElem& a) const;
  // Componentwise product; this is the ring structure used by the duality
  // pairing, not a group operation.
  GroupElem ring_mul(const GroupElem& a, const GroupElem& b) const;

  long element_order(const GroupElem& a) const;

  bool operator==(const FiniteAbelianGroup& o) const {
    return moduli_ == o.moduli_;
  }

private:
  void check_elem(const GroupElem& a) const;

  std::vector<long> moduli_;
  long order_;
};

// Endomorphism given by generator images. Construction rejects image tuples
// that do not satisfy the defining relations n_j * images[j] = 0.
class GroupMap {
public:
  static GroupMap from_images(const FiniteAbelianGroup& g,
                              std::vector<GroupElem> images);
  static GroupMap identity(const FiniteAbelianGroup& g);

  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<GroupElem>& images() const { return images_; }

  GroupElem apply(const GroupElem& a) const;
  Idx apply_index(Idx i) const;

  // Full value table, built lazily and shared between copies. Guarded by a
  // hard size cap; the permutation-search code requires it.
  const std::vector<Idx>& table() const;

  bool is_auto() const;
  // this o inner
  GroupMap compose(const GroupMap& inner) const;
  GroupMap inverse() const; // requires is_auto()

  // Order as a permutation. Computed as the lcm of orbit lengths and
  // cross-checked by explicit powering.
  long map_order() const;

  bool operator==(const GroupMap& o) const {
    return group_ == o.group_ && images_ == o.images_;
  }

private:
  GroupMap(FiniteAbelianGroup g, std::vector<GroupElem> images);

  FiniteAbelianGroup group_;
  std::vector<GroupElem> images_;
  // shared so that copies reuse one lazily built table; built under call_once
  struct TableBox;
  std::shared_ptr<TableBox> box_;
};

// Subgroup represented by its sorted member indices plus a small generating
// set found greedily.
class Subgroup {
public:
  static Subgroup from_members(const FiniteAbelianGroup& g,
                               std::vector<Idx> members);
  static Subgroup from_generators(const FiniteAbelianGroup& g,
                                  const std::vector<GroupElem>& gens);

  const std::vector<Idx>& members() const { return members_; }
  const std::vector<GroupElem>& generators() const { return generators_; }
  long order() const { return static_cast<long>(members_.size()); }
  bool contains(Idx i) const;

private:
  Subgroup() = default;
  std::vector<Idx> members_;      // sorted
  std::vector<char> member_mask_; // size |G|
  std::vector<GroupElem> generators_;
};

// Orbit of a under iteration of f, in iteration order starting at a.
std::vector<GroupElem> orbit(const GroupMap& f, const GroupElem& a);
long orbit_length(const GroupMap& f, const GroupElem& a);

Subgroup fixed_subgroup(const GroupMap& f);

// Cosets of s in canonical order: scan element indices ascending; each index
// not yet covered starts the next coset. Every coset is sorted.
std::vector<std::vector<Idx>> cosets(const FiniteAbelianGroup& g,
                                     const Subgroup& s);

// G/S presented by invariant factors (trivial factors dropped; the trivial
// quotient keeps a single modulus 1). proj maps G-element indices to quotient
// indices; section picks one preimage per quotient element.
struct Quotient {
  FiniteAbelianGroup group;
  std::vector<Idx> proj;
  std::vector<Idx> section;
};

Quotient quotient(const FiniteAbelianGroup& g, const Subgroup& s);

// Smith normal form of an integer matrix: returns diagonal entries d and a
// unimodular row transform u with (u * a) column-equivalent to diag(d).
// Exposed for direct testing.
struct SmithResult {
  std::vector<long long> diag;
  std::vector<std::vector<long long>> u; // rows x rows
};
SmithResult smith_normal_form(std::vector<std::vector<long long>> a);

} // namespace biprod
