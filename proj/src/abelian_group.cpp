#include "biprod/abelian_group.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <string>

namespace biprod {

namespace {

constexpr long kOrderCap = 1L << 31;
constexpr long kTableCap = 1L << 16;

long positive_mod(long v, long m) {
  long r = v % m;
  return r < 0 ? r + m : r;
}

std::string describe(const std::vector<long>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

} // namespace

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<long> moduli)
    : moduli_(std::move(moduli)) {
  if (moduli_.empty())
    throw invalid_input_error("group moduli list must be non-empty");
  order_ = 1;
  for (long n : moduli_) {
    if (n < 1)
      throw invalid_input_error("group modulus must be >= 1, got " +
                                std::to_string(n));
    if (order_ > kOrderCap / n)
      throw resource_cap_error("group order cap " + std::to_string(kOrderCap) +
                               " exceeded");
    order_ *= n;
  }
}

GroupElem FiniteAbelianGroup::zero() const {
  return GroupElem{std::vector<long>(rank(), 0)};
}

GroupElem FiniteAbelianGroup::generator(std::size_t j) const {
  if (j >= rank())
    throw invalid_input_error("generator index out of range");
  GroupElem a = zero();
  // Z_1 summands have zero as their generator.
  if (moduli_[j] > 1) a.c[j] = 1;
  return a;
}

GroupElem FiniteAbelianGroup::reduce(std::vector<long> coords) const {
  if (coords.size() != rank())
    throw invalid_input_error("coordinate tuple has rank " +
                              std::to_string(coords.size()) + ", expected " +
                              std::to_string(rank()));
  for (std::size_t j = 0; j < coords.size(); ++j)
    coords[j] = positive_mod(coords[j], moduli_[j]);
  return GroupElem{std::move(coords)};
}

void FiniteAbelianGroup::check_elem(const GroupElem& a) const {
  if (a.c.size() != rank())
    throw invalid_input_error("element rank mismatch: " + describe(a.c));
  for (std::size_t j = 0; j < a.c.size(); ++j)
    if (a.c[j] < 0 || a.c[j] >= moduli_[j])
      throw invalid_input_error("element coordinate out of range: " +
                                describe(a.c));
}

Idx FiniteAbelianGroup::index_of(const GroupElem& a) const {
  check_elem(a);
  Idx i = 0;
  for (std::size_t j = 0; j < rank(); ++j) i = i * moduli_[j] + a.c[j];
  return i;
}

GroupElem FiniteAbelianGroup::element(Idx i) const {
  if (i < 0 || i >= order_)
    throw invalid_input_error("element index out of range: " +
                              std::to_string(i));
  std::vector<long> c(rank());
  for (std::size_t j = rank(); j-- > 0;) {
    c[j] = i % moduli_[j];
    i /= moduli_[j];
  }
  return GroupElem{std::move(c)};
}

GroupElem FiniteAbelianGroup::add(const GroupElem& a, const GroupElem& b) const {
  check_elem(a);
  check_elem(b);
  std::vector<long> c(rank());
  for (std::size_t j = 0; j < rank(); ++j)
    c[j] = positive_mod(a.c[j] + b.c[j], moduli_[j]);
  return GroupElem{std::move(c)};
}

GroupElem FiniteAbelianGroup::sub(const GroupElem& a, const GroupElem& b) const {
  return add(a, neg(b));
}

GroupElem FiniteAbelianGroup::neg(const GroupElem& a) const {
  check_elem(a);
  std::vector<long> c(rank());
  for (std::size_t j = 0; j < rank(); ++j)
    c[j] = positive_mod(-a.c[j], moduli_[j]);
  return GroupElem{std::move(c)};
}

GroupElem FiniteAbelianGroup::scalar_mul(long k, const GroupElem& a) const {
  check_elem(a);
  std::vector<long> c(rank());
  for (std::size_t j = 0; j < rank(); ++j)
    c[j] = positive_mod((k % moduli_[j]) * a.c[j], moduli_[j]);
  return GroupElem{std::move(c)};
}

GroupElem FiniteAbelianGroup::ring_mul(const GroupElem& a,
                                       const GroupElem& b) const {
  check_elem(a);
  check_elem(b);
  std::vector<long> c(rank());
  for (std::size_t j = 0; j < rank(); ++j)
    c[j] = positive_mod(a.c[j] * b.c[j], moduli_[j]);
  return GroupElem{std::move(c)};
}

long FiniteAbelianGroup::element_order(const GroupElem& a) const {
  check_elem(a);
  long ord = 1;
  for (std::size_t j = 0; j < rank(); ++j)
    ord = std::lcm(ord, moduli_[j] / std::gcd(moduli_[j], a.c[j]));
  return ord;
}

struct GroupMap::TableBox {
  std::once_flag once;
  std::vector<Idx> table;
  std::atomic<int> auto_state{-1}; // -1 unknown, 0 no, 1 yes
  std::atomic<long> order{0};      // 0 unknown
};

GroupMap::GroupMap(FiniteAbelianGroup g, std::vector<GroupElem> images)
    : group_(std::move(g)),
      images_(std::move(images)),
      box_(std::make_shared<TableBox>()) {}

GroupMap GroupMap::from_images(const FiniteAbelianGroup& g,
                               std::vector<GroupElem> images) {
  if (images.size() != g.rank())
    throw invalid_hom_error("expected " + std::to_string(g.rank()) +
                            " generator images, got " +
                            std::to_string(images.size()));
  for (std::size_t j = 0; j < images.size(); ++j) {
    // Well-definedness: the j-th defining relation n_j * x_j = 0 must be
    // preserved, i.e. n_j * images[j] = 0.
    GroupElem killed = g.scalar_mul(g.moduli()[j], images[j]);
    if (!(killed == g.zero()))
      throw invalid_hom_error(
          "generator image " + describe(images[j].c) + " at position " +
          std::to_string(j) + " violates relation " +
          std::to_string(g.moduli()[j]) + " * x = 0");
  }
  return GroupMap(g, std::move(images));
}

GroupMap GroupMap::identity(const FiniteAbelianGroup& g) {
  std::vector<GroupElem> images;
  for (std::size_t j = 0; j < g.rank(); ++j) images.push_back(g.generator(j));
  return GroupMap(g, std::move(images));
}

GroupElem GroupMap::apply(const GroupElem& a) const {
  GroupElem out = group_.zero();
  for (std::size_t j = 0; j < group_.rank(); ++j)
    out = group_.add(out, group_.scalar_mul(a.c[j], images_[j]));
  return out;
}

Idx GroupMap::apply_index(Idx i) const { return table()[i]; }

const std::vector<Idx>& GroupMap::table() const {
  std::call_once(box_->once, [this] {
    if (group_.order() > kTableCap)
      throw resource_cap_error("group-map table cap " +
                               std::to_string(kTableCap) +
                               " exceeded by group of order " +
                               std::to_string(group_.order()));
    box_->table.resize(group_.order());
    for (Idx i = 0; i < group_.order(); ++i)
      box_->table[i] = group_.index_of(apply(group_.element(i)));
  });
  return box_->table;
}

bool GroupMap::is_auto() const {
  int s = box_->auto_state.load();
  if (s < 0) {
    const auto& t = table();
    std::vector<char> seen(t.size(), 0);
    s = 1;
    for (Idx v : t) {
      if (seen[v]) {
        s = 0;
        break;
      }
      seen[v] = 1;
    }
    box_->auto_state.store(s);
  }
  return s == 1;
}

GroupMap GroupMap::compose(const GroupMap& inner) const {
  if (!(group_ == inner.group_))
    throw invalid_input_error("composing maps over different groups");
  std::vector<GroupElem> images;
  for (std::size_t j = 0; j < group_.rank(); ++j)
    images.push_back(apply(inner.images_[j]));
  return GroupMap(group_, std::move(images));
}

GroupMap GroupMap::inverse() const {
  if (!is_auto())
    throw precondition_error("inverse requires an automorphism");
  const auto& t = table();
  std::vector<Idx> inv(t.size());
  for (Idx i = 0; i < static_cast<Idx>(t.size()); ++i) inv[t[i]] = i;
  std::vector<GroupElem> images;
  for (std::size_t j = 0; j < group_.rank(); ++j)
    images.push_back(group_.element(inv[group_.index_of(group_.generator(j))]));
  return GroupMap(group_, std::move(images));
}

namespace {

std::vector<Idx> perm_power(const std::vector<Idx>& t, long e) {
  std::vector<Idx> acc(t.size()), base = t;
  for (std::size_t i = 0; i < t.size(); ++i) acc[i] = static_cast<Idx>(i);
  while (e > 0) {
    if (e & 1) {
      std::vector<Idx> next(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) next[i] = base[acc[i]];
      acc = std::move(next);
    }
    std::vector<Idx> sq(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) sq[i] = base[base[i]];
    base = std::move(sq);
    e >>= 1;
  }
  return acc;
}

bool is_identity_table(const std::vector<Idx>& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] != static_cast<Idx>(i)) return false;
  return true;
}

} // namespace

long GroupMap::map_order() const {
  long cached = box_->order.load();
  if (cached) return cached;
  if (!is_auto())
    throw precondition_error("map_order requires an automorphism");
  const auto& t = table();
  std::vector<char> seen(t.size(), 0);
  long ord = 1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    Idx j = static_cast<Idx>(i);
    do {
      seen[j] = 1;
      j = t[j];
      ++len;
    } while (j != static_cast<Idx>(i));
    ord = std::lcm(ord, len);
  }
  // Cross-check the lcm against explicit powering: the claimed order must
  // give the identity while ord/p must not, for every prime p | ord.
  if (!is_identity_table(perm_power(t, ord)))
    throw internal_error("map_order: lcm of orbit lengths is not the order");
  long rest = ord;
  for (long p = 2; rest > 1; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    if (is_identity_table(perm_power(t, ord / p)))
      throw internal_error("map_order: proper divisor already identity");
  }
  box_->order.store(ord);
  return ord;
}

Subgroup Subgroup::from_members(const FiniteAbelianGroup& g,
                                std::vector<Idx> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Subgroup s;
  s.member_mask_.assign(g.order(), 0);
  for (Idx i : members) {
    if (i < 0 || i >= g.order())
      throw invalid_input_error("subgroup member index out of range");
    s.member_mask_[i] = 1;
  }
  if (members.empty() || !s.member_mask_[g.index_of(g.zero())])
    throw invalid_input_error("subgroup must contain zero");
  for (Idx i : members) {
    GroupElem a = g.element(i);
    if (!s.member_mask_[g.index_of(g.neg(a))])
      throw invalid_input_error("subgroup not closed under negation");
    for (Idx j : members)
      if (!s.member_mask_[g.index_of(g.add(a, g.element(j)))])
        throw invalid_input_error("subgroup not closed under addition");
  }
  s.members_ = std::move(members);
  // Greedy generating set: take each member that enlarges the span.
  Subgroup span = Subgroup::from_generators(g, {});
  for (Idx i : s.members_) {
    if (span.contains(i)) continue;
    s.generators_.push_back(g.element(i));
    span = Subgroup::from_generators(g, s.generators_);
  }
  return s;
}

Subgroup Subgroup::from_generators(const FiniteAbelianGroup& g,
                                   const std::vector<GroupElem>& gens) {
  std::vector<char> mask(g.order(), 0);
  std::vector<Idx> work{g.index_of(g.zero())};
  mask[work[0]] = 1;
  for (std::size_t k = 0; k < work.size(); ++k) {
    GroupElem a = g.element(work[k]);
    for (const GroupElem& gen : gens) {
      Idx next = g.index_of(g.add(a, gen));
      if (!mask[next]) {
        mask[next] = 1;
        work.push_back(next);
      }
    }
  }
  std::sort(work.begin(), work.end());
  Subgroup s;
  s.members_ = std::move(work);
  s.member_mask_ = std::move(mask);
  s.generators_ = gens;
  return s;
}

bool Subgroup::contains(Idx i) const {
  return i >= 0 && i < static_cast<Idx>(member_mask_.size()) && member_mask_[i];
}

std::vector<GroupElem> orbit(const GroupMap& f, const GroupElem& a) {
  if (!f.is_auto())
    throw precondition_error("orbit requires an automorphism");
  std::vector<GroupElem> out{a};
  GroupElem x = f.apply(a);
  while (!(x == a)) {
    out.push_back(x);
    x = f.apply(x);
    if (static_cast<long>(out.size()) > f.group().order())
      throw internal_error("orbit did not close");
  }
  return out;
}

long orbit_length(const GroupMap& f, const GroupElem& a) {
  return static_cast<long>(orbit(f, a).size());
}

Subgroup fixed_subgroup(const GroupMap& f) {
  const auto& t = f.table();
  std::vector<Idx> fixed;
  for (Idx i = 0; i < static_cast<Idx>(t.size()); ++i)
    if (t[i] == i) fixed.push_back(i);
  return Subgroup::from_members(f.group(), fixed);
}

std::vector<std::vector<Idx>> cosets(const FiniteAbelianGroup& g,
                                     const Subgroup& s) {
  std::vector<char> assigned(g.order(), 0);
  std::vector<std::vector<Idx>> out;
  for (Idx i = 0; i < g.order(); ++i) {
    if (assigned[i]) continue;
    GroupElem rep = g.element(i);
    std::vector<Idx> coset;
    for (Idx m : s.members()) {
      Idx j = g.index_of(g.add(rep, g.element(m)));
      coset.push_back(j);
      assigned[j] = 1;
    }
    std::sort(coset.begin(), coset.end());
    out.push_back(std::move(coset));
  }
  return out;
}

namespace {

using Row = std::vector<long long>;
using Matrix = std::vector<Row>;

void add_row(Matrix& m, std::size_t dst, std::size_t src, long long k) {
  for (std::size_t j = 0; j < m[dst].size(); ++j) m[dst][j] += k * m[src][j];
}

void add_col(Matrix& m, std::size_t dst, std::size_t src, long long k) {
  for (auto& row : m) row[dst] += k * row[src];
}

void swap_col(Matrix& m, std::size_t a, std::size_t b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}

} // namespace

SmithResult smith_normal_form(Matrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  Matrix u(rows, Row(rows, 0));
  for (std::size_t i = 0; i < rows; ++i) u[i][i] = 1;

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Pivot: a nonzero entry of least magnitude in the trailing block.
      std::size_t pi = t, pj = t;
      long long best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 &&
              (best == 0 || std::abs(a[i][j]) < std::abs(best))) {
            best = a[i][j];
            pi = i;
            pj = j;
          }
      if (best == 0) goto done;
      std::swap(a[t], a[pi]);
      std::swap(u[t], u[pi]);
      if (pj != t) swap_col(a, t, pj);

      bool reduced = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        long long q = a[i][t] / a[t][t];
        add_row(a, i, t, -q);
        add_row(u, i, t, -q);
        if (a[i][t] != 0) reduced = false; // Euclid step: retry with new pivot
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        long long q = a[t][j] / a[t][t];
        add_col(a, j, t, -q);
        if (a[t][j] != 0) reduced = false;
      }
      if (!reduced) continue;

      // Divisibility: pivot must divide the trailing block.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols && divides; ++j)
          if (a[i][j] % a[t][t] != 0) {
            add_row(a, t, i, 1);
            add_row(u, t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    if (a[t][t] < 0) {
      for (std::size_t j = 0; j < cols; ++j) a[t][j] = -a[t][j];
      for (std::size_t j = 0; j < rows; ++j) u[t][j] = -u[t][j];
    }
  }
done:
  SmithResult r;
  for (std::size_t t = 0; t < steps; ++t) r.diag.push_back(a[t][t]);
  r.u = std::move(u);
  return r;
}

Quotient quotient(const FiniteAbelianGroup& g, const Subgroup& s) {
  const std::size_t t = g.rank();
  // Columns: the defining relations diag(n_j), then lifts of the subgroup
  // generators. The quotient is Z^t modulo their span.
  Matrix a(t);
  for (std::size_t i = 0; i < t; ++i) {
    a[i].assign(t + s.generators().size(), 0);
    a[i][i] = g.moduli()[i];
  }
  for (std::size_t k = 0; k < s.generators().size(); ++k)
    for (std::size_t i = 0; i < t; ++i)
      a[i][t + k] = s.generators()[k].c[i];

  SmithResult snf = smith_normal_form(std::move(a));
  for (long long d : snf.diag)
    if (d <= 0) throw internal_error("quotient: singular relation lattice");

  std::vector<std::size_t> kept;
  std::vector<long> moduli;
  for (std::size_t i = 0; i < snf.diag.size(); ++i)
    if (snf.diag[i] > 1) {
      kept.push_back(i);
      moduli.push_back(static_cast<long>(snf.diag[i]));
    }
  if (moduli.empty()) moduli.push_back(1);

  Quotient q{FiniteAbelianGroup(moduli), {}, {}};
  q.proj.resize(g.order());
  q.section.assign(q.group.order(), -1);
  for (Idx i = 0; i < g.order(); ++i) {
    GroupElem x = g.element(i);
    std::vector<long> c;
    for (std::size_t r = 0; r < kept.size(); ++r) {
      long long y = 0;
      for (std::size_t j = 0; j < t; ++j) y += snf.u[kept[r]][j] * x.c[j];
      long long d = snf.diag[kept[r]];
      c.push_back(static_cast<long>(((y % d) + d) % d));
    }
    if (c.empty()) c.push_back(0);
    Idx qi = q.group.index_of(GroupElem{std::move(c)});
    q.proj[i] = qi;
    if (q.section[qi] < 0) q.section[qi] = i;
  }

  // Cross-checks: the projection must be a surjective homomorphism whose
  // kernel is exactly s.
  for (Idx v : q.section)
    if (v < 0) throw internal_error("quotient: projection not surjective");
  if (g.order() != q.group.order() * s.order())
    throw internal_error("quotient: order mismatch");
  Idx qzero = q.proj[g.index_of(g.zero())];
  if (qzero != q.group.index_of(q.group.zero()))
    throw internal_error("quotient: zero does not map to zero");
  for (Idx i = 0; i < g.order(); ++i) {
    if ((q.proj[i] == qzero) != s.contains(i))
      throw internal_error("quotient: kernel differs from subgroup");
    for (Idx j = 0; j < g.order(); ++j) {
      Idx sum = g.index_of(g.add(g.element(i), g.element(j)));
      Idx qsum = q.group.index_of(q.group.add(q.group.element(q.proj[i]),
                                              q.group.element(q.proj[j])));
      if (q.proj[sum] != qsum)
        throw internal_error("quotient: projection is not a homomorphism");
    }
  }
  return q;
}

} // namespace biprod
