#pragma once

// Sum-of-products expressions over an idempotent semiring (P(X), ·, ∪) where
// (X, ·) is a semigroup without identity, plus a greedy factorisation
// heuristic driven by the projections of the cube-split relation R.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "atgen/error.hpp"

namespace atgen {

enum class ProductMode { commutative, non_commutative };

/// How cubes are split into (x, y) pairs in commutative mode. `full` takes
/// every pair of complementary sub-multisets; `lex` sorts the atoms and only
/// takes prefix/suffix splits.
enum class SplitStrategy { full, lex };

enum class Side { left, right };

template <class Atom>
using Cube = std::vector<Atom>;

template <class Atom>
class SopExpression {
public:
  SopExpression(ProductMode mode, std::vector<Cube<Atom>> cubes) : mode_(mode) {
    if (cubes.empty()) throw error("empty sum-of-products expression");
    for (auto& c : cubes) {
      if (c.empty()) throw error("empty cube");
      if (mode_ == ProductMode::commutative) std::sort(c.begin(), c.end());
      cubes_.insert(std::move(c));
    }
  }

  SopExpression(ProductMode mode, std::set<Cube<Atom>> cubes)
      : SopExpression(mode, std::vector<Cube<Atom>>(cubes.begin(), cubes.end())) {}

  ProductMode mode() const { return mode_; }
  const std::set<Cube<Atom>>& cubes() const { return cubes_; }
  std::size_t size() const { return cubes_.size(); }

  friend bool operator==(const SopExpression&, const SopExpression&) = default;

private:
  ProductMode mode_;
  std::set<Cube<Atom>> cubes_;
};

template <class Atom>
struct Factorisation {
  std::vector<SopExpression<Atom>> factors;
  std::optional<SopExpression<Atom>> remainder;

  bool is_full() const { return factors.size() > 1 && !remainder; }
};

template <class Atom>
Cube<Atom> multiply_cubes(ProductMode mode, const Cube<Atom>& x, const Cube<Atom>& y) {
  Cube<Atom> out;
  out.reserve(x.size() + y.size());
  if (mode == ProductMode::commutative) {
    std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  } else {
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), y.begin(), y.end());
  }
  return out;
}

template <class Atom>
SopExpression<Atom> multiply(const SopExpression<Atom>& a, const SopExpression<Atom>& b) {
  if (a.mode() != b.mode()) throw error("mixing commutative and non-commutative expressions");
  std::vector<Cube<Atom>> out;
  for (const auto& x : a.cubes())
    for (const auto& y : b.cubes()) out.push_back(multiply_cubes(a.mode(), x, y));
  return {a.mode(), std::move(out)};
}

template <class Atom>
SopExpression<Atom> add(const SopExpression<Atom>& a, const SopExpression<Atom>& b) {
  if (a.mode() != b.mode()) throw error("mixing commutative and non-commutative expressions");
  auto cubes = a.cubes();
  cubes.insert(b.cubes().begin(), b.cubes().end());
  return {a.mode(), std::move(cubes)};
}

template <class Atom>
using RPair = std::pair<Cube<Atom>, Cube<Atom>>;

namespace detail {

// Every split of a sorted cube into two non-empty complementary sub-multisets.
template <class Atom>
void multiset_splits(const Cube<Atom>& cube, std::set<RPair<Atom>>& out) {
  std::vector<std::pair<Atom, std::size_t>> runs;
  for (const auto& a : cube) {
    if (runs.empty() || !(runs.back().first == a))
      runs.emplace_back(a, 1);
    else
      ++runs.back().second;
  }
  std::vector<std::size_t> take(runs.size(), 0);
  while (true) {
    std::size_t i = 0;
    while (i < runs.size() && take[i] == runs[i].second) take[i++] = 0;
    if (i == runs.size()) break;
    ++take[i];

    Cube<Atom> x, y;
    for (std::size_t k = 0; k < runs.size(); ++k) {
      x.insert(x.end(), take[k], runs[k].first);
      y.insert(y.end(), runs[k].second - take[k], runs[k].first);
    }
    if (!x.empty() && !y.empty()) out.emplace(std::move(x), std::move(y));
  }
}

template <class Atom>
void prefix_splits(const Cube<Atom>& cube, std::set<RPair<Atom>>& out) {
  for (std::size_t k = 1; k < cube.size(); ++k)
    out.emplace(Cube<Atom>(cube.begin(), cube.begin() + k), Cube<Atom>(cube.begin() + k, cube.end()));
}

// For cube c and divisor cube d: the y with d·y = c (left) or y·d = c (right).
template <class Atom>
std::optional<Cube<Atom>> cofactor(ProductMode mode, const Cube<Atom>& c, const Cube<Atom>& d, Side side) {
  if (d.size() >= c.size()) return std::nullopt;
  if (mode == ProductMode::commutative) {
    if (!std::includes(c.begin(), c.end(), d.begin(), d.end())) return std::nullopt;
    Cube<Atom> y;
    std::set_difference(c.begin(), c.end(), d.begin(), d.end(), std::back_inserter(y));
    return y;
  }
  if (side == Side::left) {
    if (!std::equal(d.begin(), d.end(), c.begin())) return std::nullopt;
    return Cube<Atom>(c.begin() + d.size(), c.end());
  }
  if (!std::equal(d.begin(), d.end(), c.end() - d.size())) return std::nullopt;
  return Cube<Atom>(c.begin(), c.end() - d.size());
}

template <class Atom>
using Projection = std::map<Cube<Atom>, std::set<Cube<Atom>>>;

// First key with the largest image; keys are ordered, so ties go to the smallest cube.
template <class Atom>
typename Projection<Atom>::const_iterator widest(const Projection<Atom>& p) {
  auto best = p.begin();
  for (auto it = p.begin(); it != p.end(); ++it)
    if (it->second.size() > best->second.size()) best = it;
  return best;
}

}  // namespace detail

/// All pairs (x, y) with x·y equal to some cube of `f`.
template <class Atom>
std::set<RPair<Atom>> build_r_pairs(const SopExpression<Atom>& f, SplitStrategy strategy = SplitStrategy::full) {
  std::set<RPair<Atom>> out;
  for (const auto& c : f.cubes()) {
    if (c.size() < 2) continue;
    if (f.mode() == ProductMode::commutative && strategy == SplitStrategy::full)
      detail::multiset_splits(c, out);
    else
      detail::prefix_splits(c, out);
  }
  return out;
}

template <class Atom>
struct Division {
  std::optional<SopExpression<Atom>> quotient;
  std::optional<SopExpression<Atom>> remainder;
};

/// Largest q with d·q ⊆ f (left) or q·d ⊆ f (right); the remainder is what
/// of f is left uncovered.
template <class Atom>
Division<Atom> divide(const SopExpression<Atom>& f, const SopExpression<Atom>& d, Side side) {
  if (f.mode() != d.mode()) throw error("mixing commutative and non-commutative expressions");
  const auto mode = f.mode();

  std::optional<std::set<Cube<Atom>>> q;
  for (const auto& dc : d.cubes()) {
    std::set<Cube<Atom>> ys;
    for (const auto& c : f.cubes())
      if (auto y = detail::cofactor(mode, c, dc, side)) ys.insert(std::move(*y));
    if (!q) {
      q = std::move(ys);
    } else {
      std::set<Cube<Atom>> both;
      std::set_intersection(q->begin(), q->end(), ys.begin(), ys.end(), std::inserter(both, both.end()));
      q = std::move(both);
    }
  }

  Division<Atom> out;
  std::set<Cube<Atom>> covered;
  if (q && !q->empty()) {
    out.quotient.emplace(mode, *q);
    const auto product = side == Side::left ? multiply(d, *out.quotient) : multiply(*out.quotient, d);
    covered = product.cubes();
  }
  std::vector<Cube<Atom>> rest;
  for (const auto& c : f.cubes())
    if (!covered.contains(c)) rest.push_back(c);
  if (!rest.empty()) out.remainder.emplace(mode, std::move(rest));
  return out;
}

/// Greedy factorisation f = g1 ⋯ gn + r.
///
/// The first iteration compares the widest left projection π1(R, x) with the
/// widest right projection π2(R, y) and fixes which side is grown: divisors
/// X (keeping Y as the running projection) or quotients Y (keeping X). Pairs
/// that can no longer extend the rectangle X·Y are dropped from R until R is
/// empty. The two sides are then factorised recursively and their chains
/// spliced; a side whose own factorisation leaves a remainder stays a single
/// factor. No split at all yields the single factor f.
template <class Atom>
Factorisation<Atom> exp_factorise(const SopExpression<Atom>& f, SplitStrategy strategy = SplitStrategy::full) {
  auto r_pairs = build_r_pairs(f, strategy);
  if (r_pairs.empty()) return {{f}, std::nullopt};

  std::set<Cube<Atom>> xs, ys;
  std::optional<bool> grow_left;
  while (!r_pairs.empty()) {
    detail::Projection<Atom> pi1, pi2;
    for (const auto& [x, y] : r_pairs) {
      pi1[x].insert(y);
      pi2[y].insert(x);
    }
    auto x_max = detail::widest(pi1);
    auto y_max = detail::widest(pi2);
    if (!grow_left) grow_left = x_max->second.size() >= y_max->second.size();

    if (*grow_left) {
      const auto x = x_max->first;
      xs.insert(x);
      ys = x_max->second;
      std::erase_if(r_pairs, [&](const RPair<Atom>& p) { return p.first == x || !ys.contains(p.second); });
    } else {
      const auto y = y_max->first;
      ys.insert(y);
      xs = y_max->second;
      std::erase_if(r_pairs, [&](const RPair<Atom>& p) { return p.second == y || !xs.contains(p.first); });
    }
  }
  if (xs.empty()) return {{f}, std::nullopt};

  const SopExpression<Atom> x(f.mode(), xs);
  const SopExpression<Atom> y(f.mode(), ys);
  const auto product = multiply(x, y);

  std::vector<Cube<Atom>> rest;
  for (const auto& c : f.cubes())
    if (!product.cubes().contains(c)) rest.push_back(c);
  if (rest.size() + product.size() != f.size()) throw error("factorisation produced cubes outside the expression");

  auto chain = [strategy](const SopExpression<Atom>& e) {
    auto sub = exp_factorise(e, strategy);
    return sub.remainder ? std::vector<SopExpression<Atom>>{e} : std::move(sub.factors);
  };

  Factorisation<Atom> out;
  out.factors = chain(x);
  auto right = chain(y);
  out.factors.insert(out.factors.end(), right.begin(), right.end());
  if (!rest.empty()) out.remainder.emplace(f.mode(), std::move(rest));
  return out;
}

/// Distributes the factor chain and adds the remainder back.
template <class Atom>
SopExpression<Atom> expand(const Factorisation<Atom>& fac) {
  if (fac.factors.empty()) {
    if (!fac.remainder) throw error("empty factorisation");
    return *fac.remainder;
  }
  auto product = fac.factors.front();
  for (std::size_t i = 1; i < fac.factors.size(); ++i) product = multiply(product, fac.factors[i]);
  return fac.remainder ? add(product, *fac.remainder) : product;
}

}  // namespace atgen
