#pragma once

#include <algorithm>
#include <bit>
#include <vector>

#include "rwl/model.hpp"

namespace rwl::model::detail {

// Calls f on every tuple of the given arity over {0..n-1}, in index order.
template <class F>
void for_each_tuple(int n, int arity, F&& f) {
  std::vector<Elem> t(arity, 0);
  if (n == 0 && arity > 0) return;
  while (true) {
    f(t);
    int k = arity;
    while (k > 0) {
      --k;
      if (++t[k] < n) break;
      t[k] = 0;
      if (k == 0) return;
    }
    if (arity == 0) return;
  }
}

inline std::size_t power(int n, int k) {
  std::size_t p = 1;
  for (int i = 0; i < k; ++i) p *= n;
  return p;
}

// Permutations of {0..n-1}, optionally fixing 0.
inline std::vector<std::vector<Elem>> permutations(int n, bool fix_first) {
  std::vector<Elem> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<Elem>> out;
  auto first = p.begin() + (fix_first && n > 0 ? 1 : 0);
  do out.push_back(p);
  while (std::next_permutation(first, p.end()));
  return out;
}

inline std::uint32_t map_bits(std::uint32_t bits, const std::vector<Elem>& p) {
  std::uint32_t out = 0;
  for (std::uint32_t b = bits; b; b &= b - 1) out |= 1u << p[std::countr_zero(b)];
  return out;
}

// down sets relabelled by p.
inline std::vector<std::uint32_t> permute_order(const std::vector<std::uint32_t>& down, const std::vector<Elem>& p) {
  std::vector<std::uint32_t> out(down.size());
  for (std::size_t x = 0; x < down.size(); ++x) out[p[x]] = map_bits(down[x], p);
  return out;
}

}  // namespace rwl::model::detail
