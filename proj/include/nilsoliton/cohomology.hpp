#pragma once

// Betti numbers of the Chevalley-Eilenberg complex with trivial coefficients.

#include <bit>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "nilsoliton/algebra.hpp"

namespace nilsoliton {

namespace detail {

template <class M>
M zero_matrix(std::size_t r, std::size_t c) {
  if constexpr (std::is_same_v<M, RationalMatrix>) return M(r, c);
  else return M::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

inline std::vector<std::uint32_t> subsets_of_size(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == k) out.push_back(m);
  return out;
}

// Matrix of d: Lambda^k -> Lambda^{k+1} in the basis e^I, I increasing.
// (d w)(x_0..x_k) = sum_{s<t} (-1)^{s+t} w([x_s, x_t], x_0..^s..^t..x_k)
template <class M, class Tensor>
M coboundary(const Tensor& t, int n, int k) {
  auto src = subsets_of_size(n, k), dst = subsets_of_size(n, k + 1);
  std::vector<int> index(1u << n, -1);
  for (std::size_t q = 0; q < src.size(); ++q) index[src[q]] = static_cast<int>(q);
  M d = zero_matrix<M>(dst.size(), src.size());
  for (std::size_t r = 0; r < dst.size(); ++r) {
    std::vector<int> j;
    for (int b = 0; b < n; ++b)
      if (dst[r] >> b & 1u) j.push_back(b);
    for (int s = 0; s < k + 1; ++s)
      for (int u = s + 1; u < k + 1; ++u) {
        std::uint32_t rest = dst[r] & ~(1u << j[s]) & ~(1u << j[u]);
        int sign_su = ((s + u) % 2 == 0) ? 1 : -1;
        for (int l = 0; l < n; ++l) {
          if (rest >> l & 1u) continue;
          const auto& c = t(j[s], j[u], l);
          if (c == std::decay_t<decltype(c)>(0)) continue;
          std::uint32_t target = rest | (1u << l);
          // sort (l, rest) into increasing order
          int pos = std::popcount(rest & ((1u << l) - 1u));
          int sign = sign_su * ((pos % 2 == 0) ? 1 : -1);
          if (sign > 0) d(r, index[target]) += c;
          else d(r, index[target]) -= c;
        }
      }
  }
  return d;
}

}  // namespace detail

// (b_1, ..., b_n)
inline std::vector<int> betti_numbers(const NilpotentAlgebra& alg) {
  const int n = alg.dim();
  if (n > 20) throw Error(Errc::invalid_input, "dimension too large for cohomology");
  std::vector<int> ranks(n + 1, 0);  // ranks[k] = rank of d: Lambda^k -> Lambda^{k+1}
  if (alg.is_rational()) {
    auto t = alg.rational_tensor();
    for (int k = 1; k < n; ++k)
      ranks[k] = static_cast<int>(rank(detail::coboundary<RationalMatrix>(t, n, k)));
  } else {
    StructureTensor t = alg.tensor();
    double scale = 0;
    for (const auto& x : t.c) scale = std::max(scale, std::abs(x));
    for (int k = 1; k < n; ++k)
      ranks[k] = numeric_rank(detail::coboundary<Matrix>(t, n, k), kRankTolerance, scale);
  }
  std::vector<int> b(n);
  long long binom = 1;
  for (int k = 1; k <= n; ++k) {
    binom = binom * (n - k + 1) / k;
    b[k - 1] = static_cast<int>(binom) - ranks[k] - ranks[k - 1];
  }
  return b;
}

}  // namespace nilsoliton
