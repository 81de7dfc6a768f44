#include "invcx/exterior.hpp"

#include <algorithm>

namespace invcx {

std::optional<SignedBasisForm> wedge_into_basis(const std::vector<FormFactor>& factors) {
  // Insertion sort, counting transpositions.
  std::vector<FormFactor> f = factors;
  int swaps = 0;
  for (size_t i = 1; i < f.size(); ++i) {
    for (size_t j = i; j > 0 && f[j] < f[j - 1]; --j) {
      std::swap(f[j], f[j - 1]);
      ++swaps;
    }
  }
  for (size_t i = 1; i < f.size(); ++i)
    if (f[i] == f[i - 1]) return std::nullopt;

  SignedBasisForm out;
  out.sign = (swaps % 2 == 0) ? 1 : -1;
  for (const auto& x : f) (x.species == Species::Zeta ? out.zeta : out.tau).push_back(x.index);
  return out;
}

std::vector<MultiIndex> combinations(int n, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > n) return out;
  MultiIndex cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultiIndexBasis::MultiIndexBasis(int m, int n, int p, int q) : p_(p), q_(q) {
  for (const auto& zi : combinations(m, p))
    for (const auto& tj : combinations(n, q)) {
      lookup_.emplace(std::pair(zi, tj), static_cast<int>(elements_.size()));
      elements_.emplace_back(zi, tj);
    }
}

int MultiIndexBasis::find(const MultiIndex& zeta, const MultiIndex& tau) const {
  const auto it = lookup_.find(std::pair(zeta, tau));
  return it == lookup_.end() ? -1 : it->second;
}

}  // namespace invcx
