#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace invcx {

using MultiIndex = std::vector<int>;  // strictly increasing, 0-based

/// zeta forms annihilate the structure; tau forms are dual to its basis.
enum class Species { Zeta = 0, Tau = 1 };

struct FormFactor {
  Species species;
  int index;  // 0-based within its species

  friend bool operator<(const FormFactor& a, const FormFactor& b) {
    return std::pair(static_cast<int>(a.species), a.index) < std::pair(static_cast<int>(b.species), b.index);
  }
  friend bool operator==(const FormFactor& a, const FormFactor& b) {
    return a.species == b.species && a.index == b.index;
  }
};

/// zeta_I ^ tau_J in canonical order with a sign.
struct SignedBasisForm {
  int sign = 1;
  MultiIndex zeta;
  MultiIndex tau;
};

/// Brings a wedge of 1-forms to canonical order (zetas ascending, then taus
/// ascending). Empty when a factor repeats.
std::optional<SignedBasisForm> wedge_into_basis(const std::vector<FormFactor>& factors);

/// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<MultiIndex> combinations(int n, int k);

long long binomial(int n, int k);

/// Ordered pairs (I, J), |I| = p over m zetas and |J| = q over n taus,
/// sorted lexicographically.
class MultiIndexBasis {
 public:
  MultiIndexBasis() = default;
  MultiIndexBasis(int m, int n, int p, int q);

  int p() const { return p_; }
  int q() const { return q_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::pair<MultiIndex, MultiIndex>& operator[](int i) const { return elements_[i]; }
  const std::vector<std::pair<MultiIndex, MultiIndex>>& elements() const { return elements_; }

  /// Position of (I, J), or -1.
  int find(const MultiIndex& zeta, const MultiIndex& tau) const;

 private:
  int p_ = 0, q_ = 0;
  std::vector<std::pair<MultiIndex, MultiIndex>> elements_;
  std::map<std::pair<MultiIndex, MultiIndex>, int> lookup_;
};

}  // namespace invcx
