// Exact root-system, lattice and Weyl-group data for the compact simple
// simply connected types A-G, rank <= 8.
//
// Coordinate conventions, fixed once for the whole project:
//   * roots are stored as integer coordinate vectors in the simple-root basis;
//   * weights (including alcove points mu) are stored as rational coordinate
//     vectors in the fundamental-weight basis, so dominance and the pairing
//     with coroots are coordinate reads;
//   * the inner product is the rational Gram matrix of the simple roots in
//     the basic normalization (long roots of squared length 2), multiplied by
//     the optional global scale. Metric quantities (norms, alpha.rho, volume
//     products, Hessians) use the scaled form; torus phases, alcove and
//     stabilizer tests use the basic (scale 1) form so that characters stay
//     well defined on T.
// No floating-point comparison ever decides a lattice or alcove question.
#pragma once

#include "witten/linalg.hpp"
#include "witten/rational.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace witten::lie {

enum class SimpleType : char { A = 'A', B = 'B', C = 'C', D = 'D',
                               E = 'E', F = 'F', G = 'G' };

SimpleType parse_type(char c);

using RootCoords = std::vector<int>;  // integer coords in simple-root basis
using Weight = RatVec;                // rational coords in fundamental basis

struct WeylElement {
  // Row-major rank x rank integer matrix acting on simple-root coordinates.
  std::array<std::int8_t, 64> mat{};
  std::int8_t parity = 1;   // (-1)^length = det
  std::uint8_t length = 0;  // reduced word length
};

struct WeylBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Process-wide default enumeration budget; the CLI raises it for E8 runs.
long long default_weyl_budget();
void set_default_weyl_budget(long long budget);

class RootSystem {
public:
  static constexpr long long kDefaultWeylBudget = 10'000'000;

  RootSystem(SimpleType type, int rank, Rat scale = Rat(1));

  SimpleType type() const { return type_; }
  int rank() const { return rank_; }
  const Rat& scale() const { return scale_; }
  std::string label() const;

  int n_plus() const { return static_cast<int>(positive_roots_.size()); }
  int dim_g() const { return dim_g_; }
  long long weyl_order() const { return weyl_order_; }
  int center_order() const { return center_order_; }

  const std::vector<RootCoords>& positive_roots() const {
    return positive_roots_;
  }
  int highest_root_index() const { return highest_root_; }

  // Integer Cartan matrix, C[i][j] = <alpha_i, alpha_j^vee>.
  const std::vector<std::vector<int>>& cartan() const { return cartan_; }

  // Gram matrix of the simple roots (scaled / basic).
  const RatMat& gram() const { return gram_; }
  const RatMat& gram_basic() const { return gram_basic_; }

  // Basis changes between fundamental-weight and simple-root coordinates.
  const RatMat& weight_to_root() const { return weight_to_root_; }
  const RatMat& root_to_weight() const { return root_to_weight_; }

  Weight rho() const;                    // (1,...,1)
  RatVec rho_root_coords() const { return rho_root_; }
  RatVec weight_root_coords(const Weight& w) const;

  // Inner products. "basic" is the intrinsic normalization used for torus
  // phases; the unqualified versions carry the global scale.
  Rat inner_rr(const RatVec& x, const RatVec& y) const {
    return form(gram_, x, y);
  }
  Rat inner_rr_basic(const RatVec& x, const RatVec& y) const {
    return form(gram_basic_, x, y);
  }
  Rat inner_weights(const Weight& a, const Weight& b) const;
  Rat norm2_weight(const Weight& a) const { return inner_weights(a, a); }
  // alpha . mu for a positive root index and an alcove point, basic form.
  Rat root_dot_basic(int root_index, const Weight& mu) const;
  // alpha . lambda with the scaled form (used in all volume formulas).
  Rat root_dot(int root_index, const Weight& lambda) const;

  bool is_dominant(const Weight& w) const;
  bool is_dominant_integral(const Weight& w) const;

  // Closed fundamental alcove: dominant and <alpha_max, mu> <= 1 (basic).
  bool in_closed_alcove(const Weight& mu) const;

  // {alpha in R+ : alpha . mu in Z}, decided exactly. Throws if mu is not in
  // the closed alcove.
  std::vector<int> stabilizer_roots(const Weight& mu) const;

  // Roots of the centralizer of a chamber point (alpha . mu = 0), used for
  // coadjoint orbit volumes.
  std::vector<int> zero_roots(const Weight& mu) const;

  // Full Weyl group, generated by simple reflections; cached after the first
  // call. Sorted by (length, lexicographic matrix) for determinism.
  // budget = 0 uses the process-wide default.
  const std::vector<WeylElement>& weyl_elements(long long budget = 0) const;

  // Minimal-length representatives of the cosets w W_K, characterized by
  // w(Pi_K) > 0. Their inverses represent W_K \ W.
  std::vector<WeylElement> coset_representatives(
      const std::vector<int>& k_roots, long long budget = 0) const;

  long long weyl_subgroup_order(const std::vector<int>& k_roots) const;

  // Simple system of a closed subsystem given by positive-root indices.
  // Throws std::invalid_argument if the set is not closed.
  std::vector<int> subsystem_simples(const std::vector<int>& k_roots) const;

  // All dominant lambda with ||lambda+rho||^2 <= radius2 (scaled form),
  // sorted by (||lambda+rho||^2, lex).
  std::vector<Weight> dominant_weights_in_ball(const Rat& radius2) const;

  // det of the scaled Gram matrix of the coroot basis; the covolume of the
  // integral lattice is its square root.
  Rat covolume_sq() const;

  RatVec apply_weyl_root(const WeylElement& w, const RatVec& x) const;
  RootCoords apply_weyl_int(const WeylElement& w, const RootCoords& x) const;
  Weight apply_weyl_weight(const WeylElement& w, const Weight& k) const;
  WeylElement weyl_inverse(const WeylElement& w) const;

  // Reflection in a positive root, as a rational matrix on root coordinates.
  RatMat reflection_matrix(int root_index) const;

  // True if the integer root-coordinate vector is a positive root sum
  // (all coordinates >= 0, not all zero).
  static bool coords_positive(const RootCoords& x);

  int find_root(const RootCoords& x) const; // index in positive_roots or -1

private:
  void build_gram_basic();
  void build_positive_roots();
  void build_weyl_cache(long long budget) const;

  SimpleType type_;
  int rank_;
  Rat scale_;
  int dim_g_ = 0;
  long long weyl_order_ = 0;
  int center_order_ = 1;
  int highest_root_ = -1;

  RatMat gram_basic_;  // scale 1
  RatMat gram_;        // scale applied
  std::vector<Rat> d_basic_;               // <alpha_i,alpha_i>/2 at scale 1
  std::vector<std::vector<int>> cartan_;   // integer
  RatMat root_to_weight_;                  // Cartan^T
  RatMat weight_to_root_;                  // (Cartan^T)^{-1}
  RatMat gram_weight_;                     // scaled Gram of fund. weights
  RatMat gram_weight_basic_;
  RatVec rho_root_;
  std::vector<RootCoords> positive_roots_;

  mutable std::once_flag weyl_once_;
  mutable std::vector<WeylElement> weyl_cache_;
};

} // namespace witten::lie
