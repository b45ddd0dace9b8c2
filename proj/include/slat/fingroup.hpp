#pragma once

// Finite abelian groups, kernel operators between subgroups, and linear spans
// of such operators compared by numerical rank.
//
// Haar measure is counting measure on every subgroup, so H(X) = C^|X| with the
// standard inner product and members of X in increasing index order.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slat/semilattice.hpp"

namespace slat {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Z_{n_1} x ... x Z_{n_k}; element i has mixed-radix digits, last factor fastest.
class FinAbGroup {
 public:
  explicit FinAbGroup(std::vector<int> cyclic_orders);

  int order() const { return order_; }
  const std::vector<int>& cyclic_orders() const { return orders_; }
  std::vector<int> digits(int g) const;
  int index(const std::vector<int>& digits) const;
  int add(int a, int b) const { return add_[static_cast<std::size_t>(a * order_ + b)]; }
  int neg(int a) const { return neg_[static_cast<std::size_t>(a)]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  /// Character k evaluated at g: exp(2 pi i sum_j k_j g_j / n_j).
  cplx character(int k, int g) const;
  std::string label(int g) const;

  friend bool operator==(const FinAbGroup& a, const FinAbGroup& b) { return a.orders_ == b.orders_; }

 private:
  std::vector<int> orders_;
  int order_ = 1;
  std::vector<int> add_;
  std::vector<int> neg_;
};

class Subgroup {
 public:
  /// Validates closure exhaustively; throws InvalidArgument otherwise.
  Subgroup(const FinAbGroup& parent, std::vector<int> members);
  static Subgroup generated(const FinAbGroup& parent, const std::vector<int>& generators);
  static Subgroup trivial(const FinAbGroup& parent) { return Subgroup(parent, {0}); }
  static Subgroup whole(const FinAbGroup& parent);

  const FinAbGroup& parent() const { return parent_; }
  int size() const { return static_cast<int>(members_.size()); }
  const std::vector<int>& members() const { return members_; }
  bool contains(int g) const { return pos_[static_cast<std::size_t>(g)] >= 0; }
  /// Row/column index of g in H(this); -1 when absent.
  int position(int g) const { return pos_[static_cast<std::size_t>(g)]; }
  bool leq(const Subgroup& other) const;
  Subgroup intersect(const Subgroup& other) const;
  Subgroup sum(const Subgroup& other) const;
  /// Cosets of `sub` in this group as lists of positions; requires sub <= this.
  std::vector<std::vector<int>> cosets(const Subgroup& sub) const;
  /// A small generating set.
  std::vector<int> generators() const;
  std::string label() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members_ == b.members_; }
  friend bool operator<(const Subgroup& a, const Subgroup& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.members_ < b.members_;
  }

 private:
  FinAbGroup parent_;
  std::vector<int> members_;
  std::vector<int> pos_;
};

/// All subgroups, sorted by order then members.
std::vector<Subgroup> enumerate_subgroups(const FinAbGroup& g);
/// Subgroup sum; throws InvalidArgument on parent mismatch.
Subgroup group_sum(const Subgroup& x, const Subgroup& y);
/// Some s <= x with x = s (+) y internally, if one exists.
std::optional<Subgroup> find_complement(const Subgroup& x, const Subgroup& y);

struct KernelOp {
  Subgroup rows;
  Subgroup cols;
  CMat m;

  KernelOp adjoint() const { return {cols, rows, m.adjoint()}; }
};

/// Function on the parent group.
using GroupFunction = std::vector<cplx>;
GroupFunction delta(const FinAbGroup& g, int at);
/// phi*(g) = conj(phi(-g)).
GroupFunction involution(const FinAbGroup& g, const GroupFunction& phi);

/// T[a,b] = phi(a - b) for a in x, b in y.
KernelOp txy(const GroupFunction& phi, const Subgroup& x, const Subgroup& y);

/// Linear span of rows x cols matrices, stored as an orthonormal basis of
/// column-major vectorizations. Spanning matrices are added block by block; a
/// direction counts toward the rank when its singular value, after projecting
/// out the basis built so far, exceeds kRankTol times the largest spanning norm.
class OperatorSpan {
 public:
  static constexpr double kRankTol = 1e-9;

  OperatorSpan(Eigen::Index rows, Eigen::Index cols);
  static OperatorSpan from(Eigen::Index rows, Eigen::Index cols, const std::vector<CMat>& mats);
  static OperatorSpan from_vectors(Eigen::Index rows, Eigen::Index cols, const CMat& stacked);
  /// Wraps columns the caller guarantees to be orthonormal.
  static OperatorSpan from_orthonormal(Eigen::Index rows, Eigen::Index cols, CMat basis);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index dim() const { return basis_.cols(); }
  const CMat& basis() const { return basis_; }
  CMat element(Eigen::Index i) const;
  std::vector<CMat> elements() const;
  OperatorSpan adjoint() const;
  /// Distance from m to the span relative to ||m||.
  double residual(const CMat& m) const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  CMat basis_;
};

/// Numerical rank of the columns of v under OperatorSpan::kRankTol.
Eigen::Index numerical_rank(const CMat& v);

struct RankTriple {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  Eigen::Index joint = 0;

  bool equal() const { return a == b && b == joint; }
  /// b is contained in a.
  bool b_in_a() const { return joint == a; }
};

RankTriple span_ranks(const OperatorSpan& a, const OperatorSpan& b);
bool span_eq(const OperatorSpan& a, const OperatorSpan& b);
bool span_contains(const OperatorSpan& outer, const OperatorSpan& inner);
OperatorSpan span_sum(const OperatorSpan& a, const OperatorSpan& b);
OperatorSpan span_mul(const OperatorSpan& a, const OperatorSpan& b);

/// {txy(delta_g, x, y) | g in x + y}
OperatorSpan span_TXY(const Subgroup& x, const Subgroup& y);
/// Multiplication on H(x) by indicators of cosets of x n y in x.
OperatorSpan span_CXY_funcs(const Subgroup& x, const Subgroup& y);
/// C_x(y) x| x by both constructions; throws InternalError if they differ.
OperatorSpan span_crossed(const Subgroup& x, const Subgroup& y);
/// Coset-indicator multiplications times translations.
OperatorSpan span_crossed_products(const Subgroup& x, const Subgroup& y);
/// Kernels constant on orbits of the diagonal action of y on x * x.
OperatorSpan span_crossed_orbits(const Subgroup& x, const Subgroup& y);
/// T_xy . C_y(z); throws InternalError if it differs from C_x(z) . T_xy.
OperatorSpan span_CXYZ(const Subgroup& x, const Subgroup& y, const Subgroup& z);
/// Convolution algebra C*(x).
OperatorSpan span_convolutions(const Subgroup& x);

/// Creation operator u -> theta (x) u from H(y) to H(x) with x = splitting (+) y.
/// theta is indexed by positions in `splitting`.
KernelOp field_op(const CVec& theta, const Subgroup& x, const Subgroup& y, const Subgroup& splitting);

/// Closure of span(seeds and their adjoints) under multiplication by the
/// generators. Throws InternalError after 50 rounds without stabilizing.
struct GeneratedAlgebra {
  OperatorSpan span;
  int rounds = 0;
};
GeneratedAlgebra generated_algebra(const std::vector<CMat>& seeds);

/// Semilattice whose elements are bound to subgroups of one group; blocks of
/// the total space are ordered by element id.
class GroupModel {
 public:
  GroupModel(Semilattice s, std::map<std::string, Subgroup> binding);

  const Semilattice& lattice() const { return s_; }
  const Subgroup& subgroup(const std::string& id) const { return bind_.at(id); }
  const FinAbGroup& group() const { return bind_.begin()->second.parent(); }
  Eigen::Index total_dim() const { return total_; }
  Eigen::Index offset(const std::string& id) const { return offset_.at(id); }
  /// Places an |X| x |Y| block into a total_dim square matrix.
  CMat embed(const std::string& x, const std::string& y, const CMat& block) const;
  /// The (x, y) block of a total-space matrix.
  CMat block(const CMat& m, const std::string& x, const std::string& y) const;

  /// Graded component C(z): blocks C_XY(z) for all X, Y >= z.
  OperatorSpan component(const std::string& z) const;
  /// Sum of components over all of S.
  OperatorSpan assemble_C() const;
  /// Sum of components over z >= sigma, and over z not >= sigma.
  OperatorSpan components_geq(const std::string& sigma) const;
  OperatorSpan components_not_geq(const std::string& sigma) const;

 private:
  Semilattice s_;
  std::map<std::string, Subgroup> bind_;
  std::map<std::string, Eigen::Index> offset_;
  Eigen::Index total_ = 0;
};

/// Sum over a generating set s of (2 - U_s - U_s*), U_s translation by s on H(x).
CMat cayley_laplacian(const Subgroup& x);
/// Multiplication on H(x) by the parent character k.
CMat character_mult(const Subgroup& x, int k);

struct PauliFierzOptions {
  std::vector<double> couplings{0.0, 1.0, -1.0};
  cplx z{0.0, 1.0};
};
/// Resolvents (z - K_k - c phi)^-1 where K_k is the Cayley Laplacian on every
/// block conjugated by the character k, and phi = a*(delta_s) + a(delta_s) for
/// every complemented pair X > Y and every s in the complement.
std::vector<CMat> pauli_fierz_seeds(const GroupModel& m, const PauliFierzOptions& opt = {});

}  // namespace slat
