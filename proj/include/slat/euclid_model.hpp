#pragma once

// Discretized many-body Hamiltonians over a semilattice of coordinate
// subspaces of R^d.
//
// Every subspace X is a sorted set of axes. H(X) is sampled on the product grid
// of its axes, flattened with the last axis fastest, and represented in the
// orthonormal basis e_j / sqrt(h^dim X), so all operators are real symmetric
// matrices with the Euclidean inner product. H(O) is one-dimensional.
//
// The dilation generator D is stored as iD, which is real antisymmetric; the
// commutator [H, iD] is then the real symmetric matrix H(iD) - (iD)H.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "slat/diagnostics.hpp"
#include "slat/semilattice.hpp"

namespace slat {

using SpMat = Eigen::SparseMatrix<double>;
using Axes = std::vector<int>;

enum class Scheme { fd, spectral };

struct GridSpec {
  int n = 0;
  double half_length = 0.0;

  double h() const { return 2.0 * half_length / (n - 1); }
  double point(int j) const { return -half_length + j * h(); }
  /// n odd and >= 9, half_length > 0.
  Diagnostics check(const std::string& path = "/grid") const;
  /// Same box, spacing halved.
  GridSpec refined() const { return {2 * (n - 1) + 1, half_length}; }
};

/// Named function on a coordinate space.
///   gaussian: amplitude * exp(-|u - center|^2 / (2 width^2))
///   bump:     amplitude * (1 - |u - center|^2 / width^2)^2 inside the ball, 0 outside
///   constant: amplitude
///   samples:  explicit grid values
/// A gaussian well of depth d is a gaussian with amplitude -d.
struct Profile {
  enum class Kind { gaussian, bump, constant, samples };
  Kind kind = Kind::gaussian;
  double amplitude = 0.0;
  double width = 1.0;
  std::vector<double> center;
  std::vector<double> samples;

  /// Value at a point of an `naxes`-dimensional space; an empty center is the origin.
  double operator()(const std::vector<double>& u) const;
};

/// I_XY(Z) = 1_Z (x) I^Z_XY. For x == y, I^Z is multiplication by the profile on
/// the grid of X/Z. For x != y it is the rank-one kernel
/// amplitude * g(a) g(b) with g the unit-amplitude profile shape on X/Z and Y/Z
/// (samples then list kernel values row-major).
struct InteractionSpec {
  std::string x, y, z;
  Profile profile;
};

/// Field coupling a*(theta) from H(y) to H(x) for x > y, theta a function on
/// X/Y; recorded in I(y). For x == y the profile must be constant and adds a
/// multiple of the identity, recorded in I(x).
struct CouplingSpec {
  std::string x, y;
  Profile theta;
};

struct ModelSpec {
  Semilattice lattice;
  std::map<std::string, Axes> axes;
  GridSpec grid;
  Scheme scheme = Scheme::fd;
  std::vector<InteractionSpec> interactions;
  std::vector<CouplingSpec> couplings;

  /// Coordinate-subspace consistency: axes sorted and distinct, dims equal to
  /// axis counts, meets equal to axis intersections, grid valid, every
  /// interaction target with z <= x n y, couplings on comparable pairs,
  /// configured pairs with x <= y lexicographically, profile shapes.
  Diagnostics check(const std::string& path = "") const;
};

/// Semilattice of the given coordinate subspaces with meet = axis intersection.
/// Throws InvalidArgument if some intersection is not in the list.
Semilattice axes_semilattice(const std::map<std::string, Axes>& axes);

/// Block matrix over the elements of a semilattice; absent blocks are zero.
class BlockOperator {
 public:
  BlockOperator(Semilattice s, std::map<std::string, Eigen::Index> dims);

  const Semilattice& lattice() const { return s_; }
  const std::map<std::string, Eigen::Index>& dims() const { return dims_; }
  Eigen::Index dim(const std::string& id) const { return dims_.at(id); }
  Eigen::Index total_dim() const;
  /// Offset of the block row of `id` in id order.
  Eigen::Index offset(const std::string& id) const;

  const std::map<std::pair<std::string, std::string>, SpMat>& blocks() const { return blocks_; }
  SpMat block(const std::string& x, const std::string& y) const;
  void add(const std::string& x, const std::string& y, const SpMat& m);
  BlockOperator& operator+=(const BlockOperator& o);

  SpMat assemble() const;
  Eigen::MatrixXd dense() const;
  /// max |B(x,y) - B(y,x)^T| over blocks.
  double asymmetry() const;

 private:
  Semilattice s_;
  std::map<std::string, Eigen::Index> dims_;
  std::map<std::pair<std::string, std::string>, SpMat> blocks_;
};

/// H = K + sum_Z I(Z) together with the geometry it was built on.
struct Hamiltonian {
  Semilattice lattice;
  std::map<std::string, Axes> axes;
  GridSpec grid;
  Scheme scheme = Scheme::fd;
  BlockOperator kinetic;
  std::map<std::string, BlockOperator> interaction;

  BlockOperator total() const;
  SpMat matrix() const { return total().assemble(); }
  Eigen::Index total_dim() const { return kinetic.total_dim(); }
};

/// Grid dimension n^|axes| (1 for the empty set).
Eigen::Index grid_dim(const Axes& axes, const GridSpec& g);
/// Grid coordinates of flat index i, one per axis.
std::vector<double> grid_point(Eigen::Index i, std::size_t naxes, const GridSpec& g);

SpMat laplacian_1d(const GridSpec& g, Scheme scheme);
/// Kronecker sum of 1D Laplacians over the axes; 1x1 zero for no axes.
SpMat build_laplacian(const Axes& axes, const GridSpec& g, Scheme scheme);
/// iD for one axis: (QG + GQ)/4, Q = diag(grid points), G the centered first
/// difference with Dirichlet ends.
SpMat dilation_1d(const GridSpec& g);
/// iD_X as a Kronecker sum over the axes; 1x1 zero for no axes.
SpMat dilation_generator(const Axes& axes, const GridSpec& g);

/// Permutation from the grid of x to the product grid (z, x minus z), as the
/// matrix P with (P u)[zi * n_rest + ri] = u[xi]; requires z within x.
SpMat axis_permutation(const Axes& x, const Axes& z, const GridSpec& g);
SpMat kron(const SpMat& a, const SpMat& b);
SpMat identity(Eigen::Index n);

BlockOperator build_kinetic(const ModelSpec& m);
BlockOperator build_interaction(const InteractionSpec& spec, const ModelSpec& m);
BlockOperator build_field_coupling(const CouplingSpec& spec, const ModelSpec& m);
/// Validates the model (InvalidArgument with the first diagnostic) and
/// assembles H; throws InternalError if the result is not symmetric.
Hamiltonian assemble(const ModelSpec& m);

/// Blocks with X, Y >= x, keeping K and the I(Z) with Z >= x.
Hamiltonian project_geq(const Hamiltonian& h, const std::string& x);

/// H_{S/x} on the quotient semilattice, extracted from project_geq(h, x)
/// through the factorization 1_x (x) (.) of each kept block. Throws ModelNotNR
/// when a block does not factor within 1e-12.
Hamiltonian subsystem(const Hamiltonian& h, const std::string& x);

/// Frobenius norm of project_geq(h, x) - (Delta_x (x) 1 + 1 (x) H_{S/x}) with
/// every block permuted to the (x, Y/x) grid order. `termwise` compares K and
/// each I(Z) separately; `summed` compares the assembled sums.
struct NrResidual {
  double termwise = 0.0;
  double summed = 0.0;
};
NrResidual nr_residual(const Hamiltonian& h, const std::string& x);

/// Block-diagonal iD over the elements of h.
BlockOperator dilation(const Hamiltonian& h);

/// [H, iD] with the kinetic part replaced by K, using [Delta, iD] = Delta, and
/// the interaction part I(iD) - (iD)I taken literally.
/// Unlike H(iD) - (iD)H this has no boundary term from the Dirichlet walls.
SpMat bulk_commutator(const Hamiltonian& h);
/// H(iD) - (iD)H with the full matrices.
SpMat literal_commutator(const Hamiltonian& h);

/// Estimates sup_u ||I(Z) u|| / ||(K + i a) u|| per Z by power iteration.
std::map<std::string, double> relative_bounds(const Hamiltonian& h, double a = 1.0, int iterations = 30);

}  // namespace slat
