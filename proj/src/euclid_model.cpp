#include "slat/euclid_model.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/SparseCholesky>

#include "slat/errors.hpp"

namespace slat {

namespace {

using Triplet = Eigen::Triplet<double>;

Axes axes_minus(const Axes& a, const Axes& b) {
  Axes out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Axes axes_meet(const Axes& a, const Axes& b) {
  Axes out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool axes_within(const Axes& a, const Axes& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

Eigen::Index ipow(Eigen::Index b, std::size_t e) {
  Eigen::Index r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

std::string id_path(const std::string& prefix, std::size_t i) { return prefix + "/" + std::to_string(i); }

// Name of e in the quotient by x, following Semilattice::quotient.
std::string qname(const Semilattice& s, const std::string& e, const std::string& x) {
  if (s.least() && *s.least() == x) return e;
  return e == x ? "O" : quotient_id(e, x);
}

// Grid samples of the unit-amplitude shape, scaled to orthonormal coefficients.
Eigen::VectorXd shape_vector(const Profile& p, const Axes& axes, const GridSpec& g, double amplitude) {
  const Eigen::Index n = grid_dim(axes, g);
  Eigen::VectorXd v(n);
  Profile unit = p;
  unit.amplitude = amplitude;
  for (Eigen::Index i = 0; i < n; ++i) v(i) = unit(grid_point(i, axes.size(), g));
  return v * std::sqrt(std::pow(g.h(), static_cast<double>(axes.size())));
}

SpMat diagonal(const Eigen::VectorXd& d) {
  SpMat m(d.size(), d.size());
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) != 0.0) t.emplace_back(i, i, d(i));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat from_dense(const Eigen::MatrixXd& d) {
  SpMat m = d.sparseView();
  m.makeCompressed();
  return m;
}

// Block of 1_Z (x) M placed between the grids of x and y.
SpMat lift(const Axes& x, const Axes& y, const Axes& z, const SpMat& m, const GridSpec& g) {
  const SpMat px = axis_permutation(x, z, g);
  const SpMat py = axis_permutation(y, z, g);
  return SpMat(px.transpose() * kron(identity(grid_dim(z, g)), m) * py);
}

double frob(const SpMat& m) { return m.norm(); }

void profile_diagnostics(const Profile& p, const std::string& path, std::size_t naxes, Eigen::Index nsamples,
                         bool allow_center, Diagnostics& out) {
  if ((p.kind == Profile::Kind::gaussian || p.kind == Profile::Kind::bump) && !(p.width > 0.0))
    out.push_back({path + "/width", "width must be positive"});
  if (!p.center.empty()) {
    if (!allow_center) out.push_back({path + "/center", "a kernel between different subspaces takes no center"});
    else if (p.center.size() != naxes)
      out.push_back({path + "/center", "center has " + std::to_string(p.center.size()) + " coordinates, expected " +
                                           std::to_string(naxes)});
  }
  if (p.kind == Profile::Kind::samples && static_cast<Eigen::Index>(p.samples.size()) != nsamples)
    out.push_back({path + "/samples", "expected " + std::to_string(nsamples) + " samples, got " +
                                          std::to_string(p.samples.size())});
  if (!std::isfinite(p.amplitude)) out.push_back({path + "/amplitude", "amplitude must be finite"});
  for (double v : p.samples)
    if (!std::isfinite(v)) {
      out.push_back({path + "/samples", "samples must be finite"});
      break;
    }
}

}  // namespace

// ---------------------------------------------------------------- grid, profiles

Diagnostics GridSpec::check(const std::string& path) const {
  Diagnostics d;
  if (n < 9 || n % 2 == 0) d.push_back({path + "/n", "n must be odd and at least 9"});
  if (!(half_length > 0.0) || !std::isfinite(half_length)) d.push_back({path + "/half_length", "half_length must be positive"});
  return d;
}

double Profile::operator()(const std::vector<double>& u) const {
  double r2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double c = i < center.size() ? center[i] : 0.0;
    r2 += (u[i] - c) * (u[i] - c);
  }
  switch (kind) {
    case Kind::gaussian:
      return amplitude * std::exp(-r2 / (2.0 * width * width));
    case Kind::bump: {
      const double t = 1.0 - r2 / (width * width);
      return t > 0.0 ? amplitude * t * t : 0.0;
    }
    case Kind::constant:
      return amplitude;
    case Kind::samples:
      break;
  }
  throw InvalidArgument("sampled profile has no closed form");
}

Eigen::Index grid_dim(const Axes& axes, const GridSpec& g) { return ipow(g.n, axes.size()); }

std::vector<double> grid_point(Eigen::Index i, std::size_t naxes, const GridSpec& g) {
  std::vector<double> u(naxes);
  for (std::size_t k = naxes; k-- > 0;) {
    u[k] = g.point(static_cast<int>(i % g.n));
    i /= g.n;
  }
  return u;
}

// ---------------------------------------------------------------- model checks

Semilattice axes_semilattice(const std::map<std::string, Axes>& axes) {
  std::vector<SubspaceId> elems;
  std::map<Axes, std::string> by_axes;
  for (const auto& [id, a] : axes) {
    elems.push_back({id, static_cast<int>(a.size())});
    by_axes[a] = id;
  }
  return Semilattice::from_meet(elems, [&](const std::string& p, const std::string& q) {
    const auto m = axes_meet(axes.at(p), axes.at(q));
    auto it = by_axes.find(m);
    if (it == by_axes.end()) throw InvalidArgument("intersection of '" + p + "' and '" + q + "' is not a listed subspace");
    return it->second;
  });
}

Diagnostics ModelSpec::check(const std::string& path) const {
  Diagnostics d = grid.check(path + "/grid");
  const auto ids = lattice.ids();
  for (const auto& id : ids) {
    auto it = axes.find(id);
    if (it == axes.end()) {
      d.push_back({path + "/subspaces", "element '" + id + "' has no axes"});
      continue;
    }
    const auto& a = it->second;
    if (!std::is_sorted(a.begin(), a.end()) || std::adjacent_find(a.begin(), a.end()) != a.end())
      d.push_back({path + "/subspaces/" + id, "axes must be sorted and distinct"});
    if (!a.empty() && a.front() < 1) d.push_back({path + "/subspaces/" + id, "axes are numbered from 1"});
    if (static_cast<int>(a.size()) != lattice.dim(id))
      d.push_back({path + "/subspaces/" + id, "dimension differs from the number of axes"});
  }
  for (const auto& [id, a] : axes)
    if (!lattice.contains(id)) d.push_back({path + "/subspaces/" + id, "subspace is not an element of the semilattice"});
  if (!d.empty()) return d;
  for (const auto& p : ids)
    for (const auto& q : ids)
      if (axes.at(lattice.meet(p, q)) != axes_meet(axes.at(p), axes.at(q)))
        d.push_back({path + "/semilattice/meet", "meet(" + p + "," + q + ") is not the axis intersection"});
  if (!d.empty()) return d;

  const auto top = lattice.top();
  for (std::size_t i = 0; i < interactions.size(); ++i) {
    const auto& it = interactions[i];
    const auto base = id_path(path + "/interactions", i);
    bool known = true;
    for (const auto& [key, id] : {std::pair{"x", it.x}, {"y", it.y}, {"z", it.z}})
      if (!lattice.contains(id)) {
        d.push_back({base + "/target/" + key, "unknown subspace '" + id + "'"});
        known = false;
      }
    if (!known) continue;
    if (!lattice.leq(it.z, lattice.meet(it.x, it.y))) {
      d.push_back({base + "/target/z", "z = " + it.z + " is not contained in x n y = " + lattice.meet(it.x, it.y)});
      continue;
    }
    if (it.x > it.y) d.push_back({base + "/target", "configure the pair with x <= y; the adjoint block is generated"});
    const auto rx = axes_minus(axes.at(it.x), axes.at(it.z));
    const auto ry = axes_minus(axes.at(it.y), axes.at(it.z));
    const bool same = it.x == it.y;
    profile_diagnostics(it.profile, base + "/potential", rx.size(),
                        same ? grid_dim(rx, grid) : grid_dim(rx, grid) * grid_dim(ry, grid), same, d);
    if (same && top && it.z == *top && it.profile.amplitude != 0.0)
      d.push_back({base + "/target/z", "an interaction graded by the top element makes H_{S/top} nonzero"});
  }
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    const auto& c = couplings[i];
    const auto base = id_path(path + "/couplings", i);
    if (!lattice.contains(c.x) || !lattice.contains(c.y)) {
      d.push_back({base, "unknown subspace in coupling pair"});
      continue;
    }
    if (c.x == c.y) {
      if (c.theta.kind != Profile::Kind::constant)
        d.push_back({base + "/theta", "a diagonal coupling is a constant shift"});
      else if (top && c.x == *top && c.theta.amplitude != 0.0)
        d.push_back({base, "a shift on the top element makes H_{S/top} nonzero"});
      continue;
    }
    if (!lattice.less(c.y, c.x)) {
      d.push_back({base, lattice.less(c.x, c.y) ? "coupling pairs are configured with x above y"
                                                : "pair is not comparable; Phi_XY = 0"});
      continue;
    }
    const auto r = axes_minus(axes.at(c.x), axes.at(c.y));
    profile_diagnostics(c.theta, base + "/theta", r.size(), grid_dim(r, grid), true, d);
  }
  return d;
}

// ---------------------------------------------------------------- block operators

BlockOperator::BlockOperator(Semilattice s, std::map<std::string, Eigen::Index> dims)
    : s_(std::move(s)), dims_(std::move(dims)) {
  for (const auto& id : s_.ids())
    if (!dims_.count(id)) throw InvalidArgument("no dimension for '" + id + "'");
}

Eigen::Index BlockOperator::total_dim() const {
  Eigen::Index t = 0;
  for (const auto& [id, n] : dims_) t += n;
  return t;
}

Eigen::Index BlockOperator::offset(const std::string& id) const {
  Eigen::Index t = 0;
  for (const auto& [k, n] : dims_) {
    if (k == id) return t;
    t += n;
  }
  throw InvalidArgument("unknown element '" + id + "'");
}

SpMat BlockOperator::block(const std::string& x, const std::string& y) const {
  auto it = blocks_.find({x, y});
  if (it != blocks_.end()) return it->second;
  return SpMat(dim(x), dim(y));
}

void BlockOperator::add(const std::string& x, const std::string& y, const SpMat& m) {
  if (m.rows() != dim(x) || m.cols() != dim(y)) throw InvalidArgument("block (" + x + "," + y + ") has the wrong shape");
  auto [it, fresh] = blocks_.try_emplace({x, y}, m);
  if (!fresh) it->second += m;
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& o) {
  for (const auto& [k, m] : o.blocks_) add(k.first, k.second, m);
  return *this;
}

SpMat BlockOperator::assemble() const {
  const Eigen::Index n = total_dim();
  std::vector<Triplet> t;
  std::size_t nnz = 0;
  for (const auto& [k, m] : blocks_) nnz += static_cast<std::size_t>(m.nonZeros());
  t.reserve(nnz);
  for (const auto& [k, m] : blocks_) {
    const Eigen::Index r0 = offset(k.first), c0 = offset(k.second);
    for (Eigen::Index j = 0; j < m.outerSize(); ++j)
      for (SpMat::InnerIterator it(m, j); it; ++it) t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
  }
  SpMat out(n, n);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Eigen::MatrixXd BlockOperator::dense() const { return Eigen::MatrixXd(assemble()); }

double BlockOperator::asymmetry() const {
  double worst = 0.0;
  for (const auto& [k, m] : blocks_) {
    const SpMat diff = m - SpMat(block(k.second, k.first).transpose());
    for (Eigen::Index j = 0; j < diff.outerSize(); ++j)
      for (SpMat::InnerIterator it(diff, j); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

BlockOperator Hamiltonian::total() const {
  BlockOperator t = kinetic;
  for (const auto& [z, i] : interaction) t += i;
  return t;
}

// ---------------------------------------------------------------- elementary matrices

SpMat identity(Eigen::Index n) {
  SpMat m(n, n);
  m.setIdentity();
  return m;
}

SpMat kron(const SpMat& a, const SpMat& b) {
  SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
  for (Eigen::Index ja = 0; ja < a.outerSize(); ++ja)
    for (SpMat::InnerIterator ia(a, ja); ia; ++ia)
      for (Eigen::Index jb = 0; jb < b.outerSize(); ++jb)
        for (SpMat::InnerIterator ib(b, jb); ib; ++ib)
          t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SpMat laplacian_1d(const GridSpec& g, Scheme scheme) {
  const int n = g.n;
  const double h = g.h();
  if (scheme == Scheme::fd) {
    std::vector<Triplet> t;
    for (int j = 0; j < n; ++j) {
      t.emplace_back(j, j, 2.0 / (h * h));
      if (j > 0) t.emplace_back(j, j - 1, -1.0 / (h * h));
      if (j + 1 < n) t.emplace_back(j, j + 1, -1.0 / (h * h));
    }
    SpMat m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }
  // periodic grid of n points with period n h; symmetric set of frequencies
  Eigen::MatrixXd d(n, n);
  const int half = (n - 1) / 2;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int m = -half; m <= half; ++m) {
        const double k = 2.0 * std::numbers::pi * m / (n * h);
        s += k * k * std::cos(k * (j - l) * h);
      }
      d(j, l) = s / n;
    }
  d = 0.5 * (d + d.transpose()).eval();
  return from_dense(d);
}

SpMat build_laplacian(const Axes& axes, const GridSpec& g, Scheme scheme) {
  if (axes.empty()) return SpMat(1, 1);
  const SpMat l1 = laplacian_1d(g, scheme);
  const Eigen::Index n = grid_dim(axes, g);
  SpMat out(n, n);
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const SpMat left = identity(ipow(g.n, k));
    const SpMat right = identity(ipow(g.n, axes.size() - k - 1));
    out += kron(kron(left, l1), right);
  }
  return out;
}

SpMat dilation_1d(const GridSpec& g) {
  const int n = g.n;
  const double h = g.h();
  std::vector<Triplet> t;
  for (int j = 0; j + 1 < n; ++j) {
    const double a = (g.point(j) + g.point(j + 1)) / (8.0 * h);
    t.emplace_back(j, j + 1, a);
    t.emplace_back(j + 1, j, -a);
  }
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat dilation_generator(const Axes& axes, const GridSpec& g) {
  if (axes.empty()) return SpMat(1, 1);
  const SpMat d1 = dilation_1d(g);
  const Eigen::Index n = grid_dim(axes, g);
  SpMat out(n, n);
  for (std::size_t k = 0; k < axes.size(); ++k)
    out += kron(kron(identity(ipow(g.n, k)), d1), identity(ipow(g.n, axes.size() - k - 1)));
  return out;
}

SpMat axis_permutation(const Axes& x, const Axes& z, const GridSpec& g) {
  if (!axes_within(z, x)) throw InvalidArgument("axis_permutation: z is not within x");
  const Axes rest = axes_minus(x, z);
  const Eigen::Index nx = grid_dim(x, g), nr = grid_dim(rest, g);
  std::vector<int> in_z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) in_z[k] = std::binary_search(z.begin(), z.end(), x[k]);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nx));
  std::vector<int> digit(x.size(), 0);
  for (Eigen::Index xi = 0; xi < nx; ++xi) {
    Eigen::Index zi = 0, ri = 0;
    for (std::size_t k = 0; k < x.size(); ++k) (in_z[k] ? zi : ri) = (in_z[k] ? zi : ri) * g.n + digit[k];
    t.emplace_back(zi * nr + ri, xi, 1.0);
    for (std::size_t k = x.size(); k-- > 0;) {
      if (++digit[k] < g.n) break;
      digit[k] = 0;
    }
  }
  SpMat p(nx, nx);
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

// ---------------------------------------------------------------- assembly

namespace {

std::map<std::string, Eigen::Index> dims_of(const Semilattice& s, const std::map<std::string, Axes>& axes,
                                            const GridSpec& g) {
  std::map<std::string, Eigen::Index> d;
  for (const auto& id : s.ids()) d[id] = grid_dim(axes.at(id), g);
  return d;
}

void add_pair(BlockOperator& op, const std::string& x, const std::string& y, const SpMat& b) {
  op.add(x, y, b);
  if (x != y) op.add(y, x, SpMat(b.transpose()));
}

}  // namespace

BlockOperator build_kinetic(const ModelSpec& m) {
  BlockOperator k(m.lattice, dims_of(m.lattice, m.axes, m.grid));
  for (const auto& id : m.lattice.ids()) k.add(id, id, build_laplacian(m.axes.at(id), m.grid, m.scheme));
  return k;
}

BlockOperator build_interaction(const InteractionSpec& spec, const ModelSpec& m) {
  const auto& s = m.lattice;
  for (const auto& id : {spec.x, spec.y, spec.z})
    if (!s.contains(id)) throw InvalidArgument("interaction: unknown subspace '" + id + "'");
  if (!s.leq(spec.z, s.meet(spec.x, spec.y)))
    throw InvalidArgument("interaction: z = " + spec.z + " is not contained in x n y");
  const Axes& ax = m.axes.at(spec.x);
  const Axes& ay = m.axes.at(spec.y);
  const Axes& az = m.axes.at(spec.z);
  const Axes rx = axes_minus(ax, az), ry = axes_minus(ay, az);
  const auto& p = spec.profile;

  SpMat inner;
  if (spec.x == spec.y) {
    Eigen::VectorXd v(grid_dim(rx, m.grid));
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v(i) = p.kind == Profile::Kind::samples ? p.samples.at(static_cast<std::size_t>(i)) : p(grid_point(i, rx.size(), m.grid));
    inner = diagonal(v);
  } else if (p.kind == Profile::Kind::samples) {
    const Eigen::Index na = grid_dim(rx, m.grid), nb = grid_dim(ry, m.grid);
    if (static_cast<Eigen::Index>(p.samples.size()) != na * nb) throw InvalidArgument("interaction: kernel sample count");
    Eigen::MatrixXd k(na, nb);
    for (Eigen::Index a = 0; a < na; ++a)
      for (Eigen::Index b = 0; b < nb; ++b) k(a, b) = p.samples[static_cast<std::size_t>(a * nb + b)];
    k *= std::sqrt(std::pow(m.grid.h(), static_cast<double>(rx.size() + ry.size())));
    inner = from_dense(k);
  } else {
    const Eigen::VectorXd f = shape_vector(p, rx, m.grid, 1.0);
    const Eigen::VectorXd g = shape_vector(p, ry, m.grid, 1.0);
    inner = from_dense(p.amplitude * f * g.transpose());
  }
  BlockOperator out(s, dims_of(s, m.axes, m.grid));
  add_pair(out, spec.x, spec.y, lift(ax, ay, az, inner, m.grid));
  return out;
}

BlockOperator build_field_coupling(const CouplingSpec& spec, const ModelSpec& m) {
  const auto& s = m.lattice;
  if (!s.contains(spec.x) || !s.contains(spec.y)) throw InvalidArgument("coupling: unknown subspace");
  BlockOperator out(s, dims_of(s, m.axes, m.grid));
  if (spec.x == spec.y) {
    if (spec.theta.kind != Profile::Kind::constant) throw InvalidArgument("coupling: a diagonal coupling is a constant shift");
    out.add(spec.x, spec.x, spec.theta.amplitude * identity(out.dim(spec.x)));
    return out;
  }
  if (!s.less(spec.y, spec.x)) throw InvalidArgument("coupling: pair (" + spec.x + "," + spec.y + ") is not x > y");
  const Axes& ax = m.axes.at(spec.x);
  const Axes& ay = m.axes.at(spec.y);
  const Axes r = axes_minus(ax, ay);
  Eigen::VectorXd theta;
  if (spec.theta.kind == Profile::Kind::samples) {
    theta = Eigen::Map<const Eigen::VectorXd>(spec.theta.samples.data(), static_cast<Eigen::Index>(spec.theta.samples.size()));
    if (theta.size() != grid_dim(r, m.grid)) throw InvalidArgument("coupling: theta sample count");
    theta *= std::sqrt(std::pow(m.grid.h(), static_cast<double>(r.size())));
  } else {
    theta = shape_vector(spec.theta, r, m.grid, spec.theta.amplitude);
  }
  add_pair(out, spec.x, spec.y, lift(ax, ay, ay, from_dense(theta), m.grid));
  return out;
}

Hamiltonian assemble(const ModelSpec& m) {
  const auto diags = m.check();
  if (!diags.empty()) throw InvalidArgument(diags.front().path + ": " + diags.front().reason);
  Hamiltonian h{m.lattice, m.axes, m.grid, m.scheme, build_kinetic(m), {}};
  const auto dims = dims_of(m.lattice, m.axes, m.grid);
  auto component = [&](const std::string& z) -> BlockOperator& {
    return h.interaction.try_emplace(z, BlockOperator(m.lattice, dims)).first->second;
  };
  for (const auto& i : m.interactions) component(i.z) += build_interaction(i, m);
  for (const auto& c : m.couplings) component(c.x == c.y ? c.x : c.y) += build_field_coupling(c, m);
  const double asym = h.total().asymmetry();
  if (asym > 1e-12) throw InternalError("assembled Hamiltonian is not symmetric (" + std::to_string(asym) + ")");
  return h;
}

// ---------------------------------------------------------------- sub-Hamiltonians

Hamiltonian project_geq(const Hamiltonian& h, const std::string& x) {
  if (!h.lattice.contains(x)) throw InvalidArgument("project_geq: unknown element '" + x + "'");
  Semilattice f = h.lattice.filter_geq(x);
  std::map<std::string, Axes> axes;
  for (const auto& id : f.ids()) axes[id] = h.axes.at(id);
  const auto dims = dims_of(f, axes, h.grid);
  Hamiltonian p{f, axes, h.grid, h.scheme, BlockOperator(f, dims), {}};
  auto restrict = [&](const BlockOperator& op) {
    BlockOperator out(p.lattice, dims);
    for (const auto& [k, m] : op.blocks())
      if (p.lattice.contains(k.first) && p.lattice.contains(k.second)) out.add(k.first, k.second, m);
    return out;
  };
  p.kinetic = restrict(h.kinetic);
  for (const auto& [z, i] : h.interaction)
    if (h.lattice.leq(x, z)) p.interaction.emplace(z, restrict(i));
  return p;
}

Hamiltonian subsystem(const Hamiltonian& h, const std::string& x) {
  const Hamiltonian p = project_geq(h, x);
  const Axes& xa = h.axes.at(x);
  const Eigen::Index nx = grid_dim(xa, h.grid);

  Semilattice ql = h.lattice.quotient(x);
  std::map<std::string, Axes> axes;
  for (const auto& id : p.lattice.ids()) axes[qname(h.lattice, id, x)] = axes_minus(h.axes.at(id), xa);
  const auto dims = dims_of(ql, axes, h.grid);
  Hamiltonian q{ql, axes, h.grid, h.scheme, BlockOperator(ql, dims), {}};
  for (const auto& id : p.lattice.ids()) {
    const auto qid = qname(h.lattice, id, x);
    q.kinetic.add(qid, qid, build_laplacian(q.axes.at(qid), q.grid, q.scheme));
  }
  for (const auto& [z, op] : p.interaction) {
    BlockOperator out(q.lattice, dims);
    for (const auto& [k, b] : op.blocks()) {
      const SpMat px = axis_permutation(h.axes.at(k.first), xa, h.grid);
      const SpMat py = axis_permutation(h.axes.at(k.second), xa, h.grid);
      const SpMat permuted = px * b * py.transpose();
      const Eigen::Index ra = permuted.rows() / nx, rb = permuted.cols() / nx;
      const SpMat inner = permuted.topLeftCorner(ra, rb);
      const double miss = frob(permuted - kron(identity(nx), inner));
      if (miss > 1e-12 * std::max(1.0, frob(b)))
        throw ModelNotNR("interaction I(" + z + ") block (" + k.first + "," + k.second + ") does not factor as 1_" + x +
                         " (x) I; residual " + std::to_string(miss));
      out.add(qname(h.lattice, k.first, x), qname(h.lattice, k.second, x), inner);
    }
    q.interaction.emplace(qname(h.lattice, z, x), std::move(out));
  }
  return q;
}

NrResidual nr_residual(const Hamiltonian& h, const std::string& x) {
  const Hamiltonian p = project_geq(h, x);
  const Hamiltonian q = subsystem(h, x);
  const Axes& xa = h.axes.at(x);
  const Eigen::Index nx = grid_dim(xa, h.grid);
  const SpMat dx = build_laplacian(xa, h.grid, h.scheme);
  // term by term: kinetic, then each I(Z); summing first would add reassociation rounding
  double sq = 0.0;
  BlockOperator lsum = p.kinetic, rsum = q.kinetic;
  auto term = [&](const BlockOperator& lhs, const BlockOperator& rhs, bool kinetic) -> double {
    double acc = 0.0;
    for (const auto& a : p.lattice.ids())
      for (const auto& b : p.lattice.ids()) {
        const SpMat px = axis_permutation(h.axes.at(a), xa, h.grid);
        const SpMat py = axis_permutation(h.axes.at(b), xa, h.grid);
        const SpMat l = px * lhs.block(a, b) * py.transpose();
        SpMat r = kron(identity(nx), rhs.block(qname(h.lattice, a, x), qname(h.lattice, b, x)));
        if (kinetic && a == b) r += kron(dx, identity(grid_dim(q.axes.at(qname(h.lattice, a, x)), h.grid)));
        const double f = frob(l - r);
        acc += f * f;
      }
    return acc;
  };
  sq += term(p.kinetic, q.kinetic, true);
  for (const auto& [z, op] : p.interaction) {
    const auto& qop = q.interaction.at(qname(h.lattice, z, x));
    sq += term(op, qop, false);
    lsum += op;
    rsum += qop;
  }
  return {std::sqrt(sq), std::sqrt(term(lsum, rsum, true))};
}

// ---------------------------------------------------------------- dilations

BlockOperator dilation(const Hamiltonian& h) {
  BlockOperator d(h.lattice, h.kinetic.dims());
  for (const auto& id : h.lattice.ids()) d.add(id, id, dilation_generator(h.axes.at(id), h.grid));
  return d;
}

SpMat literal_commutator(const Hamiltonian& h) {
  const SpMat H = h.matrix();
  const SpMat A = dilation(h).assemble();
  return SpMat(H * A - A * H);
}

SpMat bulk_commutator(const Hamiltonian& h) {
  BlockOperator inter(h.lattice, h.kinetic.dims());
  for (const auto& [z, op] : h.interaction) inter += op;
  const SpMat I = inter.assemble();
  const SpMat A = dilation(h).assemble();
  return SpMat(h.kinetic.assemble() + (I * A - A * I));
}

std::map<std::string, double> relative_bounds(const Hamiltonian& h, double a, int iterations) {
  const SpMat K = h.kinetic.assemble();
  const SpMat M = SpMat(K * K) + a * a * identity(K.rows());
  Eigen::SimplicialLLT<SpMat> llt(M);
  if (llt.info() != Eigen::Success) throw InternalError("relative_bounds: factorization failed");
  std::map<std::string, double> out;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  for (const auto& [z, op] : h.interaction) {
    const SpMat I = op.assemble();
    const SpMat I2 = I.transpose() * I;
    Eigen::VectorXd v(K.rows());
    for (auto& e : v) e = gauss(rng);
    double mu = 0.0;
    // generalized power iteration for I^T I v = mu (K^2 + a^2) v
    for (int it = 0; it < iterations; ++it) {
      v = llt.solve(I2 * v);
      const double nv = v.norm();
      if (nv == 0.0) break;
      v /= nv;
      mu = v.dot(I2 * v) / v.dot(M * v);
    }
    out[z] = std::sqrt(std::max(mu, 0.0));
  }
  return out;
}

}  // namespace slat
