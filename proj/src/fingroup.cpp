#include "slat/fingroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "slat/errors.hpp"
#include "slat/linalg.hpp"

namespace slat {

// ---------------------------------------------------------------- groups

FinAbGroup::FinAbGroup(std::vector<int> cyclic_orders) : orders_(std::move(cyclic_orders)) {
  if (orders_.empty()) orders_ = {1};
  for (int n : orders_) {
    if (n < 1) throw InvalidArgument("cyclic orders must be positive");
    order_ *= n;
  }
  add_.resize(static_cast<std::size_t>(order_ * order_));
  neg_.resize(static_cast<std::size_t>(order_));
  for (int a = 0; a < order_; ++a) {
    const auto da = digits(a);
    std::vector<int> dn(da.size());
    for (std::size_t j = 0; j < da.size(); ++j) dn[j] = (orders_[j] - da[j]) % orders_[j];
    neg_[static_cast<std::size_t>(a)] = index(dn);
    for (int b = 0; b < order_; ++b) {
      const auto db = digits(b);
      std::vector<int> ds(da.size());
      for (std::size_t j = 0; j < da.size(); ++j) ds[j] = (da[j] + db[j]) % orders_[j];
      add_[static_cast<std::size_t>(a * order_ + b)] = index(ds);
    }
  }
}

std::vector<int> FinAbGroup::digits(int g) const {
  std::vector<int> d(orders_.size());
  for (std::size_t j = orders_.size(); j-- > 0;) {
    d[j] = g % orders_[j];
    g /= orders_[j];
  }
  return d;
}

int FinAbGroup::index(const std::vector<int>& digits) const {
  if (digits.size() != orders_.size()) throw InvalidArgument("element has wrong number of components");
  int g = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const int d = ((digits[j] % orders_[j]) + orders_[j]) % orders_[j];
    g = g * orders_[j] + d;
  }
  return g;
}

cplx FinAbGroup::character(int k, int g) const {
  const auto dk = digits(k);
  const auto dg = digits(g);
  double phase = 0.0;
  for (std::size_t j = 0; j < orders_.size(); ++j)
    phase += static_cast<double>((dk[j] * dg[j]) % orders_[j]) / orders_[j];
  return std::polar(1.0, 2.0 * std::numbers::pi * phase);
}

std::string FinAbGroup::label(int g) const {
  const auto d = digits(g);
  if (d.size() == 1) return std::to_string(d[0]);
  std::string s = "(";
  for (std::size_t j = 0; j < d.size(); ++j) s += (j ? "," : "") + std::to_string(d[j]);
  return s + ")";
}

Subgroup::Subgroup(const FinAbGroup& parent, std::vector<int> members) : parent_(parent) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  pos_.assign(static_cast<std::size_t>(parent.order()), -1);
  for (int m : members) {
    if (m < 0 || m >= parent.order()) throw InvalidArgument("subgroup member out of range");
  }
  members_ = std::move(members);
  for (std::size_t i = 0; i < members_.size(); ++i) pos_[static_cast<std::size_t>(members_[i])] = static_cast<int>(i);
  if (!contains(0)) throw InvalidArgument("subgroup must contain the identity");
  for (int a : members_) {
    if (!contains(parent.neg(a))) throw InvalidArgument("subgroup not closed under negation");
    for (int b : members_)
      if (!contains(parent.add(a, b))) throw InvalidArgument("subgroup not closed under addition");
  }
}

Subgroup Subgroup::generated(const FinAbGroup& parent, const std::vector<int>& generators) {
  std::set<int> h{0};
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int a : frontier)
      for (int g : generators) {
        if (g < 0 || g >= parent.order()) throw InvalidArgument("generator out of range");
        const int s = parent.add(a, g);
        if (h.insert(s).second) next.push_back(s);
      }
    frontier = std::move(next);
  }
  return Subgroup(parent, {h.begin(), h.end()});
}

Subgroup Subgroup::whole(const FinAbGroup& parent) {
  std::vector<int> all(static_cast<std::size_t>(parent.order()));
  for (int g = 0; g < parent.order(); ++g) all[static_cast<std::size_t>(g)] = g;
  return Subgroup(parent, std::move(all));
}

bool Subgroup::leq(const Subgroup& other) const {
  return std::all_of(members_.begin(), members_.end(), [&](int g) { return other.contains(g); });
}

Subgroup Subgroup::intersect(const Subgroup& other) const {
  if (!(parent_ == other.parent_)) throw InvalidArgument("subgroups of different groups");
  std::vector<int> out;
  for (int g : members_)
    if (other.contains(g)) out.push_back(g);
  return Subgroup(parent_, std::move(out));
}

Subgroup Subgroup::sum(const Subgroup& other) const {
  if (!(parent_ == other.parent_)) throw InvalidArgument("subgroups of different groups");
  std::set<int> out;
  for (int a : members_)
    for (int b : other.members_) out.insert(parent_.add(a, b));
  return Subgroup(parent_, {out.begin(), out.end()});
}

std::vector<std::vector<int>> Subgroup::cosets(const Subgroup& sub) const {
  if (!sub.leq(*this)) throw InvalidArgument("cosets: " + sub.label() + " is not contained in " + label());
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(members_.size(), false);
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (seen[i]) continue;
    std::vector<int> c;
    for (int s : sub.members_) {
      const int p = position(parent_.add(members_[i], s));
      seen[static_cast<std::size_t>(p)] = true;
      c.push_back(p);
    }
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> Subgroup::generators() const {
  std::vector<int> gens;
  Subgroup h = trivial(parent_);
  for (int g : members_) {
    if (h.contains(g)) continue;
    gens.push_back(g);
    h = generated(parent_, gens);
  }
  return gens;
}

std::string Subgroup::label() const {
  const auto gens = generators();
  std::string s = "<";
  if (gens.empty()) s += parent_.label(0);
  for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? "," : "") + parent_.label(gens[i]);
  return s + ">";
}

std::vector<Subgroup> enumerate_subgroups(const FinAbGroup& g) {
  std::set<std::vector<int>> seen;
  std::vector<Subgroup> all;
  std::vector<Subgroup> frontier{Subgroup::trivial(g)};
  seen.insert(frontier[0].members());
  all.push_back(frontier[0]);
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto& h : frontier) {
      auto gens = h.generators();
      for (int e = 0; e < g.order(); ++e) {
        if (h.contains(e)) continue;
        gens.push_back(e);
        Subgroup k = Subgroup::generated(g, gens);
        gens.pop_back();
        if (seen.insert(k.members()).second) {
          all.push_back(k);
          next.push_back(k);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end());
  return all;
}

Subgroup group_sum(const Subgroup& x, const Subgroup& y) { return x.sum(y); }

std::optional<Subgroup> find_complement(const Subgroup& x, const Subgroup& y) {
  if (!y.leq(x)) return std::nullopt;
  for (const auto& s : enumerate_subgroups(x.parent())) {
    if (s.size() * y.size() != x.size() || !s.leq(x)) continue;
    if (s.intersect(y).size() == 1) return s;
  }
  return std::nullopt;
}

GroupFunction delta(const FinAbGroup& g, int at) {
  GroupFunction f(static_cast<std::size_t>(g.order()), 0.0);
  f.at(static_cast<std::size_t>(at)) = 1.0;
  return f;
}

GroupFunction involution(const FinAbGroup& g, const GroupFunction& phi) {
  GroupFunction out(phi.size());
  for (int a = 0; a < g.order(); ++a)
    out[static_cast<std::size_t>(a)] = std::conj(phi[static_cast<std::size_t>(g.neg(a))]);
  return out;
}

KernelOp txy(const GroupFunction& phi, const Subgroup& x, const Subgroup& y) {
  if (!(x.parent() == y.parent())) throw InvalidArgument("txy: subgroups of different groups");
  if (static_cast<int>(phi.size()) != x.parent().order()) throw InvalidArgument("txy: function has wrong size");
  const auto& G = x.parent();
  CMat m(x.size(), y.size());
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j)
      m(i, j) = phi[static_cast<std::size_t>(G.sub(x.members()[static_cast<std::size_t>(i)],
                                                   y.members()[static_cast<std::size_t>(j)]))];
  return {x, y, std::move(m)};
}

// ---------------------------------------------------------------- spans

namespace {

constexpr Eigen::Index kBlock = 256;

CMat vec(const CMat& m) { return Eigen::Map<const CMat>(m.data(), m.size(), 1); }

bool is_real(const CMat& m) { return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0; }

// Appends to the orthonormal columns q an orthonormal basis of the part of
// span(v) not already in span(q). A direction counts when its singular value
// in the projected residual exceeds kRankTol * scale; scale <= 0 means the
// longest column of v.
template <class Mat>
Mat extend_impl(const Mat& q, const Mat& v, double scale) {
  const Eigen::Index n = v.rows();
  Mat basis = q;
  if (scale <= 0.0) scale = v.cols() > 0 ? v.colwise().norm().maxCoeff() : 0.0;
  const double tol = OperatorSpan::kRankTol * scale;
  for (Eigen::Index start = 0; start < v.cols() && basis.cols() < n; start += kBlock) {
    const Eigen::Index w = std::min(kBlock, v.cols() - start);
    Mat r = v.middleCols(start, w);
    for (int pass = 0; pass < 2 && basis.cols() > 0; ++pass) r -= basis * (basis.adjoint() * r);

    Eigen::Index live = 0;
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      if (r.col(j).norm() > tol) r.col(live++) = r.col(j);
    if (live == 0) continue;
    r.conservativeResize(Eigen::NoChange, live);

    Eigen::VectorXd sv;
    Mat u;
    linalg::svd_left(r, sv, u);
    Eigen::Index k = 0;
    while (k < sv.size() && sv(k) > tol) ++k;
    if (k == 0) continue;
    Mat fresh = u.leftCols(k);
    if (basis.cols() > 0) {
      fresh -= basis * (basis.adjoint() * fresh);
      Eigen::HouseholderQR<Mat> qr(fresh);
      fresh = qr.householderQ() * Mat::Identity(n, k);
    }
    Mat grown(n, basis.cols() + k);
    grown << basis, fresh;
    basis = std::move(grown);
  }
  return basis;
}

CMat extend(const CMat& q, const CMat& v, double scale = 0.0) {
  if (is_real(q) && is_real(v)) {
    const Eigen::MatrixXd out = extend_impl<Eigen::MatrixXd>(q.real(), v.real(), scale);
    return out.cast<cplx>();
  }
  return extend_impl<CMat>(q, v, scale);
}

}  // namespace

Eigen::Index numerical_rank(const CMat& v) { return extend(CMat(v.rows(), 0), v).cols(); }

OperatorSpan::OperatorSpan(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols), basis_(rows * cols, 0) {}

OperatorSpan OperatorSpan::from(Eigen::Index rows, Eigen::Index cols, const std::vector<CMat>& mats) {
  CMat stacked(rows * cols, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != rows || mats[i].cols() != cols) throw InvalidArgument("span member has wrong shape");
    stacked.col(static_cast<Eigen::Index>(i)) = vec(mats[i]);
  }
  return from_vectors(rows, cols, stacked);
}

OperatorSpan OperatorSpan::from_vectors(Eigen::Index rows, Eigen::Index cols, const CMat& stacked) {
  if (stacked.rows() != rows * cols) throw InvalidArgument("stacked vectors have wrong length");
  OperatorSpan s(rows, cols);
  s.basis_ = extend(CMat(rows * cols, 0), stacked);
  return s;
}

OperatorSpan OperatorSpan::from_orthonormal(Eigen::Index rows, Eigen::Index cols, CMat basis) {
  if (basis.rows() != rows * cols) throw InvalidArgument("basis vectors have wrong length");
  OperatorSpan s(rows, cols);
  s.basis_ = std::move(basis);
  return s;
}

CMat OperatorSpan::element(Eigen::Index i) const { return Eigen::Map<const CMat>(basis_.col(i).data(), rows_, cols_); }

std::vector<CMat> OperatorSpan::elements() const {
  std::vector<CMat> out;
  for (Eigen::Index i = 0; i < dim(); ++i) out.push_back(element(i));
  return out;
}

OperatorSpan OperatorSpan::adjoint() const {
  OperatorSpan s(cols_, rows_);
  s.basis_.resize(rows_ * cols_, dim());
  for (Eigen::Index i = 0; i < dim(); ++i) s.basis_.col(i) = vec(element(i).adjoint());
  return s;
}

double OperatorSpan::residual(const CMat& m) const {
  if (m.rows() != rows_ || m.cols() != cols_) throw InvalidArgument("residual: shape mismatch");
  const CMat v = vec(m);
  const double n = v.norm();
  if (n == 0.0) return 0.0;
  return (v - basis_ * (basis_.adjoint() * v)).norm() / n;
}

RankTriple span_ranks(const OperatorSpan& a, const OperatorSpan& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("span shapes differ");
  return {a.dim(), b.dim(), extend(a.basis(), b.basis(), 1.0).cols()};
}

bool span_eq(const OperatorSpan& a, const OperatorSpan& b) { return span_ranks(a, b).equal(); }

bool span_contains(const OperatorSpan& outer, const OperatorSpan& inner) {
  return span_ranks(outer, inner).b_in_a();
}

OperatorSpan span_sum(const OperatorSpan& a, const OperatorSpan& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("span shapes differ");
  return OperatorSpan::from_orthonormal(a.rows(), a.cols(), extend(a.basis(), b.basis(), 1.0));
}

OperatorSpan span_mul(const OperatorSpan& a, const OperatorSpan& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("span_mul: inner dimensions differ");
  const Eigen::Index r = a.rows();
  const Eigen::Index c = b.cols();
  const Eigen::Index full = r * c;
  const auto ea = a.elements();
  const auto eb = b.elements();

  CMat q(full, 0);
  CMat pending(full, kBlock);
  Eigen::Index np = 0;
  auto flush = [&] {
    // products of unit-norm basis elements have norm at most 1
    q = extend(q, pending.leftCols(np), 1.0);
    np = 0;
  };
  for (const auto& x : ea) {
    for (const auto& y : eb) {
      pending.col(np++) = vec(x * y);
      if (np == kBlock) flush();
    }
    if (q.cols() == full) break;
  }
  if (np > 0) flush();
  return OperatorSpan::from_orthonormal(r, c, std::move(q));
}

OperatorSpan span_TXY(const Subgroup& x, const Subgroup& y) {
  std::vector<CMat> mats;
  const Subgroup xy = group_sum(x, y);
  for (int g : xy.members()) mats.push_back(txy(delta(x.parent(), g), x, y).m);
  return OperatorSpan::from(x.size(), y.size(), mats);
}

OperatorSpan span_convolutions(const Subgroup& x) { return span_TXY(x, x); }

OperatorSpan span_CXY_funcs(const Subgroup& x, const Subgroup& y) {
  std::vector<CMat> mats;
  for (const auto& c : x.cosets(x.intersect(y))) {
    CMat d = CMat::Zero(x.size(), x.size());
    for (int p : c) d(p, p) = 1.0;
    mats.push_back(std::move(d));
  }
  return OperatorSpan::from(x.size(), x.size(), mats);
}

OperatorSpan span_crossed_products(const Subgroup& x, const Subgroup& y) {
  if (!y.leq(x)) throw InvalidArgument("span_crossed: " + y.label() + " is not contained in " + x.label());
  std::vector<CMat> mats;
  const auto cos = x.cosets(y);
  for (int g : x.members()) {
    const CMat t = txy(delta(x.parent(), g), x, x).m;
    for (const auto& c : cos) {
      CMat m = CMat::Zero(x.size(), x.size());
      for (int p : c) m.row(p) = t.row(p);
      mats.push_back(std::move(m));
    }
  }
  return OperatorSpan::from(x.size(), x.size(), mats);
}

OperatorSpan span_crossed_orbits(const Subgroup& x, const Subgroup& y) {
  if (!y.leq(x)) throw InvalidArgument("span_crossed: " + y.label() + " is not contained in " + x.label());
  const auto& G = x.parent();
  const int n = x.size();
  std::map<std::pair<int, int>, CMat> orbits;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::pair<int, int> rep{n, n};
      for (int t : y.members()) {
        const std::pair<int, int> p{x.position(G.add(x.members()[static_cast<std::size_t>(i)], t)),
                                    x.position(G.add(x.members()[static_cast<std::size_t>(j)], t))};
        rep = std::min(rep, p);
      }
      auto [it, fresh] = orbits.try_emplace(rep, CMat::Zero(n, n));
      it->second(i, j) = 1.0;
    }
  std::vector<CMat> mats;
  for (auto& [rep, m] : orbits) mats.push_back(std::move(m));
  return OperatorSpan::from(n, n, mats);
}

OperatorSpan span_crossed(const Subgroup& x, const Subgroup& y) {
  auto prod = span_crossed_products(x, y);
  auto orb = span_crossed_orbits(x, y);
  const auto r = span_ranks(prod, orb);
  if (!r.equal())
    throw InternalError("crossed product constructions disagree for " + x.label() + ", " + y.label() + ": ranks " +
                        std::to_string(r.a) + "/" + std::to_string(r.b) + "/" + std::to_string(r.joint));
  return prod;
}

OperatorSpan span_CXYZ(const Subgroup& x, const Subgroup& y, const Subgroup& z) {
  if (!z.leq(x.intersect(y)))
    throw InvalidArgument("span_CXYZ: " + z.label() + " is not contained in " + x.label() + " n " + y.label());
  const auto& G = x.parent();
  const auto ycos = y.cosets(z);
  const auto xcos = x.cosets(z);
  std::vector<CMat> right;
  std::vector<CMat> left;
  const Subgroup xy = group_sum(x, y);
  for (int g : xy.members()) {
    const CMat t = txy(delta(G, g), x, y).m;
    for (const auto& c : ycos) {
      CMat m = CMat::Zero(x.size(), y.size());
      for (int p : c) m.col(p) = t.col(p);
      right.push_back(std::move(m));
    }
    for (const auto& c : xcos) {
      CMat m = CMat::Zero(x.size(), y.size());
      for (int p : c) m.row(p) = t.row(p);
      left.push_back(std::move(m));
    }
  }
  auto r = OperatorSpan::from(x.size(), y.size(), right);
  auto l = OperatorSpan::from(x.size(), y.size(), left);
  const auto rk = span_ranks(r, l);
  if (!rk.equal())
    throw InternalError("T.C_Y(Z) != C_X(Z).T for " + x.label() + ", " + y.label() + ", " + z.label());
  return r;
}

KernelOp field_op(const CVec& theta, const Subgroup& x, const Subgroup& y, const Subgroup& splitting) {
  if (!y.leq(x) || !splitting.leq(x) || splitting.intersect(y).size() != 1 ||
      splitting.size() * y.size() != x.size())
    throw InvalidArgument("field_op: " + x.label() + " is not " + splitting.label() + " (+) " + y.label());
  if (theta.size() != splitting.size()) throw InvalidArgument("field_op: theta has wrong size");
  const auto& G = x.parent();
  CMat m = CMat::Zero(x.size(), y.size());
  for (int ci = 0; ci < splitting.size(); ++ci)
    for (int bj = 0; bj < y.size(); ++bj) {
      const int g = G.add(splitting.members()[static_cast<std::size_t>(ci)], y.members()[static_cast<std::size_t>(bj)]);
      m(x.position(g), bj) = theta(ci);
    }
  return {x, y, std::move(m)};
}

GeneratedAlgebra generated_algebra(const std::vector<CMat>& seeds) {
  if (seeds.empty()) throw InvalidArgument("generated_algebra: no seeds");
  const Eigen::Index n = seeds.front().rows();
  std::vector<CMat> gens;
  for (const auto& s : seeds) {
    if (s.rows() != n || s.cols() != n) throw InvalidArgument("generated_algebra: seeds must be square of equal size");
    gens.push_back(s);
    gens.push_back(s.adjoint());
  }
  GeneratedAlgebra out{OperatorSpan::from(n, n, gens), 0};
  for (int round = 1; round <= 50; ++round) {
    auto next = span_sum(out.span, span_mul(out.span, out.span));
    out.rounds = round;
    if (next.dim() == out.span.dim()) return out;
    out.span = std::move(next);
  }
  throw InternalError("generated_algebra did not stabilize in 50 rounds");
}

// ---------------------------------------------------------------- models

GroupModel::GroupModel(Semilattice s, std::map<std::string, Subgroup> binding)
    : s_(std::move(s)), bind_(std::move(binding)) {
  for (const auto& id : s_.ids())
    if (!bind_.count(id)) throw InvalidArgument("binding mismatch: '" + id + "' has no subgroup");
  if (bind_.size() != s_.size()) throw InvalidArgument("binding mismatch: subgroup bound to an unknown element");
  const auto& g = bind_.begin()->second.parent();
  for (const auto& [id, h] : bind_)
    if (!(h.parent() == g)) throw InvalidArgument("binding mismatch: '" + id + "' lives in another group");
  for (const auto& a : s_.ids())
    for (const auto& b : s_.ids())
      if (!(bind_.at(s_.meet(a, b)) == bind_.at(a).intersect(bind_.at(b))))
        throw InvalidArgument("binding mismatch: meet(" + a + "," + b + ") is not the subgroup intersection");
  for (const auto& id : s_.ids()) {
    offset_[id] = total_;
    total_ += bind_.at(id).size();
  }
}

CMat GroupModel::embed(const std::string& x, const std::string& y, const CMat& block) const {
  CMat m = CMat::Zero(total_, total_);
  m.block(offset(x), offset(y), block.rows(), block.cols()) = block;
  return m;
}

CMat GroupModel::block(const CMat& m, const std::string& x, const std::string& y) const {
  return m.block(offset(x), offset(y), subgroup(x).size(), subgroup(y).size());
}

OperatorSpan GroupModel::component(const std::string& z) const {
  std::vector<CMat> mats;
  for (const auto& x : s_.ids()) {
    if (!s_.leq(z, x)) continue;
    for (const auto& y : s_.ids()) {
      if (!s_.leq(z, y)) continue;
      for (const auto& e : span_CXYZ(subgroup(x), subgroup(y), subgroup(z)).elements()) mats.push_back(embed(x, y, e));
    }
  }
  return OperatorSpan::from(total_, total_, mats);
}

OperatorSpan GroupModel::assemble_C() const {
  OperatorSpan c(total_, total_);
  for (const auto& z : s_.ids()) c = span_sum(c, component(z));
  return c;
}

OperatorSpan GroupModel::components_geq(const std::string& sigma) const {
  OperatorSpan c(total_, total_);
  for (const auto& z : s_.ids())
    if (s_.leq(sigma, z)) c = span_sum(c, component(z));
  return c;
}

OperatorSpan GroupModel::components_not_geq(const std::string& sigma) const {
  OperatorSpan c(total_, total_);
  for (const auto& z : s_.ids())
    if (!s_.leq(sigma, z)) c = span_sum(c, component(z));
  return c;
}

// ---------------------------------------------------------------- Pauli-Fierz

CMat cayley_laplacian(const Subgroup& x) {
  const auto& G = x.parent();
  const int n = x.size();
  CMat k = CMat::Zero(n, n);
  for (int s : x.generators()) {
    CMat u = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) u(i, x.position(G.sub(x.members()[static_cast<std::size_t>(i)], s))) = 1.0;
    k += 2.0 * CMat::Identity(n, n) - u - u.adjoint();
  }
  return k;
}

CMat character_mult(const Subgroup& x, int k) {
  CMat v = CMat::Zero(x.size(), x.size());
  for (int i = 0; i < x.size(); ++i) v(i, i) = x.parent().character(k, x.members()[static_cast<std::size_t>(i)]);
  return v;
}

std::vector<CMat> pauli_fierz_seeds(const GroupModel& m, const PauliFierzOptions& opt) {
  const auto& ids = m.lattice().ids();
  const Eigen::Index n = m.total_dim();
  const CMat id = CMat::Identity(n, n);

  std::vector<CMat> fields;
  for (const auto& x : ids)
    for (const auto& y : ids) {
      if (!m.lattice().less(y, x)) continue;
      const auto split = find_complement(m.subgroup(x), m.subgroup(y));
      if (!split) continue;
      for (int c = 0; c < split->size(); ++c) {
        CVec theta = CVec::Zero(split->size());
        theta(c) = 1.0;
        const CMat a = field_op(theta, m.subgroup(x), m.subgroup(y), *split).m;
        fields.push_back(m.embed(x, y, a) + m.embed(y, x, a.adjoint()));
      }
    }

  std::vector<CMat> seeds;
  for (int k = 0; k < m.group().order(); ++k) {
    CMat kin = CMat::Zero(n, n);
    for (const auto& x : ids) {
      const CMat v = character_mult(m.subgroup(x), k);
      kin += m.embed(x, x, v * cayley_laplacian(m.subgroup(x)) * v.adjoint());
    }
    for (double c : opt.couplings) {
      if (c == 0.0) {
        seeds.push_back((opt.z * id - kin).partialPivLu().inverse());
        continue;
      }
      for (const auto& phi : fields) seeds.push_back((opt.z * id - kin - c * phi).partialPivLu().inverse());
    }
  }
  return seeds;
}

}  // namespace slat
