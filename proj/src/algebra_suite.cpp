#include "slat/algebra_suite.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <random>
#include <tuple>

#include "slat/errors.hpp"

namespace slat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class Check>
std::map<std::string, IdentityTally> tally_of(const std::vector<Check>& checks) {
  std::map<std::string, IdentityTally> out;
  for (const auto& c : checks) {
    auto& t = out[c.identity];
    ++t.total;
    if (c.passed) ++t.passed;
  }
  return out;
}

OperatorSpan drop_last(const OperatorSpan& s) {
  if (s.dim() == 0) return s;
  return OperatorSpan::from_orthonormal(s.rows(), s.cols(), s.basis().leftCols(s.dim() - 1));
}

class Recorder {
 public:
  Recorder(std::vector<IdentityCheck>& out, const std::optional<std::string>& corrupt) : out_(out), corrupt_(corrupt) {}

  void equal(const std::string& name, const std::string& inst, const OperatorSpan& lhs, const OperatorSpan& rhs) {
    const auto r = span_ranks(lhs, expected(name, rhs));
    out_.push_back({name, inst, r, r.equal()});
  }

  void contains(const std::string& name, const std::string& inst, const OperatorSpan& outer, const OperatorSpan& inner) {
    const auto r = span_ranks(expected(name, outer), inner);
    out_.push_back({name, inst, r, r.b_in_a()});
  }

  void dimension(const std::string& name, const std::string& inst, Eigen::Index rank, Eigen::Index predicted) {
    if (corrupt_ && *corrupt_ == name) ++predicted;
    const RankTriple r{rank, predicted, rank};
    out_.push_back({name, inst, r, r.equal()});
  }

 private:
  OperatorSpan expected(const std::string& name, const OperatorSpan& s) const {
    return corrupt_ && *corrupt_ == name ? drop_last(s) : s;
  }

  std::vector<IdentityCheck>& out_;
  const std::optional<std::string>& corrupt_;
};

// Memoized spans over a fixed pool of subgroups, addressed by pool index.
class SpanCache {
 public:
  explicit SpanCache(std::vector<Subgroup> pool) : pool_(std::move(pool)) {
    const int n = size();
    meet_.assign(static_cast<std::size_t>(n * n), -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) meet_[static_cast<std::size_t>(a * n + b)] = find(at(a).intersect(at(b)));
  }

  int size() const { return static_cast<int>(pool_.size()); }
  const Subgroup& at(int i) const { return pool_[static_cast<std::size_t>(i)]; }
  /// Pool index of the intersection, or -1 when it is not in the pool.
  int meet(int a, int b) const { return meet_[static_cast<std::size_t>(a * size() + b)]; }
  bool leq(int a, int b) const { return at(a).leq(at(b)); }
  std::string label(int i) const { return at(i).label(); }

  const OperatorSpan& T(int x, int y) { return memo(t_, {x, y, 0}, [&] { return span_TXY(at(x), at(y)); }); }
  const OperatorSpan& Tadj(int x, int y) { return memo(ta_, {x, y, 0}, [&] { return T(x, y).adjoint(); }); }
  const OperatorSpan& crossed(int x, int y) { return memo(cr_, {x, y, 0}, [&] { return span_crossed(at(x), at(y)); }); }
  const OperatorSpan& funcs(int x, int y) { return memo(fn_, {x, y, 0}, [&] { return span_CXY_funcs(at(x), at(y)); }); }
  const OperatorSpan& cxyz(int x, int y, int z) {
    return memo(cz_, {x, y, z}, [&] { return span_CXYZ(at(x), at(y), at(z)); });
  }

 private:
  using Key = std::array<int, 3>;

  int find(const Subgroup& h) const {
    for (int i = 0; i < size(); ++i)
      if (at(i) == h) return i;
    return -1;
  }

  const OperatorSpan& memo(std::map<Key, OperatorSpan>& m, Key k, const std::function<OperatorSpan()>& make) {
    auto it = m.find(k);
    if (it == m.end()) it = m.emplace(k, make()).first;
    return it->second;
  }

  std::vector<Subgroup> pool_;
  std::vector<int> meet_;
  std::map<Key, OperatorSpan> t_, ta_, cr_, fn_, cz_;
};

template <class T>
void sample(std::vector<T>& items, std::size_t cap, std::uint64_t seed, const std::string& name) {
  if (cap == 0 || items.size() <= cap) return;
  std::mt19937_64 rng(seed ^ std::hash<std::string>{}(name));
  std::shuffle(items.begin(), items.end(), rng);
  items.resize(cap);
  std::sort(items.begin(), items.end());
}

std::string join_labels(const SpanCache& c, std::initializer_list<std::pair<const char*, int>> parts) {
  std::string s;
  for (const auto& [name, idx] : parts) {
    if (!s.empty()) s += ",";
    s += name;
    s += "=";
    s += c.label(idx);
  }
  return s;
}

// Sum of C_XY(W) over W in `lattice` below x n y.
OperatorSpan module_span(SpanCache& c, const std::vector<int>& lattice, int x, int y) {
  OperatorSpan s(c.at(x).size(), c.at(y).size());
  const int xy = c.meet(x, y);
  for (int w : lattice)
    if (c.leq(w, xy)) s = span_sum(s, c.cxyz(x, y, w));
  return s;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

std::map<std::string, IdentityTally> SuiteReport::tally() const { return tally_of(checks); }

std::vector<IdentityCheck> SuiteReport::failures() const {
  std::vector<IdentityCheck> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c);
  return out;
}

SuiteReport verify_group_identities(const FinAbGroup& g, const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  std::vector<Subgroup> pool;
  for (auto& h : enumerate_subgroups(g))
    if (opt.max_subgroup_order == 0 || h.size() <= opt.max_subgroup_order) pool.push_back(std::move(h));
  SpanCache c(std::move(pool));
  const int n = c.size();

  SuiteReport rep;
  {
    std::string label = "Z";
    for (std::size_t i = 0; i < g.cyclic_orders().size(); ++i)
      label += (i ? "xZ" : "") + std::to_string(g.cyclic_orders()[i]);
    rep.group = label;
  }
  Recorder rec(rep.checks, opt.corrupt);
  using Pair = std::array<int, 2>;
  using Triple = std::array<int, 3>;
  using Quint = std::array<int, 5>;
  using Quad = std::array<int, 4>;

  // pairs whose intersection is in the pool (always true without an order cap)
  std::vector<Pair> pairs;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (c.meet(x, y) >= 0) pairs.push_back({x, y});

  {
    auto inst = pairs;
    sample(inst, opt.max_instances, opt.seed, ident::kHyz);
    for (const auto& [x, y] : inst) {
      const int xy = c.meet(x, y);
      const auto lab = join_labels(c, {{"X", x}, {"Y", y}});
      rec.equal(ident::kHyz, lab + ",T*T", span_mul(c.Tadj(x, y), c.T(x, y)), c.crossed(y, xy));
      rec.equal(ident::kHyz, lab + ",TT*", span_mul(c.T(x, y), c.Tadj(x, y)), c.crossed(x, xy));
    }
  }
  {
    auto inst = pairs;
    sample(inst, opt.max_instances, opt.seed, ident::kHyz1);
    for (const auto& [x, y] : inst)
      rec.equal(ident::kHyz1, join_labels(c, {{"X", x}, {"Y", y}}),
                span_mul(span_mul(c.T(x, y), c.Tadj(x, y)), c.T(x, y)), c.T(x, y));
  }

  std::vector<Triple> triples;
  for (const auto& [x, y] : pairs)
    for (int z = 0; z < n; ++z)
      if (c.meet(x, z) >= 0 && c.meet(y, z) >= 0 && c.meet(c.meet(x, y), z) >= 0) triples.push_back({x, y, z});

  {
    std::vector<Triple> inst;
    for (const auto& t : triples)
      if (c.leq(c.meet(t[0], t[1]), t[2])) inst.push_back(t);
    sample(inst, opt.max_instances, opt.seed, ident::kFactor);
    for (const auto& [x, y, z] : inst)
      rec.equal(ident::kFactor, join_labels(c, {{"X", x}, {"Y", y}, {"Z", z}}), span_mul(c.T(x, z), c.T(z, y)),
                c.T(x, y));
  }
  {
    auto inst = triples;
    sample(inst, opt.max_instances, opt.seed, ident::kProduct);
    for (const auto& [x, y, z] : inst) {
      const auto lab = join_labels(c, {{"X", x}, {"Y", y}, {"Z", z}});
      const auto lhs = span_mul(c.T(x, z), c.T(z, y));
      const int xyz = c.meet(c.meet(x, y), z);
      rec.equal(ident::kProduct, lab + ",T.C_Y(YnZ)", lhs, span_mul(c.T(x, y), c.funcs(y, z)));
      rec.equal(ident::kProduct, lab + ",C_X(XnZ).T", lhs, span_mul(c.funcs(x, z), c.T(x, y)));
      rec.equal(ident::kProduct, lab + ",T.C_Y(XnYnZ)", lhs, span_mul(c.T(x, y), c.funcs(y, xyz)));
      rec.equal(ident::kProduct, lab + ",C_X(XnYnZ).T", lhs, span_mul(c.funcs(x, xyz), c.T(x, y)));
    }
  }
  {
    std::vector<Quint> inst;
    for (const auto& [x, y, z] : triples) {
      const int xz = c.meet(x, z), yz = c.meet(y, z);
      for (int e = 0; e < n; ++e) {
        if (!c.leq(e, xz)) continue;
        for (int f = 0; f < n; ++f)
          if (c.leq(f, yz) && c.meet(e, f) >= 0) inst.push_back({x, y, z, e, f});
      }
    }
    sample(inst, opt.max_instances, opt.seed, ident::kXyzef);
    for (const auto& [x, y, z, e, f] : inst)
      rec.equal(ident::kXyzef, join_labels(c, {{"X", x}, {"Y", y}, {"Z", z}, {"E", e}, {"F", f}}),
                span_mul(c.cxyz(x, z, e), c.cxyz(z, y, f)), c.cxyz(x, y, c.meet(e, f)));
  }
  {
    // filters {H >= W} are closed under intersection, so each is a lattice
    std::vector<Quad> inst;
    for (int w = 0; w < n; ++w)
      for (int x = 0; x < n; ++x) {
        if (!c.leq(w, x)) continue;
        for (int y = 0; y < n; ++y) {
          if (!c.leq(w, y) || !c.leq(y, x)) continue;
          for (int z = 0; z < n; ++z)
            if (c.leq(w, z) && c.leq(z, x)) inst.push_back({w, x, y, z});
        }
      }
    sample(inst, opt.max_instances, opt.seed, ident::kMorita);
    std::map<int, std::vector<int>> filters;
    for (const auto& [w, x, y, z] : inst) {
      auto& lat = filters[w];
      if (lat.empty())
        for (int h = 0; h < n; ++h)
          if (c.leq(w, h)) lat.push_back(h);
      const auto m = module_span(c, lat, y, x);
      const auto k = module_span(c, lat, z, x);
      rec.equal(ident::kMorita, join_labels(c, {{"W", w}, {"X", x}, {"Y", y}, {"Z", z}}), span_mul(m, k.adjoint()),
                module_span(c, lat, y, z));
    }
  }
  {
    std::vector<Pair> inst;
    for (const auto& [x, y] : pairs)
      if (c.leq(y, x)) inst.push_back({x, y});
    sample(inst, opt.max_instances, opt.seed, ident::kPhi);
    for (const auto& [x, y] : inst) {
      const auto split = find_complement(c.at(x), c.at(y));
      if (!split) continue;
      std::vector<CMat> fields;
      for (int i = 0; i < split->size(); ++i)
        fields.push_back(field_op(CVec::Unit(split->size(), i), c.at(x), c.at(y), *split).m);
      const auto phi = OperatorSpan::from(c.at(x).size(), c.at(y).size(), fields);
      const auto lab = join_labels(c, {{"X", x}, {"Y", y}});
      rec.equal(ident::kPhi, lab + ",C*(X).Phi", span_mul(c.T(x, x), phi), c.T(x, y));
      rec.equal(ident::kPhi, lab + ",Phi.C*(Y)", span_mul(phi, c.T(y, y)), c.T(x, y));
    }
  }
  {
    std::vector<Triple> inst;
    for (const auto& [x, y] : pairs)
      for (int z = 0; z < n; ++z)
        if (c.leq(z, c.meet(x, y)) && find_complement(c.at(x), c.at(z)) && find_complement(c.at(y), c.at(z)))
          inst.push_back({x, y, z});
    sample(inst, opt.max_instances, opt.seed, ident::kTensor);
    for (const auto& [x, y, z] : inst) {
      const Eigen::Index predicted = Eigen::Index{c.at(x).size()} * c.at(y).size() / c.at(z).size();
      rec.dimension(ident::kTensor, join_labels(c, {{"X", x}, {"Y", y}, {"Z", z}}), c.cxyz(x, y, z).dim(), predicted);
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

bool ModelReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

std::map<std::string, IdentityTally> ModelReport::tally() const { return tally_of(checks); }

IdentityCheck check_generation(const GroupModel& m, const PauliFierzOptions& opt) {
  const auto gen = generated_algebra(pauli_fierz_seeds(m, opt));
  const auto r = span_ranks(gen.span, m.assemble_C());
  return {ident::kGeneration, "rounds=" + std::to_string(gen.rounds), r, r.equal()};
}

ModelReport verify_model(const GroupModel& m, const ModelOptions& opt) {
  const auto t0 = Clock::now();
  const auto& s = m.lattice();
  const auto& ids = s.ids();
  ModelReport rep;
  Recorder rec(rep.checks, opt.corrupt);

  std::map<std::string, OperatorSpan> comp;
  for (const auto& z : ids) comp.emplace(z, m.component(z));
  const auto full = m.assemble_C();

  for (const auto& e : ids)
    for (const auto& f : ids)
      rec.contains(ident::kGraded, "E=" + e + ",F=" + f, comp.at(s.meet(e, f)), span_mul(comp.at(e), comp.at(f)));

  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      rep.overlaps.push_back({ids[i], ids[j], span_ranks(comp.at(ids[i]), comp.at(ids[j]))});

  // morita on the model lattice: blocks of C_Y(x)-modules between elements below x
  {
    auto module = [&](const std::string& x, const std::string& y) {
      OperatorSpan out(m.subgroup(x).size(), m.subgroup(y).size());
      const auto xy = s.meet(x, y);
      for (const auto& w : ids)
        if (s.leq(w, xy)) out = span_sum(out, span_CXYZ(m.subgroup(x), m.subgroup(y), m.subgroup(w)));
      return out;
    };
    for (const auto& x : ids)
      for (const auto& y : ids) {
        if (!s.leq(y, x)) continue;
        for (const auto& z : ids)
          if (s.leq(z, x))
            rec.equal(ident::kMorita, "X=" + x + ",Y=" + y + ",Z=" + z, span_mul(module(y, x), module(z, x).adjoint()),
                      module(y, z));
      }
  }

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  for (const auto& sigma : ids) {
    const auto geq = m.components_geq(sigma);
    const auto rest = m.components_not_geq(sigma);
    rec.contains(ident::kSubalgebra, "sigma=" + sigma, geq, span_mul(geq, geq));
    rec.contains(ident::kIdeal, "sigma=" + sigma + ",C.J", rest, span_mul(full, rest));
    rec.contains(ident::kIdeal, "sigma=" + sigma + ",J.C", rest, span_mul(rest, full));

    const auto split = span_ranks(geq, rest);
    if (split.joint != split.a + split.b || split.joint != full.dim()) continue;
    // C = C(>=sigma) (+) J, so the projection along J is well defined
    CMat basis(geq.basis().rows(), split.joint);
    basis << geq.basis(), rest.basis();
    const Eigen::ColPivHouseholderQR<CMat> qr(basis);
    const auto n = m.total_dim();
    auto project = [&](const CMat& a) -> CMat {
      const CVec coef = qr.solve(Eigen::Map<const CVec>(a.data(), a.size()));
      const CVec v = geq.basis() * coef.head(geq.dim());
      return Eigen::Map<const CMat>(v.data(), n, n);
    };
    auto random_element = [&] {
      CVec coef(full.dim());
      for (auto& z : coef) z = cplx(gauss(rng), gauss(rng));
      const CVec v = full.basis() * coef;
      return CMat(Eigen::Map<const CMat>(v.data(), n, n));
    };
    Eigen::Index bad = 0;
    for (std::size_t k = 0; k < opt.morphism_pairs; ++k) {
      const CMat a = random_element(), b = random_element();
      const double defect = (project(a * b) - project(a) * project(b)).norm();
      const double idem = (project(project(a)) - project(a)).norm();
      if (defect > 1e-9 * a.norm() * b.norm() || idem > 1e-9 * a.norm()) ++bad;
    }
    if (opt.corrupt && *opt.corrupt == ident::kMorphism) ++bad;
    rep.checks.push_back({ident::kMorphism, "sigma=" + sigma, {bad, 0, bad}, bad == 0});
  }

  if (opt.generation) {
    auto g = check_generation(m, opt.pauli_fierz);
    if (opt.corrupt && *opt.corrupt == ident::kGeneration) {
      const auto gen = generated_algebra(pauli_fierz_seeds(m, opt.pauli_fierz));
      g.ranks = span_ranks(gen.span, drop_last(full));
      g.passed = g.ranks.equal();
    }
    rep.checks.push_back(g);
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

}  // namespace slat
