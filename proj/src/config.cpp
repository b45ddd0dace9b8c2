#include "slat/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "slat/errors.hpp"

namespace slat {

namespace {

using json = nlohmann::json;

class Reader {
 public:
  Diagnostics diags;

  void fail(const std::string& path, const std::string& reason) { diags.push_back({path, reason}); }

  const json* field(const json& j, const std::string& path, const char* key, bool required = true) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) fail(path + "/" + key, "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& j, const std::string& path, const char* key, bool required = true) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(path + "/" + key, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<long long> integer(const json& j, const std::string& path, const char* key, bool required = true) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(path + "/" + key, "expected an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<std::string> string(const json& j, const std::string& path, const char* key, bool required = true) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(path + "/" + key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) {
      fail(path, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) {
        fail(path + "/" + std::to_string(i), "expected a number");
        return std::nullopt;
      }
      out.push_back(j[i].get<double>());
    }
    return out;
  }

  std::optional<std::vector<int>> ints(const json& j, const std::string& path) {
    if (!j.is_array()) {
      fail(path, "expected an array of integers");
      return std::nullopt;
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number_integer()) {
        fail(path + "/" + std::to_string(i), "expected an integer");
        return std::nullopt;
      }
      out.push_back(j[i].get<int>());
    }
    return out;
  }

  template <class F>
  void array(const json& j, const std::string& path, const char* key, bool required, F each) {
    const json* v = field(j, path, key, required);
    if (!v) return;
    if (!v->is_array()) {
      fail(path + "/" + key, "expected an array");
      return;
    }
    for (std::size_t i = 0; i < v->size(); ++i) each((*v)[i], path + "/" + key + "/" + std::to_string(i));
  }
};

std::optional<Semilattice> read_semilattice(Reader& r, const json& j, const std::string& path) {
  std::vector<SubspaceId> elems;
  MeetTable table;
  const std::size_t before = r.diags.size();
  r.array(j, path, "elements", true, [&](const json& e, const std::string& p) {
    auto id = r.string(e, p, "id");
    auto dim = r.integer(e, p, "dim");
    if (id && dim) elems.push_back({*id, static_cast<int>(*dim)});
  });
  r.array(j, path, "meet", true, [&](const json& row, const std::string& p) {
    std::vector<std::string> ids;
    if (!row.is_array()) {
      r.fail(p, "expected an array of ids");
    } else {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].is_string()) ids.push_back(row[i].get<std::string>());
        else r.fail(p + "/" + std::to_string(i), "expected an id");
      }
    }
    table.push_back(ids);
  });
  if (r.diags.size() != before) return std::nullopt;
  auto d = Semilattice::check_table(elems, table, path);
  if (!d.empty()) {
    r.diags.insert(r.diags.end(), d.begin(), d.end());
    return std::nullopt;
  }
  return Semilattice(elems, table);
}

std::optional<Profile> read_profile(Reader& r, const json& j, const std::string& path) {
  auto kind = r.string(j, path, "kind");
  if (!kind) return std::nullopt;
  Profile p;
  if (*kind == "gaussian" || *kind == "bump") {
    p.kind = *kind == "gaussian" ? Profile::Kind::gaussian : Profile::Kind::bump;
    const bool has_depth = j.contains("depth"), has_amp = j.contains("amplitude");
    if (has_depth == has_amp) {
      r.fail(path, "give exactly one of depth and amplitude");
      return std::nullopt;
    }
    auto a = has_depth ? r.number(j, path, "depth") : r.number(j, path, "amplitude");
    auto w = r.number(j, path, "width");
    if (!a || !w) return std::nullopt;
    p.amplitude = has_depth ? -*a : *a;
    p.width = *w;
    if (const json* c = r.field(j, path, "center", false)) {
      auto cv = r.numbers(*c, path + "/center");
      if (!cv) return std::nullopt;
      p.center = *cv;
    }
  } else if (*kind == "constant") {
    p.kind = Profile::Kind::constant;
    auto v = r.number(j, path, "value");
    if (!v) return std::nullopt;
    p.amplitude = *v;
  } else if (*kind == "samples") {
    p.kind = Profile::Kind::samples;
    const json* s = r.field(j, path, "samples");
    if (!s) return std::nullopt;
    auto sv = r.numbers(*s, path + "/samples");
    if (!sv) return std::nullopt;
    p.samples = *sv;
    p.amplitude = 1.0;
  } else {
    r.fail(path + "/kind", "unknown profile kind '" + *kind + "'");
    return std::nullopt;
  }
  return p;
}

ParseResult parse_euclid(const json& j) {
  Reader r;
  auto dim = r.integer(j, "", "ambient_dimension");
  if (dim && (*dim < 1 || *dim > 6)) r.fail("/ambient_dimension", "ambient dimension must be between 1 and 6");
  GridSpec grid;
  if (const json* g = r.field(j, "", "grid")) {
    auto n = r.integer(*g, "/grid", "n");
    auto half = r.number(*g, "/grid", "half_length");
    if (n && half) {
      grid = GridSpec{static_cast<int>(*n), *half};
      auto d = grid.check("/grid");
      r.diags.insert(r.diags.end(), d.begin(), d.end());
    }
  }
  Scheme scheme = Scheme::fd;
  if (auto s = r.string(j, "", "scheme", false)) {
    if (*s == "spectral") scheme = Scheme::spectral;
    else if (*s != "fd") r.fail("/scheme", "scheme must be fd or spectral");
  }
  std::map<std::string, Axes> axes;
  r.array(j, "", "subspaces", true, [&](const json& e, const std::string& p) {
    auto id = r.string(e, p, "id");
    const json* a = r.field(e, p, "axes");
    if (!id || !a) return;
    auto av = r.ints(*a, p + "/axes");
    if (!av) return;
    for (int x : *av)
      if (dim && (x < 1 || x > *dim)) r.fail(p + "/axes", "axis " + std::to_string(x) + " outside 1.." + std::to_string(*dim));
    if (!axes.emplace(*id, *av).second) r.fail(p + "/id", "duplicate subspace '" + *id + "'");
  });
  if (!r.diags.empty()) return {std::nullopt, r.diags};

  std::optional<Semilattice> lattice;
  if (const json* s = r.field(j, "", "semilattice", false)) {
    lattice = read_semilattice(r, *s, "/semilattice");
  } else {
    try {
      lattice = axes_semilattice(axes);
    } catch (const InvalidArgument& e) {
      r.fail("/subspaces", e.what());
    }
  }
  if (!lattice) return {std::nullopt, r.diags};

  ModelSpec spec{*lattice, axes, grid, scheme, {}, {}};
  r.array(j, "", "interactions", false, [&](const json& e, const std::string& p) {
    const json* t = r.field(e, p, "target");
    auto x = t ? r.string(*t, p + "/target", "x") : std::nullopt;
    auto y = t ? r.string(*t, p + "/target", "y") : std::nullopt;
    auto z = t ? r.string(*t, p + "/target", "z") : std::nullopt;
    const json* pot = r.field(e, p, "potential");
    auto prof = pot ? read_profile(r, *pot, p + "/potential") : std::nullopt;
    // keep indices aligned with the config so diagnostics point at the right entry
    spec.interactions.push_back({x.value_or(""), y.value_or(""), z.value_or(""), prof.value_or(Profile{})});
  });
  r.array(j, "", "couplings", false, [&](const json& e, const std::string& p) {
    const json* t = r.field(e, p, "pair");
    auto x = t ? r.string(*t, p + "/pair", "x") : std::nullopt;
    auto y = t ? r.string(*t, p + "/pair", "y") : std::nullopt;
    const json* th = r.field(e, p, "theta");
    auto prof = th ? read_profile(r, *th, p + "/theta") : std::nullopt;
    spec.couplings.push_back({x.value_or(""), y.value_or(""), prof.value_or(Profile{})});
  });
  if (!r.diags.empty()) return {std::nullopt, r.diags};

  auto d = spec.check();
  r.diags.insert(r.diags.end(), d.begin(), d.end());
  if (r.diags.empty()) {
    Eigen::Index total = 0;
    for (const auto& [id, a] : spec.axes) total += grid_dim(a, spec.grid);
    if (total > kMaxTotalDim)
      r.fail("/grid/n", "total dimension " + std::to_string(total) + " exceeds the cap " + std::to_string(kMaxTotalDim));
  }
  return {EuclidConfig{static_cast<int>(dim.value_or(0)), spec}, r.diags};
}

int prime_factor_count(int n) {
  int c = 0;
  for (int p = 2; n > 1; ++p)
    while (n % p == 0) {
      n /= p;
      ++c;
    }
  return c;
}

ParseResult parse_group(const json& j) {
  Reader r;
  std::vector<int> orders;
  if (const json* o = r.field(j, "", "cyclic_orders")) {
    if (auto v = r.ints(*o, "/cyclic_orders")) orders = *v;
  }
  if (!r.diags.empty()) return {std::nullopt, r.diags};
  long long order = 1;
  for (int o : orders) {
    if (o < 1) r.fail("/cyclic_orders", "orders must be positive");
    order *= std::max(o, 1);
  }
  if (orders.empty()) r.fail("/cyclic_orders", "at least one cyclic factor is required");
  if (order > kMaxGroupOrder) r.fail("/cyclic_orders", "group order " + std::to_string(order) + " exceeds 36");
  if (!r.diags.empty()) return {std::nullopt, r.diags};
  FinAbGroup g(orders);

  std::map<std::string, Subgroup> binding;
  r.array(j, "", "subgroups", false, [&](const json& e, const std::string& p) {
    auto id = r.string(e, p, "id");
    const json* gens = r.field(e, p, "generators");
    if (!id || !gens) return;
    if (!gens->is_array()) {
      r.fail(p + "/generators", "expected an array");
      return;
    }
    std::vector<int> elems;
    for (std::size_t i = 0; i < gens->size(); ++i) {
      const json& gj = (*gens)[i];
      const auto gp = p + "/generators/" + std::to_string(i);
      std::vector<int> digits;
      if (gj.is_number_integer() && orders.size() == 1) digits = {gj.get<int>()};
      else if (auto d = r.ints(gj, gp)) digits = *d;
      else return;
      if (digits.size() != orders.size()) {
        r.fail(gp, "expected " + std::to_string(orders.size()) + " coordinates");
        return;
      }
      for (std::size_t k = 0; k < digits.size(); ++k) digits[k] = ((digits[k] % orders[k]) + orders[k]) % orders[k];
      elems.push_back(g.index(digits));
    }
    if (!binding.emplace(*id, Subgroup::generated(g, elems)).second) r.fail(p + "/id", "duplicate subgroup '" + *id + "'");
  });

  SuiteOptions suite;
  ModelOptions mopt;
  if (const json* s = r.field(j, "", "suite", false)) {
    if (auto v = r.integer(*s, "/suite", "max_subgroup_order", false)) suite.max_subgroup_order = static_cast<int>(*v);
    if (auto v = r.integer(*s, "/suite", "max_instances", false)) {
      if (*v < 0) r.fail("/suite/max_instances", "must be nonnegative");
      else suite.max_instances = static_cast<std::size_t>(*v);
    }
    if (auto v = r.integer(*s, "/suite", "seed", false)) suite.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto c = r.string(j, "", "corrupt", false)) {
    static const std::set<std::string> known{ident::kHyz,    ident::kHyz1,     ident::kFactor,    ident::kProduct,
                                             ident::kXyzef,  ident::kMorita,   ident::kPhi,       ident::kTensor,
                                             ident::kGraded, ident::kSubalgebra, ident::kIdeal, ident::kMorphism,
                                             ident::kGeneration};
    if (!known.count(*c)) r.fail("/corrupt", "unknown identity '" + *c + "'");
    suite.corrupt = *c;
    mopt.corrupt = *c;
  }
  mopt.seed = suite.seed;
  if (!r.diags.empty()) return {std::nullopt, r.diags};

  std::optional<GroupModel> model;
  if (!binding.empty()) {
    std::optional<Semilattice> lattice;
    if (const json* s = r.field(j, "", "semilattice", false)) {
      lattice = read_semilattice(r, *s, "/semilattice");
    } else {
      std::vector<SubspaceId> elems;
      for (const auto& [id, h] : binding) elems.push_back({id, prime_factor_count(h.size())});
      try {
        lattice = Semilattice::from_meet(elems, [&](const std::string& a, const std::string& b) {
          const Subgroup m = binding.at(a).intersect(binding.at(b));
          for (const auto& [id, h] : binding)
            if (h == m) return id;
          throw InvalidArgument("intersection of '" + a + "' and '" + b + "' is not a listed subgroup");
        });
      } catch (const InvalidArgument& e) {
        r.fail("/subgroups", e.what());
      }
    }
    if (lattice) {
      try {
        model.emplace(*lattice, binding);
      } catch (const InvalidArgument& e) {
        r.fail("/subgroups", e.what());
      }
    }
  } else if (j.contains("semilattice")) {
    r.fail("/semilattice", "a semilattice needs subgroups to bind to");
  }
  if (!r.diags.empty()) return {std::nullopt, r.diags};
  return {GroupConfig{g, model, suite, mopt}, {}};
}

}  // namespace

ParseResult parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  Reader r;
  auto kind = r.string(j, "", "kind");
  if (!kind) return {std::nullopt, r.diags};
  if (*kind == "euclid") return parse_euclid(j);
  if (*kind == "group") return parse_group(j);
  r.fail("/kind", "kind must be euclid or group");
  return {std::nullopt, r.diags};
}

ParseResult load_config(const std::string& path, std::string& bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  bytes = ss.str();
  return parse_config(bytes);
}

}  // namespace slat
