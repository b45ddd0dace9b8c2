#include "slat/semilattice.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "slat/errors.hpp"

namespace slat {

namespace {

constexpr std::size_t kMaxDiagnostics = 32;

std::string cell(const std::string& prefix, std::size_t i, std::size_t j) {
  return prefix + "/meet/" + std::to_string(i) + "/" + std::to_string(j);
}

}  // namespace

std::string quotient_id(const std::string& e, const std::string& x) { return e + "/" + x; }

Diagnostics Semilattice::check_table(const std::vector<SubspaceId>& elements, const MeetTable& table,
                                     const std::string& path_prefix) {
  Diagnostics out;
  auto report = [&](std::string path, std::string reason) {
    if (out.size() < kMaxDiagnostics) out.push_back({std::move(path), std::move(reason)});
  };

  const std::size_t n = elements.size();
  if (n == 0) {
    report(path_prefix + "/elements", "semilattice must have at least one element");
    return out;
  }
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (elements[i].dim < 0)
      report(path_prefix + "/elements/" + std::to_string(i), "negative dimension label");
    if (!pos.emplace(elements[i].id, i).second)
      report(path_prefix + "/elements/" + std::to_string(i), "duplicate id '" + elements[i].id + "'");
  }
  if (!out.empty()) return out;

  if (table.size() != n) {
    report(path_prefix + "/meet", "expected " + std::to_string(n) + " rows, got " + std::to_string(table.size()));
    return out;
  }
  std::vector<std::size_t> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) {
      report(path_prefix + "/meet/" + std::to_string(i),
             "expected " + std::to_string(n) + " columns, got " + std::to_string(table[i].size()));
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto it = pos.find(table[i][j]);
      if (it == pos.end()) {
        report(cell(path_prefix, i, j), "unknown id '" + table[i][j] + "'");
      } else {
        m[i * n + j] = it->second;
      }
    }
  }
  if (!out.empty()) return out;

  auto name = [&](std::size_t i) { return elements[i].id; };
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i * n + i] != i) report(cell(path_prefix, i, i), "not idempotent: meet(" + name(i) + "," + name(i) + ")");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m[i * n + j] != m[j * n + i])
        report(cell(path_prefix, i, j), "not commutative: meet(" + name(i) + "," + name(j) + ") != meet(" +
                                            name(j) + "," + name(i) + ")");
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t lhs = m[a * n + m[b * n + c]];
        const std::size_t rhs = m[m[a * n + b] * n + c];
        if (lhs != rhs)
          report(cell(path_prefix, a, b),
                 "not associative on triple (" + name(a) + "," + name(b) + "," + name(c) + ")");
      }
  if (!out.empty()) return out;

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && m[a * n + b] == a && elements[a].dim > elements[b].dim)
        report(path_prefix + "/elements/" + std::to_string(a),
               "dimension not monotone: " + name(a) + " <= " + name(b) + " but dim " +
                   std::to_string(elements[a].dim) + " > " + std::to_string(elements[b].dim));
  return out;
}

Semilattice::Semilattice(std::vector<SubspaceId> elements, const MeetTable& table) {
  if (auto diags = check_table(elements, table); !diags.empty())
    throw InvalidArgument("invalid semilattice: " + diags.front().path + ": " + diags.front().reason);

  const std::size_t n = elements.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return elements[a].id < elements[b].id; });

  for (std::size_t k = 0; k < n; ++k) {
    elems_.push_back(elements[order[k]]);
    index_[elems_.back().id] = k;
  }
  meet_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      meet_[a * n + b] = index_.at(table[order[a]][order[b]]);

  for (std::size_t a = 0; a < n; ++a) {
    bool is_least = true;
    bool is_top = true;
    for (std::size_t b = 0; b < n; ++b) {
      is_least = is_least && meet_[a * n + b] == a;
      is_top = is_top && meet_[a * n + b] == b;
    }
    if (is_least) least_ = a;
    if (is_top) top_ = a;
  }
}

Semilattice Semilattice::from_meet(std::vector<SubspaceId> elements,
                                   const std::function<std::string(const std::string&, const std::string&)>& meet) {
  MeetTable t(elements.size(), std::vector<std::string>(elements.size()));
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = 0; j < elements.size(); ++j) t[i][j] = meet(elements[i].id, elements[j].id);
  return Semilattice(std::move(elements), t);
}

std::size_t Semilattice::idx(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InvalidArgument("unknown semilattice element '" + id + "'");
  return it->second;
}

std::vector<std::string> Semilattice::ids() const {
  std::vector<std::string> out;
  out.reserve(elems_.size());
  for (const auto& e : elems_) out.push_back(e.id);
  return out;
}

int Semilattice::dim(const std::string& id) const { return elems_[idx(id)].dim; }

const std::string& Semilattice::meet(const std::string& a, const std::string& b) const {
  return elems_[meet_[idx(a) * size() + idx(b)]].id;
}

bool Semilattice::leq(const std::string& a, const std::string& b) const {
  const std::size_t ia = idx(a);
  return meet_[ia * size() + idx(b)] == ia;
}

std::optional<std::string> Semilattice::least() const {
  if (!least_) return std::nullopt;
  return elems_[*least_].id;
}

std::optional<std::string> Semilattice::top() const {
  if (!top_) return std::nullopt;
  return elems_[*top_].id;
}

std::vector<std::string> Semilattice::covers(const std::string& x) const {
  const std::size_t ix = idx(x);
  const std::size_t n = size();
  std::vector<std::string> out;
  for (std::size_t c = 0; c < n; ++c) {
    if (c == ix || meet_[ix * n + c] != ix) continue;
    bool minimal = true;
    for (std::size_t y = 0; y < n && minimal; ++y) {
      if (y == ix || y == c) continue;
      // x < y < c
      if (meet_[ix * n + y] == ix && meet_[y * n + c] == y) minimal = false;
    }
    if (minimal) out.push_back(elems_[c].id);
  }
  return out;
}

std::vector<std::string> Semilattice::atoms() const {
  if (!least_) throw PreconditionViolation("atoms() requires a least element");
  return covers(elems_[*least_].id);
}

Semilattice Semilattice::restrict_to(const std::vector<std::size_t>& keep) const {
  Semilattice s;
  const std::size_t n = size();
  const std::size_t k = keep.size();
  std::map<std::size_t, std::size_t> remap;
  for (std::size_t i = 0; i < k; ++i) {
    remap[keep[i]] = i;
    s.elems_.push_back(elems_[keep[i]]);
    s.index_[elems_[keep[i]].id] = i;
  }
  s.meet_.assign(k * k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      auto it = remap.find(meet_[keep[a] * n + keep[b]]);
      if (it == remap.end()) throw InternalError("subset is not closed under meet");
      s.meet_[a * k + b] = it->second;
    }
  for (std::size_t a = 0; a < k; ++a) {
    bool is_least = true;
    bool is_top = true;
    for (std::size_t b = 0; b < k; ++b) {
      is_least = is_least && s.meet_[a * k + b] == a;
      is_top = is_top && s.meet_[a * k + b] == b;
    }
    if (is_least) s.least_ = a;
    if (is_top) s.top_ = a;
  }
  return s;
}

Semilattice Semilattice::filter_geq(const std::string& x) const {
  const std::size_t ix = idx(x);
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < size(); ++t)
    if (meet_[ix * size() + t] == ix) keep.push_back(t);
  return restrict_to(keep);
}

Semilattice Semilattice::ideal_leq(const std::string& x) const {
  const std::size_t ix = idx(x);
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < size(); ++t)
    if (meet_[t * size() + ix] == t) keep.push_back(t);
  return restrict_to(keep);
}

Semilattice Semilattice::quotient(const std::string& x) const {
  const Semilattice f = filter_geq(x);
  const int dx = dim(x);
  const bool by_least = least_ && elems_[*least_].id == x;

  std::vector<SubspaceId> elems;
  std::map<std::string, std::string> rename;
  for (const auto& e : f.elements()) {
    std::string nid = by_least ? e.id : (e.id == x ? std::string("O") : quotient_id(e.id, x));
    rename[e.id] = nid;
    elems.push_back({nid, e.dim - dx});
  }
  MeetTable t(elems.size(), std::vector<std::string>(elems.size()));
  const auto& fe = f.elements();
  for (std::size_t i = 0; i < fe.size(); ++i)
    for (std::size_t j = 0; j < fe.size(); ++j) t[i][j] = rename.at(f.meet(fe[i].id, fe[j].id));
  return Semilattice(std::move(elems), t);
}

MeetTable Semilattice::table() const {
  const std::size_t n = size();
  MeetTable t(n, std::vector<std::string>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = elems_[meet_[a * n + b]].id;
  return t;
}

}  // namespace slat
