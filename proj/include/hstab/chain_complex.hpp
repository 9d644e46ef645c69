#pragma once

// Chain complexes of free modules with sparse integer boundary matrices and
// their homology over Z or a prime field.

#include <hstab/errors.hpp>
#include <hstab/integer.hpp>
#include <hstab/smith.hpp>
#include <hstab/sparse_matrix.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hstab {

struct Coefficients {
  std::uint32_t p = 0;  // 0 means the integers

  static Coefficients integers() { return {0}; }
  static Coefficients prime_field(std::uint32_t p) {
    if (p < 2) throw InvalidInput("field characteristic must be prime, got " + std::to_string(p));
    for (std::uint32_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw InvalidInput("field characteristic must be prime, got " + std::to_string(p));
    return {p};
  }
  bool is_field() const { return p != 0; }
  std::string tag() const { return p == 0 ? "Z" : "F" + std::to_string(p); }
  friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

// Degrees run from min_degree (−1 for augmented complexes) to top_degree.
// boundary(d) maps degree d to degree d−1. `exact_through` is the highest
// degree whose homology the stored data determines: cells of degree
// exact_through+1 are either all present or known not to exist.
class ChainComplex {
 public:
  ChainComplex() = default;
  ChainComplex(int min_degree, std::vector<std::size_t> ranks, std::vector<SparseIntMatrix> boundaries,
               Coefficients ring, std::optional<int> exact_through = std::nullopt)
      : min_degree_(min_degree),
        ranks_(std::move(ranks)),
        boundaries_(std::move(boundaries)),
        ring_(ring) {
    if (ranks_.empty()) throw InvalidInput("chain complex needs at least one degree");
    if (boundaries_.size() + 1 != ranks_.size())
      throw InvalidInput("chain complex: " + std::to_string(ranks_.size()) + " degrees need " +
                         std::to_string(ranks_.size() - 1) + " boundary maps");
    for (std::size_t k = 0; k < boundaries_.size(); ++k) {
      const auto& b = boundaries_[k];
      if (b.rows() != ranks_[k] || b.cols() != ranks_[k + 1])
        throw InvalidInput("boundary into degree " + std::to_string(min_degree_ + int(k)) +
                           " has shape " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                           ", expected " + std::to_string(ranks_[k]) + "x" +
                           std::to_string(ranks_[k + 1]));
    }
    exact_through_ = exact_through.value_or(top_degree());
    if (exact_through_ > top_degree()) exact_through_ = top_degree();
  }

  int min_degree() const { return min_degree_; }
  int top_degree() const { return min_degree_ + static_cast<int>(ranks_.size()) - 1; }
  int exact_through() const { return exact_through_; }
  bool reduced() const { return min_degree_ < 0; }
  const Coefficients& ring() const { return ring_; }

  std::size_t rank(int d) const {
    if (d < min_degree_ || d > top_degree()) return 0;
    return ranks_[d - min_degree_];
  }
  // ∂_d : C_d → C_{d−1}; a zero matrix outside the stored range.
  SparseIntMatrix boundary(int d) const {
    if (d <= min_degree_ || d > top_degree()) return SparseIntMatrix(rank(d - 1), rank(d));
    return boundaries_[d - min_degree_ - 1];
  }
  const std::vector<SparseIntMatrix>& boundaries() const { return boundaries_; }

  // Throws IntegrityError unless ∂_{d−1}∂_d = 0 everywhere (mod p over a field).
  void validate() const {
    for (int d = min_degree_ + 2; d <= top_degree(); ++d) {
      SparseIntMatrix prod = boundary(d - 1).multiply(boundary(d));
      for (const auto& t : prod.triplets()) {
        if (ring_.is_field() && reduce_mod(t.value, ring_.p) == 0) continue;
        throw IntegrityError("boundary of boundary is nonzero in degree " + std::to_string(d) +
                             " at (" + std::to_string(t.row) + "," + std::to_string(t.col) + ")");
      }
    }
  }

  std::vector<std::int64_t> cell_counts() const {
    return {ranks_.begin(), ranks_.end()};
  }

 private:
  int min_degree_ = 0;
  std::vector<std::size_t> ranks_;
  std::vector<SparseIntMatrix> boundaries_;
  Coefficients ring_;
  int exact_through_ = 0;
};

struct HomologyGroup {
  int degree = 0;
  std::size_t betti = 0;          // free rank, or dimension over a field
  std::vector<Integer> torsion;   // invariant factors > 1 (integers only)

  bool is_zero() const { return betti == 0 && torsion.empty(); }
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    if (betti) s = betti == 1 ? "Z" : "Z^" + std::to_string(betti);
    for (const auto& t : torsion) s += (s.empty() ? "" : "+") + ("Z/" + t.str());
    return s;
  }
};

inline nlohmann::json to_json(const HomologyGroup& h) {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& d : h.torsion) t.push_back(d.str());
  return {{"degree", h.degree}, {"betti", h.betti}, {"torsion", t}};
}

struct HomologyResult {
  Coefficients ring;
  bool reduced = false;
  std::vector<HomologyGroup> groups;  // consecutive degrees

  const HomologyGroup& at(int d) const {
    for (const auto& g : groups)
      if (g.degree == d) return g;
    throw InvalidInput("homology not computed in degree " + std::to_string(d));
  }
  int max_degree() const { return groups.empty() ? -2 : groups.back().degree; }
};

inline nlohmann::json to_json(const HomologyResult& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.groups) groups.push_back(to_json(g));
  return {{"coefficients", r.ring.tag()}, {"reduced", r.reduced}, {"groups", groups}};
}

// Rank and invariant factors of one boundary map.
struct BoundaryData {
  std::size_t rank = 0;
  std::vector<Integer> torsion;
};

inline BoundaryData analyze_boundary(const SparseIntMatrix& m, const Coefficients& ring) {
  if (m.is_zero()) return {};
  if (ring.is_field()) return {rank_mod_p(m, ring.p), {}};
  SmithResult s = smith_normal_form(m);
  return {s.rank, s.torsion()};
}

// Homology in degrees min_degree .. min(max_degree, exact_through).
inline HomologyResult homology(const ChainComplex& c, std::optional<int> max_degree = std::nullopt,
                               bool check = true) {
  if (check) c.validate();
  int top = c.exact_through();
  if (max_degree) {
    if (*max_degree > top)
      throw InvalidInput("homology requested through degree " + std::to_string(*max_degree) +
                         " but the complex determines it only through " + std::to_string(top));
    top = *max_degree;
  }
  HomologyResult res{c.ring(), c.reduced(), {}};
  std::vector<BoundaryData> data;  // data[k] for ∂_{min+k}
  for (int d = c.min_degree(); d <= top + 1; ++d) {
    if (d == c.min_degree())
      data.push_back({});
    else
      data.push_back(analyze_boundary(c.boundary(d), c.ring()));
  }
  for (int d = c.min_degree(); d <= top; ++d) {
    const auto& out = data[d - c.min_degree()];
    const auto& in = data[d - c.min_degree() + 1];
    HomologyGroup g;
    g.degree = d;
    g.betti = c.rank(d) - out.rank - in.rank;
    g.torsion = in.torsion;
    res.groups.push_back(std::move(g));
  }
  return res;
}

// Largest c with reduced homology zero in all degrees ≤ c (homological
// certificate only; the fundamental group is not examined).
struct ConnectivityReport {
  int connectivity = -2;       // −2: reduced H_{-1} nonzero (empty space)
  int checked_through = -1;
  bool vanishes_through_all_checked = false;
  std::string kind = "homological";
  HomologyResult homology;
};

inline nlohmann::json to_json(const ConnectivityReport& r) {
  return {{"connectivity", r.connectivity},
          {"checked_through", r.checked_through},
          {"vanishes_through_all_checked", r.vanishes_through_all_checked},
          {"kind", r.kind},
          {"homology", to_json(r.homology)}};
}

inline ConnectivityReport connectivity_report(const ChainComplex& reduced_complex, int through_degree) {
  if (!reduced_complex.reduced())
    throw InvalidInput("connectivity is read off the augmented complex; pass a reduced complex");
  ConnectivityReport rep;
  rep.homology = homology(reduced_complex, through_degree);
  rep.checked_through = through_degree;
  rep.connectivity = -2;
  for (const auto& g : rep.homology.groups) {
    if (!g.is_zero()) break;
    rep.connectivity = g.degree;
  }
  rep.vanishes_through_all_checked = rep.connectivity == through_degree;
  return rep;
}

}  // namespace hstab
