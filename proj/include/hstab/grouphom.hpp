#pragma once

// Group homology H_i(G; M) by the bar complex or a built resolution, maps
// induced by homomorphisms, and stability sweeps over a family.

#include <hstab/bar.hpp>
#include <hstab/chain_complex.hpp>
#include <hstab/errors.hpp>
#include <hstab/finite_group.hpp>
#include <hstab/gmodule.hpp>
#include <hstab/linalg.hpp>
#include <hstab/parallel.hpp>
#include <hstab/resolution.hpp>

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hstab {

enum class Method { Bar, Resolution };

inline std::string method_name(Method m) { return m == Method::Bar ? "bar" : "resolution"; }
inline Method parse_method(const std::string& s) {
  if (s == "bar") return Method::Bar;
  if (s == "resolution") return Method::Resolution;
  throw InvalidInput("method must be bar or resolution, got `" + s + "`");
}

struct GroupHomology {
  Method method = Method::Bar;
  int i_max = 0;
  ChainComplex complex;                    // the complex whose homology is reported
  std::optional<FreeResolution> resolution;
  HomologyResult result;
};

// Resolution degree needed for H_0..H_{i_max}: i_max + 1. With i_max ≤ 1 the
// unreduced degree-2 seed suffices.
inline GroupHomology group_homology(const GModule& m, int i_max, Method method, const HomologyCaps& caps = {}) {
  if (i_max < 0) throw InvalidInput("i_max must be non-negative");
  GroupHomology out;
  out.method = method;
  out.i_max = i_max;
  if (method == Method::Bar) {
    out.complex = bar_complex(m, i_max + 1, caps);
  } else {
    Coefficients rring = m.ring().is_field() ? m.ring() : Coefficients::integers();
    out.resolution = build_resolution(m.group_ptr(), rring, i_max + 1, i_max <= 1, caps);
    out.complex = tensor_resolution(*out.resolution, m);
  }
  out.result = homology(out.complex, i_max);
  return out;
}

// ---------------------------------------------------------------------------
// Induced maps

struct InducedMap {
  int degree = 0;
  Coefficients ring;
  AbelianGroupType source, target, cokernel;
  bool zero = false;
  std::string status;  // iso | surjective | neither
  std::string method;
};

inline nlohmann::json to_json(const InducedMap& m) {
  return {{"degree", m.degree},
          {"coefficients", m.ring.tag()},
          {"source", describe(m.source, m.ring)},
          {"target", describe(m.target, m.ring)},
          {"cokernel", describe(m.cokernel, m.ring)},
          {"zero", m.zero},
          {"status", m.status},
          {"method", m.method}};
}

// H_i(f) for a chain map f_i: C_i → D_i (f_{i±1} need not be given: cycles
// go to cycles and boundaries to boundaries for any chain map).
inline InducedMap induced_map_on_homology(const ChainComplex& c, const ChainComplex& d, const SparseIntMatrix& f,
                                          int i) {
  if (!(c.ring() == d.ring())) throw InvalidInput("complexes have different coefficients");
  if (f.rows() != d.rank(i) || f.cols() != c.rank(i)) throw InvalidInput("chain map has the wrong shape");
  InducedMap out;
  out.degree = i;
  out.ring = c.ring();
  HomologyCoordinates src(c, i), tgt(d, i);
  out.source = src.type();
  out.target = tgt.type();
  std::vector<IntVec> cycles;
  if (c.ring().is_field()) {
    for (const auto& k : kernel_fp(c.boundary(i), c.ring().p)) cycles.emplace_back(k.begin(), k.end());
  } else {
    cycles = kernel_z(c.boundary(i));
  }
  std::vector<IntVec> images;
  out.zero = true;
  for (const auto& z : cycles) {
    IntVec w = f.apply(z);
    if (c.ring().is_field())
      for (auto& x : w) x = reduce_mod(x, c.ring().p);
    IntVec y = tgt.coordinates(w);
    for (const auto& x : y)
      if (x != 0) out.zero = false;
    images.push_back(std::move(y));
  }
  out.cokernel = cokernel_type(images, tgt.coordinate_orders(), c.ring());
  const bool surjective = out.cokernel.free_rank == 0 && out.cokernel.torsion.empty();
  // finitely generated abelian groups are Hopfian
  out.status = surjective ? (out.source == out.target ? "iso" : "surjective") : "neither";
  return out;
}

// Via functoriality of the bar construction.
inline InducedMap induced_map(const GroupHom& phi, const GModule& mg, const GModule& mh, const IntMatrix& compat, int i,
                              const HomologyCaps& caps = {}) {
  require_equivariant(mg, mh, phi, compat);
  ChainComplex c = bar_complex(mg, i + 1, caps);
  ChainComplex d = bar_complex(mh, i + 1, caps);
  InducedMap m = induced_map_on_homology(c, d, bar_chain_map(mg, mh, phi, compat, i), i);
  m.method = "bar";
  return m;
}

// Degrees 0 and 1 between tensored resolutions (see resolution_degree_one_map).
inline InducedMap induced_map_low_degree(const GroupHomology& src, const GroupHomology& tgt, const GroupHom& phi,
                                         const GModule& mg, const GModule& mh, const IntMatrix& compat, int i) {
  if (!src.resolution || !tgt.resolution) throw InvalidInput("resolution data required");
  if (i > 1) throw InvalidInput("resolution-tier maps are available in degrees 0 and 1");
  require_equivariant(mg, mh, phi, compat);
  SparseIntMatrix f;
  if (i == 0) {
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < compat.rows; ++r)
      for (std::size_t c = 0; c < compat.cols; ++c)
        if (compat(r, c)) t.push_back({r, c, compat(r, c)});
    f = SparseIntMatrix::from_triplets(mh.rank(), mg.rank(), std::move(t));
  } else {
    f = resolution_degree_one_map(*src.resolution, *tgt.resolution, mg, mh, phi, compat);
  }
  InducedMap m = induced_map_on_homology(src.complex, tgt.complex, f, i);
  m.method = "resolution";
  return m;
}

// ---------------------------------------------------------------------------
// Group families

enum class Subfamily { Full, Commutator };

inline std::shared_ptr<const FiniteGroup> family_group(const Family& f, int n, Subfamily sub,
                                                       std::uint64_t cap = kDefaultEnumerationCap) {
  FiniteGroup g = FiniteGroup::from_family(f, n, cap);
  if (sub == Subfamily::Full) return std::make_shared<const FiniteGroup>(std::move(g));
  return std::make_shared<const FiniteGroup>(g.derived_subgroup(f.name() + "' rank " + std::to_string(n)));
}

// G_n' with the restricted stabilization maps.
struct CommutatorFamily {
  Family family;
  std::vector<std::shared_ptr<const FiniteGroup>> groups;  // index n
  GroupHom stabilization(int n) const {
    return stabilization_hom(*groups.at(n), *groups.at(n + 1));
  }
};

inline CommutatorFamily commutator_family(const Family& f, int n_max, std::uint64_t cap = kDefaultEnumerationCap) {
  CommutatorFamily c{f, {}};
  for (int n = 0; n <= n_max; ++n) c.groups.push_back(family_group(f, n, Subfamily::Commutator, cap));
  return c;
}

// ---------------------------------------------------------------------------
// Coefficient choices for sweeps: the module at rank n and the structure map
// M_n → M_{n+1}.

enum class SweepCoefficient { Trivial, Standard, Sign };

inline std::string coefficient_name(SweepCoefficient c) {
  switch (c) {
    case SweepCoefficient::Trivial: return "trivial";
    case SweepCoefficient::Standard: return "standard";
    case SweepCoefficient::Sign: return "sign";
  }
  return "?";
}
inline SweepCoefficient parse_coefficient(const std::string& s) {
  if (s == "trivial" || s == "constant") return SweepCoefficient::Trivial;
  if (s == "standard") return SweepCoefficient::Standard;
  if (s == "sign") return SweepCoefficient::Sign;
  throw InvalidInput("coefficient must be trivial, standard or sign, got `" + s + "`");
}

inline GModule sweep_module(SweepCoefficient c, std::shared_ptr<const FiniteGroup> g, Coefficients ring) {
  switch (c) {
    case SweepCoefficient::Trivial: return GModule::trivial(std::move(g), ring);
    case SweepCoefficient::Standard: return GModule::permutation(std::move(g), ring);
    case SweepCoefficient::Sign: return GModule::sign(std::move(g), ring);
  }
  throw InvalidInput("unknown coefficient");
}

inline IntMatrix sweep_structure_map(SweepCoefficient c, int n) {
  if (c == SweepCoefficient::Standard) {
    IntMatrix m(n + 1, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  return IntMatrix::identity(1);
}

// ---------------------------------------------------------------------------
// Stability sweeps

// Predicted: iso when k·i + iso_offset ≤ n, surjective when k·i + surj_offset ≤ n.
struct PredictedRange {
  int slope = 0;  // 0: no prediction
  int iso_offset = 1;
  int surj_offset = 0;
  bool vanishing_line = false;  // H_i = 0 for 1 ≤ i, 3i < 2n − 2

  std::string predicted(int n, int i) const {
    if (slope <= 0) return "none";
    if (slope * i + iso_offset <= n) return "iso";
    if (slope * i + surj_offset <= n) return "surjective";
    return "none";
  }
  static PredictedRange untwisted(int k) { return {k, 1, 0, false}; }
  static PredictedRange twisted(int k, int r) { return {k, k * (r + 1), k * r, false}; }
  static PredictedRange abelian(int k) { return {k, k, k - 2, false}; }
};

struct SweepSpec {
  Family family = Family::symmetric();
  Subfamily subfamily = Subfamily::Full;
  SweepCoefficient coefficient = SweepCoefficient::Trivial;
  Coefficients ring = Coefficients::integers();
  int i_max = 1;
  int n_min = 1;
  int n_max = 4;
  PredictedRange range = PredictedRange::untwisted(2);
  HomologyCaps caps;
  unsigned jobs = 1;
  // Optional override of `coefficient`: the module on G_n and the structure map M_n → M_{n+1}.
  std::function<GModule(std::shared_ptr<const FiniteGroup>)> module_fn;
  std::function<IntMatrix(int)> structure_fn;
  std::string coefficient_label;
};

struct SweepCell {
  int n = 0, i = 0;
  bool skipped = false;
  std::string note;
  HomologyGroup value;
  std::string method;
  std::string coefficient;
  std::string map_status = "n/a";  // iso | surjective | neither | type-equal | type-differs | n/a | skipped
  std::string map_method;
  std::string predicted = "none";
  bool violation = false;
};

struct StabilityTable {
  std::string family;
  std::string group;
  std::string coefficient;
  Coefficients ring;
  PredictedRange range;
  std::vector<SweepCell> cells;

  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& c : cells) v += c.violation;
    return v;
  }
  std::size_t skipped() const {
    std::size_t v = 0;
    for (const auto& c : cells) v += c.skipped || c.map_status == "skipped";
    return v;
  }
  const SweepCell& cell(int n, int i) const {
    for (const auto& c : cells)
      if (c.n == n && c.i == i) return c;
    throw InvalidInput("no cell (" + std::to_string(n) + "," + std::to_string(i) + ")");
  }
};

// field values print as F_p^k
inline nlohmann::json to_json(const SweepCell& c, const Coefficients& ring = Coefficients::integers()) {
  nlohmann::json tors = nlohmann::json::array();
  for (const auto& t : c.value.torsion) tors.push_back(t.str());
  nlohmann::json j = {{"n", c.n},
                      {"i", c.i},
                      {"skipped", c.skipped},
                      {"betti", c.skipped ? nlohmann::json(nullptr) : nlohmann::json(c.value.betti)},
                      {"torsion", c.skipped ? nlohmann::json(nullptr) : tors},
                      {"value", c.skipped ? "skipped" : describe(type_of(c.value), ring)},
                      {"method", c.method},
                      {"coefficient", c.coefficient},
                      {"map_status", c.map_status},
                      {"map_method", c.map_method},
                      {"within_predicted_range", c.predicted},
                      {"violation", c.violation}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::json to_json(const StabilityTable& t) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : t.cells) cells.push_back(to_json(c, t.ring));
  return {{"family", t.family},
          {"group", t.group},
          {"coefficient", t.coefficient},
          {"ring", t.ring.tag()},
          {"range",
           {{"slope", t.range.slope},
            {"iso_offset", t.range.iso_offset},
            {"surj_offset", t.range.surj_offset},
            {"vanishing_line", t.range.vanishing_line}}},
          {"violations", t.violations()},
          {"skipped", t.skipped()},
          {"cells", cells}};
}

inline std::string to_csv(const StabilityTable& t) {
  std::ostringstream os;
  os << "n,i,betti,torsion,map_status,method,coefficient,within_predicted_range,violation\n";
  for (const auto& c : t.cells) {
    std::string tors;
    for (const auto& d : c.value.torsion) tors += (tors.empty() ? "" : " ") + d.str();
    os << c.n << ',' << c.i << ',' << (c.skipped ? "skipped" : std::to_string(c.value.betti)) << ','
       << (c.skipped ? "skipped" : tors) << ',' << c.map_status << ',' << c.method << ',' << c.coefficient << ','
       << c.predicted << ',' << (c.violation ? "yes" : "no") << '\n';
  }
  return os.str();
}

namespace detail {

struct RankData {
  std::shared_ptr<const FiniteGroup> group;
  std::optional<GModule> module;
  std::optional<GroupHomology> homology;
  std::string error;
};

// A map status is compatible with a prediction unless a predicted property
// is observed to fail. Type-only comparisons can refute iso (types differ)
// and, over a field, surjectivity (target larger than source).
inline bool refutes(const std::string& predicted, const std::string& status, const AbelianGroupType& src,
                    const AbelianGroupType& tgt, bool field) {
  if (predicted == "iso") {
    if (status == "surjective" || status == "neither" || status == "type-differs") return true;
  }
  if (predicted == "surjective") {
    if (status == "neither") return true;
    if (status == "type-differs" && field && tgt.free_rank > src.free_rank) return true;
  }
  return false;
}

}  // namespace detail

inline StabilityTable stability_sweep(const SweepSpec& spec) {
  if (spec.n_min < 0 || spec.n_max < spec.n_min) throw InvalidInput("sweep needs 0 <= n_min <= n_max");
  if (spec.i_max < 0) throw InvalidInput("i_max must be non-negative");
  StabilityTable table;
  table.family = spec.family.name();
  table.group = spec.subfamily == Subfamily::Full ? "full" : "commutator";
  const std::string label = spec.coefficient_label.empty() ? coefficient_name(spec.coefficient) : spec.coefficient_label;
  table.coefficient = label;
  table.ring = spec.ring;
  table.range = spec.range;
  const int count = spec.n_max - spec.n_min + 1;
  // one extra rank so the last row also gets a map
  std::vector<detail::RankData> data(count + 1);
  parallel_for(data.size(), spec.jobs, [&](std::size_t k) {
    const int n = spec.n_min + static_cast<int>(k);
    auto& d = data[k];
    try {
      d.group = family_group(spec.family, n, spec.subfamily, spec.caps.enumeration);
      d.module.emplace(spec.module_fn ? spec.module_fn(d.group) : sweep_module(spec.coefficient, d.group, spec.ring));
      const bool bar_ok = d.group->order() <= spec.caps.bar_group_order;
      Method m = bar_ok ? Method::Bar : Method::Resolution;
      try {
        d.homology.emplace(group_homology(*d.module, spec.i_max, m, spec.caps));
      } catch (const ResourceError&) {
        if (m != Method::Bar) throw;
        d.homology.emplace(group_homology(*d.module, spec.i_max, Method::Resolution, spec.caps));
      }
    } catch (const ResourceError& e) {
      d.error = e.what();
    }
  });

  struct MapJob {
    int k, i;
  };
  std::vector<MapJob> jobs;
  for (int k = 0; k < count; ++k)
    for (int i = 0; i <= spec.i_max; ++i) jobs.push_back({k, i});
  std::vector<SweepCell> cells(jobs.size());
  parallel_for(jobs.size(), spec.jobs, [&](std::size_t j) {
    const auto [k, i] = jobs[j];
    const int n = spec.n_min + k;
    SweepCell& c = cells[j];
    c.n = n;
    c.i = i;
    c.coefficient = label + "/" + spec.ring.tag();
    c.predicted = spec.range.predicted(n, i);
    const auto& src = data[k];
    if (!src.homology) {
      c.skipped = true;
      c.map_status = "skipped";
      c.note = src.error;
      return;
    }
    c.value = src.homology->result.at(i);
    c.method = method_name(src.homology->method);
    if (spec.range.vanishing_line && i >= 1 && 3 * i < 2 * n - 2 && !c.value.is_zero()) {
      c.violation = true;
      c.note = "nonzero below the vanishing line";
    }
    const auto& tgt = data[k + 1];
    if (!tgt.homology) {
      c.map_status = "skipped";
      c.note = tgt.error;
      return;
    }
    const GroupHom phi = stabilization_hom(*src.group, *tgt.group);
    const IntMatrix compat = spec.structure_fn ? spec.structure_fn(src.group->rank())
                                               : sweep_structure_map(spec.coefficient, src.group->rank());
    const auto src_type = type_of(c.value);
    const auto tgt_type = type_of(tgt.homology->result.at(i));
    try {
      if (src.homology->method == Method::Bar && tgt.homology->method == Method::Bar) {
        auto m = induced_map(phi, *src.module, *tgt.module, compat, i, spec.caps);
        c.map_status = m.status;
        c.map_method = "bar";
      } else if (i <= 1) {
        // mixed tiers: low-degree resolutions are cheap to rebuild
        auto res_of = [&](const detail::RankData& d) {
          return d.homology->method == Method::Resolution ? *d.homology
                                                          : group_homology(*d.module, 1, Method::Resolution, spec.caps);
        };
        auto m = induced_map_low_degree(res_of(src), res_of(tgt), phi, *src.module, *tgt.module, compat, i);
        c.map_status = m.status;
        c.map_method = "resolution";
      } else {
        c.map_status = src_type == tgt_type ? "type-equal" : "type-differs";
        c.map_method = "types";
      }
    } catch (const ResourceError& e) {
      c.map_status = src_type == tgt_type ? "type-equal" : "type-differs";
      c.map_method = "types";
      c.note = e.what();
    }
    if (detail::refutes(c.predicted, c.map_status, src_type, tgt_type, spec.ring.is_field())) {
      c.violation = true;
      c.note = "observed " + c.map_status + " where " + c.predicted + " is predicted";
    }
  });
  table.cells = std::move(cells);
  return table;
}

}  // namespace hstab
