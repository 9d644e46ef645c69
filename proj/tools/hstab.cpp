// hstab: batch runs from a YAML config, reports written as JSON/CSV.
//
// exit codes: 0 ok, 1 a hard assertion fired, 2 usage or config error,
//             3 resource cap hit (partial report, skipped cells present)

#include <hstab/acceptance.hpp>
#include <hstab/coeffs.hpp>
#include <hstab/grouphom.hpp>
#include <hstab/spaces.hpp>
#include <hstab/ucat.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hstab;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kDefaultSeed = 20240611;

enum Exit { kOk = 0, kAssertion = 1, kUsage = 2, kPartial = 3 };

// ---------------------------------------------------------------------------
// Config access with field diagnostics. Every key read is remembered; keys
// never read are reported as unknown.

class Section {
 public:
  Section(YAML::Node node, std::string path, std::vector<std::string>& errors)
      : node_(std::move(node)), path_(std::move(path)), errors_(&errors) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) error("", "expected a table");
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!node_ || !node_.IsMap() || !node_[key]) return fallback;
    try {
      return node_[key].as<T>();
    } catch (const YAML::Exception&) {
      error(key, "has the wrong type");
      return fallback;
    }
  }
  template <class T>
  std::vector<T> list(const std::string& key, std::vector<T> fallback) {
    used_.insert(key);
    if (!node_ || !node_.IsMap() || !node_[key]) return fallback;
    const YAML::Node v = node_[key];
    try {
      if (v.IsSequence()) return v.as<std::vector<T>>();
      return {v.as<T>()};
    } catch (const YAML::Exception&) {
      error(key, "must be a value or a list");
      return fallback;
    }
  }
  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }
  Section sub(const std::string& key) {
    used_.insert(key);
    return Section(node_ && node_.IsMap() ? node_[key] : YAML::Node(), join(key), *errors_);
  }
  void error(const std::string& key, const std::string& what) {
    errors_->push_back((key.empty() ? path_ : join(key)) + ": " + what);
  }
  void finish() {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (!used_.count(k)) error(k, "unknown field");
    }
  }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  YAML::Node node_;
  std::string path_;
  std::vector<std::string>* errors_;
  std::set<std::string> used_;
};

template <class F>
auto checked(Section& s, const std::string& key, F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const InvalidInput& e) {
    s.error(key, e.what());
    return {};
  }
}

// ---------------------------------------------------------------------------
// Run state

struct Run {
  std::string verb;
  json config = json::object();  // resolved, with defaults filled in
  json result = json::object();
  std::vector<std::string> assertions;  // hard failures
  std::size_t skipped = 0;
  std::string csv;
  json timing = json::object();  // goes to the report's timing section
  unsigned jobs = 1;
  std::uint64_t seed = kDefaultSeed;
  HomologyCaps caps;

  int exit_code() const { return !assertions.empty() ? kAssertion : skipped ? kPartial : kOk; }
};

HomologyCaps read_caps(Section s, json& out) {
  HomologyCaps c;
  c.enumeration = s.get<std::uint64_t>("enumeration", c.enumeration);
  c.bar_group_order = s.get<std::size_t>("bar_order", c.bar_group_order);
  c.resolution_group_order = s.get<std::size_t>("resolution_order", c.resolution_group_order);
  c.chain_nonzeros = s.get<std::size_t>("chain_nonzeros", c.chain_nonzeros);
  c.generator_budget = s.get<std::size_t>("generator_budget", c.generator_budget);
  s.finish();
  out = {{"enumeration", c.enumeration},
         {"bar_order", c.bar_group_order},
         {"resolution_order", c.resolution_group_order},
         {"chain_nonzeros", c.chain_nonzeros},
         {"generator_budget", c.generator_budget}};
  return c;
}

Family read_family(Section& s, const std::string& fallback = "symmetric") {
  const auto name = s.get<std::string>("family", fallback);
  return checked(s, "family", [&] { return parse_family(name); });
}

Coefficients read_ring(Section& s) {
  const auto name = s.get<std::string>("ring", "Z");
  return checked(s, "ring", [&] { return parse_ring(name); });
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c.find(',') == std::string::npos ? c : "\"" + c + "\"";
  }
  return s + "\n";
}

// ---------------------------------------------------------------------------
// Verbs. Each has a `read` step (config → resolved json, errors collected)
// and an `exec` step.

struct Verb {
  std::function<void(Section&, Run&)> read;
  std::function<void(Run&)> exec;
};

// build: complexes and their structure
struct BuildCfg {
  Family family;
  std::vector<int> n;
  std::optional<int> dim_cap;
  std::string complex;
};

SemiSimplicialSet make_complex(const std::string& kind, const Family& f, int n, std::optional<int> dim_cap,
                               std::uint64_t cap) {
  if (kind == "injective_words") return injective_words(n, dim_cap);
  return build_wn(f, n, dim_cap, cap);
}

Verb build_verb() {
  auto cfg = std::make_shared<BuildCfg>();
  Verb v;
  v.read = [cfg](Section& s, Run& run) {
    cfg->family = read_family(s);
    cfg->n = s.list<int>("n", {4});
    if (s.has("dim_cap")) cfg->dim_cap = s.get<int>("dim_cap", 0);
    cfg->complex = s.get<std::string>("complex", "wn");
    if (cfg->complex != "wn" && cfg->complex != "sn" && cfg->complex != "injective_words")
      s.error("complex", "must be wn, sn or injective_words");
    run.config["build"] = {{"family", cfg->family.name()}, {"n", cfg->n}, {"complex", cfg->complex},
                           {"dim_cap", cfg->dim_cap ? json(*cfg->dim_cap) : json(nullptr)}};
  };
  v.exec = [cfg](Run& run) {
    run.csv = csv_row({"n", "p", "simplices"});
    json out = json::array();
    for (int n : cfg->n) {
      json row = {{"n", n}};
      try {
        if (cfg->complex == "sn") {
          auto s = build_sn(cfg->family, n, run.caps.enumeration);
          std::vector<std::size_t> c;
          for (int p = 0; p <= s.dim(); ++p) c.push_back(s.count(p));
          row["counts"] = c;
          row["vertices"] = s.vertex_count();
          row["full_simplex"] = s.is_full_simplex();
          row["downward_closed"] = s.is_downward_closed();
          if (!s.is_downward_closed()) run.assertions.push_back("S_" + std::to_string(n) + " is not a complex");
        } else {
          auto w = make_complex(cfg->complex, cfg->family, n, cfg->dim_cap, run.caps.enumeration);
          row["counts"] = w.counts();
          const auto ids = w.check_identities();
          row["face_identities"] = ids.empty() ? "ok" : ids;
          if (!ids.empty()) run.assertions.push_back("face identities fail at n = " + std::to_string(n) + ": " + ids);
          if (cfg->complex == "wn") {
            auto h = check_hypotheses(cfg->family, n, cfg->dim_cap, run.caps.enumeration);
            row["hypotheses"] = to_json(h);
            if (cfg->family.kind == FamilyKind::Symmetric) {
              const auto diff = compare_with_injective_words(build_wn_full(cfg->family, n, cfg->dim_cap, run.caps.enumeration));
              row["matches_injective_words"] = diff.empty();
              if (!diff.empty()) run.assertions.push_back("W_" + std::to_string(n) + " differs from injective words: " + diff);
            }
          }
        }
        const auto counts = row["counts"].get<std::vector<std::size_t>>();
        for (std::size_t p = 0; p < counts.size(); ++p)
          run.csv += csv_row({std::to_string(n), std::to_string(p), std::to_string(counts[p])});
      } catch (const ResourceError& e) {
        row["skipped"] = e.what();
        ++run.skipped;
        run.csv += csv_row({std::to_string(n), "", "skipped"});
      }
      out.push_back(row);
    }
    run.result["complexes"] = out;
  };
  return v;
}

// homology: of a complex, with connectivity certificates
struct HomologyCfg {
  BuildCfg b;
  Coefficients ring;
  bool reduced = true;
  std::optional<int> expect_offset;  // assert connectivity ≥ n + offset
};

Verb homology_verb() {
  auto cfg = std::make_shared<HomologyCfg>();
  Verb v;
  v.read = [cfg](Section& s, Run& run) {
    cfg->b.family = read_family(s);
    cfg->b.n = s.list<int>("n", {2, 3, 4});
    if (s.has("dim_cap")) cfg->b.dim_cap = s.get<int>("dim_cap", 0);
    cfg->b.complex = s.get<std::string>("complex", "injective_words");
    if (cfg->b.complex != "wn" && cfg->b.complex != "sn" && cfg->b.complex != "injective_words")
      s.error("complex", "must be wn, sn or injective_words");
    cfg->ring = read_ring(s);
    cfg->reduced = s.get<bool>("reduced", true);
    if (s.has("expect_connectivity_offset")) cfg->expect_offset = s.get<int>("expect_connectivity_offset", 0);
    run.config["homology"] = {{"family", cfg->b.family.name()},
                              {"n", cfg->b.n},
                              {"complex", cfg->b.complex},
                              {"dim_cap", cfg->b.dim_cap ? json(*cfg->b.dim_cap) : json(nullptr)},
                              {"ring", cfg->ring.tag()},
                              {"reduced", cfg->reduced},
                              {"expect_connectivity_offset", cfg->expect_offset ? json(*cfg->expect_offset) : json(nullptr)}};
  };
  v.exec = [cfg](Run& run) {
    run.csv = csv_row({"n", "degree", "betti", "torsion"});
    json out = json::array();
    for (int n : cfg->b.n) {
      json row = {{"n", n}};
      try {
        ChainComplex c = cfg->b.complex == "sn"
                             ? chain_complex(build_sn(cfg->b.family, n, run.caps.enumeration), cfg->reduced, cfg->ring)
                             : chain_complex(make_complex(cfg->b.complex, cfg->b.family, n, cfg->b.dim_cap, run.caps.enumeration),
                                             cfg->reduced, cfg->ring);
        auto h = homology(c);
        row["homology"] = to_json(h);
        for (const auto& g : h.groups) {
          std::string t;
          for (const auto& d : g.torsion) t += (t.empty() ? "" : " ") + d.str();
          run.csv += csv_row({std::to_string(n), std::to_string(g.degree), std::to_string(g.betti), t});
        }
        if (cfg->reduced) {
          auto rep = connectivity_report(c, h.max_degree());
          row["connectivity"] = rep.connectivity;
          row["certificate"] = rep.kind;
          if (cfg->expect_offset && rep.connectivity < n + *cfg->expect_offset)
            run.assertions.push_back("connectivity " + std::to_string(rep.connectivity) + " < " +
                                     std::to_string(n + *cfg->expect_offset) + " at n = " + std::to_string(n));
        }
      } catch (const ResourceError& e) {
        row["skipped"] = e.what();
        ++run.skipped;
      }
      out.push_back(row);
    }
    run.result["homology"] = out;
  };
  return v;
}

// ghom: group homology of one G_n
struct GhomCfg {
  Family family;
  Subfamily sub = Subfamily::Full;
  SweepCoefficient coefficient = SweepCoefficient::Trivial;
  Coefficients ring;
  std::vector<int> n;
  int i_max = 2;
  std::string method;
};

Verb ghom_verb() {
  auto cfg = std::make_shared<GhomCfg>();
  Verb v;
  v.read = [cfg](Section& s, Run& run) {
    cfg->family = read_family(s);
    const auto sub = s.get<std::string>("subfamily", "full");
    if (sub == "commutator") cfg->sub = Subfamily::Commutator;
    else if (sub != "full") s.error("subfamily", "must be full or commutator");
    const auto coef = s.get<std::string>("coefficient", "trivial");
    cfg->coefficient = checked(s, "coefficient", [&] { return parse_coefficient(coef); });
    cfg->ring = read_ring(s);
    cfg->n = s.list<int>("n", {3});
    cfg->i_max = s.get<int>("i_max", 2);
    cfg->method = s.get<std::string>("method", "both");
    if (cfg->method != "bar" && cfg->method != "resolution" && cfg->method != "both")
      s.error("method", "must be bar, resolution or both");
    if (cfg->i_max < 0) s.error("i_max", "must be non-negative");
    run.config["ghom"] = {{"family", cfg->family.name()}, {"subfamily", sub},
                          {"coefficient", coefficient_name(cfg->coefficient)}, {"ring", cfg->ring.tag()},
                          {"n", cfg->n}, {"i_max", cfg->i_max}, {"method", cfg->method}};
  };
  v.exec = [cfg](Run& run) {
    run.csv = csv_row({"n", "i", "method", "homology"});
    json out = json::array();
    for (int n : cfg->n) {
      json row = {{"n", n}};
      std::vector<Method> methods;
      if (cfg->method != "resolution") methods.push_back(Method::Bar);
      if (cfg->method != "bar") methods.push_back(Method::Resolution);
      std::vector<HomologyResult> got;
      for (Method m : methods) {
        try {
          auto g = family_group(cfg->family, n, cfg->sub, run.caps.enumeration);
          row["order"] = g->order();
          auto h = group_homology(sweep_module(cfg->coefficient, g, cfg->ring), cfg->i_max, m, run.caps);
          json vals = json::array();
          for (int i = 0; i <= cfg->i_max; ++i) {
            vals.push_back(h.result.at(i).to_string());
            run.csv += csv_row({std::to_string(n), std::to_string(i), method_name(m), h.result.at(i).to_string()});
          }
          row[method_name(m)] = vals;
          got.push_back(h.result);
        } catch (const ResourceError& e) {
          row[method_name(m)] = {{"skipped", e.what()}};
          ++run.skipped;
        }
      }
      if (got.size() == 2) {
        bool agree = true;
        for (int i = 0; i <= cfg->i_max; ++i) agree = agree && got[0].at(i) == got[1].at(i);
        row["methods_agree"] = agree;
        if (!agree) run.assertions.push_back("bar and resolution disagree at n = " + std::to_string(n));
      }
      out.push_back(row);
    }
    run.result["groups"] = out;
  };
  return v;
}

// sweep: stability tables over a family
PredictedRange read_range(Section s, const Family& f, json& out) {
  const auto kind = s.get<std::string>("kind", f.kind == FamilyKind::GeneralLinear ? "vanishing" : "untwisted");
  const int k = s.get<int>("k", 2);
  const int r = s.get<int>("r", 0);
  s.finish();
  out = {{"kind", kind}, {"k", k}, {"r", r}};
  if (kind == "untwisted") return PredictedRange::untwisted(k);
  if (kind == "twisted") return PredictedRange::twisted(k, r);
  if (kind == "abelian") return PredictedRange::abelian(k);
  if (kind == "vanishing") return PredictedRange{0, 0, 0, true};
  if (kind == "none") return PredictedRange{};
  s.error("kind", "must be untwisted, twisted, abelian, vanishing or none");
  return {};
}

void finish_table(Run& run, const StabilityTable& t) {
  run.result["table"] = to_json(t);
  run.csv = to_csv(t);
  run.skipped += t.skipped();
  for (const auto& c : t.cells)
    if (c.violation)
      run.assertions.push_back("predicted-range violation at n = " + std::to_string(c.n) + ", i = " + std::to_string(c.i));
}

Verb sweep_verb() {
  auto spec = std::make_shared<SweepSpec>();
  Verb v;
  v.read = [spec](Section& s, Run& run) {
    spec->family = read_family(s);
    const auto sub = s.get<std::string>("subfamily", "full");
    if (sub == "commutator") spec->subfamily = Subfamily::Commutator;
    else if (sub != "full") s.error("subfamily", "must be full or commutator");
    const auto coef = s.get<std::string>("coefficient", "trivial");
    spec->coefficient = checked(s, "coefficient", [&] { return parse_coefficient(coef); });
    spec->ring = read_ring(s);
    spec->i_max = s.get<int>("i_max", 1);
    spec->n_min = s.get<int>("n_min", 1);
    spec->n_max = s.get<int>("n_max", 5);
    if (spec->n_min < 0 || spec->n_max < spec->n_min) s.error("n_max", "need 0 <= n_min <= n_max");
    json range;
    spec->range = read_range(s.sub("range"), spec->family, range);
    run.config["sweep"] = {{"family", spec->family.name()}, {"subfamily", sub},
                           {"coefficient", coefficient_name(spec->coefficient)}, {"ring", spec->ring.tag()},
                           {"i_max", spec->i_max}, {"n_min", spec->n_min}, {"n_max", spec->n_max}, {"range", range}};
  };
  v.exec = [spec](Run& run) {
    spec->caps = run.caps;
    spec->jobs = run.jobs;
    finish_table(run, stability_sweep(*spec));
  };
  return v;
}

// tsweep: twisted coefficients from a coefficient system
struct TsweepCfg {
  std::string system;
  Family family;
  int truncation = 6;
  Coefficients ring;
  int i_max = 1, n_min = 1, n_max = 4, k = 2;
  std::optional<int> r;
};

Verb tsweep_verb() {
  auto cfg = std::make_shared<TsweepCfg>();
  Verb v;
  v.read = [cfg](Section& s, Run& run) {
    cfg->system = s.get<std::string>("system", "standard");
    cfg->family = read_family(s);
    cfg->truncation = s.get<int>("truncation", 5);
    cfg->ring = read_ring(s);
    cfg->i_max = s.get<int>("i_max", 1);
    cfg->n_min = s.get<int>("n_min", 1);
    cfg->n_max = s.get<int>("n_max", cfg->truncation - 1);
    cfg->k = s.get<int>("k", 2);
    if (s.has("r")) cfg->r = s.get<int>("r", 0);
    if (cfg->n_max + 1 > cfg->truncation) s.error("n_max", "must be below truncation");
    run.config["tsweep"] = {{"system", cfg->system}, {"family", cfg->family.name()}, {"truncation", cfg->truncation},
                            {"ring", cfg->ring.tag()}, {"i_max", cfg->i_max}, {"n_min", cfg->n_min},
                            {"n_max", cfg->n_max}, {"k", cfg->k}, {"r", cfg->r ? json(*cfg->r) : json("degree")}};
  };
  v.exec = [cfg](Run& run) {
    const auto& f = cfg->family;
    const int N = cfg->truncation;
    CoefficientSystem M = cfg->system == "constant"        ? constant_system(f, N, cfg->ring)
                          : cfg->system == "standard"      ? standard_system(f, N, cfg->ring)
                          : cfg->system == "zero"          ? zero_system(f, N)
                          : cfg->system == "sign-violator" ? sign_violator(f, N)
                                                           : load_coefficient_system(cfg->system, false);
    auto axiom = check_coefficient_axiom(M);
    run.result["axiom"] = to_json(axiom);
    if (!axiom.passed) {
      run.assertions.push_back("coefficient axiom fails: " + axiom.failure);
      return;
    }
    auto d = degree(M);
    run.result["degree"] = to_json(d);
    int r = cfg->r.value_or(d.degree.value_or(-1));
    if (!cfg->r && !d.degree) {
      run.result["note"] = "degree " + d.status + "; no range asserted";
      r = -1;
    }
    auto t = twisted_sweep(M, cfg->i_max, cfg->n_min, cfg->n_max, std::max(r, 0), cfg->k, run.caps, run.jobs);
    finish_table(run, t);
  };
  return v;
}

// thompson: property suite
struct ThompsonCfg {
  std::vector<int> k, n;
  int samples = 1000;
};

Verb thompson_verb() {
  auto cfg = std::make_shared<ThompsonCfg>();
  Verb v;
  v.read = [cfg](Section& s, Run& run) {
    cfg->k = s.list<int>("k", {2, 3});
    cfg->n = s.list<int>("n", {1, 2, 3});
    cfg->samples = s.get<int>("samples", 1000);
    for (int k : cfg->k)
      if (k < 2) s.error("k", "arity must be at least 2");
    for (int n : cfg->n)
      if (n < 1) s.error("n", "root count must be at least 1");
    run.config["thompson"] = {{"k", cfg->k}, {"n", cfg->n}, {"samples", cfg->samples}};
  };
  v.exec = [cfg](Run& run) {
    auto c = acceptance::thompson(run.seed, cfg->k, cfg->n, cfg->samples);
    run.result = {{"passed", c.passed}, {"summary", c.summary}, {"checks", c.data}};
    run.csv = csv_row({"k,n", "checks"});
    for (auto& [key, val] : c.data.items()) run.csv += csv_row({key, val.dump()});
    if (!c.passed) run.assertions.push_back(c.summary);
  };
  return v;
}

// ucat: bracket category checks and hom-set dumps
struct UcatCfg {
  Family family;
  int truncation = 4;
  std::vector<std::vector<int>> dump;
};

Verb ucat_verb() {
  auto cfg = std::make_shared<UcatCfg>();
  Verb v;
  v.read = [cfg](Section& s, Run& run) {
    cfg->family = read_family(s);
    cfg->truncation = s.get<int>("truncation", 4);
    auto pairs = s.list<std::vector<int>>("dump", {});
    for (const auto& p : pairs) {
      if (p.size() != 2 || p[0] > p[1] || p[1] > cfg->truncation) s.error("dump", "entries are [m, n] with m <= n <= truncation");
      else cfg->dump.push_back(p);
    }
    run.config["ucat"] = {{"family", cfg->family.name()}, {"truncation", cfg->truncation}, {"dump", cfg->dump}};
  };
  v.exec = [cfg](Run& run) {
    run.csv = csv_row({"check", "passed", "checks", "failure"});
    auto record = [&](const std::string& name, const UcatReport& r) {
      run.result[name] = to_json(r);
      run.csv += csv_row({name, r.passed ? "true" : "false", std::to_string(r.checks), r.failure});
      if (!r.passed) run.assertions.push_back(name + ": " + r.failure);
    };
    if (cfg->family.kind == FamilyKind::Symmetric) record("fi", check_fi(cfg->truncation));
    record("cax_quotient", verify_cax_quotient(cfg->family, cfg->truncation));
    UcatReport wn;
    for (int n = 1; n <= cfg->truncation; ++n) {
      auto r = cross_check_wn(cfg->family, n);
      wn.checks += r.checks;
      if (!r.passed && wn.passed) {
        wn.passed = false;
        wn.failure = "n = " + std::to_string(n) + ": " + r.failure;
      }
    }
    record("wn_cross_check", wn);
    if (!cfg->dump.empty()) {
      BracketCategory c(cfg->family, cfg->truncation, run.caps.enumeration);
      json d = json::array();
      for (const auto& p : cfg->dump) d.push_back(c.to_json(p[0], p[1]));
      run.result["hom_sets"] = d;
    }
  };
  return v;
}

// selftest: the acceptance suite, run twice for the determinism criterion
struct SelftestCfg {
  std::set<int> only;
  bool determinism = true;
};

Verb selftest_verb() {
  auto cfg = std::make_shared<SelftestCfg>();
  Verb v;
  v.read = [cfg](Section& s, Run& run) {
    for (int c : s.list<int>("criteria", {}))
      if (c < 1 || c > 12) s.error("criteria", "criteria are numbered 1..12");
      else if (c != 12) cfg->only.insert(c);
    cfg->determinism = s.get<bool>("determinism", true);
    run.config["selftest"] = {{"criteria", cfg->only}, {"determinism", cfg->determinism}};
  };
  v.exec = [cfg](Run& run) {
    AcceptanceOptions opt;
    opt.seed = run.seed;
    opt.jobs = run.jobs;
    opt.only = cfg->only;
    auto print = [](const CriterionResult& c) { std::cerr << format_line(c) << std::endl; };
    auto first = run_acceptance(opt, print);
    if (cfg->determinism) {
      auto second = run_acceptance(opt);
      auto det = determinism(first, second);
      for (const auto& c : second.criteria) det.seconds += c.seconds;
      print(det);
      first.criteria.push_back(det);
    }
    run.result = first.results();
    run.csv = csv_row({"id", "name", "passed", "summary"});
    for (const auto& c : first.criteria) {
      run.csv += csv_row({std::to_string(c.id), c.name, c.passed ? "true" : "false", c.summary});
      if (!c.passed) run.assertions.push_back("criterion " + std::to_string(c.id) + ": " + c.summary);
    }
    run.timing["criteria"] = first.timing();
  };
  return v;
}

// ---------------------------------------------------------------------------
// Reports

std::string fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// next unused <stem>[-k]<ext>; existing reports are never overwritten
fs::path fresh(const fs::path& dir, const std::string& stem, const std::string& ext) {
  fs::path p = dir / (stem + ext);
  for (int k = 2; fs::exists(p); ++k) p = dir / (stem + "-" + std::to_string(k) + ext);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"homological stability computations"};
  std::string verb, config_path, out_dir = "reports", format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  app.add_option("verb", verb, "build | homology | ghom | sweep | tsweep | thompson | ucat | selftest")
      ->required()
      ->check(CLI::IsMember({"build", "homology", "ghom", "sweep", "tsweep", "thompson", "ucat", "selftest"}));
  app.add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "report directory");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--jobs", jobs, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "json | csv | both")->check(CLI::IsMember({"json", "csv", "both"}));
  app.set_version_flag("--version", kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const std::map<std::string, std::function<Verb()>> verbs = {
      {"build", build_verb},   {"homology", homology_verb}, {"ghom", ghom_verb}, {"sweep", sweep_verb},
      {"tsweep", tsweep_verb}, {"thompson", thompson_verb}, {"ucat", ucat_verb}, {"selftest", selftest_verb}};
  Verb impl = verbs.at(verb)();
  Run run;
  run.verb = verb;

  // configuration
  std::vector<std::string> errors;
  YAML::Node root;
  if (!config_path.empty()) {
    try {
      root = YAML::LoadFile(config_path);
    } catch (const YAML::Exception& e) {
      std::cerr << "usage error: " << config_path << ": " << e.what() << "\n";
      return kUsage;
    }
  }
  Section top(root, "", errors);
  const auto task = top.get<std::string>("task", verb);
  if (task != verb) top.error("task", "config is for `" + task + "`, not `" + verb + "`");
  run.seed = seed.value_or(top.get<std::uint64_t>("seed", kDefaultSeed));
  run.jobs = jobs.value_or(top.get<unsigned>("jobs", 1));
  if (run.jobs == 0) top.error("jobs", "must be positive");
  json caps_json;
  run.caps = read_caps(top.sub("caps"), caps_json);
  Section body = top.sub(verb);
  impl.read(body, run);
  body.finish();
  top.finish();
  if (!errors.empty()) {
    std::cerr << "usage error: invalid config\n";
    for (const auto& e : errors) std::cerr << "  " << e << "\n";
    return kUsage;
  }
  run.config["task"] = verb;
  run.config["seed"] = run.seed;
  run.config["jobs"] = run.jobs;
  run.config["caps"] = caps_json;

  // execution
  const auto t0 = std::chrono::steady_clock::now();
  const std::time_t started = std::time(nullptr);
  try {
    impl.exec(run);
  } catch (const ResourceError& e) {
    run.result["aborted"] = std::string("resource cap: ") + e.what();
    ++run.skipped;
  } catch (const InvalidInput& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    run.assertions.push_back(std::string("internal error: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json timing = run.timing;
  timing["wall_seconds"] = seconds;
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started));
  timing["started"] = stamp;

  const std::string hash = fnv1a64(run.config.dump());
  json report = {{"tool", {{"name", "hstab"}, {"version", kVersion}}},
                 {"config", run.config},
                 {"config_hash", hash},
                 {"status", {{"exit_code", run.exit_code()}, {"assertions", run.assertions}, {"skipped", run.skipped}}},
                 {"result", run.result},
                 {"timing", timing}};

  try {
    fs::create_directories(out_dir);
    const std::string stem = verb + "-" + hash;
    std::vector<std::string> written;
    if (format != "csv") {
      auto p = fresh(out_dir, stem, ".json");
      write_file(p, report.dump(2) + "\n");
      written.push_back(p.string());
    }
    if (format != "json") {
      auto p = fresh(out_dir, stem, ".csv");
      write_file(p, run.csv);
      written.push_back(p.string());
    }
    std::ofstream index(fs::path(out_dir) / "index.jsonl", std::ios::app);
    index << json{{"verb", verb}, {"config_hash", hash}, {"exit_code", run.exit_code()}, {"files", written}, {"started", stamp}}.dump()
          << "\n";
    for (const auto& w : written) std::cout << w << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAssertion;
  }
  for (const auto& a : run.assertions) std::cerr << "assertion: " << a << "\n";
  if (run.skipped) std::cerr << run.skipped << " cell(s) skipped\n";
  return run.exit_code();
}
