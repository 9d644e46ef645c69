#pragma once

// Explicitly enumerated finite groups: elements are indexed, products are
// looked up (or tabulated for small orders).

#include <hstab/errors.hpp>
#include <hstab/families.hpp>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hstab {

class FiniteGroup {
 public:
  static constexpr std::size_t kTableLimit = 1024;

  // G_n of a family, with the family's standard generators.
  static FiniteGroup from_family(const Family& f, int n,
                                 std::uint64_t cap = kDefaultEnumerationCap) {
    FiniteGroup g(f, n, enumerate(f, n, cap), f.name() + " rank " + std::to_string(n));
    g.set_generators(generators(f, n));
    return g;
  }

  // Subgroup of G_n generated by `gens`.
  static FiniteGroup generated_by(const Family& f, int n, const std::vector<GroupElement>& gens,
                                  std::string label,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
    FiniteGroup g(f, n, closure(f, n, gens, cap), std::move(label));
    g.set_generators(gens);
    return g;
  }

  const Family& family() const { return family_; }
  int rank() const { return rank_; }
  const std::string& label() const { return label_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const GroupElement& element(int i) const { return elements_.at(i); }
  int identity_index() const { return identity_; }

  std::optional<int> find(const GroupElement& g) const {
    if (!(g.family() == family_) || g.rank() != rank_) return std::nullopt;
    auto it = index_->find(g.payload());
    if (it == index_->end()) return std::nullopt;
    return it->second;
  }
  int index_of(const GroupElement& g) const {
    auto i = find(g);
    if (!i) throw InvalidInput("element " + g.to_string() + " not in " + label_);
    return *i;
  }
  bool contains(const GroupElement& g) const { return find(g).has_value(); }

  int multiply(int a, int b) const {
    if (table_) return (*table_)[static_cast<std::size_t>(a) * order() + b];
    return index_of(compose(elements_[a], elements_[b]));
  }
  int inverse(int a) const { return inverses_[a]; }

  const std::vector<int>& generator_indices() const { return generators_; }
  std::vector<GroupElement> generator_elements() const {
    std::vector<GroupElement> out;
    for (int i : generators_) out.push_back(elements_[i]);
    return out;
  }

  // Generating set replaced; must generate the whole group.
  void set_generators(const std::vector<GroupElement>& gens) {
    generators_.clear();
    for (const auto& g : gens) {
      int i = index_of(g);
      if (i != identity_ &&
          std::find(generators_.begin(), generators_.end(), i) == generators_.end())
        generators_.push_back(i);
    }
    if (closure(family_, rank_, generator_elements(), order()).size() != order())
      throw InvalidInput("generators do not generate " + label_);
  }

  // Commutator subgroup, as the normal closure of commutators of generators.
  FiniteGroup derived_subgroup(std::string label = {}) const {
    std::vector<GroupElement> gens;
    const auto g = generator_elements();
    for (const auto& s : g)
      for (const auto& t : g) {
        GroupElement c = compose(compose(s, t), compose(hstab::inverse(s), hstab::inverse(t)));
        if (!(c == identity(family_, rank_))) gens.push_back(c);
      }
    auto elems = closure(family_, rank_, gens, order());
    bool grew = true;
    while (grew) {
      grew = false;
      std::unordered_map<std::vector<int>, int, PayloadHash> in;
      for (std::size_t i = 0; i < elems.size(); ++i) in.emplace(elems[i].payload(), 0);
      const auto current = gens;
      for (const auto& s : g) {
        for (const auto& c : current) {
          GroupElement conj = compose(compose(s, c), hstab::inverse(s));
          if (!in.count(conj.payload())) {
            gens.push_back(conj);
            elems = closure(family_, rank_, gens, order());
            in.clear();
            for (const auto& e : elems) in.emplace(e.payload(), 0);
            grew = true;
          }
        }
      }
    }
    // thin the generating set
    std::vector<GroupElement> chosen;
    std::size_t reached = 1;
    for (const auto& c : gens) {
      if (reached == elems.size()) break;
      auto trial = chosen;
      trial.push_back(c);
      std::size_t sz = closure(family_, rank_, trial, order()).size();
      if (sz > reached) {
        chosen = std::move(trial);
        reached = sz;
      }
    }
    if (label.empty()) label = "[" + label_ + "," + label_ + "]";
    FiniteGroup h(family_, rank_, std::move(elems), std::move(label));
    h.set_generators(chosen);
    return h;
  }

  // Closure of `gens` under multiplication, sorted by payload.
  static std::vector<GroupElement> closure(const Family& f, int n,
                                           const std::vector<GroupElement>& gens,
                                           std::uint64_t cap) {
    std::unordered_map<std::vector<int>, int, PayloadHash> seen;
    std::vector<GroupElement> out;
    std::deque<GroupElement> queue;
    GroupElement e = identity(f, n);
    seen.emplace(e.payload(), 0);
    out.push_back(e);
    queue.push_back(e);
    while (!queue.empty()) {
      GroupElement x = std::move(queue.front());
      queue.pop_front();
      for (const auto& s : gens) {
        GroupElement y = compose(x, s);
        if (seen.emplace(y.payload(), 0).second) {
          if (out.size() >= cap)
            throw ResourceError("subgroup closure exceeds cap " + std::to_string(cap),
                                out.size() + 1);
          out.push_back(y);
          queue.push_back(std::move(y));
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  FiniteGroup(Family f, int n, std::vector<GroupElement> elems, std::string label)
      : family_(f), rank_(n), label_(std::move(label)), elements_(std::move(elems)) {
    if (!std::is_sorted(elements_.begin(), elements_.end()))
      std::sort(elements_.begin(), elements_.end());
    auto index = std::make_shared<std::unordered_map<std::vector<int>, int, PayloadHash>>();
    index->reserve(elements_.size() * 2);
    for (std::size_t i = 0; i < elements_.size(); ++i)
      index->emplace(elements_[i].payload(), static_cast<int>(i));
    index_ = std::move(index);
    identity_ = index_of(identity(family_, rank_));
    if (order() <= kTableLimit) {
      auto table = std::make_shared<std::vector<int>>(order() * order());
      for (std::size_t a = 0; a < order(); ++a)
        for (std::size_t b = 0; b < order(); ++b)
          (*table)[a * order() + b] = index_of(compose(elements_[a], elements_[b]));
      table_ = std::move(table);
    }
    inverses_.resize(order());
    for (std::size_t a = 0; a < order(); ++a)
      inverses_[a] = index_of(hstab::inverse(elements_[a]));
  }

  Family family_;
  int rank_ = 0;
  std::string label_;
  std::vector<GroupElement> elements_;
  std::shared_ptr<const std::unordered_map<std::vector<int>, int, PayloadHash>> index_;
  std::shared_ptr<const std::vector<int>> table_;
  std::vector<int> inverses_;
  std::vector<int> generators_;
  int identity_ = 0;
};

// A homomorphism between enumerated groups, as an index map.
struct GroupHom {
  const FiniteGroup* source = nullptr;
  const FiniteGroup* target = nullptr;
  std::vector<int> images;  // images[i] = index in target of φ(element i)

  // Builds the index map from an element-level function.
  template <class Fn>
  static GroupHom from_function(const FiniteGroup& src, const FiniteGroup& tgt, Fn&& fn) {
    GroupHom h{&src, &tgt, {}};
    h.images.reserve(src.order());
    for (const auto& g : src.elements()) h.images.push_back(tgt.index_of(fn(g)));
    return h;
  }

  bool is_homomorphism() const {
    for (std::size_t a = 0; a < source->order(); ++a)
      for (int s : source->generator_indices()) {
        int lhs = images[source->multiply(static_cast<int>(a), s)];
        int rhs = target->multiply(images[a], images[s]);
        if (lhs != rhs) return false;
      }
    return true;
  }

  bool is_injective() const {
    std::vector<int> sorted = images;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }
};

// The stabilization G_n -> G_{n+1} (g ↦ g ⊕ id) restricted to the given groups.
inline GroupHom stabilization_hom(const FiniteGroup& src, const FiniteGroup& tgt) {
  return GroupHom::from_function(src, tgt, [](const GroupElement& g) { return stabilize(g); });
}

}  // namespace hstab
