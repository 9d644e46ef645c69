#pragma once

// Higman–Thompson groups V_{k,n} as tree pairs.
//
// A forest is stored by its leaves: a leaf is (root, d_1, ..., d_l) with
// digits in [0, k). Lexicographic order on these vectors is the left-to-right
// leaf order. An element sends the piece under source leaf i to the piece
// under target leaf perm[i], keeping the tail.

#include <hstab/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hstab {

using Leaf = std::vector<int>;

class Forest {
 public:
  Forest() = default;
  Forest(int k, int roots) : k_(k), roots_(roots) {
    if (k < 2) throw InvalidInput("arity must be at least 2");
    if (roots < 1) throw InvalidInput("need at least one root");
    for (int r = 0; r < roots; ++r) leaves_.push_back({r});
  }
  // Leaves must form a complete prefix code below each root.
  Forest(int k, int roots, std::vector<Leaf> leaves) : k_(k), roots_(roots), leaves_(std::move(leaves)) {
    if (k < 2) throw InvalidInput("arity must be at least 2");
    if (roots < 1) throw InvalidInput("need at least one root");
    std::sort(leaves_.begin(), leaves_.end());
    validate();
  }

  int arity() const { return k_; }
  int roots() const { return roots_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  const std::vector<Leaf>& leaves() const { return leaves_; }
  const Leaf& leaf(std::size_t i) const { return leaves_.at(i); }
  // internal nodes = distinct proper prefixes of leaves
  std::size_t carets() const {
    std::vector<Leaf> nodes;
    for (const auto& l : leaves_)
      for (std::size_t len = 1; len < l.size(); ++len) nodes.emplace_back(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(len));
    std::sort(nodes.begin(), nodes.end());
    return static_cast<std::size_t>(std::unique(nodes.begin(), nodes.end()) - nodes.begin());
  }

  std::size_t index_of(const Leaf& l) const {
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), l);
    if (it == leaves_.end() || *it != l) throw InvalidInput("not a leaf");
    return static_cast<std::size_t>(it - leaves_.begin());
  }
  bool has_leaf(const Leaf& l) const { return std::binary_search(leaves_.begin(), leaves_.end(), l); }

  // Replaces leaf i by its k children (which occupy positions i..i+k−1).
  void split(std::size_t i) {
    Leaf base = leaves_.at(i);
    std::vector<Leaf> kids;
    for (int d = 0; d < k_; ++d) {
      kids.push_back(base);
      kids.back().push_back(d);
    }
    leaves_.erase(leaves_.begin() + static_cast<std::ptrdiff_t>(i));
    leaves_.insert(leaves_.begin() + static_cast<std::ptrdiff_t>(i), kids.begin(), kids.end());
  }
  // Leaves i..i+k−1 are the children of one node.
  bool is_caret(std::size_t i) const {
    if (i + k_ > leaves_.size()) return false;
    const Leaf& first = leaves_[i];
    if (first.size() < 2 || first.back() != 0) return false;
    for (int d = 1; d < k_; ++d) {
      const Leaf& l = leaves_[i + d];
      if (l.size() != first.size() || l.back() != d || !std::equal(first.begin(), first.end() - 1, l.begin()))
        return false;
    }
    return true;
  }
  void merge(std::size_t i) {
    Leaf parent(leaves_[i].begin(), leaves_[i].end() - 1);
    leaves_.erase(leaves_.begin() + static_cast<std::ptrdiff_t>(i), leaves_.begin() + static_cast<std::ptrdiff_t>(i + k_));
    leaves_.insert(leaves_.begin() + static_cast<std::ptrdiff_t>(i), parent);
  }

  // Each tree in balanced-parenthesis form: "." a leaf, "(t_0...t_{k−1})" a caret.
  std::string to_string() const {
    std::string out;
    std::size_t pos = 0;
    for (int r = 0; r < roots_; ++r) {
      if (r) out += ',';
      write({r}, pos, out);
    }
    return out;
  }
  static Forest parse(int k, const std::string& s) {
    std::vector<Leaf> leaves;
    std::size_t pos = 0;
    int root = 0;
    for (;;) {
      Leaf prefix{root};
      read(k, s, pos, prefix, leaves);
      ++root;
      if (pos == s.size()) break;
      if (s[pos] != ',') throw InvalidInput("forest `" + s + "`: expected ',' at " + std::to_string(pos));
      ++pos;
    }
    return Forest(k, root, std::move(leaves));
  }

  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  void validate() const {
    // every leaf lies below a valid root with valid digits, and the leaves
    // below each root cover it exactly once (Kraft sum = 1, prefix free)
    std::vector<long double> kraft(roots_, 0);
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
      const Leaf& l = leaves_[i];
      if (l.empty() || l[0] < 0 || l[0] >= roots_) throw InvalidInput("leaf with invalid root");
      for (std::size_t j = 1; j < l.size(); ++j)
        if (l[j] < 0 || l[j] >= k_) throw InvalidInput("leaf with invalid digit");
      if (i + 1 < leaves_.size()) {
        const Leaf& n = leaves_[i + 1];
        if (n.size() >= l.size() && std::equal(l.begin(), l.end(), n.begin()))
          throw InvalidInput("leaves are not prefix free");
      }
      kraft[l[0]] += std::pow(static_cast<long double>(k_), -static_cast<long double>(l.size() - 1));
    }
    for (int r = 0; r < roots_; ++r)
      if (std::abs(kraft[r] - 1.0L) > 1e-12L) throw InvalidInput("leaves do not cover root " + std::to_string(r));
  }
  void write(const Leaf& node, std::size_t& pos, std::string& out) const {
    if (pos < leaves_.size() && leaves_[pos] == node) {
      out += '.';
      ++pos;
      return;
    }
    out += '(';
    for (int d = 0; d < k_; ++d) {
      Leaf c = node;
      c.push_back(d);
      write(c, pos, out);
    }
    out += ')';
  }
  static void read(int k, const std::string& s, std::size_t& pos, Leaf& prefix, std::vector<Leaf>& leaves) {
    if (pos >= s.size()) throw InvalidInput("forest `" + s + "` ends early");
    if (s[pos] == '.') {
      leaves.push_back(prefix);
      ++pos;
      return;
    }
    if (s[pos] != '(') throw InvalidInput("forest `" + s + "`: unexpected '" + s[pos] + "'");
    ++pos;
    for (int d = 0; d < k; ++d) {
      prefix.push_back(d);
      read(k, s, pos, prefix, leaves);
      prefix.pop_back();
    }
    if (pos >= s.size() || s[pos] != ')')
      throw InvalidInput("forest `" + s + "`: caret needs exactly " + std::to_string(k) + " children");
    ++pos;
  }

  int k_ = 2;
  int roots_ = 1;
  std::vector<Leaf> leaves_;
};

class TreePair {
 public:
  TreePair() = default;
  TreePair(Forest source, Forest target, std::vector<int> perm)
      : source_(std::move(source)), target_(std::move(target)), perm_(std::move(perm)) {
    if (source_.arity() != target_.arity() || source_.roots() != target_.roots())
      throw InvalidInput("source and target forests differ in arity or root count");
    if (source_.leaf_count() != target_.leaf_count()) throw InvalidInput("source and target leaf counts differ");
    if (perm_.size() != source_.leaf_count()) throw InvalidInput("permutation has the wrong length");
    std::vector<char> seen(perm_.size(), 0);
    for (int x : perm_) {
      if (x < 0 || x >= static_cast<int>(perm_.size()) || seen[x]) throw InvalidInput("leaf map is not a bijection");
      seen[x] = 1;
    }
  }

  static TreePair identity(int k, int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return TreePair(Forest(k, n), Forest(k, n), p);
  }

  int arity() const { return source_.arity(); }
  int roots() const { return source_.roots(); }
  const Forest& source() const { return source_; }
  const Forest& target() const { return target_; }
  const std::vector<int>& perm() const { return perm_; }
  bool leaf_count_consistent() const {
    const std::size_t expect = static_cast<std::size_t>(roots()) + (arity() - 1) * source_.carets();
    return source_.leaf_count() == expect && target_.leaf_count() == expect;
  }

  // Splits source leaf i and its image (same element, one more caret each side).
  void expand_source(std::size_t i) {
    const int k = arity();
    const int t = perm_[i];
    source_.split(i);
    target_.split(static_cast<std::size_t>(t));
    std::vector<int> np;
    np.reserve(perm_.size() + k - 1);
    for (std::size_t j = 0; j < perm_.size(); ++j) {
      auto shift = [&](int x) { return x > t ? x + k - 1 : x; };
      if (j == i)
        for (int d = 0; d < k; ++d) np.push_back(t + d);
      else
        np.push_back(shift(perm_[j]));
    }
    perm_ = std::move(np);
  }
  void expand_target(std::size_t t) {
    auto it = std::find(perm_.begin(), perm_.end(), static_cast<int>(t));
    expand_source(static_cast<std::size_t>(it - perm_.begin()));
  }

  // Source carets at i whose leaves go in order onto a target caret.
  std::vector<std::size_t> cancellable() const {
    std::vector<std::size_t> out;
    const int k = arity();
    for (std::size_t i = 0; i + k <= perm_.size(); ++i) {
      if (!source_.is_caret(i)) continue;
      const int t = perm_[i];
      bool ok = target_.is_caret(static_cast<std::size_t>(t));
      for (int d = 1; d < k && ok; ++d) ok = perm_[i + d] == t + d;
      if (ok) out.push_back(i);
    }
    return out;
  }
  void cancel(std::size_t i) {
    const int k = arity();
    const int t = perm_[i];
    source_.merge(i);
    target_.merge(static_cast<std::size_t>(t));
    std::vector<int> np;
    for (std::size_t j = 0; j < perm_.size(); ++j) {
      if (j > i && j < i + k) continue;
      int x = perm_[j];
      np.push_back(j == i ? t : (x > t ? x - (k - 1) : x));
    }
    perm_ = std::move(np);
  }

  // "k:source|target|p_1,...,p_L" with 1-based leaf images.
  std::string to_string() const {
    std::string s = std::to_string(arity()) + ":" + source_.to_string() + "|" + target_.to_string() + "|";
    for (std::size_t i = 0; i < perm_.size(); ++i) s += (i ? "," : "") + std::to_string(perm_[i] + 1);
    return s;
  }
  static TreePair parse(const std::string& s) {
    auto colon = s.find(':');
    auto bar1 = s.find('|');
    auto bar2 = s.find('|', bar1 == std::string::npos ? 0 : bar1 + 1);
    if (colon == std::string::npos || bar1 == std::string::npos || bar2 == std::string::npos || colon > bar1)
      throw InvalidInput("tree pair `" + s + "` is not of the form k:source|target|perm");
    int k = 0;
    try {
      k = std::stoi(s.substr(0, colon));
    } catch (const std::exception&) {
      throw InvalidInput("tree pair `" + s + "`: bad arity");
    }
    Forest src = Forest::parse(k, s.substr(colon + 1, bar1 - colon - 1));
    Forest tgt = Forest::parse(k, s.substr(bar1 + 1, bar2 - bar1 - 1));
    std::vector<int> perm;
    std::string rest = s.substr(bar2 + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidInput("tree pair `" + s + "`: bad permutation entry `" + tok + "`");
      perm.push_back(std::stoi(tok) - 1);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return TreePair(std::move(src), std::move(tgt), std::move(perm));
  }

  friend bool operator==(const TreePair&, const TreePair&) = default;

 private:
  Forest source_, target_;
  std::vector<int> perm_;
};

// Cancels leftmost matched carets until none remain.
inline TreePair reduce(TreePair p) {
  for (;;) {
    auto c = p.cancellable();
    if (c.empty()) return p;
    p.cancel(c.front());
  }
}

// Cancels in a random order; used to test confluence.
template <class Rng>
TreePair reduce_random(TreePair p, Rng& rng) {
  for (;;) {
    auto c = p.cancellable();
    if (c.empty()) return p;
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    p.cancel(c[pick(rng)]);
  }
}

inline bool is_reduced(const TreePair& p) { return p.cancellable().empty(); }

inline TreePair inverse(const TreePair& a) {
  std::vector<int> inv(a.perm().size());
  for (std::size_t i = 0; i < inv.size(); ++i) inv[a.perm()[i]] = static_cast<int>(i);
  return TreePair(a.target(), a.source(), inv);
}

// a ∘ b: b first. Both are expanded until b's target equals a's source.
inline TreePair compose(TreePair a, TreePair b) {
  if (a.arity() != b.arity() || a.roots() != b.roots())
    throw InvalidInput("composing elements of different groups V_{k,n}");
  for (;;) {
    const auto& mid_b = b.target().leaves();
    const auto& mid_a = a.source().leaves();
    if (mid_b == mid_a) break;
    // first position where they differ: the shorter leaf gets split
    std::size_t i = 0;
    while (mid_b[i] == mid_a[i]) ++i;
    if (mid_b[i].size() < mid_a[i].size())
      b.expand_target(i);
    else
      a.expand_source(i);
  }
  std::vector<int> perm(b.perm().size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = a.perm()[b.perm()[i]];
  return reduce(TreePair(b.source(), a.target(), std::move(perm)));
}

// V_{k,n} → V_{k,n+1}: identity on a new last interval.
inline TreePair stabilize_v(const TreePair& a) {
  const int n = a.roots() + 1, k = a.arity();
  auto extend = [&](const Forest& f) {
    auto leaves = f.leaves();
    leaves.push_back({n - 1});
    return Forest(k, n, leaves);
  };
  auto perm = a.perm();
  perm.push_back(static_cast<int>(perm.size()));
  return TreePair(extend(a.source()), extend(a.target()), perm);
}

// V_{k,n} ≅ V_{k,n+k−1} by subdividing interval `root` into k intervals.
inline TreePair subdivide_root(TreePair a, int root) {
  const int k = a.arity(), n = a.roots();
  if (root < 0 || root >= n) throw InvalidInput("no root " + std::to_string(root));
  if (a.source().has_leaf({root})) a.expand_source(a.source().index_of({root}));
  if (a.target().has_leaf({root})) a.expand_target(a.target().index_of({root}));
  auto relabel = [&](const Forest& f) {
    std::vector<Leaf> leaves;
    for (const auto& l : f.leaves()) {
      Leaf m;
      if (l[0] == root) {
        m.assign(l.begin() + 1, l.end());
        m[0] += root;
      } else {
        m = l;
        if (l[0] > root) m[0] += k - 1;
      }
      leaves.push_back(std::move(m));
    }
    return Forest(k, n + k - 1, leaves);
  };
  // leaf order is preserved by the relabelling, so perm carries over
  return reduce(TreePair(relabel(a.source()), relabel(a.target()), a.perm()));
}

// The subdivision isomorphism used for stabilization: the first interval.
// (Subdividing the last one does not commute with stabilize_v.)
inline TreePair subdivision_iso(const TreePair& a) { return subdivide_root(a, 0); }

// Inverse of subdivision_iso on V_{k,m}, m ≥ k: the first k intervals merge.
inline TreePair subdivision_inverse(const TreePair& a) {
  const int k = a.arity(), m = a.roots();
  if (m < k) throw InvalidInput("need at least k roots to merge");
  auto relabel = [&](const Forest& f) {
    std::vector<Leaf> leaves;
    for (const auto& l : f.leaves()) {
      Leaf x;
      if (l[0] < k) {
        x.push_back(0);
        x.push_back(l[0]);
        x.insert(x.end(), l.begin() + 1, l.end());
      } else {
        x = l;
        x[0] -= k - 1;
      }
      leaves.push_back(std::move(x));
    }
    return Forest(k, m - k + 1, leaves);
  };
  return reduce(TreePair(relabel(a.source()), relabel(a.target()), a.perm()));
}

// Random element: `carets` random splits on each side, uniform leaf bijection, reduced.
template <class Rng>
TreePair random_tree_pair(int k, int n, int carets, Rng& rng) {
  auto grow = [&] {
    Forest f(k, n);
    for (int c = 0; c < carets; ++c) {
      std::uniform_int_distribution<std::size_t> pick(0, f.leaf_count() - 1);
      f.split(pick(rng));
    }
    return f;
  };
  Forest s = grow(), t = grow();
  std::vector<int> perm(s.leaf_count());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  return reduce(TreePair(std::move(s), std::move(t), std::move(perm)));
}

}  // namespace hstab
