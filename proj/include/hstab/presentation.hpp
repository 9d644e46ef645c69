#pragma once

// Finite presentations with explicit images in a family, Todd-Coxeter coset
// enumeration, and abelianization from the relator exponent sums.

#include <hstab/errors.hpp>
#include <hstab/families.hpp>
#include <hstab/finite_group.hpp>
#include <hstab/linalg.hpp>

#include <string>
#include <vector>

namespace hstab {

// Letters are ±(k+1) for generator k.
using Word = std::vector<int>;

struct Presentation {
  std::string name;
  int generator_count = 0;
  std::vector<Word> relators;
  Family family = Family::symmetric();
  int rank = 0;
  std::vector<GroupElement> images;  // image of each generator in G_rank
};

namespace detail {

inline Word power(const Word& w, int e) {
  Word out;
  for (int i = 0; i < e; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}
inline Word inverse_word(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}
inline Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}
inline Word commutator(const Word& a, const Word& b) {
  return concat({a, b, inverse_word(a), inverse_word(b)});
}

}  // namespace detail

inline GroupElement evaluate(const Presentation& p, const Word& w) {
  GroupElement x = identity(p.family, p.rank);
  for (int l : w) {
    const GroupElement& g = p.images.at(std::abs(l) - 1);
    x = compose(x, l > 0 ? g : inverse(g));
  }
  return x;
}

// Coset enumeration over the trivial subgroup (HLT strategy with
// coincidence processing). Returns the number of live cosets, i.e. the
// group order, or throws ResourceError beyond `max_cosets`.
inline std::size_t todd_coxeter_order(const Presentation& p, std::size_t max_cosets = 4'000'000) {
  const int cols = 2 * p.generator_count;
  auto col_of = [](int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; };
  auto inv_col = [](int c) { return c ^ 1; };
  std::vector<int> table;
  std::vector<int> parent;  // union-find over cosets
  auto define = [&]() {
    if (parent.size() >= max_cosets)
      throw ResourceError("coset enumeration for " + p.name + " exceeded its table limit", parent.size());
    parent.push_back(static_cast<int>(parent.size()));
    table.resize(table.size() + cols, -1);
    return static_cast<int>(parent.size()) - 1;
  };
  auto find = [&](int c) {
    while (parent[c] != c) {
      parent[c] = parent[parent[c]];
      c = parent[c];
    }
    return c;
  };
  auto T = [&](int c, int col) -> int& { return table[static_cast<std::size_t>(c) * cols + col]; };

  std::vector<std::pair<int, int>> queue;
  auto merge = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    queue.emplace_back(b, a);
  };
  auto coincidence = [&](int a, int b) {
    queue.clear();
    merge(a, b);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      int dead = queue[q].first;
      for (int c = 0; c < cols; ++c) {
        int e = T(dead, c);
        if (e < 0) continue;
        T(dead, c) = -1;
        // remove the back edge
        if (T(e, inv_col(c)) == dead) T(e, inv_col(c)) = -1;
        int r1 = find(dead), e1 = find(e);
        if (T(r1, c) >= 0)
          merge(e1, T(r1, c));
        else if (T(e1, inv_col(c)) >= 0)
          merge(r1, T(e1, inv_col(c)));
        else {
          T(r1, c) = e1;
          T(e1, inv_col(c)) = r1;
        }
      }
    }
    // redirect stale entries lazily: callers use find() on every lookup
  };
  auto get = [&](int c, int col) {
    int e = T(c, col);
    if (e < 0) return -1;
    int r = find(e);
    if (r != e) T(c, col) = r;
    return r;
  };

  auto scan_and_fill = [&](int c, const Word& w) {
    const int len = static_cast<int>(w.size());
    int f = c, i = 0, b = c, j = len - 1;
    while (true) {
      while (i <= j) {
        int nx = get(f, col_of(w[i]));
        if (nx < 0) break;
        f = nx;
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i) {
        int nx = get(b, inv_col(col_of(w[j])));
        if (nx < 0) break;
        b = nx;
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        T(f, col_of(w[i])) = b;
        T(b, inv_col(col_of(w[i]))) = f;
        return;
      }
      int d = define();
      T(f, col_of(w[i])) = d;
      T(d, inv_col(col_of(w[i]))) = f;
    }
  };

  define();
  for (int c = 0; c < static_cast<int>(parent.size()); ++c) {
    if (find(c) != c) continue;
    for (const auto& r : p.relators) {
      scan_and_fill(c, r);
      if (find(c) != c) break;
    }
    if (find(c) != c) continue;
    for (int col = 0; col < cols; ++col)
      if (get(c, col) < 0) {
        int d = define();
        T(c, col) = d;
        T(d, inv_col(col)) = c;
      }
  }
  std::size_t live = 0;
  for (int c = 0; c < static_cast<int>(parent.size()); ++c)
    if (find(c) == c) ++live;
  return live;
}

struct PresentationCheck {
  bool relators_hold = false;
  bool images_generate = false;
  std::size_t group_order = 0;
  std::size_t enumerated_order = 0;
  bool passed() const { return relators_hold && images_generate && group_order == enumerated_order; }
};

// The images satisfy the relators, generate the target group, and the
// presented group has the same order: then the presentation is faithful.
inline PresentationCheck verify_presentation(const Presentation& p, const FiniteGroup& g) {
  PresentationCheck c;
  c.relators_hold = true;
  for (const auto& r : p.relators)
    if (!(evaluate(p, r) == identity(p.family, p.rank))) c.relators_hold = false;
  c.group_order = g.order();
  auto closure = FiniteGroup::closure(p.family, p.rank, p.images, g.order() + 1);
  c.images_generate = closure.size() == g.order();
  for (const auto& x : p.images)
    if (!g.contains(x)) c.images_generate = false;
  c.enumerated_order = todd_coxeter_order(p);
  return c;
}

// G/[G,G] from the exponent-sum matrix of the relators.
inline AbelianGroupType abelianization(const Presentation& p) {
  std::vector<IntVec> rel;
  for (const auto& r : p.relators) {
    IntVec v(p.generator_count);
    for (int l : r) v[std::abs(l) - 1] += l > 0 ? 1 : -1;
    rel.push_back(std::move(v));
  }
  return cokernel_type(rel, std::vector<Integer>(p.generator_count, 0), Coefficients::integers());
}

// ---------------------------------------------------------------------------
// Stored presentations

inline GroupElement transposition_image(int n, int a, int b) {
  std::vector<int> pl(n);
  for (int i = 0; i < n; ++i) pl[i] = i + 1;
  std::swap(pl[a - 1], pl[b - 1]);
  return GroupElement(Family::symmetric(), n, pl);
}

inline GroupElement cycle_image(int n, const std::vector<int>& cyc) {
  std::vector<int> pl(n);
  for (int i = 0; i < n; ++i) pl[i] = i + 1;
  for (std::size_t k = 0; k < cyc.size(); ++k) pl[cyc[k] - 1] = cyc[(k + 1) % cyc.size()];
  return GroupElement(Family::symmetric(), n, pl);
}

// Σ_n: s_i = (i i+1), s_i^2, (s_i s_{i+1})^3, (s_i s_j)^2 for |i−j| > 1.
inline Presentation coxeter_symmetric(int n) {
  Presentation p;
  p.name = "coxeter S" + std::to_string(n);
  p.family = Family::symmetric();
  p.rank = n;
  p.generator_count = std::max(n - 1, 0);
  for (int i = 1; i < n; ++i) p.images.push_back(transposition_image(n, i, i + 1));
  for (int i = 1; i <= p.generator_count; ++i)
    for (int j = i; j <= p.generator_count; ++j) {
      int e = i == j ? 1 : (j == i + 1 ? 3 : 2);
      p.relators.push_back(detail::power({i, j}, e));
    }
  return p;
}

// A_n (n ≥ 3): x_i = (1 2 i+2), x_1^3, x_i^3, (x_i x_j)^2 for i ≠ j.
inline Presentation carmichael_alternating(int n) {
  if (n < 3) throw InvalidInput("alternating presentation needs n >= 3");
  Presentation p;
  p.name = "carmichael A" + std::to_string(n);
  p.family = Family::symmetric();
  p.rank = n;
  p.generator_count = n - 2;
  for (int i = 1; i <= n - 2; ++i) p.images.push_back(cycle_image(n, {1, 2, i + 2}));
  for (int i = 1; i <= n - 2; ++i) p.relators.push_back({i, i, i});
  for (int i = 1; i <= n - 2; ++i)
    for (int j = i + 1; j <= n - 2; ++j) p.relators.push_back(detail::power({i, j}, 2));
  return p;
}

// Z/m generated by an m-cycle of Σ_m.
inline Presentation cyclic(int m) {
  Presentation p;
  p.name = "cyclic " + std::to_string(m);
  p.family = Family::symmetric();
  p.rank = m;
  p.generator_count = 1;
  std::vector<int> cyc(m);
  for (int i = 0; i < m; ++i) cyc[i] = i + 1;
  p.images.push_back(cycle_image(m, cyc));
  p.relators.push_back(detail::power({1}, m));
  return p;
}

// Z/2 × Z/2 = <(1 2), (3 4)> in Σ_4.
inline Presentation klein_four() {
  Presentation p;
  p.name = "klein four";
  p.family = Family::symmetric();
  p.rank = 4;
  p.generator_count = 2;
  p.images = {transposition_image(4, 1, 2), transposition_image(4, 3, 4)};
  p.relators = {{1, 1}, {2, 2}, detail::commutator({1}, {2})};
  return p;
}

inline GroupElement elementary_matrix(int n, int i, int j, int m) {
  std::vector<int> pl(n * n, 0);
  for (int k = 0; k < n; ++k) pl[k * n + k] = 1;
  pl[(i - 1) * n + (j - 1)] = 1;
  return GroupElement(Family::general_linear(m), n, pl);
}

// GL_n(F_2) = SL_n(F_2) for n ≥ 3: Steinberg relations on x_ij = I + E_ij.
// GL_2(F_2) ≅ Σ_3: generated by x_12, x_21 with x^2, y^2, (xy)^3.
inline Presentation steinberg_gl2(int n) {
  Presentation p;
  p.name = "elementary GL" + std::to_string(n) + "(F2)";
  p.family = Family::general_linear(2);
  p.rank = n;
  if (n < 2) throw InvalidInput("elementary presentation needs n >= 2");
  std::vector<std::pair<int, int>> idx;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) idx.emplace_back(i, j);
  p.generator_count = static_cast<int>(idx.size());
  auto letter = [&](int i, int j) {
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (idx[k] == std::pair{i, j}) return static_cast<int>(k) + 1;
    return 0;
  };
  for (auto [i, j] : idx) p.images.push_back(elementary_matrix(n, i, j, 2));
  for (std::size_t k = 1; k <= idx.size(); ++k) p.relators.push_back({int(k), int(k)});
  if (n == 2) {
    p.relators.push_back(detail::power({1, 2}, 3));
    return p;
  }
  for (auto [i, j] : idx)
    for (auto [k, l] : idx) {
      if (std::pair{i, j} >= std::pair{k, l} && !(j == k && i != l)) continue;
      Word a{letter(i, j)}, b{letter(k, l)};
      if (j != k && i != l)
        p.relators.push_back(detail::commutator(a, b));
      else if (j == k && i != l)
        p.relators.push_back(detail::concat({detail::commutator(a, b), Word{-letter(i, l)}}));
    }
  return p;
}

}  // namespace hstab
