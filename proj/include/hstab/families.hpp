#pragma once

// Concrete braided monoidal families of finite groups {G_n} with block sum,
// block braidings and stabilization.

#include <hstab/errors.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hstab {

enum class FamilyKind { Symmetric, GeneralLinear, Hyperoctahedral };

struct Family {
  FamilyKind kind = FamilyKind::Symmetric;
  int modulus = 0;  // only meaningful for GeneralLinear

  static Family symmetric() { return {FamilyKind::Symmetric, 0}; }
  static Family hyperoctahedral() { return {FamilyKind::Hyperoctahedral, 0}; }
  static Family general_linear(int m) {
    if (m < 2) throw InvalidInput("general linear family needs modulus >= 2");
    return {FamilyKind::GeneralLinear, m};
  }

  friend bool operator==(const Family&, const Family&) = default;

  std::string name() const {
    switch (kind) {
      case FamilyKind::Symmetric: return "symmetric";
      case FamilyKind::Hyperoctahedral: return "hyperoctahedral";
      case FamilyKind::GeneralLinear: return "gl(" + std::to_string(modulus) + ")";
    }
    return "?";
  }

  std::string unit_object_label() const {
    switch (kind) {
      case FamilyKind::Symmetric: return "one-point set {*}";
      case FamilyKind::Hyperoctahedral: return "signed point {+*,-*}";
      case FamilyKind::GeneralLinear:
        return "rank-1 free module Z/" + std::to_string(modulus);
    }
    return "?";
  }

  // All built-in families are symmetric monoidal.
  bool symmetry_flag() const { return true; }
};

// Accepts the names produced by Family::name() plus a few short forms:
// "symmetric", "hyperoctahedral", "gl(m)", "gl:m", "gl" (m = 2).
inline Family parse_family(const std::string& s) {
  if (s == "symmetric" || s == "sigma" || s == "S") return Family::symmetric();
  if (s == "hyperoctahedral" || s == "B") return Family::hyperoctahedral();
  if (s == "gl") return Family::general_linear(2);
  std::string digits;
  if (s.rfind("gl(", 0) == 0 && s.size() > 4 && s.back() == ')') digits = s.substr(3, s.size() - 4);
  else if (s.rfind("gl:", 0) == 0) digits = s.substr(3);
  if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 6)
    return Family::general_linear(std::stoi(digits));
  throw InvalidInput("unknown family `" + s + "` (symmetric, hyperoctahedral, gl(m))");
}

// An element of G_n. Permutations are one-indexed image sequences, signed
// permutations carry the sign on the image, matrices are row-major with
// entries in {0..m-1}. Equality is payload equality.
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(Family family, int rank, std::vector<int> payload)
      : family_(family), rank_(rank), payload_(std::move(payload)) {}

  const Family& family() const { return family_; }
  int rank() const { return rank_; }
  const std::vector<int>& payload() const { return payload_; }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.family_ == b.family_ && a.rank_ == b.rank_ && a.payload_ == b.payload_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return a.payload_ < b.payload_;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < payload_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(payload_[i]);
    }
    return s + "]";
  }

 private:
  Family family_;
  int rank_ = 0;
  std::vector<int> payload_;
};

struct PayloadHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

namespace detail {

inline void require_same_family(const GroupElement& a, const GroupElement& b) {
  if (!(a.family() == b.family()))
    throw InvalidInput("family mismatch: " + a.family().name() + " vs " +
                       b.family().name());
}

inline int mod(long long a, int m) {
  long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

inline std::vector<int> prime_divisors(int m) {
  std::vector<int> ps;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      ps.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) ps.push_back(m);
  return ps;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t saturating_pow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r = saturating_mul(r, base);
  return r;
}

// Rank of a list of rows over F_p (rows are reduced mod p first).
inline int rank_mod_p(std::vector<std::vector<int>> rows, int p) {
  int rank = 0;
  const int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (auto& r : rows)
    for (auto& x : r) x = mod(x, p);
  for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][c] != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    long long inv = 1;
    {
      // Fermat inverse; p is prime.
      long long b = rows[rank][c], e = p - 2;
      while (e > 0) {
        if (e & 1) inv = inv * b % p;
        b = b * b % p;
        e >>= 1;
      }
    }
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      long long f = rows[r][c] * inv % p;
      for (int k = c; k < cols; ++k)
        rows[r][k] = mod(rows[r][k] - f * rows[rank][k], p);
    }
    ++rank;
  }
  return rank;
}

// Integer determinant by cofactor-free fraction-free elimination (Bareiss).
inline long long determinant(std::vector<long long> a, int n) {
  if (n == 0) return 1;
  long long sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k * n + k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r * n + k] != 0) { swap_row = r; break; }
      if (swap_row < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(a[k * n + c], a[swap_row * n + c]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

inline int det_mod(const std::vector<int>& m, int n, int modulus) {
  std::vector<long long> a(m.begin(), m.end());
  return mod(determinant(std::move(a), n), modulus);
}

inline long long inverse_mod(long long a, long long m) {
  long long old_r = mod(a, static_cast<int>(m)), r = m, old_s = 1, s = 0;
  while (r != 0) {
    long long q = old_r / r;
    long long t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw InvalidInput("element is not a unit modulo " + std::to_string(m));
  return mod(old_s, static_cast<int>(m));
}

}  // namespace detail

inline GroupElement identity(const Family& f, int n) {
  if (n < 0) throw InvalidInput("negative rank");
  std::vector<int> p;
  if (f.kind == FamilyKind::GeneralLinear) {
    p.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) p[i * n + i] = 1;
  } else {
    p.resize(n);
    std::iota(p.begin(), p.end(), 1);
  }
  return GroupElement(f, n, std::move(p));
}

inline bool is_valid(const GroupElement& g) {
  const int n = g.rank();
  const auto& p = g.payload();
  switch (g.family().kind) {
    case FamilyKind::Symmetric:
    case FamilyKind::Hyperoctahedral: {
      if (static_cast<int>(p.size()) != n) return false;
      std::vector<bool> seen(n + 1, false);
      for (int x : p) {
        int a = x < 0 ? -x : x;
        if (a < 1 || a > n || seen[a]) return false;
        if (x < 0 && g.family().kind == FamilyKind::Symmetric) return false;
        seen[a] = true;
      }
      return true;
    }
    case FamilyKind::GeneralLinear: {
      const int m = g.family().modulus;
      if (static_cast<int>(p.size()) != n * n) return false;
      for (int x : p)
        if (x < 0 || x >= m) return false;
      long long d = detail::det_mod(p, n, m);
      return std::gcd(d, static_cast<long long>(m)) == 1;
    }
  }
  return false;
}

// Composition a∘b (b applied first).
inline GroupElement compose(const GroupElement& a, const GroupElement& b) {
  detail::require_same_family(a, b);
  if (a.rank() != b.rank())
    throw InvalidInput("rank mismatch in composition: " + std::to_string(a.rank()) +
                       " vs " + std::to_string(b.rank()));
  const int n = a.rank();
  const auto& pa = a.payload();
  const auto& pb = b.payload();
  std::vector<int> out;
  switch (a.family().kind) {
    case FamilyKind::Symmetric:
      out.resize(n);
      for (int i = 0; i < n; ++i) out[i] = pa[pb[i] - 1];
      break;
    case FamilyKind::Hyperoctahedral:
      out.resize(n);
      for (int i = 0; i < n; ++i) {
        int x = pb[i];
        int img = pa[(x < 0 ? -x : x) - 1];
        out[i] = x < 0 ? -img : img;
      }
      break;
    case FamilyKind::GeneralLinear: {
      const int m = a.family().modulus;
      out.assign(static_cast<std::size_t>(n) * n, 0);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          const long long aik = pa[i * n + k];
          if (aik == 0) continue;
          for (int j = 0; j < n; ++j)
            out[i * n + j] = static_cast<int>((out[i * n + j] + aik * pb[k * n + j]) % m);
        }
      break;
    }
  }
  return GroupElement(a.family(), n, std::move(out));
}

inline GroupElement inverse(const GroupElement& g) {
  const int n = g.rank();
  const auto& p = g.payload();
  std::vector<int> out;
  switch (g.family().kind) {
    case FamilyKind::Symmetric:
      out.resize(n);
      for (int i = 0; i < n; ++i) out[p[i] - 1] = i + 1;
      break;
    case FamilyKind::Hyperoctahedral:
      out.resize(n);
      for (int i = 0; i < n; ++i) {
        int x = p[i];
        if (x > 0) out[x - 1] = i + 1;
        else out[-x - 1] = -(i + 1);
      }
      break;
    case FamilyKind::GeneralLinear: {
      // adj(A) / det(A) over Z/m.
      const int m = g.family().modulus;
      const long long det = detail::det_mod(p, n, m);
      const long long det_inv = detail::inverse_mod(det, m);
      out.assign(static_cast<std::size_t>(n) * n, 0);
      if (n == 1) {
        out[0] = static_cast<int>(det_inv);
        break;
      }
      std::vector<long long> minor(static_cast<std::size_t>(n - 1) * (n - 1));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          int idx = 0;
          for (int r = 0; r < n; ++r) {
            if (r == i) continue;
            for (int c = 0; c < n; ++c) {
              if (c == j) continue;
              minor[idx++] = p[r * n + c];
            }
          }
          long long cof = detail::determinant(minor, n - 1);
          if ((i + j) % 2) cof = -cof;
          // adjugate is the transpose of the cofactor matrix
          out[j * n + i] = detail::mod(detail::mod(cof, m) * det_inv, m);
        }
      break;
    }
  }
  return GroupElement(g.family(), n, std::move(out));
}

// g ⊕ h: g on the first block, h on the last block.
inline GroupElement block_sum(const GroupElement& g, const GroupElement& h) {
  detail::require_same_family(g, h);
  const int n = g.rank(), m = h.rank(), t = n + m;
  const auto& pg = g.payload();
  const auto& ph = h.payload();
  std::vector<int> out;
  if (g.family().kind == FamilyKind::GeneralLinear) {
    out.assign(static_cast<std::size_t>(t) * t, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * t + j] = pg[i * n + j];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out[(n + i) * t + n + j] = ph[i * m + j];
  } else {
    out.reserve(t);
    out.insert(out.end(), pg.begin(), pg.end());
    for (int x : ph) out.push_back(x < 0 ? x - n : x + n);
  }
  return GroupElement(g.family(), t, std::move(out));
}

// Element of G_n realizing the permutation `perm` of slots (one-indexed
// images): a permutation, an unsigned signed-permutation, or the matrix
// sending e_i to e_perm(i).
inline GroupElement slot_permutation(const Family& f, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  if (f.kind != FamilyKind::GeneralLinear) return GroupElement(f, n, perm);
  std::vector<int> out(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) out[(perm[i] - 1) * n + i] = 1;
  return GroupElement(f, n, std::move(out));
}

// φ(b_{n,m}): moves the first n-block past the last m-block.
inline GroupElement braiding(const Family& f, int n, int m) {
  if (n < 0 || m < 0) throw InvalidInput("negative block size");
  std::vector<int> perm(n + m);
  for (int x = 1; x <= n + m; ++x) perm[x - 1] = x <= n ? x + m : x - n;
  return slot_permutation(f, perm);
}

inline GroupElement stabilize(const GroupElement& g) {
  return block_sum(g, identity(g.family(), 1));
}

// |G_n|, saturating at UINT64_MAX.
inline std::uint64_t group_order(const Family& f, int n) {
  std::uint64_t fact = 1;
  for (int i = 2; i <= n; ++i) fact = detail::saturating_mul(fact, i);
  switch (f.kind) {
    case FamilyKind::Symmetric: return fact;
    case FamilyKind::Hyperoctahedral:
      return detail::saturating_mul(fact, detail::saturating_pow(2, n));
    case FamilyKind::GeneralLinear: {
      std::uint64_t order = 1;
      int m = f.modulus;
      for (int p : detail::prime_divisors(m)) {
        int k = 0;
        while (m % p == 0) { m /= p; ++k; }
        std::uint64_t pn = detail::saturating_pow(p, n);
        for (int i = 0; i < n; ++i)
          order = detail::saturating_mul(order, pn - detail::saturating_pow(p, i));
        order = detail::saturating_mul(order, detail::saturating_pow(p, (k - 1) * n * n));
      }
      return order;
    }
  }
  return 0;
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// All elements of G_n in lexicographic payload order.
inline std::vector<GroupElement> enumerate(const Family& f, int n,
                                           std::uint64_t cap = kDefaultEnumerationCap) {
  const std::uint64_t order = group_order(f, n);
  if (order > cap)
    throw ResourceError("enumeration of " + f.name() + " rank " + std::to_string(n) +
                            " exceeds cap " + std::to_string(cap),
                        order);
  std::vector<GroupElement> out;
  out.reserve(order);
  switch (f.kind) {
    case FamilyKind::Symmetric: {
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 1);
      do out.emplace_back(f, n, p);
      while (std::next_permutation(p.begin(), p.end()));
      break;
    }
    case FamilyKind::Hyperoctahedral: {
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 1);
      do {
        for (std::uint32_t signs = 0; signs < (1u << n); ++signs) {
          std::vector<int> q = p;
          for (int i = 0; i < n; ++i)
            if (signs & (1u << i)) q[i] = -q[i];
          out.emplace_back(f, n, std::move(q));
        }
      } while (std::next_permutation(p.begin(), p.end()));
      std::sort(out.begin(), out.end());
      break;
    }
    case FamilyKind::GeneralLinear: {
      const int m = f.modulus;
      const auto primes = detail::prime_divisors(m);
      std::uint64_t rows_total = detail::saturating_pow(m, n);
      std::vector<std::vector<int>> rows;
      std::vector<int> payload;
      // depth-first over rows in ascending order; a partial row set must stay
      // independent modulo every prime divisor of m.
      std::function<void()> rec = [&]() {
        if (static_cast<int>(rows.size()) == n) {
          out.emplace_back(f, n, payload);
          return;
        }
        std::vector<int> row(n, 0);
        for (std::uint64_t code = 0; code < rows_total; ++code) {
          std::uint64_t c = code;
          for (int j = n - 1; j >= 0; --j) {
            row[j] = static_cast<int>(c % m);
            c /= m;
          }
          rows.push_back(row);
          bool ok = true;
          for (int p : primes)
            if (detail::rank_mod_p(rows, p) != static_cast<int>(rows.size())) { ok = false; break; }
          if (ok) {
            payload.insert(payload.end(), row.begin(), row.end());
            rec();
            payload.resize(payload.size() - n);
          }
          rows.pop_back();
        }
      };
      rec();
      break;
    }
  }
  return out;
}

// A fixed small generating set of G_n.
inline std::vector<GroupElement> generators(const Family& f, int n) {
  std::vector<GroupElement> gens;
  auto cycle = [&]() {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i + 2 > n ? 1 : i + 2;
    return p;
  };
  auto transposition = [&]() {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    std::swap(p[0], p[1]);
    return p;
  };
  switch (f.kind) {
    case FamilyKind::Symmetric:
      if (n >= 2) gens.emplace_back(f, n, transposition());
      if (n >= 3) gens.emplace_back(f, n, cycle());
      break;
    case FamilyKind::Hyperoctahedral: {
      if (n >= 1) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 1);
        p[0] = -1;
        gens.emplace_back(f, n, p);
      }
      if (n >= 2) gens.emplace_back(f, n, transposition());
      if (n >= 3) gens.emplace_back(f, n, cycle());
      break;
    }
    case FamilyKind::GeneralLinear: {
      const int m = f.modulus;
      if (n >= 2) {
        GroupElement e = identity(f, n);
        std::vector<int> p = e.payload();
        p[0 * n + 1] = 1;
        gens.emplace_back(f, n, p);
        gens.push_back(slot_permutation(f, cycle()));
      }
      if (n >= 1) {
        for (int u = 2; u < m; ++u) {
          if (std::gcd(u, m) != 1) continue;
          std::vector<int> p = identity(f, n).payload();
          p[0] = u;
          gens.emplace_back(f, n, p);
        }
      }
      break;
    }
  }
  return gens;
}

// ---------------------------------------------------------------------------
// Braid axioms

using BraidingFn = std::function<GroupElement(int, int)>;

struct BraidAxiomReport {
  bool passed = true;
  bool symmetric = true;
  int checks = 0;
  std::string failure;                 // first failed axiom
  std::vector<GroupElement> witness;   // elements exhibiting the failure
};

// Checks unit, hexagon, braid (Yang-Baxter) identities, naturality/conjugation
// and symmetry for all block sizes summing to at most N.
inline BraidAxiomReport check_braid_axioms(const Family& f, int N,
                                           const BraidingFn& braid_override = {}) {
  BraidingFn b = braid_override ? braid_override
                                : BraidingFn([&f](int n, int m) { return braiding(f, n, m); });
  BraidAxiomReport rep;
  auto id = [&](int n) { return identity(f, n); };
  auto fail = [&](std::string what, std::vector<GroupElement> w) {
    if (rep.passed) {
      rep.passed = false;
      rep.failure = std::move(what);
      rep.witness = std::move(w);
    }
  };
  auto tag = [](const char* name, int a, int bb, int c = -1) {
    std::string s = std::string(name) + " (" + std::to_string(a) + "," + std::to_string(bb);
    if (c >= 0) s += "," + std::to_string(c);
    return s + ")";
  };

  for (int n = 0; n <= N; ++n) {
    ++rep.checks;
    if (!(b(n, 0) == id(n)) || !(b(0, n) == id(n)))
      fail(tag("unit", n, 0), {b(n, 0), b(0, n)});
  }
  for (int a = 0; a <= N; ++a)
    for (int bb = 0; a + bb <= N; ++bb)
      for (int c = 0; a + bb + c <= N; ++c) {
        rep.checks += 3;
        // σ_{A⊕B,C} = (σ_{A,C} ⊕ id_B)(id_A ⊕ σ_{B,C})
        GroupElement h1 = compose(block_sum(b(a, c), id(bb)), block_sum(id(a), b(bb, c)));
        if (!(b(a + bb, c) == h1)) fail(tag("hexagon-left", a, bb, c), {b(a + bb, c), h1});
        // σ_{A,B⊕C} = (id_B ⊕ σ_{A,C})(σ_{A,B} ⊕ id_C)
        GroupElement h2 = compose(block_sum(id(bb), b(a, c)), block_sum(b(a, bb), id(c)));
        if (!(b(a, bb + c) == h2)) fail(tag("hexagon-right", a, bb, c), {b(a, bb + c), h2});
        GroupElement lhs = compose(compose(block_sum(b(bb, c), id(a)), block_sum(id(bb), b(a, c))),
                                   block_sum(b(a, bb), id(c)));
        GroupElement rhs = compose(compose(block_sum(id(c), b(a, bb)), block_sum(b(a, c), id(bb))),
                                   block_sum(id(a), b(bb, c)));
        if (!(lhs == rhs)) fail(tag("braid-identity", a, bb, c), {lhs, rhs});
      }
  for (int n = 0; n <= N; ++n)
    for (int m = 0; n + m <= N; ++m) {
      const GroupElement bnm = b(n, m);
      const GroupElement bnm_inv = inverse(bnm);
      ++rep.checks;
      if (!(compose(b(m, n), bnm) == id(n + m))) {
        rep.symmetric = false;
      }
      if (n == 0 || m == 0) continue;
      const auto gs = enumerate(f, n);
      const auto hs = enumerate(f, m);
      for (const auto& g : gs)
        for (const auto& h : hs) {
          ++rep.checks;
          GroupElement conj = compose(compose(bnm, block_sum(g, h)), bnm_inv);
          if (!(conj == block_sum(h, g))) fail(tag("conjugation", n, m), {g, h, conj});
        }
    }
  if (!rep.symmetric && f.symmetry_flag()) fail("symmetry: braiding does not square to identity", {});
  return rep;
}

}  // namespace hstab
