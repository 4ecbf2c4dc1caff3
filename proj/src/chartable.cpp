// Character tables from the class algebra modulo a prime P = 1 mod exp(G).
#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "grlab/repkit.hpp"

namespace grlab {

namespace {

using u64 = uint64_t;
using Poly = std::vector<u64>;  // low degree first

struct Fp {
  u64 P;
  u64 add(u64 a, u64 b) const { return (a + b) % P; }
  u64 sub(u64 a, u64 b) const { return (a + P - b) % P; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % P); }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    a %= P;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, P - 2); }

  void trim(Poly& a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  Poly mod(Poly a, const Poly& g) const {
    trim(a);
    int dg = static_cast<int>(g.size()) - 1;
    u64 li = inv(g.back());
    while (static_cast<int>(a.size()) - 1 >= dg) {
      int da = static_cast<int>(a.size()) - 1;
      u64 c = mul(a.back(), li);
      if (c != 0)
        for (int j = 0; j <= dg; ++j) a[da - dg + j] = sub(a[da - dg + j], mul(c, g[j]));
      a.pop_back();
      trim(a);
    }
    return a;
  }
  Poly divexact(Poly a, const Poly& g) const {
    int dg = static_cast<int>(g.size()) - 1;
    int da = static_cast<int>(a.size()) - 1;
    Poly q(da - dg + 1, 0);
    u64 li = inv(g.back());
    for (int i = da; i >= dg; --i) {
      u64 c = mul(a[i], li);
      q[i - dg] = c;
      if (c)
        for (int j = 0; j <= dg; ++j) a[i - dg + j] = sub(a[i - dg + j], mul(c, g[j]));
    }
    return q;
  }
  Poly mulmod(const Poly& a, const Poly& b, const Poly& g) const {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mul(a[i], b[j])) % P;
    }
    return mod(std::move(r), g);
  }
  Poly powmod(Poly base, u64 e, const Poly& g) const {
    Poly r{1};
    base = mod(std::move(base), g);
    while (e) {
      if (e & 1) r = mulmod(r, base, g);
      base = mulmod(base, base, g);
      e >>= 1;
    }
    return r;
  }
  Poly gcd(Poly a, Poly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      Poly r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.empty()) {
      u64 li = inv(a.back());
      for (auto& x : a) x = mul(x, li);
    }
    return a;
  }
};

bool prime64(u64 n) {
  if (n < 2) return false;
  for (u64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

u64 primitive_root(const Fp& F) {
  std::vector<u64> fac;
  u64 m = F.P - 1;
  for (u64 p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      fac.push_back(p);
      while (m % p == 0) m /= p;
    }
  if (m > 1) fac.push_back(m);
  for (u64 g = 2;; ++g) {
    bool ok = true;
    for (u64 p : fac)
      if (F.pow(g, (F.P - 1) / p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
}

Poly charpoly_mod(std::vector<std::vector<u64>> H, const Fp& F) {
  int n = static_cast<int>(H.size());
  for (int m = 1; m + 1 < n; ++m) {
    int i = m;
    while (i < n && H[i][m - 1] == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(H[i], H[m]);
      for (int k = 0; k < n; ++k) std::swap(H[k][i], H[k][m]);
    }
    u64 inv = F.inv(H[m][m - 1]);
    for (int j = m + 1; j < n; ++j) {
      u64 u = F.mul(H[j][m - 1], inv);
      if (!u) continue;
      for (int k = 0; k < n; ++k) H[j][k] = F.sub(H[j][k], F.mul(u, H[m][k]));
      for (int k = 0; k < n; ++k) H[k][m] = F.add(H[k][m], F.mul(u, H[k][j]));
    }
  }
  std::vector<Poly> p(n + 1);
  p[0] = {1};
  for (int m = 0; m < n; ++m) {
    Poly nx(m + 2, 0);
    for (int k = 0; k <= m; ++k) {
      nx[k + 1] = F.add(nx[k + 1], p[m][k]);
      nx[k] = F.sub(nx[k], F.mul(H[m][m], p[m][k]));
    }
    u64 t = 1;
    for (int i = m - 1; i >= 0; --i) {
      t = F.mul(t, H[i + 1][i]);
      u64 c = F.mul(t, H[i][m]);
      if (!c) continue;
      for (int k = 0; k <= i; ++k) nx[k] = F.sub(nx[k], F.mul(c, p[i][k]));
    }
    p[m + 1] = std::move(nx);
  }
  return p[n];
}

void split_roots(const Fp& F, const Poly& f, std::mt19937_64& rng, std::vector<u64>& out) {
  int deg = static_cast<int>(f.size()) - 1;
  if (deg <= 0) return;
  if (deg == 1) {
    out.push_back(F.mul(F.sub(0, f[0]), F.inv(f[1])));
    return;
  }
  for (;;) {
    u64 a = rng() % F.P;
    Poly h = F.powmod(Poly{a, 1}, (F.P - 1) / 2, f);
    if (h.empty()) h = {0};
    h[0] = F.sub(h[0], 1);
    Poly g = F.gcd(h, f);
    int dg = static_cast<int>(g.size()) - 1;
    if (dg > 0 && dg < deg) {
      split_roots(F, g, rng, out);
      split_roots(F, F.divexact(f, g), rng, out);
      return;
    }
  }
}

// 1-dimensional kernel of A - lambda, normalized at coordinate 0.
bool eigenvector(const std::vector<std::vector<u64>>& A, u64 lambda, const Fp& F, std::vector<u64>& v) {
  int n = static_cast<int>(A.size());
  std::vector<std::vector<u64>> M = A;
  for (int i = 0; i < n; ++i) M[i][i] = F.sub(M[i][i], lambda);
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < n && r < n; ++c) {
    int p = r;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(M[p], M[r]);
    u64 inv = F.inv(M[r][c]);
    for (int k = c; k < n; ++k) M[r][k] = F.mul(M[r][k], inv);
    for (int i = 0; i < n; ++i) {
      if (i == r || M[i][c] == 0) continue;
      u64 f = M[i][c];
      for (int k = c; k < n; ++k)
        if (M[r][k]) M[i][k] = F.sub(M[i][k], F.mul(f, M[r][k]));
    }
    piv.push_back(c);
    ++r;
  }
  if (r != n - 1) return false;
  int fr = 0;
  while (fr < static_cast<int>(piv.size()) && piv[fr] == fr) ++fr;
  v.assign(n, 0);
  v[fr] = 1;
  for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F.sub(0, M[i][fr]);
  if (v[0] == 0) return false;
  u64 s = F.inv(v[0]);
  for (auto& x : v) x = F.mul(x, s);
  return true;
}

std::shared_ptr<CharTable> try_table(const GroupPtr& Gp, u64 P, std::mt19937_64& rng) {
  const MatGroup& G = *Gp;
  int r = G.num_classes();
  int e = G.exponent();
  Fp F{P};
  std::vector<u64> coef(r);
  for (auto& c : coef) c = 1 + rng() % (P - 1);
  std::vector<std::vector<u64>> A(r, std::vector<u64>(r, 0));
  for (int j = 0; j < r; ++j)
    for (int x : G.class_elems(j)) {
      int xi = G.inv(x);
      for (int k = 0; k < r; ++k) {
        int i = G.class_of(G.mul(xi, G.class_rep(k)));
        A[i][k] = F.add(A[i][k], coef[j]);
      }
    }
  Poly cp = charpoly_mod(A, F);
  // all roots simple and in F_P
  Poly xp = F.powmod(Poly{0, 1}, P, cp);
  Poly xx{0, 1};
  if (F.mod(xx, cp) != xp) return nullptr;
  if (F.gcd(cp, [&] {
        Poly d(cp.size() > 1 ? cp.size() - 1 : 1, 0);
        for (std::size_t k = 1; k < cp.size(); ++k) d[k - 1] = F.mul(cp[k], k % P);
        return d;
      }()).size() != 1)
    return nullptr;
  std::vector<u64> roots;
  split_roots(F, cp, rng, roots);
  if (static_cast<int>(roots.size()) != r) return nullptr;

  u64 W = F.pow(primitive_root(F), (P - 1) / e);
  long order = G.order();
  auto T = std::make_shared<CharTable>();
  T->group = Gp;
  T->conductor = e;
  long dsum = 0;
  for (u64 lam : roots) {
    std::vector<u64> w;
    if (!eigenvector(A, lam, F, w)) return nullptr;
    u64 S = 0;
    for (int i = 0; i < r; ++i)
      S = F.add(S, F.mul(F.mul(w[i], w[G.class_inverse(i)]), F.inv(G.class_size(i) % P)));
    if (S == 0) return nullptr;
    u64 d2 = F.mul(order % P, F.inv(S));
    long d = 0;
    for (long t = 1; t * t <= order; ++t)
      if (static_cast<u64>(t * t) == d2) d = t;
    if (d == 0) return nullptr;
    dsum += d * d;
    std::vector<u64> chim(r);
    for (int i = 0; i < r; ++i) chim[i] = F.mul(F.mul(w[i], d % P), F.inv(G.class_size(i) % P));
    std::vector<CycNum> vals(r);
    for (int i = 0; i < r; ++i) {
      int o = G.elem_order(G.class_rep(i));
      u64 wo = F.pow(W, e / o);
      std::vector<u64> chipow(o);
      for (int t = 0; t < o; ++t) chipow[t] = chim[G.power_class(i, t)];
      std::vector<Rat> ex(o);
      long tot = 0;
      u64 oinv = F.inv(o % P);
      for (int s = 0; s < o; ++s) {
        u64 m = 0;
        u64 step = F.pow(F.inv(wo), s);
        u64 cur = 1;
        for (int t = 0; t < o; ++t) {
          m = F.add(m, F.mul(chipow[t], cur));
          cur = F.mul(cur, step);
        }
        m = F.mul(m, oinv);
        if (m > static_cast<u64>(d)) return nullptr;
        tot += static_cast<long>(m);
        if (m) ex[s] = Rat(static_cast<long>(m));
      }
      if (tot != d) return nullptr;
      vals[i] = CycNum::from_exponents(o, ex);
      if (vals[i].is_rational()) vals[i] = CycNum(vals[i].rational_value());
    }
    T->irr.emplace_back(Gp, std::move(vals));
  }
  if (dsum != order) return nullptr;
  auto key_less = [](const Character& a, const Character& b) {
    long da = a.degree().rational_integer_value(), db = b.degree().rational_integer_value();
    if (da != db) return da < db;
    auto triv = [](const Character& x) {
      for (const auto& v : x.vals)
        if (v != CycNum(1)) return false;
      return true;
    };
    if (triv(a) != triv(b)) return triv(a);
    for (std::size_t c = 0; c < a.vals.size(); ++c) {
      int k = a.vals[c].compare(b.vals[c]);
      if (k != 0) return k > 0;  // trivial (all ones) first among degree-1 characters
    }
    return false;
  };
  std::sort(T->irr.begin(), T->irr.end(), key_less);
  for (int a = 0; a < r; ++a)
    for (int b = a; b < r; ++b)
      if (inner_product_cyc(T->irr[a], T->irr[b]) != CycNum(a == b ? 1 : 0))
        throw std::logic_error("character table failed exact orthogonality");
  for (int a = 0; a < r; ++a) T->irr[a].label = "X" + std::to_string(a);
  return T;
}

std::mutex g_tab_mu;
std::map<const MatGroup*, std::pair<GroupPtr, TablePtr>> g_tables;

}  // namespace

TablePtr character_table(const GroupPtr& G, uint64_t seed) {
  {
    std::lock_guard<std::mutex> lk(g_tab_mu);
    auto it = g_tables.find(G.get());
    if (it != g_tables.end()) return it->second.second;
  }
  std::mt19937_64 rng(seed);
  u64 e = static_cast<u64>(G->exponent());
  u64 P = ((1ULL << 30) / e + 1) * e + 1;
  std::shared_ptr<CharTable> T;
  for (int attempt = 0; attempt < 40 && !T; ++attempt) {
    while (!prime64(P)) P += e;
    T = try_table(G, P, rng);
    P += e;
  }
  if (!T) throw std::runtime_error("character table: no suitable prime found");
  std::lock_guard<std::mutex> lk(g_tab_mu);
  g_tables[G.get()] = {G, T};
  return T;
}

}  // namespace grlab
