#include "grlab/pshseries.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace grlab {

namespace {

using Mono = std::vector<int>;
using Poly = std::map<Mono, long>;

int degree_of(const Partition& la) { return std::accumulate(la.begin(), la.end(), 0); }

void gen_partitions(int k, int maxpart, Partition& cur, std::vector<Partition>& out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(k, maxpart); p >= 1; --p) {
    cur.push_back(p);
    gen_partitions(k - p, p, cur, out);
    cur.pop_back();
  }
}

// Semistandard fillings of la with entries 1..N, summed as monomials.
void fill_ssyt(const Partition& la, int N, std::vector<std::vector<int>>& T, int r, int c, Mono& e, Poly& out) {
  if (r == static_cast<int>(la.size())) {
    out[e] += 1;
    return;
  }
  int nr = c + 1 == la[r] ? r + 1 : r, nc = c + 1 == la[r] ? 0 : c + 1;
  int lo = 1;
  if (c > 0) lo = std::max(lo, T[r][c - 1]);
  if (r > 0) lo = std::max(lo, T[r - 1][c] + 1);
  for (int v = lo; v <= N; ++v) {
    T[r][c] = v;
    ++e[v - 1];
    fill_ssyt(la, N, T, nr, nc, e, out);
    --e[v - 1];
  }
}

const Poly& schur_poly(const Partition& la, int N) {
  static std::map<std::pair<Partition, int>, Poly> cache;
  auto key = std::make_pair(la, N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Poly P;
  Mono e(N, 0);
  if (la.empty()) {
    P[e] = 1;
  } else if (static_cast<int>(la.size()) <= N) {
    std::vector<std::vector<int>> T;
    for (int p : la) T.emplace_back(p, 0);
    fill_ssyt(la, N, T, 0, 0, e, P);
  }
  return cache.emplace(key, std::move(P)).first->second;
}

void add_scaled(Poly& P, const Poly& Q, long c) {
  for (const auto& [m, v] : Q) {
    long& x = P[m];
    x += c * v;
    if (x == 0) P.erase(m);
  }
}

Partition strip(const Mono& m) {
  Partition la;
  for (int x : m)
    if (x > 0) la.push_back(x);
  if (!std::is_sorted(la.rbegin(), la.rend())) throw std::logic_error("leading monomial is not a partition");
  return la;
}

// P symmetric in N variables with N >= its degree.
SymFunc decompose(Poly P, int N) {
  SymFunc out;
  while (!P.empty()) {
    auto lead = P.rbegin();
    Partition la = strip(lead->first);
    long c = lead->second;
    out.terms[la] += c;
    add_scaled(P, schur_poly(la, N), -c);
  }
  out.prune();
  return out;
}

Poly to_poly(const SymFunc& a, int N) {
  Poly P;
  for (const auto& [la, c] : a.terms) add_scaled(P, schur_poly(la, N), c);
  return P;
}

int max_degree(const SymFunc& a) {
  int d = 0;
  for (const auto& [la, c] : a.terms) d = std::max(d, degree_of(la));
  return d;
}

}  // namespace

std::vector<Partition> partitions(int k) {
  std::vector<Partition> out;
  Partition cur;
  gen_partitions(k, k, cur, out);
  return out;
}

long partition_count(int k) { return static_cast<long>(partitions(k).size()); }

SymFunc SymFunc::schur(const Partition& la) {
  SymFunc s;
  s.terms[la] = 1;
  return s;
}

SymFunc& SymFunc::operator+=(const SymFunc& o) {
  for (const auto& [k, v] : o.terms) terms[k] += v;
  prune();
  return *this;
}

void SymFunc::prune() { std::erase_if(terms, [](const auto& kv) { return kv.second == 0; }); }

std::string SymFunc::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [la, c] : terms) {
    if (!first) os << " + ";
    first = false;
    os << c << "*s(";
    for (std::size_t i = 0; i < la.size(); ++i) os << (i ? "," : "") << la[i];
    os << ")";
  }
  if (first) os << "0";
  return os.str();
}

SymFunc sym_mult(const SymFunc& a, const SymFunc& b) {
  int N = max_degree(a) + max_degree(b);
  if (N > kSymDegreeCap) throw std::out_of_range("symmetric function degree cap exceeded");
  N = std::max(N, 1);
  Poly A = to_poly(a, N), B = to_poly(b, N), P;
  for (const auto& [ma, ca] : A)
    for (const auto& [mb, cb] : B) {
      Mono m(N);
      for (int i = 0; i < N; ++i) m[i] = ma[i] + mb[i];
      long& x = P[m];
      x += ca * cb;
      if (x == 0) P.erase(m);
    }
  return decompose(std::move(P), N);
}

SymTensor sym_comult(const SymFunc& a) {
  int N = std::max(max_degree(a), 1);
  if (N > kSymDegreeCap) throw std::out_of_range("symmetric function degree cap exceeded");
  // a(x_1..x_N, y_1..y_N), grouped by the x-part of each monomial
  std::map<Mono, Poly> byx;
  for (const auto& [la, c] : a.terms)
    for (const auto& [m, v] : schur_poly(la, 2 * N)) {
      Mono mx(m.begin(), m.begin() + N), my(m.begin() + N, m.end());
      long& x = byx[mx][my];
      x += c * v;
      if (x == 0) byx[mx].erase(my);
    }
  std::erase_if(byx, [](const auto& kv) { return kv.second.empty(); });
  SymTensor out;
  while (!byx.empty()) {
    auto lead = std::prev(byx.end());
    Partition mu = strip(lead->first);
    Poly cy = lead->second;
    for (const auto& [mx, vx] : schur_poly(mu, N)) {
      Poly& slot = byx[mx];
      add_scaled(slot, cy, -vx);
      if (slot.empty()) byx.erase(mx);
    }
    for (const auto& [nu, c] : decompose(cy, N).terms) out[{mu, nu}] += c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

long sym_form(const SymFunc& a, const SymFunc& b) {
  long s = 0;
  for (const auto& [la, c] : a.terms) {
    auto it = b.terms.find(la);
    if (it != b.terms.end()) s += c * it->second;
  }
  return s;
}

SymFunc h_product(const Partition& mu) {
  SymFunc out = SymFunc::schur({});
  for (int p : mu) out = sym_mult(out, SymFunc::h(p));
  return out;
}

// ------------------------------------------------------------------ cuspidality

int rep_level(const GRContext& C, int n, int label) {
  GroupPtr G = C.group(n);
  const Character& chi = C.character(n, label);
  CycNum deg = chi.degree();
  for (int k = C.ell() - 1; k >= 1; --k) {
    auto K = congruence_kernel(G, k);
    for (int g : K.elems)
      if (chi.at(g) != deg) return k;
  }
  return 0;
}

bool is_strongly_cuspidal(const GRContext& C, int n, int label) {
  int lev = rep_level(C, n, label);
  if (lev == 0) {
    for (int j = 1; j < n; ++j)
      if (!C.pres(n, label, {j, n - j}).is_zero()) return false;
    return true;
  }
  if (lev != C.ell() - 1) throw std::invalid_argument("is_strongly_cuspidal: use a context at ring level l = level + 1");
  RMat M = C.grading(n, label, 1);
  RPoly f = charpoly(M, 1);
  return static_cast<int>(f.size()) == n + 1 && is_irreducible_field(*M.ring, f);
}

// ------------------------------------------------------------------ GS(rho)

PSHReport gs_compare(const GRContext& C, const Basis& rho, int D) {
  PSHReport r;
  r.rho = rho;
  r.D = D;
  r.degree_shift = rho.first;
  if (D > kSymDegreeCap) throw std::out_of_range("gs_compare: degree cap exceeded");
  std::vector<GRElem> pw{GRElem::unit()};
  std::vector<GRElem> h{GRElem::unit(), GRElem::basis(rho.first, rho.second)};
  bool ok = true;
  for (int k = 0; k <= D; ++k) {
    if (k > 0) pw.push_back(C.circle(pw.back(), h[1]));
    r.partition_counts.push_back(partition_count(k));
    r.counts.push_back(static_cast<long>(pw[k].terms.size()));
    std::vector<Basis> cons;
    for (const auto& [b, m] : pw[k].terms) cons.push_back(b);
    r.constituents.push_back(cons);
    if (r.counts[k] != r.partition_counts[k]) ok = false;
    if (k >= 2) {
      GRElem prev = C.circle(h[k - 1], h[1]);
      std::vector<Basis> cand;
      for (const auto& [b, m] : prev.terms)
        if (m == 1 && pw[k].terms.at(b) == 1) cand.push_back(b);
      if (cand.empty() || (k >= 3 && cand.size() != 1)) {
        r.notes.push_back("no distinguished h_" + std::to_string(k) + " constituent");
        ok = false;
        break;
      }
      if (k == 2 && cand.size() > 1) r.notes.push_back("h_2 chosen as the first of " + std::to_string(cand.size()) + " candidates");
      h.push_back(GRElem::basis(cand[0].first, cand[0].second));
    }
    auto parts = partitions(k);
    std::vector<GRElem> hmu;
    for (const auto& mu : parts) {
      GRElem e = GRElem::unit();
      for (int p : mu) e = C.circle(e, h[p]);
      hmu.push_back(std::move(e));
    }
    std::vector<std::vector<long>> g(parts.size(), std::vector<long>(parts.size()));
    std::vector<std::vector<long>> s = g;
    for (std::size_t a = 0; a < parts.size(); ++a)
      for (std::size_t b = 0; b < parts.size(); ++b) {
        g[a][b] = C.form(hmu[a], hmu[b]);
        s[a][b] = sym_form(h_product(parts[a]), h_product(parts[b]));
      }
    if (g != s) ok = false;
    r.gram.push_back(std::move(g));
    r.sym_gram.push_back(std::move(s));
  }
  r.notes.push_back("degree k of GS(rho) lives on GL_" + std::to_string(r.degree_shift) + "k");
  r.consistent = ok;
  return r;
}

// ------------------------------------------------------------------ principal series

PrincipalSeriesReport principal_series_check(const GRContext& C, const std::vector<int>& chi) {
  PrincipalSeriesReport r;
  r.chi = chi;
  int n = static_cast<int>(chi.size());
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(sigma);
  while (std::next_permutation(sigma.begin(), sigma.end()));
  for (const auto& s : perms) {
    bool fix = true;
    for (int i = 0; i < n; ++i)
      if (chi[s[i]] != chi[i]) fix = false;
    r.stabilizer_order += fix;
  }

  std::vector<Basis> factors;
  for (int c : chi) factors.push_back({1, c});
  GRElem p = C.pind(factors);
  r.self_form = C.form(p, p);

  if (n == 1) {
    r.character_identity = r.multiset_identity = true;
    return r;
  }
  const Composition& comp = C.composition(std::vector<int>(n, 1));
  auto X = C.outer_product(chi, comp);
  auto Y = C.pres_values(C.pind_values(X, comp), comp);
  std::vector<CycNum> Z(comp.num_lclasses(), CycNum(0));
  for (int l = 0; l < comp.num_lclasses(); ++l) {
    auto cls = comp.decode(l);
    for (const auto& s : perms) {
      std::vector<int> t(n);
      for (int i = 0; i < n; ++i) t[i] = cls[s[i]];
      Z[l] += X[comp.encode(t)];
    }
  }
  r.character_identity = Y == Z;

  GRTensor lhs, rhs;
  for (const auto& [b, m] : p.terms) {
    GRTensor t = C.pres(b.first, b.second, std::vector<int>(n, 1));
    for (const auto& [k, v] : t.terms) lhs.terms[k] += m * v;
  }
  for (const auto& s : perms) {
    std::vector<Basis> k;
    for (int i = 0; i < n; ++i) k.push_back({1, chi[s[i]]});
    rhs.terms[k] += 1;
  }
  lhs.prune();
  r.multiset_identity = lhs == rhs;
  return r;
}

}  // namespace grlab
