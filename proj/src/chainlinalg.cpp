#include "grlab/chainlinalg.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace grlab {

namespace {

constexpr int kMaxRingSize = 1024;

int ipow(int b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > (1L << 30)) throw std::overflow_error("ring size beyond configured bound");
  }
  return static_cast<int>(r);
}

std::vector<int> poly_mulmod_digits(const std::vector<int>& x, const std::vector<int>& y,
                                    const std::vector<int>& f, int mod) {
  int d = static_cast<int>(f.size());
  std::vector<long> pr(2 * d - 1, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) pr[i + j] = (pr[i + j] + static_cast<long>(x[i]) * y[j]) % mod;
  for (int k = 2 * d - 2; k >= d; --k) {
    long c = pr[k] % mod;
    if (c == 0) continue;
    pr[k] = 0;
    for (int j = 0; j < d; ++j) pr[k - d + j] = ((pr[k - d + j] - c * f[j]) % mod + mod) % mod;
  }
  std::vector<int> r(d);
  for (int j = 0; j < d; ++j) r[j] = static_cast<int>(((pr[j] % mod) + mod) % mod);
  return r;
}

}  // namespace

bool is_prime(long n) {
  if (n < 2) return false;
  for (long k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

ChainRing::ChainRing(ChainRingSpec spec) : spec_(std::move(spec)) {
  const int p = spec_.p, ell = spec_.ell, d = spec_.d;
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (ell < 1 || d < 1) throw std::invalid_argument("ell and d must be positive");
  if (static_cast<int>(spec_.f.size()) != d) throw std::invalid_argument("f must have degree d");
  pl_ = ipow(p, ell);
  q_ = ipow(p, d);
  size_ = ipow(pl_, d);
  if (size_ > kMaxRingSize) throw std::overflow_error("ring size beyond configured bound");
  const int S = size_;
  std::vector<std::vector<int>> dig(S, std::vector<int>(d));
  for (int a = 0; a < S; ++a) {
    int x = a;
    for (int j = 0; j < d; ++j) {
      dig[a][j] = x % pl_;
      x /= pl_;
    }
  }
  auto enc = [&](const std::vector<int>& c) {
    int r = 0;
    for (int j = d - 1; j >= 0; --j) r = r * pl_ + c[j];
    return r;
  };
  add_.assign(S * S, 0);
  mul_.assign(S * S, 0);
  neg_.assign(S, 0);
  inv_.assign(S, -1);
  val_.assign(S, ell);
  tr_.assign(S, 0);
  std::vector<int> fm(d);
  for (int j = 0; j < d; ++j) fm[j] = ((spec_.f[j] % pl_) + pl_) % pl_;
  for (int a = 0; a < S; ++a) {
    std::vector<int> c(d);
    for (int j = 0; j < d; ++j) c[j] = (pl_ - dig[a][j]) % pl_;
    neg_[a] = enc(c);
    for (int b = 0; b < S; ++b) {
      for (int j = 0; j < d; ++j) c[j] = (dig[a][j] + dig[b][j]) % pl_;
      add_[a * S + b] = enc(c);
      mul_[a * S + b] = enc(poly_mulmod_digits(dig[a], dig[b], fm, pl_));
    }
  }
  int one = 1;
  for (int a = 0; a < S; ++a)
    for (int b = 0; b < S; ++b)
      if (mul_[a * S + b] == one) {
        inv_[a] = b;
        break;
      }
  for (int a = 1; a < S; ++a) {
    int v = 0, pv = 1;
    while (v < ell) {
      bool all = true;
      for (int j = 0; j < d; ++j)
        if (dig[a][j] % (pv * p) != 0) all = false;
      if (!all) break;
      ++v;
      pv *= p;
    }
    val_[a] = v;
  }
  std::vector<int> tp(d, 0);
  for (int a = 0; a < S; ++a) {
    long t = 0;
    for (int j = 0; j < d; ++j) {
      std::fill(tp.begin(), tp.end(), 0);
      tp[j] = 1;
      t += poly_mulmod_digits(dig[a], tp, fm, pl_)[j];
    }
    tr_[a] = static_cast<int>(t % pl_);
  }
}

int ChainRing::from_int(long k) const { return static_cast<int>(((k % pl_) + pl_) % pl_); }

int ChainRing::t_power(int j) const {
  int r = 1;
  int t = d() > 1 ? pl_ : from_int(0);
  for (int i = 0; i < j; ++i) r = mul(r, t);
  return r;
}

int ChainRing::digit(int a, int j) const {
  for (int i = 0; i < j; ++i) a /= pl_;
  return a % pl_;
}

int ChainRing::from_digits(const std::vector<int>& c) const {
  int r = 0;
  for (int j = d() - 1; j >= 0; --j) r = r * pl_ + (j < static_cast<int>(c.size()) ? ((c[j] % pl_) + pl_) % pl_ : 0);
  return r;
}

int ChainRing::reduce_code(int a, int i) const {
  int pi = ipow(p(), i);
  int r = 0, mult = 1;
  for (int j = 0; j < d(); ++j) {
    r += (digit(a, j) % pi) * mult;
    mult *= pi;
  }
  return r;
}

int ChainRing::lift_code(int a, int i) const {
  int pi = ipow(p(), i);
  int r = 0, mult = 1;
  for (int j = 0; j < d(); ++j) {
    r += (a % pi) * mult;
    a /= pi;
    mult *= pl_;
  }
  return r;
}

std::string ChainRing::name() const {
  std::ostringstream os;
  if (d() == 1)
    os << "Z/" << pl_;
  else
    os << "GR(" << pl_ << "," << d() << ")";
  return os.str();
}

std::string ChainRing::elem_str(int a) const {
  if (d() == 1) return std::to_string(a);
  std::ostringstream os;
  os << "[";
  for (int j = 0; j < d(); ++j) os << (j ? "," : "") << digit(a, j);
  os << "]";
  return os.str();
}

RingPtr make_ring(int p, int ell, int d) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, RingPtr> cache;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find({p, ell, d});
    if (it != cache.end()) return it->second;
  }
  if (!is_prime(p)) throw std::invalid_argument("make_ring: composite p");
  ChainRingSpec spec;
  spec.p = p;
  spec.ell = ell;
  spec.d = d;
  spec.f.assign(d, 0);
  if (d > 1) {
    ChainRingSpec fs{p, 1, 1, {0}};
    ChainRing Fp(fs);
    long total = 1;
    for (int j = 0; j < d; ++j) total *= p;
    bool found = false;
    for (long v = 0; v < total && !found; ++v) {
      RPoly f(d + 1);
      long x = v;
      for (int j = 0; j < d; ++j) {
        f[j] = static_cast<int>(x % p);
        x /= p;
      }
      f[d] = 1;
      if (is_irreducible_field(Fp, f)) {
        for (int j = 0; j < d; ++j) spec.f[j] = f[j];
        found = true;
      }
    }
    if (!found) throw std::logic_error("no irreducible polynomial found");
  }
  auto R = std::make_shared<const ChainRing>(spec);
  std::lock_guard<std::mutex> lk(mu);
  cache.emplace(std::make_tuple(p, ell, d), R);
  return R;
}

RingPtr ring_at_level(const RingPtr& R, int i) {
  if (i < 1 || i > R->ell()) throw std::invalid_argument("level out of range");
  if (i == R->ell()) return R;
  return make_ring(R->p(), i, R->d());
}

bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a->p() == b->p() && a->ell() == b->ell() && a->d() == b->d());
}

// ---------------------------------------------------------------- RMat

RMat::RMat(RingPtr R, int r, int c) : ring(std::move(R)), rows(r), cols(c), a(r * c, 0) {}

RMat RMat::identity(RingPtr R, int n) {
  RMat I(R, n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

RMat RMat::from_rows(RingPtr R, const std::vector<std::vector<int>>& rs) {
  int r = static_cast<int>(rs.size());
  int c = r ? static_cast<int>(rs[0].size()) : 0;
  RMat M(R, r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = R->from_int(rs[i][j]);
  return M;
}

RMat RMat::operator*(const RMat& o) const {
  if (cols != o.rows) throw std::invalid_argument("shape mismatch");
  if (!same_ring(ring, o.ring)) throw std::invalid_argument("ring mismatch");
  RMat C(ring, rows, o.cols);
  const ChainRing& R = *ring;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < o.cols; ++j) {
      int s = 0;
      for (int k = 0; k < cols; ++k) s = R.add(s, R.mul((*this)(i, k), o(k, j)));
      C(i, j) = s;
    }
  return C;
}

RMat RMat::operator+(const RMat& o) const {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("shape mismatch");
  if (!same_ring(ring, o.ring)) throw std::invalid_argument("ring mismatch");
  RMat C(ring, rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k) C.a[k] = ring->add(a[k], o.a[k]);
  return C;
}

RMat RMat::operator-(const RMat& o) const {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("shape mismatch");
  if (!same_ring(ring, o.ring)) throw std::invalid_argument("ring mismatch");
  RMat C(ring, rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k) C.a[k] = ring->sub(a[k], o.a[k]);
  return C;
}

RMat RMat::scaled(int c) const {
  RMat C(ring, rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k) C.a[k] = ring->mul(c, a[k]);
  return C;
}

bool RMat::operator==(const RMat& o) const {
  return rows == o.rows && cols == o.cols && a == o.a && same_ring(ring, o.ring);
}

bool RMat::operator<(const RMat& o) const { return a < o.a; }

RMat RMat::reduce(int i) const {
  RingPtr Ri = ring_at_level(ring, i);
  RMat C(Ri, rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k) C.a[k] = ring->reduce_code(a[k], i);
  return C;
}

RMat RMat::lift(const RingPtr& to) const {
  if (to->p() != ring->p() || to->d() != ring->d() || to->ell() < ring->ell())
    throw std::invalid_argument("lift target must be a higher level of the same ring");
  RMat C(to, rows, cols);
  for (std::size_t k = 0; k < a.size(); ++k) C.a[k] = to->lift_code(a[k], ring->ell());
  return C;
}

uint64_t RMat::key() const {
  uint64_t k = 0;
  const uint64_t S = static_cast<uint64_t>(ring->size());
  for (int v : a) k = k * S + static_cast<uint64_t>(v);
  return k;
}

RMat RMat::from_key(RingPtr R, int r, int c, uint64_t k) {
  RMat M(R, r, c);
  const uint64_t S = static_cast<uint64_t>(R->size());
  for (int idx = r * c - 1; idx >= 0; --idx) {
    M.a[idx] = static_cast<int>(k % S);
    k /= S;
  }
  return M;
}

std::string RMat::str() const {
  std::ostringstream os;
  os << ring->p() << "," << ring->ell() << "," << ring->d() << "|" << rows << "," << cols << "|";
  for (std::size_t k = 0; k < a.size(); ++k) os << (k ? " " : "") << a[k];
  return os.str();
}

RMat RMat::parse(const std::string& s) {
  int p, ell, d, r, c;
  char ch;
  std::istringstream is(s);
  is >> p >> ch >> ell >> ch >> d >> ch >> r >> ch >> c >> ch;
  if (!is || ch != '|') throw std::invalid_argument("bad matrix literal: " + s);
  RingPtr R = make_ring(p, ell, d);
  RMat M(R, r, c);
  for (auto& x : M.a) {
    is >> x;
    if (!is || x < 0 || x >= R->size()) throw std::invalid_argument("bad matrix entry: " + s);
  }
  return M;
}

RMat block_sum(const RMat& A, const RMat& B) {
  if (!same_ring(A.ring, B.ring)) throw std::invalid_argument("block_sum: ring mismatch");
  RMat C(A.ring, A.rows + B.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) C(A.rows + i, A.cols + j) = B(i, j);
  return C;
}

int mat_trace(const RMat& A) {
  int s = 0;
  for (int i = 0; i < A.rows; ++i) s = A.ring->add(s, A(i, i));
  return s;
}

namespace {

int det_rec(const ChainRing& R, const std::vector<int>& m, int n, std::vector<int>& cols, int row) {
  if (row == n) return 1;
  int s = 0;
  int sign = 0;
  for (std::size_t ci = 0; ci < cols.size(); ++ci) {
    int c = cols[ci];
    int e = m[row * n + c];
    if (e != 0) {
      std::vector<int> rest;
      rest.reserve(cols.size() - 1);
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (k != ci) rest.push_back(cols[k]);
      int sub = det_rec(R, m, n, rest, row + 1);
      int t = R.mul(e, sub);
      s = (sign % 2 == 0) ? R.add(s, t) : R.sub(s, t);
    }
    ++sign;
  }
  return s;
}

RPoly padd(const ChainRing& R, const RPoly& a, const RPoly& b) {
  RPoly c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = R.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  return poly_trim(c);
}

RPoly pneg(const ChainRing& R, RPoly a) {
  for (auto& x : a) x = R.neg(x);
  return a;
}

RPoly pmul(const ChainRing& R, const RPoly& a, const RPoly& b) {
  if (a.empty() || b.empty()) return {};
  RPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = R.add(c[i + j], R.mul(a[i], b[j]));
  return poly_trim(c);
}

RPoly pdet_rec(const ChainRing& R, const std::vector<RPoly>& m, int n, std::vector<int>& cols, int row) {
  if (row == n) return {1};
  RPoly s;
  for (std::size_t ci = 0; ci < cols.size(); ++ci) {
    const RPoly& e = m[row * n + cols[ci]];
    if (e.empty()) continue;
    std::vector<int> rest;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (k != ci) rest.push_back(cols[k]);
    RPoly t = pmul(R, e, pdet_rec(R, m, n, rest, row + 1));
    s = (ci % 2 == 0) ? padd(R, s, t) : padd(R, s, pneg(R, t));
  }
  return s;
}

RPoly prem_field(const ChainRing& F, RPoly a, const RPoly& b) {
  a = poly_trim(a);
  int db = static_cast<int>(b.size()) - 1;
  int lc_inv = F.inv(b.back());
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    int da = static_cast<int>(a.size()) - 1;
    int c = F.mul(a.back(), lc_inv);
    for (int j = 0; j <= db; ++j) a[da - db + j] = F.sub(a[da - db + j], F.mul(c, b[j]));
    a = poly_trim(a);
  }
  return a;
}

}  // namespace

int mat_det(const RMat& A) {
  if (A.rows != A.cols) throw std::invalid_argument("det of non-square matrix");
  std::vector<int> cols(A.cols);
  for (int j = 0; j < A.cols; ++j) cols[j] = j;
  return det_rec(*A.ring, A.a, A.rows, cols, 0);
}

bool mat_is_invertible(const RMat& A) { return A.ring->is_unit(mat_det(A)); }

RMat mat_inverse(const RMat& A) {
  const ChainRing& R = *A.ring;
  int n = A.rows;
  RMat W(A.ring, n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) W(i, j) = A(i, j);
    W(i, n + i) = 1;
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && !R.is_unit(W(p, c))) ++p;
    if (p == n) throw std::domain_error("matrix not invertible over the chain ring");
    for (int k = 0; k < 2 * n; ++k) std::swap(W(p, k), W(c, k));
    int iv = R.inv(W(c, c));
    for (int k = 0; k < 2 * n; ++k) W(c, k) = R.mul(iv, W(c, k));
    for (int r = 0; r < n; ++r) {
      if (r == c || W(r, c) == 0) continue;
      int f = W(r, c);
      for (int k = 0; k < 2 * n; ++k) W(r, k) = R.sub(W(r, k), R.mul(f, W(c, k)));
    }
  }
  RMat I(A.ring, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) I(i, j) = W(i, n + j);
  return I;
}

RMat companion(RingPtr R, const RPoly& f) {
  int n = static_cast<int>(f.size()) - 1;
  RMat C(R, n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) C(i, n - 1) = R->neg(f[i]);
  return C;
}

RPoly poly_trim(RPoly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

RPoly charpoly(const RMat& M, int at_level) {
  if (M.rows != M.cols) throw std::invalid_argument("charpoly of non-square matrix");
  if (at_level < 1 || at_level > M.ring->ell()) throw std::invalid_argument("level out of range");
  RMat Mr = M.reduce(at_level);
  const ChainRing& R = *Mr.ring;
  int n = M.rows;
  std::vector<RPoly> pm(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RPoly e{R.neg(Mr(i, j))};
      if (i == j) e.push_back(1);
      pm[i * n + j] = poly_trim(e);
    }
  std::vector<int> cols(n);
  for (int j = 0; j < n; ++j) cols[j] = j;
  return pdet_rec(R, pm, n, cols, 0);
}

RPoly poly_gcd_field(const ChainRing& F, RPoly a, RPoly b) {
  if (F.ell() != 1) throw std::invalid_argument("gcd needs the residue field");
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    RPoly r = prem_field(F, a, b);
    a = b;
    b = r;
  }
  if (!a.empty()) {
    int iv = F.inv(a.back());
    for (auto& x : a) x = F.mul(iv, x);
  }
  return a;
}

bool is_irreducible_field(const ChainRing& F, const RPoly& f0) {
  RPoly f = poly_trim(f0);
  int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return n == 1;
  const int q = F.size();
  for (int k = 1; k <= n / 2; ++k) {
    long cnt = 1;
    for (int j = 0; j < k; ++j) cnt *= q;
    for (long v = 0; v < cnt; ++v) {
      RPoly g(k + 1);
      long x = v;
      for (int j = 0; j < k; ++j) {
        g[j] = static_cast<int>(x % q);
        x /= q;
      }
      g[k] = 1;
      if (prem_field(F, f, g).empty()) return false;
    }
  }
  return true;
}

std::string poly_str(const ChainRing& R, const RPoly& f) {
  std::ostringstream os;
  bool first = true;
  for (int k = static_cast<int>(f.size()) - 1; k >= 0; --k) {
    if (f[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0 || f[k] != 1) os << R.elem_str(f[k]);
    if (k >= 1) os << "t";
    if (k >= 2) os << "^" << k;
  }
  if (first) os << "0";
  return os.str();
}

bool is_coprime(const RMat& M1, const RMat& M2) {
  if (!same_ring(M1.ring, M2.ring)) throw std::invalid_argument("is_coprime: ring mismatch");
  RingPtr F = ring_at_level(M1.ring, 1);
  RPoly g = poly_gcd_field(*F, charpoly(M1, 1), charpoly(M2, 1));
  return g.size() == 1;
}

// ---------------------------------------------------------------- similarity classes

namespace {

std::vector<std::pair<RMat, RMat>> gl_generators(const RingPtr& R, int n) {
  std::vector<std::pair<RMat, RMat>> gens;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int s = 0; s < R->d(); ++s) {
        RMat E = RMat::identity(R, n), Ei = RMat::identity(R, n);
        int b = R->t_power(s);
        E(i, j) = b;
        Ei(i, j) = R->neg(b);
        gens.emplace_back(E, Ei);
      }
    }
  for (int u = 0; u < R->size(); ++u) {
    if (!R->is_unit(u) || u == 1) continue;
    RMat D = RMat::identity(R, n), Di = RMat::identity(R, n);
    D(0, 0) = u;
    Di(0, 0) = R->inv(u);
    gens.emplace_back(D, Di);
  }
  return gens;
}

uint64_t checked_space(const RingPtr& R, int n, uint64_t cap) {
  uint64_t N = 1;
  for (int k = 0; k < n * n; ++k) {
    N *= static_cast<uint64_t>(R->size());
    if (N > cap) throw std::length_error("matrix enumeration cap exceeded");
  }
  return N;
}

}  // namespace

std::vector<SimClass> similarity_classes(const RingPtr& R, int n, int i, EnumCaps caps) {
  RingPtr Ri = ring_at_level(R, i);
  uint64_t N = checked_space(Ri, n, caps.matrices);
  auto gens = gl_generators(Ri, n);
  std::vector<int> seen(N, 0);
  std::vector<SimClass> out;
  std::vector<uint64_t> queue;
  for (uint64_t k = 0; k < N; ++k) {
    if (seen[k]) continue;
    queue.clear();
    queue.push_back(k);
    seen[k] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      RMat X = RMat::from_key(Ri, n, n, queue[h]);
      for (const auto& [g, gi] : gens) {
        uint64_t y = (g * X * gi).key();
        if (!seen[y]) {
          seen[y] = 1;
          queue.push_back(y);
        }
      }
    }
    SimClass c;
    c.level = i;
    c.n = n;
    c.rep = RMat::from_key(Ri, n, n, k);
    c.orbit_size = static_cast<long>(queue.size());
    out.push_back(c);
  }
  return out;
}

RMat canonical_rep(const RMat& M, EnumCaps caps) {
  auto gens = gl_generators(M.ring, M.rows);
  std::vector<uint64_t> queue{M.key()};
  std::map<uint64_t, char> seen;
  seen[M.key()] = 1;
  uint64_t best = M.key();
  for (std::size_t h = 0; h < queue.size(); ++h) {
    if (queue.size() > caps.group * 10) throw std::length_error("orbit enumeration cap exceeded");
    RMat X = RMat::from_key(M.ring, M.rows, M.cols, queue[h]);
    for (const auto& [g, gi] : gens) {
      uint64_t y = (g * X * gi).key();
      if (seen.emplace(y, 1).second) {
        queue.push_back(y);
        best = std::min(best, y);
      }
    }
  }
  return RMat::from_key(M.ring, M.rows, M.cols, best);
}

// ---------------------------------------------------------------- residue-field linear algebra

namespace {

std::vector<int> field_rref(const ChainRing& F, std::vector<int>& a, int rows, int cols) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    for (int k = 0; k < cols; ++k) std::swap(a[p * cols + k], a[r * cols + k]);
    int iv = F.inv(a[r * cols + c]);
    for (int k = 0; k < cols; ++k) a[r * cols + k] = F.mul(iv, a[r * cols + k]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i * cols + c] == 0) continue;
      int f = a[i * cols + c];
      for (int k = 0; k < cols; ++k) a[i * cols + k] = F.sub(a[i * cols + k], F.mul(f, a[r * cols + k]));
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

}  // namespace

int field_rank(const ChainRing& F, std::vector<int> a, int rows, int cols) {
  if (F.ell() != 1) throw std::invalid_argument("field_rank needs the residue field");
  return static_cast<int>(field_rref(F, a, rows, cols).size());
}

std::vector<std::vector<int>> field_nullspace(const ChainRing& F, std::vector<int> a, int rows, int cols) {
  if (F.ell() != 1) throw std::invalid_argument("field_nullspace needs the residue field");
  auto piv = field_rref(F, a, rows, cols);
  std::vector<char> isp(cols, 0);
  for (int c : piv) isp[c] = 1;
  std::vector<std::vector<int>> out;
  for (int f = 0; f < cols; ++f) {
    if (isp[f]) continue;
    std::vector<int> v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F.neg(a[i * cols + f]);
    out.push_back(v);
  }
  return out;
}

bool uv_pairing_is_perfect(const RMat& M1_, const RMat& M2_) {
  RMat M1 = M1_.reduce(1), M2 = M2_.reduce(1);
  const RingPtr F = M1.ring;
  int n1 = M1.rows, n2 = M2.rows;
  int N = n1 * n2;
  if (N == 0) return true;
  std::vector<int> G(N * N, 0);
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      RMat X(F, n1, n2);
      X(a, b) = 1;
      for (int c = 0; c < n2; ++c)
        for (int e = 0; e < n1; ++e) {
          RMat Y(F, n2, n1);
          Y(c, e) = 1;
          int v = F->sub(mat_trace(M1 * X * Y), mat_trace(Y * X * M2));
          G[(a * n2 + b) * N + (c * n1 + e)] = v;
        }
    }
  return field_rank(*F, G, N, N) == N;
}

// ---------------------------------------------------------------- A/Z splitting

namespace {

RMat regular_rep(const RingPtr& base, const ChainRing& O, int y) {
  int d = O.d();
  RMat M(base, d, d);
  for (int j = 0; j < d; ++j) {
    int col = O.mul(y, O.t_power(j));
    for (int i = 0; i < d; ++i) M(i, j) = O.digit(col, i);
  }
  return M;
}

}  // namespace

RMat AZSplit::embed(const RMat& X) const {
  RMat E(base, m * d, m * d);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      RMat blk = regular_rep(base, *galois, X(a, b));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) E(a * d + i, b * d + j) = blk(i, j);
    }
  return E;
}

RMat AZSplit::unembed(const RMat& X) const {
  if (!in_A(X)) throw std::invalid_argument("unembed: matrix not in A");
  RMat Y(galois, m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::vector<int> c(d);
      for (int i = 0; i < d; ++i) c[i] = X(a * d + i, b * d);
      Y(a, b) = galois->from_digits(c);
    }
  return Y;
}

RMat AZSplit::proj_A(const RMat& X) const {
  int k = static_cast<int>(A_basis.size());
  RMat b(base, k, 1);
  for (int l = 0; l < k; ++l) b(l, 0) = mat_trace(X * A_basis[l]);
  RMat c = gram_inv * b;
  RMat P(base, X.rows, X.cols);
  for (int l = 0; l < k; ++l) P = P + A_basis[l].scaled(c(l, 0));
  return P;
}

RMat AZSplit::proj_Z(const RMat& X) const { return X - proj_A(X); }

AZSplit az_split(const RingPtr& base, int m, int d) {
  if (base->d() != 1) throw std::invalid_argument("az_split: base ring must be Z/p^l");
  AZSplit S;
  S.base = base;
  S.galois = make_ring(base->p(), base->ell(), d);
  S.m = m;
  S.d = d;
  int n = m * d;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int j = 0; j < d; ++j) {
        RMat X(S.galois, m, m);
        X(a, b) = S.galois->t_power(j);
        S.A_basis.push_back(S.embed(X));
      }
  int k = static_cast<int>(S.A_basis.size());
  RMat G(base, k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) G(i, j) = mat_trace(S.A_basis[i] * S.A_basis[j]);
  S.gram_inv = mat_inverse(G);
  RingPtr F = ring_at_level(base, 1);
  int want = n * n - k;
  std::vector<int> rowsF;
  int have = 0;
  for (int i = 0; i < n && have < want; ++i)
    for (int j = 0; j < n && have < want; ++j) {
      RMat E(base, n, n);
      E(i, j) = 1;
      RMat z = S.proj_Z(E);
      RMat zb = z.reduce(1);
      std::vector<int> trial = rowsF;
      trial.insert(trial.end(), zb.a.begin(), zb.a.end());
      if (field_rank(*F, trial, have + 1, n * n) == have + 1) {
        rowsF = trial;
        S.Z_basis.push_back(z);
        ++have;
      }
    }
  if (have != want) throw std::logic_error("az_split: Z basis incomplete");
  return S;
}

// ---------------------------------------------------------------- lift_to_galois

namespace {

RMat poly_eval(const RMat& X, const RPoly& f) {
  RMat R(X.ring, X.rows, X.cols);
  for (int k = static_cast<int>(f.size()) - 1; k >= 0; --k)
    R = R * X + RMat::identity(X.ring, X.rows).scaled(f[k]);
  return R;
}

RPoly lift_poly(const ChainRing& R, const std::vector<int>& f) {
  RPoly g(f.size() + 1);
  for (std::size_t j = 0; j < f.size(); ++j) g[j] = R.from_int(f[j]);
  g[f.size()] = 1;
  return g;
}

bool zero_mat(const RMat& X) {
  return std::all_of(X.a.begin(), X.a.end(), [](int v) { return v == 0; });
}

}  // namespace

GaloisLift lift_to_galois(const RMat& M0, int d) {
  const RingPtr base = M0.ring;
  if (base->d() != 1) throw std::invalid_argument("lift_to_galois: base ring must be Z/p^l");
  int n = M0.rows;
  if (n % d != 0) throw std::invalid_argument("lift_to_galois: size not divisible by d");
  int m = n / d;
  const int p = base->p(), ell = base->ell();
  RingPtr Fp = ring_at_level(base, 1);
  RingPtr Og = make_ring(p, ell, d);
  RPoly fbar = lift_poly(*Fp, Og->spec().f);
  RPoly fm{1};
  for (int k = 0; k < m; ++k) {
    RPoly t(fm.size() + fbar.size() - 1, 0);
    for (std::size_t i = 0; i < fm.size(); ++i)
      for (std::size_t j = 0; j < fbar.size(); ++j) t[i + j] = Fp->add(t[i + j], Fp->mul(fm[i], fbar[j]));
    fm = t;
  }
  RPoly cp = charpoly(M0, 1);
  if (cp != fm)
    throw std::domain_error("lift_to_galois: characteristic polynomial " + poly_str(*Fp, cp) +
                            " is not a power of " + poly_str(*Fp, fbar));
  AZSplit S = az_split(base, m, d);
  AZSplit S1 = az_split(Fp, m, d);
  RMat Mb = M0.reduce(1);
  // semisimple part by Newton iteration on fbar
  RPoly dfb(fbar.size() - 1);
  for (std::size_t j = 1; j < fbar.size(); ++j) dfb[j - 1] = Fp->mul(Fp->from_int(static_cast<long>(j)), fbar[j]);
  RMat s = Mb;
  for (int it = 0; it < 64; ++it) {
    RMat fs = poly_eval(s, fbar);
    if (zero_mat(fs)) break;
    s = s - fs * mat_inverse(poly_eval(s, dfb));
  }
  if (!zero_mat(poly_eval(s, fbar))) throw std::logic_error("semisimple part did not converge");
  // basis s^j v_a
  RMat P(Fp, n, n);
  int filled = 0;
  for (int e = 0; e < n && filled < n; ++e) {
    RMat v(Fp, n, 1);
    v(e, 0) = 1;
    RMat trialP = P;
    RMat w = v;
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < n; ++i) trialP(i, filled + j) = w(i, 0);
      w = s * w;
    }
    if (field_rank(*Fp, trialP.a, n, n) == filled + d) {
      P = trialP;
      filled += d;
    }
  }
  if (filled != n) throw std::logic_error("lift_to_galois: basis construction failed");
  RMat g = mat_inverse(P).lift(base);
  RMat M = g * M0 * mat_inverse(g);
  if (!S1.in_A(M.reduce(1))) throw std::logic_error("lift_to_galois: level-1 conjugation failed");
  int pw = 1;
  for (int i = 2; i <= ell; ++i) {
    pw *= p;  // p^{i-1}
    RMat w = S.proj_Z(M);
    bool done = true;
    for (int v : w.a)
      if (base->val(v) < i) done = false;
    if (done) continue;
    RMat wb(Fp, n, n);
    for (int k = 0; k < n * n; ++k) wb.a[k] = Fp->from_int((w.a[k] / pw) % p);
    RMat Mbar = M.reduce(1);
    // columns: proj_Z(E M - M E) over F_p, unknown y; rhs -wbar
    int N = n * n;
    std::vector<int> sys(N * (N + 1), 0);
    for (int k = 0; k < N; ++k) {
      RMat E(Fp, n, n);
      E.a[k] = 1;
      RMat img = S1.proj_Z(E * Mbar - Mbar * E);
      for (int r = 0; r < N; ++r) sys[r * (N + 1) + k] = img.a[r];
    }
    for (int r = 0; r < N; ++r) sys[r * (N + 1) + N] = Fp->neg(wb.a[r]);
    auto ns = field_nullspace(*Fp, sys, N, N + 1);
    const std::vector<int>* sol = nullptr;
    for (const auto& v : ns)
      if (v[N] == 1) {
        sol = &v;
        break;
      }
    if (!sol) {
      for (const auto& v : ns)
        if (v[N] != 0) {
          sol = &v;
          break;
        }
    }
    if (!sol) throw std::logic_error("lift_to_galois: ad equation unsolvable");
    int sc = Fp->inv((*sol)[N]);
    RMat y(base, n, n);
    for (int k = 0; k < N; ++k) y.a[k] = base->from_int(static_cast<long>(Fp->mul(sc, (*sol)[k])) * pw);
    RMat h = RMat::identity(base, n) + y;
    M = h * M * mat_inverse(h);
    g = h * g;
  }
  GaloisLift out;
  out.g = g;
  out.B = M;
  if (!S.in_A(M)) throw std::logic_error("lift_to_galois: result not in A");
  out.B_galois = S.unembed(M);
  // ad_{B bar} injective on Z bar
  RMat Bb = M.reduce(1);
  int zd = static_cast<int>(S1.Z_basis.size());
  std::vector<int> imgs;
  for (const auto& z : S1.Z_basis) {
    RMat c = z * Bb - Bb * z;
    imgs.insert(imgs.end(), c.a.begin(), c.a.end());
  }
  bool inj = zd == 0 || field_rank(*Fp, imgs, zd, n * n) == zd;
  bool brute = true;
  uint64_t space = 1;
  bool small = true;
  for (int k = 0; k < n * n; ++k) {
    space *= static_cast<uint64_t>(base->size());
    if (space > (1u << 16)) small = false;
  }
  if (small) {
    for (uint64_t k = 0; k < space; ++k) {
      RMat X = RMat::from_key(base, n, n, k);
      if (X * M == M * X && !S.in_A(X)) {
        brute = false;
        break;
      }
    }
  }
  out.centralizer_in_A = inj && brute;
  return out;
}

int phi_exponent(const RMat& xi, const RMat& a) {
  if (!same_ring(xi.ring, a.ring)) throw std::invalid_argument("phi_exponent: ring mismatch");
  const ChainRing& R = *xi.ring;
  return R.trace(mat_trace(xi * a));
}

}  // namespace grlab
