#include "grlab/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace grlab {

long euler_phi(long m) {
  long r = m;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      r -= r / p;
    }
  }
  if (m > 1) r -= r / m;
  return r;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

namespace {

std::vector<long> poly_divexact(std::vector<long> a, const std::vector<long>& b) {
  // b monic
  int db = static_cast<int>(b.size()) - 1;
  int da = static_cast<int>(a.size()) - 1;
  std::vector<long> q(da - db + 1, 0);
  for (int i = da; i >= db; --i) {
    long c = a[i];
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  for (int i = 0; i < db; ++i)
    if (a[i] != 0) throw std::logic_error("cyclotomic polynomial division not exact");
  return q;
}

std::unique_ptr<CycField> build_field(int m) {
  auto F = std::make_unique<CycField>();
  F->m = m;
  F->phi = static_cast<int>(euler_phi(m));
  std::vector<long> num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (int d = 1; d < m; ++d)
    if (m % d == 0) num = poly_divexact(num, cyc_field(d).poly);
  F->poly = num;
  int phi = F->phi;
  F->ored.assign(m, std::vector<long>(phi, 0));
  std::vector<long> cur(phi, 0);
  cur[0] = 1;
  for (int k = 0; k < m; ++k) {
    F->ored[k] = cur;
    long top = cur[phi - 1];
    for (int j = phi - 1; j > 0; --j) cur[j] = cur[j - 1];
    cur[0] = 0;
    if (top != 0)
      for (int j = 0; j < phi; ++j) cur[j] -= top * F->poly[j];
  }
  return F;
}

std::mutex g_field_mu;
std::map<int, std::unique_ptr<CycField>> g_fields;

Rat rat_from_string(const std::string& s) {
  Rat r(s);
  r.canonicalize();
  return r;
}

}  // namespace

const CycField& cyc_field(int m) {
  if (m < 1) throw std::invalid_argument("conductor must be positive");
  {
    std::lock_guard<std::mutex> lk(g_field_mu);
    auto it = g_fields.find(m);
    if (it != g_fields.end()) return *it->second;
  }
  std::unique_ptr<CycField> F;
  if (m == 1) {
    F = std::make_unique<CycField>();
    F->poly = {-1, 1};
    F->ored = {{1}};
  } else {
    F = build_field(m);
  }
  std::lock_guard<std::mutex> lk(g_field_mu);
  auto [it, ins] = g_fields.emplace(m, std::move(F));
  return *it->second;
}

CycNum::CycNum() : m_(1), c_(1, Rat(0)) {}
CycNum::CycNum(long v) : m_(1), c_(1, Rat(v)) {}
CycNum::CycNum(const Rat& v) : m_(1), c_(1, v) { c_[0].canonicalize(); }
CycNum::CycNum(int m, std::vector<Rat> coeffs) : m_(m), c_(std::move(coeffs)) {
  if (static_cast<long>(c_.size()) != euler_phi(m))
    throw std::invalid_argument("coefficient count must equal phi(m)");
  for (auto& x : c_) x.canonicalize();
}

CycNum CycNum::zeta(int m, long k) {
  const CycField& F = cyc_field(m);
  long e = ((k % m) + m) % m;
  std::vector<Rat> c(F.phi);
  for (int j = 0; j < F.phi; ++j) c[j] = F.ored[e][j];
  return CycNum(m, std::move(c));
}

CycNum CycNum::from_exponents(int m, const std::vector<Rat>& e) {
  const CycField& F = cyc_field(m);
  std::vector<Rat> c(F.phi);
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (sgn(e[k]) == 0) continue;
    const auto& row = F.ored[k % m];
    for (int j = 0; j < F.phi; ++j)
      if (row[j] != 0) c[j] += e[k] * row[j];
  }
  return CycNum(m, std::move(c));
}

CycNum CycNum::embed(int M) const {
  if (M == m_) return *this;
  if (M % m_ != 0) throw std::invalid_argument("embed: conductor does not divide target");
  std::vector<Rat> e(M);
  long s = M / m_;
  for (std::size_t j = 0; j < c_.size(); ++j) e[(j * s) % M] = c_[j];
  return from_exponents(M, e);
}

void CycNum::lift_pair(CycNum& o) {
  if (m_ == o.m_) return;
  int M = static_cast<int>(lcm_long(m_, o.m_));
  if (m_ != M) *this = embed(M);
  if (o.m_ != M) o = o.embed(M);
}

CycNum CycNum::conj() const { return galois(-1); }

CycNum CycNum::galois(long k) const {
  if (m_ <= 2) return *this;
  std::vector<Rat> e(m_);
  long kk = ((k % m_) + m_) % m_;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (sgn(c_[j]) == 0) continue;
    e[(j * kk) % m_] += c_[j];
  }
  return from_exponents(m_, e);
}

bool CycNum::is_zero() const {
  for (const auto& x : c_)
    if (sgn(x) != 0) return false;
  return true;
}

bool CycNum::is_rational() const {
  for (std::size_t j = 1; j < c_.size(); ++j)
    if (sgn(c_[j]) != 0) return false;
  return true;
}

Rat CycNum::rational_value() const {
  if (!is_rational()) throw std::domain_error("not rational: " + str());
  return c_[0];
}

long CycNum::rational_integer_value() const {
  Rat r = rational_value();
  if (r.get_den() != 1) throw std::domain_error("not an integer: " + str());
  if (!r.get_num().fits_slong_p()) throw std::overflow_error("integer too large");
  return r.get_num().get_si();
}

CycNum& CycNum::operator+=(const CycNum& o) {
  if (m_ == o.m_) {
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
  }
  CycNum b = o;
  lift_pair(b);
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += b.c_[j];
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) {
  if (m_ == o.m_) {
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
  }
  CycNum b = o;
  lift_pair(b);
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= b.c_[j];
  return *this;
}

CycNum CycNum::operator-() const {
  CycNum r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

CycNum& CycNum::operator*=(const CycNum& o) {
  if (o.m_ == 1) {
    for (auto& x : c_) x *= o.c_[0];
    return *this;
  }
  if (m_ == 1) {
    Rat s = c_[0];
    *this = o;
    for (auto& x : c_) x *= s;
    return *this;
  }
  CycNum b = o;
  lift_pair(b);
  const CycField& F = cyc_field(m_);
  int phi = F.phi;
  std::vector<Rat> prod(2 * phi - 1);
  for (int i = 0; i < phi; ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (int j = 0; j < phi; ++j)
      if (sgn(b.c_[j]) != 0) prod[i + j] += c_[i] * b.c_[j];
  }
  for (int k = phi; k < 2 * phi - 1; ++k) {
    if (sgn(prod[k]) == 0) continue;
    const auto& row = F.ored[k % m_];
    for (int j = 0; j < phi; ++j)
      if (row[j] != 0) prod[j] += prod[k] * row[j];
  }
  prod.resize(phi);
  c_ = std::move(prod);
  return *this;
}

CycNum CycNum::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  if (m_ == 1) return CycNum(Rat(1) / c_[0]);
  const int phi = static_cast<int>(c_.size());
  // columns: coefficients of this * zeta^j; solve A x = e_0
  std::vector<std::vector<Rat>> A(phi, std::vector<Rat>(phi + 1));
  for (int j = 0; j < phi; ++j) {
    CycNum col = *this * zeta(m_, j);
    for (int i = 0; i < phi; ++i) A[i][j] = col.c_[i];
  }
  A[0][phi] = 1;
  for (int c = 0; c < phi; ++c) {
    int piv = c;
    while (piv < phi && sgn(A[piv][c]) == 0) ++piv;
    if (piv == phi) throw std::logic_error("singular multiplication matrix");
    std::swap(A[piv], A[c]);
    Rat inv = Rat(1) / A[c][c];
    for (int k = c; k <= phi; ++k) A[c][k] *= inv;
    for (int r = 0; r < phi; ++r) {
      if (r == c || sgn(A[r][c]) == 0) continue;
      Rat f = A[r][c];
      for (int k = c; k <= phi; ++k) A[r][k] -= f * A[c][k];
    }
  }
  std::vector<Rat> x(phi);
  for (int i = 0; i < phi; ++i) x[i] = A[i][phi];
  return CycNum(m_, std::move(x));
}

CycNum& CycNum::operator/=(const CycNum& o) {
  if (o.m_ == 1) {
    if (sgn(o.c_[0]) == 0) throw std::domain_error("division by zero");
    for (auto& x : c_) x /= o.c_[0];
    return *this;
  }
  return *this *= o.inverse();
}

bool operator==(const CycNum& a, const CycNum& b) {
  if (a.m_ == b.m_) return a.c_ == b.c_;
  CycNum x = a, y = b;
  x.lift_pair(y);
  return x.c_ == y.c_;
}

int CycNum::compare(const CycNum& o) const {
  CycNum x = *this, y = o;
  x.lift_pair(y);
  for (std::size_t j = 0; j < x.c_.size(); ++j) {
    int c = cmp(x.c_[j], y.c_[j]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return 0;
}

std::string CycNum::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (sgn(c_[j]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[j].get_str();
    if (j == 1) os << "*z";
    if (j > 1) os << "*z^" << j;
  }
  if (first) os << "0";
  os << "@" << m_;
  return os.str();
}

CycNum CycNum::parse(const std::string& s) {
  auto at = s.rfind('@');
  if (at == std::string::npos) throw std::invalid_argument("missing conductor: " + s);
  int m = std::stoi(s.substr(at + 1));
  std::vector<Rat> e(m);
  std::string body = s.substr(0, at);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t nxt = body.find(" + ", pos);
    std::string term = body.substr(pos, nxt == std::string::npos ? std::string::npos : nxt - pos);
    std::size_t star = term.find("*z");
    long k = 0;
    std::string coef = term;
    if (star != std::string::npos) {
      coef = term.substr(0, star);
      std::string rest = term.substr(star + 2);
      k = rest.empty() ? 1 : std::stol(rest.substr(1));
    }
    e[k % m] += rat_from_string(coef);
    if (nxt == std::string::npos) break;
    pos = nxt + 3;
  }
  return from_exponents(m, e);
}

}  // namespace grlab
