#include "grlab/groupkit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace grlab {

namespace {

constexpr long kDenseTableMax = 4096;

uint64_t encode(const int* m, int nn, uint64_t S) {
  uint64_t k = 0;
  for (int i = 0; i < nn; ++i) k = k * S + static_cast<uint64_t>(m[i]);
  return k;
}

inline uint64_t hmix(uint64_t k) { return k * 0x9E3779B97F4A7C15ULL; }

std::vector<RMat> gl_gens(const RingPtr& R, int n) {
  std::vector<RMat> gens;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int s = 0; s < R->d(); ++s) {
        RMat E = RMat::identity(R, n);
        E(i, j) = R->t_power(s);
        gens.push_back(E);
      }
    }
  for (int u = 0; u < R->size(); ++u) {
    if (!R->is_unit(u) || u == 1) continue;
    RMat D = RMat::identity(R, n);
    D(0, 0) = u;
    gens.push_back(D);
  }
  return gens;
}

}  // namespace

long gl_order_formula(int q, int ell, int n) {
  long r = 1;
  for (int k = 0; k < (ell - 1) * n * n; ++k) r *= q;
  long qn = 1;
  for (int k = 0; k < n; ++k) qn *= q;
  long qi = 1;
  for (int i = 0; i < n; ++i) {
    r *= (qn - qi);
    qi *= q;
  }
  return r;
}

RMat MatGroup::element(int g) const {
  RMat M(ring_, n_, n_);
  std::copy(mat(g), mat(g) + n_ * n_, M.a.begin());
  return M;
}

int MatGroup::find_raw(const int* m) const {
  return find(encode(m, n_ * n_, static_cast<uint64_t>(ring_->size())));
}

int MatGroup::find(uint64_t k) const {
  std::size_t mask = hkeys_.size() - 1;
  std::size_t h = hmix(k) >> hshift_;
  while (true) {
    if (hvals_[h] < 0) return -1;
    if (hkeys_[h] == k) return hvals_[h];
    h = (h + 1) & mask;
  }
}

int MatGroup::mul(int a, int b) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * keys_.size() + b];
  const ChainRing& R = *ring_;
  const int n = n_;
  const int* A = mat(a);
  const int* B = mat(b);
  int C[64];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int s = 0;
      for (int k = 0; k < n; ++k) s = R.add(s, R.mul(A[i * n + k], B[k * n + j]));
      C[i * n + j] = s;
    }
  int r = find_raw(C);
  if (r < 0) throw std::logic_error("group not closed under multiplication");
  return r;
}

int MatGroup::power(int g, long k) const {
  long o = ord_[g];
  k = ((k % o) + o) % o;
  int r = identity_, b = g;
  while (k > 0) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

void MatGroup::build(std::vector<uint64_t> keys) {
  if (n_ > 8) throw std::invalid_argument("matrix size too large");
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  keys_ = std::move(keys);
  const int N = static_cast<int>(keys_.size());
  const int nn = n_ * n_;
  mats_.assign(static_cast<std::size_t>(N) * nn, 0);
  for (int g = 0; g < N; ++g) {
    RMat M = RMat::from_key(ring_, n_, n_, keys_[g]);
    std::copy(M.a.begin(), M.a.end(), mats_.begin() + static_cast<std::size_t>(g) * nn);
  }
  std::size_t cap = 1;
  int bits = 0;
  while (cap < static_cast<std::size_t>(2 * N + 2)) {
    cap <<= 1;
    ++bits;
  }
  hshift_ = 64 - bits;
  hkeys_.assign(cap, 0);
  hvals_.assign(cap, -1);
  for (int g = 0; g < N; ++g) {
    std::size_t h = hmix(keys_[g]) >> hshift_;
    while (hvals_[h] >= 0) h = (h + 1) & (cap - 1);
    hkeys_[h] = keys_[g];
    hvals_[h] = g;
  }
  identity_ = find(RMat::identity(ring_, n_).key());
  if (identity_ < 0) throw std::invalid_argument("identity missing from group");
  if (N <= kDenseTableMax) {
    std::vector<int> T(static_cast<std::size_t>(N) * N);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        const ChainRing& R = *ring_;
        const int* A = mat(a);
        const int* B = mat(b);
        int C[64];
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j) {
            int s = 0;
            for (int k = 0; k < n_; ++k) s = R.add(s, R.mul(A[i * n_ + k], B[k * n_ + j]));
            C[i * n_ + j] = s;
          }
        int r = find_raw(C);
        if (r < 0) throw std::invalid_argument("element set not closed: " + name_);
        T[static_cast<std::size_t>(a) * N + b] = r;
      }
    table_ = std::move(T);
  }
  inv_.assign(N, -1);
  ord_.assign(N, 0);
  long ex = 1;
  for (int g = 0; g < N; ++g) {
    int prev = identity_, x = g, k = 1;
    while (x != identity_) {
      prev = x;
      x = mul(x, g);
      ++k;
      if (k > N + 1) throw std::invalid_argument("element set not closed: " + name_);
    }
    ord_[g] = k;
    inv_[g] = prev;
    ex = std::lcm(ex, static_cast<long>(k));
  }
  exponent_ = static_cast<int>(ex);
}

namespace {

std::vector<int> closure(const MatGroup& G, const std::vector<int>& gens) {
  std::vector<char> in(G.order(), 0);
  std::vector<int> list{G.identity()};
  in[G.identity()] = 1;
  for (std::size_t h = 0; h < list.size(); ++h)
    for (int s : gens) {
      int y = G.mul(list[h], s);
      if (!in[y]) {
        in[y] = 1;
        list.push_back(y);
      }
    }
  return list;
}

}  // namespace

void MatGroup::compute_classes() {
  const int N = order();
  class_of_.assign(N, -1);
  std::vector<std::vector<int>> raw;
  std::vector<int> queue;
  for (int x = 0; x < N; ++x) {
    if (class_of_[x] >= 0) continue;
    int id = static_cast<int>(raw.size());
    queue.assign(1, x);
    class_of_[x] = id;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int s : gens_) {
        int y = conj(s, queue[h]);
        if (class_of_[y] < 0) {
          class_of_[y] = id;
          queue.push_back(y);
        }
      }
    std::sort(queue.begin(), queue.end());
    raw.push_back(queue);
  }
  // order classes by element order, then by minimal key (elements are key-sorted)
  std::vector<int> perm(raw.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    int oa = ord_[raw[a][0]], ob = ord_[raw[b][0]];
    if (oa != ob) return oa < ob;
    return raw[a][0] < raw[b][0];
  });
  std::vector<int> newid(raw.size());
  class_elems_.clear();
  reps_.clear();
  for (std::size_t k = 0; k < perm.size(); ++k) {
    newid[perm[k]] = static_cast<int>(k);
    class_elems_.push_back(raw[perm[k]]);
    reps_.push_back(raw[perm[k]][0]);
  }
  for (int x = 0; x < N; ++x) class_of_[x] = newid[class_of_[x]];
  class_inv_.resize(reps_.size());
  for (std::size_t c = 0; c < reps_.size(); ++c) class_inv_[c] = class_of_[inv_[reps_[c]]];
}

std::shared_ptr<MatGroup> MatGroup::general_linear(const RingPtr& R, int n, EnumCaps caps) {
  long expect = gl_order_formula(R->q(), R->ell(), n);
  if (expect > static_cast<long>(caps.group)) throw std::length_error("group order cap exceeded");
  uint64_t N = 1;
  for (int k = 0; k < n * n; ++k) {
    N *= static_cast<uint64_t>(R->size());
    if (N > caps.matrices * 4) throw std::length_error("matrix enumeration cap exceeded");
  }
  std::vector<uint64_t> keys;
  keys.reserve(expect);
  RingPtr F = ring_at_level(R, 1);
  RMat Mb(F, n, n);
  for (uint64_t k = 0; k < N; ++k) {
    RMat M = RMat::from_key(R, n, n, k);
    for (int e = 0; e < n * n; ++e) Mb.a[e] = R->reduce_code(M.a[e], 1);
    if (F->is_unit(mat_det(Mb))) keys.push_back(k);
  }
  if (static_cast<long>(keys.size()) != expect) throw std::logic_error("GL order mismatch");
  std::shared_ptr<MatGroup> G(new MatGroup());
  G->ring_ = R;
  G->n_ = n;
  G->name_ = "GL_" + std::to_string(n) + "(" + R->name() + ")";
  G->build(std::move(keys));
  for (const auto& g : gl_gens(R, n)) G->gens_.push_back(G->find(g));
  if (static_cast<int>(closure(*G, G->gens_).size()) != G->order())
    throw std::logic_error("standard generators do not generate GL");
  G->compute_classes();
  return G;
}

std::shared_ptr<MatGroup> MatGroup::from_keys(const RingPtr& R, int n, std::vector<uint64_t> keys, std::string name) {
  std::shared_ptr<MatGroup> G(new MatGroup());
  G->ring_ = R;
  G->n_ = n;
  G->name_ = std::move(name);
  G->build(std::move(keys));
  std::vector<int> gens;
  std::vector<char> in(G->order(), 0);
  in[G->identity()] = 1;
  int covered = 1;
  for (int g = 0; g < G->order() && covered < G->order(); ++g) {
    if (in[g]) continue;
    gens.push_back(g);
    auto cl = closure(*G, gens);
    std::fill(in.begin(), in.end(), 0);
    for (int x : cl) in[x] = 1;
    covered = static_cast<int>(cl.size());
  }
  G->gens_ = gens;
  G->compute_classes();
  return G;
}

std::shared_ptr<MatGroup> MatGroup::generated_by(const RingPtr& R, int n, const std::vector<RMat>& gens,
                                                 std::string name, EnumCaps caps) {
  std::unordered_set<uint64_t> seen;
  std::vector<RMat> list{RMat::identity(R, n)};
  seen.insert(list[0].key());
  for (std::size_t h = 0; h < list.size(); ++h)
    for (const auto& s : gens) {
      RMat y = list[h] * s;
      if (seen.insert(y.key()).second) {
        list.push_back(y);
        if (list.size() > caps.group) throw std::length_error("group order cap exceeded");
      }
    }
  std::vector<uint64_t> keys(seen.begin(), seen.end());
  std::shared_ptr<MatGroup> G(new MatGroup());
  G->ring_ = R;
  G->n_ = n;
  G->name_ = std::move(name);
  G->build(std::move(keys));
  for (const auto& s : gens) G->gens_.push_back(G->find(s));
  G->compute_classes();
  return G;
}

// ---------------------------------------------------------------- subgroups

bool SubgroupHandle::contains(int g) const { return std::binary_search(elems.begin(), elems.end(), g); }

GroupPtr SubgroupHandle::as_group(const std::string& name) const {
  std::vector<uint64_t> keys;
  keys.reserve(elems.size());
  for (int g : elems) keys.push_back(parent->key(g));
  return MatGroup::from_keys(parent->ring(), parent->n(), std::move(keys), name);
}

SubgroupHandle subgroup_by_predicate(const GroupPtr& G, SubgroupKind kind, std::function<bool(const RMat&)> pred) {
  SubgroupHandle H;
  H.kind = kind;
  H.parent = G;
  H.member = pred;
  for (int g = 0; g < G->order(); ++g)
    if (pred(G->element(g))) H.elems.push_back(g);
  return H;
}

namespace {

std::vector<int> block_of(const std::vector<int>& comp, int n) {
  std::vector<int> b(n);
  int pos = 0;
  for (std::size_t k = 0; k < comp.size(); ++k)
    for (int j = 0; j < comp[k]; ++j) b[pos++] = static_cast<int>(k);
  return b;
}

}  // namespace

IwahoriTriple standard_subgroups(const GroupPtr& G, const std::vector<int>& comp) {
  int n = G->n();
  int tot = 0;
  for (int c : comp) {
    if (c < 0) throw std::invalid_argument("invalid composition");
    tot += c;
  }
  if (tot != n) throw std::invalid_argument("composition does not sum to n");
  auto blk = block_of(comp, n);
  IwahoriTriple T;
  T.comp = comp;
  T.L = subgroup_by_predicate(G, SubgroupKind::Levi, [blk, n](const RMat& M) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (blk[i] != blk[j] && M(i, j) != 0) return false;
    return true;
  });
  auto uni = [blk, n](bool upper) {
    return [blk, n, upper](const RMat& M) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (blk[i] == blk[j]) {
            if (M(i, j) != (i == j ? 1 : 0)) return false;
          } else if ((blk[i] < blk[j]) != upper && M(i, j) != 0) {
            return false;
          }
        }
      return true;
    };
  };
  T.U = subgroup_by_predicate(G, SubgroupKind::U, uni(true));
  T.V = subgroup_by_predicate(G, SubgroupKind::V, uni(false));
  return T;
}

bool iwahori_injective(const GroupPtr& G, const IwahoriTriple& T) {
  std::unordered_set<int> prods;
  for (int u : T.U.elems)
    for (int l : T.L.elems)
      for (int v : T.V.elems)
        if (!prods.insert(G->mul(G->mul(u, l), v)).second) return false;
  return true;
}

SubgroupHandle congruence_kernel(const GroupPtr& G, int i) {
  const RingPtr R = G->ring();
  if (i < 1 || i > R->ell()) throw std::invalid_argument("kernel level out of range");
  int n = G->n();
  return subgroup_by_predicate(G, SubgroupKind::Kernel, [R, i, n](const RMat& M) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int e = a == b ? R->sub(M(a, b), 1) : M(a, b);
        if (R->val(e) < i) return false;
      }
    return true;
  });
}

SubgroupHandle diagonal_torus(const GroupPtr& G) {
  int n = G->n();
  return subgroup_by_predicate(G, SubgroupKind::Torus, [n](const RMat& M) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b && M(a, b) != 0) return false;
    return true;
  });
}

SubgroupHandle stabilizer(const GroupPtr& G, const RMat& M) {
  int i = M.ring->ell();
  return subgroup_by_predicate(G, SubgroupKind::Stabilizer, [M, i](const RMat& g) {
    RMat gb = g.reduce(i);
    return gb * M == M * gb;
  });
}

std::vector<RMat> char_orbit(const GroupPtr& G, const RMat& xi) {
  int i = xi.ring->ell();
  std::unordered_set<uint64_t> seen;
  std::vector<RMat> out;
  for (int g = 0; g < G->order(); ++g) {
    RMat gb = G->element(g).reduce(i);
    RMat y = gb * xi * mat_inverse(gb);
    if (seen.insert(y.key()).second) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RMat sub_block(const RMat& M, int r0, int c0, int nr, int nc) {
  RMat B(M.ring, nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) B(i, j) = M(r0 + i, c0 + j);
  return B;
}

RMat embed_block(const RMat& M, int n, int offset) {
  RMat E = RMat::identity(M.ring, n);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) E(offset + i, offset + j) = M(i, j);
  return E;
}

}  // namespace grlab
