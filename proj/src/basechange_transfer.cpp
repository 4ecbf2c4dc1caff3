// Count-level and label-level transfers between GL_{md}(o_l) and GL_m(O_l), and the d = 1 twist.
#include <algorithm>
#include <set>
#include <stdexcept>

#include "grlab/basechange.hpp"
#include "grlab/grfunctors.hpp"
#include "grlab/repkit.hpp"

namespace grlab {

namespace {

struct Sides {
  int p = 2, k = 1, m = 1, d = 1;
  RingPtr ol;
  AZSplit az;
  RMat Mb;    // m x m over GR(p^k, d), on the ring tower of az.galois
  RMat Memb;  // md x md over o_k
};

Sides sides(const RMat& M, int ell) {
  Sides s;
  const ChainRing& O = *M.ring;
  s.p = O.p();
  s.k = O.ell();
  s.d = O.d();
  s.m = M.n();
  s.ol = make_ring(s.p, ell, 1);
  s.az = az_split(s.ol, s.m, s.d);
  s.Mb = RMat(ring_at_level(s.az.galois, s.k), s.m, s.m);
  s.Mb.a = M.a;
  s.Memb = s.az.embed(s.Mb.lift(s.az.galois)).reduce(s.k);
  return s;
}

std::vector<int> lying_over(const TablePtr& T, const Embedding& K, const Character& phi) {
  std::vector<int> out;
  for (int x = 0; x < T->size(); ++x)
    if (!inner_product_cyc(restrict(T->irr[x], K), phi).is_zero()) out.push_back(x);
  return out;
}

long centralizer_classes(const RingPtr& R, int n, const RMat& M) {
  GroupPtr GL = MatGroup::general_linear(R, n);
  return stabilizer(GL, M).as_group("C")->num_classes();
}

// Preimage in GL_m(O_l) of the level-k centralizer of M, built from lifts times the kernel.
GroupPtr stabilizer_by_lifts(const RingPtr& Ol, const RMat& M, long cap) {
  const ChainRing& R = *Ol;
  const int m = M.n(), k = M.ring->ell();
  GroupPtr C = MatGroup::general_linear(M.ring, m);
  SubgroupHandle Cm = stabilizer(C, M);
  long pk = 1;
  for (int i = 0; i < k; ++i) pk *= R.p();
  // kernel: 1 + p^k X with X over O_l read modulo p^k
  RingPtr Rk = ring_at_level(Ol, R.ell() - k);
  long nx = 1;
  for (int i = 0; i < m * m; ++i) nx *= Rk->size();
  if (static_cast<long>(Cm.order()) * nx > cap) return nullptr;
  std::vector<uint64_t> keys;
  for (int c : Cm.elems) {
    RMat g = C->element(c).lift(Ol);
    for (long x = 0; x < nx; ++x) {
      RMat X = RMat::from_key(Rk, m, m, static_cast<uint64_t>(x)).lift(Ol).scaled(R.from_int(pk));
      keys.push_back((g * (RMat::identity(Ol, m) + X)).key());
    }
  }
  return MatGroup::from_keys(Ol, m, keys, "Stab");
}

void partitions(int n, int max, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int a = std::min(n, max); a >= 1; --a) {
    cur.push_back(a);
    partitions(n - a, a, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TransferCount odd_transfer_count(const RMat& M, int ell) {
  if (ell % 2 == 0 || ell != 2 * M.ring->ell() + 1) throw std::invalid_argument("odd_transfer_count: need l = 2k + 1");
  Sides s = sides(M, ell);
  GRContext cs(s.ol, s.m * s.d), cb(s.az.galois, s.m);
  TransferCount t;
  t.M = M;
  t.small = static_cast<long>(cs.block(s.m * s.d, s.Memb).size());
  t.big = static_cast<long>(cb.block(s.m, s.Mb).size());
  t.method = "blocks";
  return t;
}

TransferCount even_transfer_count(const RMat& M, int ell) {
  if (ell % 2 != 0 || ell != 2 * M.ring->ell()) throw std::invalid_argument("even_transfer_count: need l = 2k");
  Sides s = sides(M, ell);
  TransferCount t;
  t.M = M;
  t.small = centralizer_classes(s.Memb.ring, s.m * s.d, s.Memb);
  t.big = centralizer_classes(s.Mb.ring, s.m, s.Mb);
  t.method = "gallagher";
  if (GroupPtr S = stabilizer_by_lifts(s.az.galois, s.Mb, 5000)) {
    Embedding K = make_embedding(congruence_kernel(S, s.k), "K");
    t.big_direct = static_cast<long>(lying_over(character_table(S), K, phi_star_character(K.sub, s.Mb, ell)).size());
    t.method += " + clifford";
  }
  return t;
}

EvenTransferReport even_transfer(const RMat& M, int ell) {
  if (ell % 2 != 0 || ell != 2 * M.ring->ell()) throw std::invalid_argument("even_transfer: need l = 2k");
  Sides s = sides(M, ell);
  const int n = s.m * s.d;
  EvenTransferReport r;
  r.M = M;
  GRContext cs(s.ol, n), cb(s.az.galois, s.m);
  Embedding Es = make_embedding(stabilizer(cs.group(n), s.Memb), "Stab");
  Embedding Eb = make_embedding(stabilizer(cb.group(s.m), s.Mb), "Stab");
  TablePtr Ts = character_table(Es.sub), Tb = character_table(Eb.sub);
  Embedding Ks = make_embedding(congruence_kernel(Es.sub, s.k), "K");
  Embedding Kb = make_embedding(congruence_kernel(Eb.sub, s.k), "K");
  auto over_s = lying_over(Ts, Ks, phi_star_character(Ks.sub, s.Memb, ell));
  auto over_b = lying_over(Tb, Kb, phi_star_character(Kb.sub, s.Mb, ell));
  r.gallagher_small = static_cast<long>(over_s.size()) == centralizer_classes(s.Memb.ring, n, s.Memb);
  r.gallagher_big = static_cast<long>(over_b.size()) == centralizer_classes(s.Mb.ring, s.m, s.Mb);

  // 1 + p^k Z
  long pk = 1, nz = 1;
  for (int i = 0; i < s.k; ++i) pk *= s.p;
  const int dz = static_cast<int>(s.az.Z_basis.size());
  for (int i = 0; i < dz; ++i) nz *= pk;
  std::vector<int> zelems;
  for (long c = 0; c < nz; ++c) {
    RMat g = RMat::identity(s.ol, n);
    long x = c;
    for (int i = 0; i < dz; ++i, x /= pk)
      g = g + s.az.Z_basis[i].scaled(s.ol->from_int(pk * (x % pk)));
    int idx = Es.sub->find(g);
    if (idx < 0) throw std::logic_error("even_transfer: 1 + p^k Z not in the stabilizer");
    zelems.push_back(idx);
  }
  r.z_part_trivial = true;
  for (int x : over_s)
    for (int z : zelems) r.z_part_trivial = r.z_part_trivial && Ts->irr[x].at(z) == Ts->irr[x].degree();

  // restriction to the A-points, transported to GL_m(O_l)(M)
  auto A = subgroup_by_predicate(Es.sub, SubgroupKind::Other, [&](const RMat& g) { return s.az.in_A(g); });
  Embedding Ea = make_embedding(A, "A");
  if (Ea.sub->order() != Eb.sub->order()) throw std::logic_error("even_transfer: A-points and stabilizer differ in order");
  std::vector<int> to_a(Eb.sub->order());
  for (int b = 0; b < Eb.sub->order(); ++b) {
    to_a[b] = Ea.sub->find(s.az.embed(Eb.sub->element(b)));
    if (to_a[b] < 0) throw std::logic_error("even_transfer: embedded element not among the A-points");
  }
  std::set<int> seen;
  bool ok = true;
  std::vector<std::pair<int, int>> stab_pairs;
  for (int x : over_s) {
    Character res = restrict(Ts->irr[x], Ea);
    std::vector<CycNum> vals;
    for (int c = 0; c < Eb.sub->num_classes(); ++c) vals.push_back(res.at(to_a[Eb.sub->class_rep(c)]));
    int j = Tb->index_of(Character(Eb.sub, vals));
    if (j < 0 || !std::binary_search(over_b.begin(), over_b.end(), j) || !seen.insert(j).second) ok = false;
    stab_pairs.emplace_back(x, j);
  }
  r.restriction_bijective = ok && seen.size() == over_b.size();

  // induce both sides and read off the GR labels
  TablePtr Gs = cs.table(n), Gb = cb.table(s.m);
  auto bs = cs.block(n, s.Memb), bb = cb.block(s.m, s.Mb);
  r.small = static_cast<long>(bs.size());
  r.big = static_cast<long>(bb.size());
  std::set<int> ls, lb;
  r.form_preserving = r.restriction_bijective;
  for (auto [x, j] : stab_pairs) {
    if (j < 0) continue;
    int a = Gs->index_of(induce(Ts->irr[x], Es)), b = Gb->index_of(induce(Tb->irr[j], Eb));
    r.labels.emplace_back(a, b);
    if (a < 0 || b < 0) r.form_preserving = false;
    ls.insert(a);
    lb.insert(b);
  }
  r.form_preserving = r.form_preserving && ls == std::set<int>(bs.begin(), bs.end()) &&
                      lb == std::set<int>(bb.begin(), bb.end()) && ls.size() == r.labels.size();
  return r;
}

std::vector<RMat> primary_classes_galois(const RingPtr& O, int m) {
  if (O->ell() != 1) throw std::invalid_argument("primary_classes_galois: level-1 ring expected");
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  partitions(m, m, cur, parts);
  std::vector<RMat> out;
  for (const auto& lam : parts) {
    RMat J(O, m, m);
    int off = 0;
    for (int a : lam) {
      for (int i = 0; i < a; ++i) {
        J(off + i, off + i) = O->t_power(1);
        if (i + 1 < a) J(off + i, off + i + 1) = O->from_int(1);
      }
      off += a;
    }
    out.push_back(J);
  }
  return out;
}

TwistReport character_twist(const GRContext& ctx, int theta) {
  TwistReport r;
  r.theta = theta;
  GroupPtr G1 = ctx.group(1);
  const Character& th = ctx.table(1)->irr[theta];
  const bool graded = ctx.grading_level() >= 1;
  if (graded) r.shift = ctx.grading(1, theta);
  std::vector<std::vector<int>> tau(ctx.max_n() + 1);
  r.bijective = true;
  r.grading_shift = graded;
  for (int n = 1; n <= ctx.max_n(); ++n) {
    GroupPtr G = ctx.group(n);
    TablePtr T = ctx.table(n);
    std::vector<CycNum> vals;
    for (int c = 0; c < G->num_classes(); ++c) {
      RMat dt(ctx.ring(), 1, 1);
      dt(0, 0) = mat_det(G->element(G->class_rep(c)));
      vals.push_back(th.at(G1->find(dt)));
    }
    Character thdet(G, vals);
    std::set<int> img;
    for (int x = 0; x < T->size(); ++x) {
      int y = T->index_of(T->irr[x] * thdet);
      tau[n].push_back(y);
      if (y < 0 || !img.insert(y).second) r.bijective = false;
      if (graded && y >= 0) {
        RMat sh = RMat::identity(r.shift.ring, n).scaled(r.shift(0, 0));
        r.grading_shift = r.grading_shift && ctx.grading(n, y) == canonical_rep(ctx.grading(n, x) + sh);
      }
    }
  }
  if (!r.bijective) return r;
  auto apply = [&](const GRElem& a) {
    GRElem out;
    for (const auto& [b, v] : a.terms) out.terms[{b.first, b.first == 0 ? 0 : tau[b.first][b.second]}] = v;
    return out;
  };
  r.circle_compatible = ctx.max_n() >= 2;
  const int n1 = ctx.num_irr(1);
  for (int a = 0; a < n1 && r.circle_compatible; ++a)
    for (int b = 0; b < n1; ++b) {
      GRElem A = GRElem::basis(1, a), B = GRElem::basis(1, b);
      ++r.pairs;
      if (apply(ctx.circle(A, B)) != ctx.circle(apply(A), apply(B))) {
        r.circle_compatible = false;
        break;
      }
    }
  return r;
}

}  // namespace grlab
