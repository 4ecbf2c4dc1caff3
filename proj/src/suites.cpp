#include "grlab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>

#include "grlab/basechange.hpp"
#include "grlab/nilpotent.hpp"
#include "grlab/pshseries.hpp"

namespace grlab {

long SuiteResult::failed() const {
  return std::count_if(items.begin(), items.end(), [](const CheckItem& c) { return !c.ok; });
}

namespace {

SuiteResult timed(const std::string& name, const std::function<void(SuiteResult&)>& body) {
  SuiteResult r;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string bstr(const Basis& b) { return "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")"; }

std::vector<Basis> basis_of(const GRContext& C, int n) {
  if (n == 0) return {{0, 0}};
  std::vector<Basis> out;
  for (int a = 0; a < C.num_irr(n); ++a) out.push_back({n, a});
  return out;
}

GRElem el(const Basis& b) { return GRElem::basis(b.first, b.second); }

RMat grading_of(const GRContext& C, const Basis& b) {
  if (b.first == 0) return RMat(ring_at_level(C.ring(), C.grading_level()), 0, 0);
  return canonical_rep(C.grading(b.first, b.second));
}

RMat sum_class(const RMat& a, const RMat& b) {
  if (a.n() == 0) return b;
  if (b.n() == 0) return a;
  return canonical_rep(block_sum(a, b));
}

GRTensor inflate_tensor(const GRContext& hi, const GRContext& lo, const GRTensor& x) {
  GRTensor out;
  for (const auto& [k, v] : x.terms) {
    GRElem a = hi.inflate_from(lo, el(k[0])), b = hi.inflate_from(lo, el(k[1]));
    for (const auto& [ka, va] : a.terms)
      for (const auto& [kb, vb] : b.terms) out.terms[{ka, kb}] += v * va * vb;
  }
  out.prune();
  return out;
}

long stabilizer_in_sn(const std::vector<int>& chi) {
  std::vector<int> p(chi.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
  long c = 0;
  do {
    bool fix = true;
    for (std::size_t i = 0; i < p.size(); ++i) fix = fix && chi[p[i]] == chi[i];
    c += fix;
  } while (std::next_permutation(p.begin(), p.end()));
  return c;
}

}  // namespace

SuiteResult suite_bialgebra(const GRContext& C, int N) {
  return timed("bialgebra " + C.ring()->name(), [&](SuiteResult& t) {
    std::vector<std::vector<Basis>> B(N + 1);
    for (int n = 0; n <= N; ++n) B[n] = basis_of(C, n);
    std::map<std::pair<Basis, Basis>, GRElem> prod;
    auto mul = [&](const Basis& a, const Basis& b) -> const GRElem& {
      auto key = std::make_pair(a, b);
      auto it = prod.find(key);
      if (it == prod.end()) it = prod.emplace(key, C.circle(el(a), el(b))).first;
      return it->second;
    };
    for (int n1 = 1; n1 <= N; ++n1)
      for (int n2 = 1; n1 + n2 <= N; ++n2)
        for (const Basis& a : B[n1])
          for (const Basis& b : B[n2]) {
            t.check(mul(a, b) == mul(b, a), "commutativity " + bstr(a) + bstr(b));
            for (const Basis& c : B[n1 + n2]) {
              GRTensor ab;
              ab.terms[{a, b}] = 1;
              t.check(C.form(mul(a, b), el(c)) == C.form(ab, C.delta(el(c))),
                      "adjointness " + bstr(a) + bstr(b) + bstr(c));
            }
            t.check(C.verify_hopf(el(a), el(b)).holds, "Delta(a o b) = Delta(a) o Delta(b) " + bstr(a) + bstr(b));
          }
    for (int n1 = 1; n1 <= N; ++n1)
      for (int n2 = 1; n1 + n2 <= N; ++n2)
        for (int n3 = 1; n1 + n2 + n3 <= N; ++n3)
          for (const Basis& a : B[n1])
            for (const Basis& b : B[n2])
              for (const Basis& c : B[n3])
                t.check(C.circle(mul(a, b), el(c)) == C.circle(el(a), mul(b, c)),
                        "associativity " + bstr(a) + bstr(b) + bstr(c));
    for (int n = 1; n <= N; ++n)
      for (const Basis& c : B[n]) {
        t.check(C.circle(GRElem::unit(), el(c)) == el(c) && C.circle(el(c), GRElem::unit()) == el(c), "unit " + bstr(c));
        GRTensor d = C.delta(el(c));
        t.check(C.delta_tensor(d, 0) == C.delta_tensor(d, 1), "coassociativity " + bstr(c));
        GRElem left, right;
        for (const auto& [k, v] : d.terms) {
          if (k[0] == Basis{0, 0}) left.terms[k[1]] += v;
          if (k[1] == Basis{0, 0}) right.terms[k[0]] += v;
        }
        t.check(left == el(c) && right == el(c), "counit " + bstr(c));
      }
    GRTensor d0 = C.delta(GRElem::unit());
    t.check(d0.terms.size() == 1 && d0.terms.begin()->first == std::vector<Basis>{{0, 0}, {0, 0}}, "Delta(1) = 1 (x) 1");
  });
}

SuiteResult suite_grading(const GRContext& C, int N) {
  return timed("grading " + C.ring()->name(), [&](SuiteResult& t) {
    if (C.grading_level() < 1) {
      t.skipped.push_back("level 1 has no grading level");
      return;
    }
    for (int n1 = 1; n1 <= N; ++n1)
      for (int n2 = 1; n1 + n2 <= N; ++n2)
        for (const Basis& a : basis_of(C, n1))
          for (const Basis& b : basis_of(C, n2)) {
            RMat want = sum_class(grading_of(C, a), grading_of(C, b));
            for (const auto& [k, v] : C.circle(el(a), el(b)).terms)
              t.check(grading_of(C, k) == want, "product term " + bstr(k) + " of " + bstr(a) + bstr(b));
          }
    for (int n = 1; n <= N; ++n)
      for (const Basis& c : basis_of(C, n)) {
        RMat want = grading_of(C, c);
        for (const auto& [k, v] : C.delta(el(c)).terms)
          t.check(sum_class(grading_of(C, k[0]), grading_of(C, k[1])) == want,
                  "coproduct term " + bstr(k[0]) + bstr(k[1]) + " of " + bstr(c));
      }
  });
}

SuiteResult suite_inflation(int p, int d, int N) {
  return timed("inflation level 1 -> 2", [&](SuiteResult& t) {
    GRContext lo(make_ring(p, 1, d), N), hi(make_ring(p, 2, d), N);
    for (int n1 = 0; n1 <= N; ++n1)
      for (int n2 = 0; n1 + n2 <= N; ++n2)
        for (const Basis& a : basis_of(lo, n1))
          for (const Basis& b : basis_of(lo, n2))
            t.check(hi.inflate_from(lo, lo.circle(el(a), el(b))) ==
                        hi.circle(hi.inflate_from(lo, el(a)), hi.inflate_from(lo, el(b))),
                    "product " + bstr(a) + bstr(b));
    for (int n = 0; n <= N; ++n)
      for (const Basis& c : basis_of(lo, n)) {
        GRElem ic = hi.inflate_from(lo, el(c));
        t.check(ic.terms.size() == 1 && ic.terms.begin()->second == 1, "basis element to basis element " + bstr(c));
        t.check(hi.delta(ic) == inflate_tensor(hi, lo, lo.delta(el(c))), "coproduct " + bstr(c));
      }
  });
}

SuiteResult suite_primary(const GRContext& C) {
  return timed("primary " + C.ring()->name(), [&](SuiteResult& t) {
    const ChainRing& R = *C.ring();
    RingPtr k = make_ring(R.p(), 1, R.d());
    RMat one = RMat::from_rows(k, {{1}}), eta = RMat::from_rows(k, {{0}});
    PrimaryReport r = C.primary_equiv(one, eta);
    t.check(r.count_identity && r.block_count == r.count1 * r.count2, "count identity");
    t.check(r.pind_bijective, "pind bijective on the block");
    t.check(r.form_preserving, "pind form preserving");
    BottomRowReport b = C.bottom_row(one, eta);
    t.check(b.hill_agrees, "Hill idempotent agrees at l = " + std::to_string(R.ell()));
    if (b.reduction_instances) t.check(b.reduction_holds, "reduction lemma at l = " + std::to_string(R.ell()));
    GRContext up(make_ring(R.p(), R.ell() + 1, R.d()), 2);
    BottomRowReport b3 = up.bottom_row(one, eta);
    t.check(b3.hill_agrees, "Hill variant agrees at l = " + std::to_string(R.ell() + 1));
    if (b3.reduction_instances) t.check(b3.reduction_holds, "reduction lemma at l = " + std::to_string(R.ell() + 1));
  });
}

SuiteResult suite_principal(const GRContext& C, int n) {
  return timed("principal " + C.ring()->name() + " n=" + std::to_string(n), [&](SuiteResult& t) {
    const int m = C.num_irr(1);
    std::vector<int> chi(n, 0);
    for (;;) {
      PrincipalSeriesReport r = principal_series_check(C, chi);
      std::string tag;
      for (int c : chi) tag += std::to_string(c) + " ";
      t.check(r.character_identity && r.multiset_identity, "pres o pind identity " + tag);
      t.check(r.self_form == stabilizer_in_sn(chi), "<pind chi, pind chi> = |Stab| " + tag);
      int i = 0;
      while (i < n && ++chi[i] == m) chi[i++] = 0;
      if (i == n) break;
    }
  });
}

SuiteResult suite_basechange_even(int m_max) {
  return timed("basechange-even", [&](SuiteResult& t) {
    RingPtr F4 = make_ring(2, 1, 2);
    for (const RMat& M : primary_classes_galois(F4, 1)) {
      EvenTransferReport e = even_transfer(M, 2);
      t.check(e.small == e.big, "m = 1 count " + M.str());
      t.check(e.z_part_trivial && e.restriction_bijective && e.form_preserving, "m = 1 bijection " + M.str());
      t.check(e.gallagher_small && e.gallagher_big, "m = 1 Gallagher " + M.str());
    }
    for (int m = 2; m <= m_max; ++m) {
      if (m > 2) {
        t.skipped.push_back("m = " + std::to_string(m) + ": stabilizers not enumerable");
        continue;
      }
      for (const RMat& M : primary_classes_galois(F4, m)) {
        TransferCount c = even_transfer_count(M, 2);
        t.check(c.small == c.big, "m = 2 count " + M.str());
        if (c.big_direct >= 0) t.check(c.big_direct == c.big, "m = 2 direct Clifford count " + M.str());
      }
    }
    GRContext Z4(make_ring(2, 2, 1), 2);
    for (int th = 0; th < Z4.num_irr(1); ++th) {
      TwistReport r = character_twist(Z4, th);
      t.check(r.bijective && r.grading_shift, "twist " + std::to_string(th));
      t.check(r.circle_compatible && r.pairs == static_cast<long>(Z4.num_irr(1)) * Z4.num_irr(1),
              "twist product " + std::to_string(th));
    }
  });
}

SuiteResult suite_basechange_odd() {
  return timed("basechange-odd", [&](SuiteResult& t) {
    RingPtr F4 = make_ring(2, 1, 2);
    RMat M(F4, 1, 1);
    M(0, 0) = F4->t_power(1);
    HeisenbergData H = heisenberg(M, 3);
    GAction A = g_action(H, odd_stabilizer(H));
    BetaReport br = check_beta(H, A);
    t.check(br.bimultiplicative && br.g_invariant && br.nondegenerate, "beta");
    IrrModel I = irr_model(H, block_lagrangian(H));
    SReport s = check_s_elements(H, A, I);
    t.check(s.invertible && s.intertwining, "S_g invertible and intertwining");
    t.check(s.det_split, "gamma determinant split");
    Trivialization tr = trivialize(H, A, I, [](const RMat& g) {
      RMat b = g.reduce(1);
      return b == RMat::identity(b.ring, b.n());
    });
    t.check(tr.homomorphism && tr.intertwining, "trivialization");
    TransferCount c = odd_transfer_count(M, 3);
    t.check(c.small == c.big && c.small > 0, "|Irr(GL_2(Z/8))_[M]| = |Irr(GL_1(GR(8,2)))_[M]|");
  });
}

SuiteResult suite_nilpotent(int q, int nmax, int free_max) {
  return timed("nilpotent q=" + std::to_string(q), [&](SuiteResult& t) {
    for (int n = 2; n <= nmax; ++n) {
      CrnGroup C = build_crn(2, n, q);
      Classification c = classify_crn(C);
      std::string tag = "n=" + std::to_string(n);
      t.check(c.counts_match, tag + " triple count " + std::to_string(c.labels.size()) + " = " + std::to_string(c.irr_count));
      t.check(c.orbits.all_match && c.orbits.partition, tag + " orbit stabilizers");
      t.check(c.beta_trivial, tag + " beta trivial");
    }
    for (int n = 2; n <= free_max; ++n)
      for (const FreenessReport& f : freeness_check(2, n, 1, q)) {
        std::string tag = "n=" + std::to_string(n) + " W" + std::to_string(f.W) + " " + f.label.str();
        t.check(f.product_matches && f.oracle_agrees, "W o rho " + tag);
        t.check(f.hopf && f.hopf_pairs > 0, "Hopf " + tag);
      }
  });
}

SuiteResult suite_psh(const GRContext& C, int D) {
  return timed("psh " + C.ring()->name(), [&](SuiteResult& t) {
    std::vector<int> rhos;
    for (int a = 0; a < C.num_irr(1); ++a)
      if (rep_level(C, 1, a) == C.ell() - 1 && C.ell() >= 2 && is_strongly_cuspidal(C, 1, a)) rhos.push_back(a);
    t.check(!rhos.empty(), "strongly cuspidal level l-1 character of GL_1");
    for (int rho : rhos) {
      PSHReport r = gs_compare(C, {1, rho}, D);
      std::string tag = "rho=" + std::to_string(rho);
      t.check(r.consistent, tag + " consistent");
      for (int k = 0; k <= D && k < static_cast<int>(r.counts.size()); ++k) {
        t.check(r.counts[k] == partition_count(k), tag + " constituents in degree " + std::to_string(k));
        t.check(r.gram[k] == r.sym_gram[k], tag + " Gram matrix in degree " + std::to_string(k));
      }
    }
    if (C.grading_level() >= 1)
      for (int a = 0; a < C.num_irr(1); ++a)
        for (int b = 0; b < C.num_irr(1); ++b) {
          if (grading_of(C, {1, a}) == grading_of(C, {1, b})) continue;
          GRElem x = C.circle(GRElem::basis(1, a), GRElem::basis(1, b));
          t.check(C.form(x, x) == 1, "cross-primary " + std::to_string(a) + "," + std::to_string(b));
        }
  });
}

SuiteResult suite_oracle(const GRContext& C, int N, long order_cap) {
  return timed("oracle " + C.ring()->name(), [&](SuiteResult& t) {
    for (int n = 2; n <= N; ++n) {
      if (C.group(n)->order() > order_cap) {
        t.skipped.push_back("GL_" + std::to_string(n) + " above the order cap");
        continue;
      }
      for (int n1 = 1; n1 < n; ++n1)
        for (const Basis& a : basis_of(C, n1))
          for (const Basis& b : basis_of(C, n - n1)) {
            std::vector<Basis> f{a, b};
            std::string tag = bstr(a) + bstr(b);
            PindOracleResult o = C.pind_oracle(f);
            t.check(C.pind_adjoint(f) == o.product, tag + " adjointness = bimodule");
            t.check(C.pind(f) == o.product, tag + " direct = bimodule");
            t.check(o.uv_equals_vu, tag + " e_U e_V and e_V e_U images");
          }
    }
  });
}

SuiteResult suite_hopf_search(const GRContext& C, int N, long budget, uint64_t seed) {
  return timed("hopf-search " + C.ring()->name(), [&](SuiteResult& t) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> degs;
    for (int n1 = 1; n1 <= N; ++n1)
      for (int n2 = 1; n1 + n2 <= N; ++n2) degs.push_back({n1, n2});
    if (degs.empty()) {
      t.skipped.push_back("no pairs of positive degree with total <= N");
      return;
    }
    for (long i = 0; i < budget; ++i) {
      auto [n1, n2] = degs[rng() % degs.size()];
      Basis a{n1, static_cast<int>(rng() % C.num_irr(n1))}, b{n2, static_cast<int>(rng() % C.num_irr(n2))};
      Basis c{n1 + n2, static_cast<int>(rng() % C.num_irr(n1 + n2))};
      t.check(C.verify_hopf(el(a), el(b)).holds, "Hopf " + bstr(a) + bstr(b));
      GRTensor ab;
      ab.terms[{a, b}] = 1;
      t.check(C.form(C.circle(el(a), el(b)), el(c)) == C.form(ab, C.delta(el(c))), "adjointness " + bstr(a) + bstr(b) + bstr(c));
    }
  });
}

}  // namespace grlab
