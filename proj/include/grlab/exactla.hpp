// Dense Gaussian elimination over an exact field (Rat, CycNum).
#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "grlab/cyclotomic.hpp"

namespace grlab {

template <class F>
struct DMat {
  int rows = 0, cols = 0;
  std::vector<F> a;
  DMat() = default;
  DMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, F(0)) {}
  F& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const F& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  static DMat identity(int n) {
    DMat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = F(1);
    return I;
  }
};

template <class F>
DMat<F> operator*(const DMat<F>& A, const DMat<F>& B) {
  if (A.cols != B.rows) throw std::invalid_argument("shape mismatch");
  DMat<F> C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const F& x = A(i, k);
      if (is_zero(x)) continue;
      for (int j = 0; j < B.cols; ++j)
        if (!is_zero(B(k, j))) C(i, j) += x * B(k, j);
    }
  return C;
}

// In-place reduced row echelon form; returns pivot columns.
template <class F>
std::vector<int> rref(DMat<F>& M) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < M.cols && r < M.rows; ++c) {
    int p = r;
    while (p < M.rows && is_zero(M(p, c))) ++p;
    if (p == M.rows) continue;
    if (p != r)
      for (int k = 0; k < M.cols; ++k) std::swap(M(p, k), M(r, k));
    F inv = F(1) / M(r, c);
    for (int k = c; k < M.cols; ++k)
      if (!is_zero(M(r, k))) M(r, k) *= inv;
    for (int i = 0; i < M.rows; ++i) {
      if (i == r || is_zero(M(i, c))) continue;
      F f = M(i, c);
      for (int k = c; k < M.cols; ++k)
        if (!is_zero(M(r, k))) M(i, k) -= f * M(r, k);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

template <class F>
int rank(DMat<F> M) {
  return static_cast<int>(rref(M).size());
}

// Basis of {x : M x = 0} as columns.
template <class F>
DMat<F> nullspace(DMat<F> M) {
  auto piv = rref(M);
  std::vector<char> isp(M.cols, 0);
  for (int c : piv) isp[c] = 1;
  int nfree = M.cols - static_cast<int>(piv.size());
  DMat<F> N(M.cols, nfree);
  int k = 0;
  for (int f = 0; f < M.cols; ++f) {
    if (isp[f]) continue;
    N(f, k) = F(1);
    for (std::size_t i = 0; i < piv.size(); ++i) N(piv[i], k) = -M(static_cast<int>(i), f);
    ++k;
  }
  return N;
}

template <class F>
DMat<F> inverse(const DMat<F>& A) {
  if (A.rows != A.cols) throw std::invalid_argument("inverse of non-square matrix");
  int n = A.rows;
  DMat<F> W(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) W(i, j) = A(i, j);
    W(i, n + i) = F(1);
  }
  auto piv = rref(W);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1)
    throw std::domain_error("singular matrix");
  DMat<F> R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = W(i, n + j);
  return R;
}

// Column indices of a maximal independent set of columns.
template <class F>
std::vector<int> independent_columns(DMat<F> M) {
  return rref(M);
}

template <class F>
DMat<F> select_columns(const DMat<F>& M, const std::vector<int>& cols) {
  DMat<F> R(M.rows, static_cast<int>(cols.size()));
  for (int i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) R(i, static_cast<int>(j)) = M(i, cols[j]);
  return R;
}

template <class F>
DMat<F> transpose(const DMat<F>& M) {
  DMat<F> T(M.cols, M.rows);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) T(j, i) = M(i, j);
  return T;
}

template <class F>
bool is_zero_matrix(const DMat<F>& M) {
  for (const auto& x : M.a)
    if (!is_zero(x)) return false;
  return true;
}

// Determinant by elimination.
template <class F>
F determinant(DMat<F> M) {
  if (M.rows != M.cols) throw std::invalid_argument("determinant: not square");
  F det(1);
  const int n = M.rows;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && is_zero(M(p, c))) ++p;
    if (p == n) return F(0);
    if (p != c) {
      for (int k = 0; k < n; ++k) std::swap(M(p, k), M(c, k));
      det = -det;
    }
    det *= M(c, c);
    F inv = F(1) / M(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (is_zero(M(i, c))) continue;
      F f = M(i, c) * inv;
      for (int k = c; k < n; ++k)
        if (!is_zero(M(c, k))) M(i, k) -= f * M(c, k);
    }
  }
  return det;
}

}  // namespace grlab
