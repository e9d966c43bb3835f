// Copyright 2026 The shapetensor Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHAPETENSOR_TENSORS_HPP
#define SHAPETENSOR_TENSORS_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "shapetensor/common.hpp"
#include "shapetensor/harmonics.hpp"
#include "shapetensor/measures.hpp"

namespace shapetensor {

// ---------------------------------------------------------------------------
// Sorted multi-index bookkeeping. Rank-s symmetric tensors over R^n are
// stored by their distinct components, one per nondecreasing index tuple
// (i_1 <= ... <= i_s), enumerated in lexicographic order ("lex-v1").
// ---------------------------------------------------------------------------
class MultiIndexLayout {
 public:
  static const MultiIndexLayout& get(int n, int s) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<MultiIndexLayout>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, s);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::unique_ptr<MultiIndexLayout>(new MultiIndexLayout(n, s))).first;
    return *it->second;
  }

  int count() const { return int(tuples_.size()); }
  const std::vector<int>& tuple(int idx) const { return tuples_[idx]; }

  int index_of(std::vector<int> t) const {
    std::sort(t.begin(), t.end());
    long long key = encode(t);
    auto it = lookup_.find(key);
    if (it == lookup_.end()) throw std::out_of_range("MultiIndexLayout: bad multi-index");
    return it->second;
  }

  /// Exponent vector (occurrences of each coordinate) for a component.
  std::vector<int> exponents(int idx) const {
    std::vector<int> e(n_, 0);
    for (int v : tuples_[idx]) e[v]++;
    return e;
  }

  /// Number of index sequences mapping to the component: s!/(e_1!...e_n!).
  double multiplicity(int idx) const { return multiplicities_[idx]; }

 private:
  MultiIndexLayout(int n, int s) : n_(n), s_(s) {
    std::vector<int> t(s, 0);
    emit(t, 0, 0);
    for (size_t i = 0; i < tuples_.size(); ++i) {
      lookup_[encode(tuples_[i])] = int(i);
      double logm = log_factorial(s_);
      std::vector<int> e = exponents(int(i));
      for (int v : e) logm -= log_factorial(v);
      multiplicities_.push_back(std::round(std::exp(logm)));
    }
  }

  void emit(std::vector<int>& t, int pos, int minval) {
    if (pos == s_) {
      tuples_.push_back(t);
      return;
    }
    for (int v = minval; v < n_; ++v) {
      t[pos] = v;
      emit(t, pos + 1, v);
    }
  }

  long long encode(const std::vector<int>& t) const {
    long long key = 0;
    for (int v : t) key = key * n_ + v;
    return key;
  }

  int n_, s_;
  std::vector<std::vector<int>> tuples_;
  std::vector<double> multiplicities_;
  std::map<long long, int> lookup_;
};

/// Symmetric rank-s tensor over R^n stored by sorted multi-index.
struct SymTensor {
  int n = 0;
  int rank = 0;
  Vec comps;
  bool scaled = false;  // true when the 1/(s! omega_{s+1}) factor was removed

  SymTensor() = default;
  SymTensor(int n_, int rank_) : n(n_), rank(rank_) {
    comps = Vec::Zero(MultiIndexLayout::get(n_, rank_).count());
  }

  const MultiIndexLayout& layout() const { return MultiIndexLayout::get(n, rank); }

  double operator()(std::vector<int> idx) const {
    return comps[layout().index_of(std::move(idx))];
  }
  double& at(std::vector<int> idx) { return comps[layout().index_of(std::move(idx))]; }

  /// Contraction over the last two slots.
  SymTensor trace() const {
    if (rank < 2) throw std::invalid_argument("SymTensor::trace: rank < 2");
    SymTensor out(n, rank - 2);
    const MultiIndexLayout& lo = out.layout();
    for (int idx = 0; idx < lo.count(); ++idx) {
      std::vector<int> t = lo.tuple(idx);
      t.push_back(0);
      t.push_back(0);
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        t[rank - 2] = i;
        t[rank - 1] = i;
        s += (*this)(t);
      }
      out.comps[idx] = s;
    }
    return out;
  }

  /// Value of the associated multilinear form (tests only; O(n^rank)).
  double evaluate(const std::vector<Vec>& args) const {
    if (int(args.size()) != rank)
      throw std::invalid_argument("SymTensor::evaluate: wrong argument count");
    const MultiIndexLayout& lay = layout();
    double total = 0.0;
    std::vector<int> idx(rank, 0);
    while (true) {
      double prod = comps[lay.index_of(idx)];
      for (int p = 0; p < rank; ++p) prod *= args[p][idx[p]];
      total += prod;
      int p = rank - 1;
      while (p >= 0 && idx[p] == n - 1) idx[p--] = 0;
      if (p < 0) break;
      idx[p]++;
    }
    return total;
  }

  Mat as_matrix() const {
    if (rank != 2) throw std::invalid_argument("SymTensor::as_matrix: rank must be 2");
    Mat M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = (*this)({i, j});
    return M;
  }

  double max_abs() const { return comps.size() ? comps.cwiseAbs().maxCoeff() : 0.0; }
};

/// Raw moment tensor of order s: components Int u_{i_1}...u_{i_s} dmu.
inline SymTensor moment_tensor(const DiscreteMeasure& mu, int s) {
  if (s < 0) throw std::invalid_argument("moment_tensor: negative rank");
  SymTensor T(mu.dim, s);
  const MultiIndexLayout& lay = T.layout();
  for (int a = 0; a < mu.size(); ++a) {
    const Vec& u = mu.atoms[a];
    double w = mu.weights[a];
    for (int idx = 0; idx < lay.count(); ++idx) {
      double prod = w;
      for (int v : lay.tuple(idx)) prod *= u[v];
      T.comps[idx] += prod;
    }
  }
  return T;
}

/// Surface tensor of rank s: moments scaled by 1/(s! omega_{s+1}).
inline SymTensor surface_tensor(const DiscreteMeasure& mu, int s) {
  SymTensor T = moment_tensor(mu, s);
  T.comps /= std::exp(log_factorial(s)) * sphere_area(s + 1);
  return T;
}

/// Scaled variant: the bare moment tensor, with the removed factor recorded.
/// Better conditioned at high rank, where s! omega_{s+1} explodes.
inline SymTensor scaled_surface_tensor(const DiscreteMeasure& mu, int s) {
  SymTensor T = moment_tensor(mu, s);
  T.scaled = true;
  return T;
}

/// Constant linking a surface tensor of rank s to the iterated trace of the
/// rank-s_o surface tensor (same parity):
///     Phi^s = c(s, s_o) . trace^{(s_o-s)/2}(Phi^{s_o}).
/// Since iterated traces of raw moment tensors reproduce the lower-order
/// moments exactly, the constant is the ratio of the normalizations,
/// c = (s_o! omega_{s_o+1}) / (s! omega_{s+1}).
inline double trace_chain_constant(int s, int s_o) {
  if (s < 0 || s_o < s || (s_o - s) % 2 != 0)
    throw std::invalid_argument("trace_chain_constant: ranks must share parity");
  return std::exp(log_factorial(s_o) - log_factorial(s)) * sphere_area(s_o + 1) /
         sphere_area(s + 1);
}

inline SymTensor trace_reduce(const SymTensor& T) { return T.trace(); }

/// Surface tensor of rank s recovered from a higher tensor of equal parity.
inline SymTensor surface_tensor_from_chain(const SymTensor& hi, int s) {
  SymTensor t = hi;
  while (t.rank > s) t = t.trace();
  t.comps *= trace_chain_constant(s, hi.rank);
  return t;
}

/// The pair (Phi^{s_o-1}, Phi^{s_o}), which determines all lower ranks.
struct TensorSet {
  int n = 0;
  int s_o = 0;
  SymTensor lo;  // rank s_o - 1
  SymTensor hi;  // rank s_o

  TensorSet() = default;
  TensorSet(SymTensor lo_, SymTensor hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.n != hi.n || lo.rank + 1 != hi.rank)
      throw std::invalid_argument("TensorSet: ranks must be s_o-1, s_o");
    n = hi.n;
    s_o = hi.rank;
  }

  static TensorSet from_measure(const DiscreteMeasure& mu, int s_o) {
    if (s_o < 1) throw std::invalid_argument("TensorSet: s_o must be >= 1");
    return TensorSet(surface_tensor(mu, s_o - 1), surface_tensor(mu, s_o));
  }

  SymTensor rank_tensor(int s) const {
    if (s < 0 || s > s_o) throw std::invalid_argument("TensorSet: rank out of range");
    const SymTensor& src = (s % 2 == s_o % 2) ? hi : lo;
    return surface_tensor_from_chain(src, s);
  }

  /// The m_{s_o} distinct components: rank s_o-1 block then rank s_o block,
  /// each in lexicographic multi-index order.
  Vec phi_vector() const {
    Vec out(lo.comps.size() + hi.comps.size());
    out << lo.comps, hi.comps;
    return out;
  }

  static TensorSet from_phi_vector(int n, int s_o, const Vec& phi) {
    if (phi.size() != total_dim(n, s_o))
      throw std::invalid_argument("TensorSet: phi vector has wrong length");
    SymTensor lo(n, s_o - 1), hi(n, s_o);
    lo.comps = phi.head(lo.comps.size());
    hi.comps = phi.tail(hi.comps.size());
    return TensorSet(std::move(lo), std::move(hi));
  }
};

/// Vector of harmonic intrinsic volumes up to degree s_o, ordered by
/// (degree ascending, in-degree index ascending).
struct HarmonicVector {
  int n = 0;
  int s_o = 0;
  Vec values;

  HarmonicVector() = default;
  HarmonicVector(int n_, int s_o_) : n(n_), s_o(s_o_) {
    values = Vec::Zero(total_dim(n_, s_o_));
  }

  Eigen::VectorBlock<Vec> degree_block(int k) {
    return values.segment(total_dim(n, k) - basis_dim(n, k), basis_dim(n, k));
  }
  Eigen::VectorBlock<const Vec> degree_block(int k) const {
    return values.segment(total_dim(n, k) - basis_dim(n, k), basis_dim(n, k));
  }
};

/// Harmonic intrinsic volumes of a discrete measure by direct atom sums.
inline HarmonicVector harmonic_vector(const DiscreteMeasure& mu, const HarmonicBasis& basis,
                                      int s_o) {
  if (basis.dim() != mu.dim || basis.max_degree() < s_o)
    throw std::invalid_argument("harmonic_vector: incompatible basis");
  HarmonicVector h(mu.dim, s_o);
  for (int a = 0; a < mu.size(); ++a)
    h.values += mu.weights[a] * basis.eval_all(mu.atoms[a]).head(h.values.size());
  return h;
}

// ---------------------------------------------------------------------------
// The invertible linear map f with f(phi(mu)) = h(mu). Each basis function of
// degree k equals a homogeneous polynomial of degree s (s = s_o or s_o-1,
// matching parity) on the sphere; its monomial coefficients are recovered by
// a quadrature-weighted least squares fit, which is exact here. Integrating
// monomials against mu then lands in the stored tensor components.
// ---------------------------------------------------------------------------
class MomentHarmonicMap {
 public:
  MomentHarmonicMap(int n, int s_o)
      : n_(n), s_o_(s_o), basis_(n, s_o) {
    if (s_o < 1) throw std::invalid_argument("MomentHarmonicMap: s_o must be >= 1");
    const int m = total_dim(n, s_o);
    F_ = Mat::Zero(m, m);
    QuadratureRule rule = sphere_quadrature(n, 2 * s_o + 2);

    const MultiIndexLayout& lay_lo = MultiIndexLayout::get(n, s_o - 1);
    const MultiIndexLayout& lay_hi = MultiIndexLayout::get(n, s_o);
    const int lo_count = lay_lo.count();

    // Weighted monomial design matrices for both parities.
    auto design = [&](const MultiIndexLayout& lay) {
      Mat A(rule.nodes.size(), lay.count());
      for (size_t q = 0; q < rule.nodes.size(); ++q) {
        double sw = std::sqrt(rule.weights[q]);
        for (int c = 0; c < lay.count(); ++c) {
          double prod = sw;
          for (int v : lay.tuple(c)) prod *= rule.nodes[q][v];
          A(q, c) = prod;
        }
      }
      return A;
    };
    Mat A_lo = design(lay_lo), A_hi = design(lay_hi);
    Eigen::ColPivHouseholderQR<Mat> qr_lo(A_lo), qr_hi(A_hi);

    int row = 0;
    for (int k = 0; k <= s_o; ++k) {
      bool hi_parity = (k % 2 == s_o % 2);
      int s = hi_parity ? s_o : s_o - 1;
      double unscale = std::exp(log_factorial(s)) * sphere_area(s + 1);
      for (int j = 1; j <= basis_dim(n, k); ++j, ++row) {
        Vec target(rule.nodes.size());
        for (size_t q = 0; q < rule.nodes.size(); ++q)
          target[q] = std::sqrt(rule.weights[q]) * basis_.eval(k, j, rule.nodes[q]);
        Vec coeffs = hi_parity ? qr_hi.solve(target) : qr_lo.solve(target);
        const MultiIndexLayout& lay = hi_parity ? lay_hi : lay_lo;
        int base = hi_parity ? lo_count : 0;
        for (int c = 0; c < lay.count(); ++c)
          F_(row, base + c) = coeffs[c] * unscale;
      }
    }
    lu_.compute(F_);
    if (std::abs(lu_.determinant()) < 1e-300)
      throw std::runtime_error("MomentHarmonicMap: singular map (basis construction bug)");
  }

  int n() const { return n_; }
  int s_o() const { return s_o_; }
  const HarmonicBasis& basis() const { return basis_; }
  const Mat& matrix() const { return F_; }

  HarmonicVector to_harmonic(const Vec& phi) const {
    HarmonicVector h(n_, s_o_);
    h.values = F_ * phi;
    return h;
  }

  HarmonicVector to_harmonic(const TensorSet& ts) const {
    if (ts.n != n_ || ts.s_o != s_o_)
      throw std::invalid_argument("MomentHarmonicMap: tensor set mismatch");
    return to_harmonic(ts.phi_vector());
  }

  Vec to_phi(const HarmonicVector& h) const {
    if (h.n != n_ || h.s_o != s_o_)
      throw std::invalid_argument("MomentHarmonicMap: harmonic vector mismatch");
    return lu_.solve(h.values);
  }

  TensorSet to_tensors(const HarmonicVector& h) const {
    return TensorSet::from_phi_vector(n_, s_o_, to_phi(h));
  }

 private:
  int n_, s_o_;
  HarmonicBasis basis_;
  Mat F_;
  Eigen::FullPivLU<Mat> lu_;
};

}  // namespace shapetensor

#endif  // SHAPETENSOR_TENSORS_HPP
