/*
 * Copyright 2026 The odflow Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Thick-restart Lanczos for the smallest eigenpair of a graph Laplacian
// restricted to the complement of the constant vector.
//
// Every new Krylov vector is orthogonalized twice against the normalized
// constant vector and the whole basis, and the projected matrix
// H = V^T L V is filled with the computed inner products. That keeps the
// basis orthonormal to working precision and makes the restart bookkeeping
// implicit: after a restart the coupling between the kept Ritz vectors and
// the residual direction reappears in the next column of H.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "odflow/error.hpp"
#include "odflow/kernels.hpp"
#include "odflow/spectral.hpp"

namespace odflow {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void remove_mean(std::span<double> w) {
  double mean = 0.0;
  for (double x : w) mean += x;
  mean /= static_cast<double>(w.size());
  for (double& x : w) x -= mean;
}

double inf_norm(const LaplacianMatrix& L) {
  double best = 0.0;
  for (std::size_t i = 0; i < L.n; ++i) {
    double row = 0.0;
    for (std::size_t k = L.row_ptr[i]; k < L.row_ptr[i + 1]; ++k) {
      row += std::abs(L.val[k]);
    }
    best = std::max(best, row);
  }
  return best;
}

class Basis {
 public:
  Basis(std::size_t n, std::size_t capacity)
      : n_(n), data_(n * capacity, 0.0) {}

  std::span<double> operator[](std::size_t j) {
    return {data_.data() + j * n_, n_};
  }
  std::span<const double> operator[](std::size_t j) const {
    return {data_.data() + j * n_, n_};
  }

  // Two passes of classical Gram-Schmidt against the constant vector and
  // columns [0, count). Returns the accumulated projection coefficients.
  Eigen::VectorXd orthogonalize(std::span<double> w, std::size_t count) const {
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(count));
    for (int pass = 0; pass < 2; ++pass) {
      remove_mean(w);
      Eigen::VectorXd c(static_cast<Eigen::Index>(count));
      for (std::size_t j = 0; j < count; ++j) c[j] = dot((*this)[j], w);
      for (std::size_t j = 0; j < count; ++j) axpy(-c[j], (*this)[j], w);
      coeff += c;
    }
    remove_mean(w);
    return coeff;
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

class StartVectors {
 public:
  explicit StartVectors(std::uint64_t seed) : gen_(seed) {}

  void fill(std::span<double> w) {
    for (double& x : w) {
      x = static_cast<double>(gen_() >> 11) * 0x1.0p-52 - 1.0;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

FiedlerResult lanczos_fiedler(const LaplacianMatrix& L,
                              const SolverOptions& options) {
  const std::size_t n = L.n;
  if (n < 2) throw Error(ErrorCode::kSingleton, "Fiedler vector needs n >= 2");
  if (component_indices(L).size() > 1) {
    throw Error(ErrorCode::kMultiplicity,
                "graph is disconnected: zero eigenvalue has multiplicity > 1; "
                "order each connected component separately");
  }

  // The deflated operator acts on an (n-1)-dimensional space.
  const std::size_t m = std::max<std::size_t>(
      1, std::min(n - 1, std::max<std::size_t>(options.max_basis, 2)));
  const std::size_t keep =
      std::clamp<std::size_t>(options.keep, 1, m > 1 ? m - 1 : 1);
  const std::size_t max_matvecs = options.iterations_per_node * n;
  const double norm_a = inf_norm(L);
  const double floor_residual =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(norm_a, 1.0) *
      std::sqrt(static_cast<double>(n));
  const double breakdown = 1e-13 * std::max(norm_a, 1.0);

  Basis V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  StartVectors starts(options.seed);
  std::vector<double> w(n);
  std::vector<double> x(n);
  std::vector<double> ax(n);

  auto fresh_direction = [&](std::size_t count, std::span<double> out) {
    // Retry until the random vector has a component outside the basis.
    for (int attempt = 0; attempt < 8; ++attempt) {
      starts.fill(out);
      V.orthogonalize(out, count);
      const double len = norm(out);
      if (len > 1e-8) {
        for (double& e : out) e /= len;
        return true;
      }
    }
    return false;
  };

  if (!fresh_direction(0, V[0])) {
    throw Error(ErrorCode::kSolverConvergence, "cannot build start vector");
  }

  std::size_t matvecs = 0;
  std::size_t first = 0;
  while (true) {
    double beta = 0.0;
    bool complete = false;  // basis spans the whole deflated space
    std::size_t size = m;
    for (std::size_t j = first; j < m; ++j) {
      kernels::parallel::spmv(L, V[j], w);
      ++matvecs;
      const Eigen::VectorXd c = V.orthogonalize(w, j + 1);
      for (std::size_t i = 0; i <= j; ++i) {
        H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c[i];
        H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c[i];
      }
      beta = norm(w);
      if (j + 1 == n - 1) {
        complete = true;
        size = j + 1;
        beta = 0.0;
        break;
      }
      auto next = V[j + 1];
      if (beta <= breakdown) {
        // Invariant subspace: continue with an unrelated direction.
        beta = 0.0;
        if (!fresh_direction(j + 1, next)) {
          complete = true;
          size = j + 1;
          break;
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / beta;
      }
    }

    const Eigen::Index k = static_cast<Eigen::Index>(size);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H.topLeftCorner(k, k));
    const Eigen::VectorXd& theta = eig.eigenvalues();
    const Eigen::MatrixXd& Y = eig.eigenvectors();

    std::fill(x.begin(), x.end(), 0.0);
    for (Eigen::Index j = 0; j < k; ++j) axpy(Y(j, 0), V[static_cast<std::size_t>(j)], x);
    remove_mean(x);
    const double len = norm(x);
    for (double& e : x) e /= len;
    kernels::parallel::spmv(L, x, ax);
    ++matvecs;
    const double lambda = dot(x, ax);
    for (std::size_t i = 0; i < n; ++i) w[i] = ax[i] - lambda * x[i];
    const double residual = norm(w);
    const double scale = std::max(1.0, lambda);
    const double target = std::max(options.tolerance * scale, floor_residual);

    const bool converged = residual <= target || complete;
    if (converged || matvecs >= max_matvecs) {
      if (residual > kFiedlerResidualBound * scale) {
        throw Error(ErrorCode::kSolverConvergence,
                    "Lanczos stopped after " + std::to_string(matvecs) +
                        " matrix-vector products with residual " +
                        std::to_string(residual));
      }
      FiedlerResult result{lambda, x};
      canonicalize_sign(result.v);
      return result;
    }

    // Thick restart: keep the `keep` smallest Ritz vectors and continue from
    // the current residual direction.
    const std::size_t kept = std::min<std::size_t>(keep, size - 1);
    {
      std::vector<double> ritz(kept * n, 0.0);
      for (std::size_t r = 0; r < kept; ++r) {
        std::span<double> out(ritz.data() + r * n, n);
        for (Eigen::Index j = 0; j < k; ++j) {
          axpy(Y(j, static_cast<Eigen::Index>(r)), V[static_cast<std::size_t>(j)], out);
        }
      }
      std::vector<double> residual_dir(V[size].begin(), V[size].end());
      for (std::size_t r = 0; r < kept; ++r) {
        std::copy_n(ritz.data() + r * n, n, V[r].begin());
      }
      auto next = V[kept];
      if (beta > 0.0) {
        std::copy(residual_dir.begin(), residual_dir.end(), next.begin());
        // Reorthogonalize against the rotated basis to shed drift.
        V.orthogonalize(next, kept);
        const double l = norm(next);
        for (double& e : next) e /= l;
      } else if (!fresh_direction(kept, next)) {
        throw Error(ErrorCode::kSolverConvergence, "Lanczos restart failed");
      }
    }
    H.setZero();
    for (std::size_t r = 0; r < kept; ++r) {
      H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) =
          theta[static_cast<Eigen::Index>(r)];
    }
    first = kept;
  }
}

}  // namespace odflow
