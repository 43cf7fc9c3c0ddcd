// Copyright 2026 The nanomech Authors
//
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

#include <doctest.h>

#include "nanomech/linalg.hpp"
#include "support.hpp"

using namespace nanomech::linalg;
using nanomech::testing::random_density;
using nanomech::testing::random_hermitian;
using nanomech::testing::random_matrix;

namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                        static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

// Direct index summation over the traced factors; independent of the
// table-driven implementation.
ComplexMatrix brute_partial_trace_middle(const ComplexMatrix& rho, std::size_t da,
                                         std::size_t db, std::size_t dc) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(da * dc),
                                          static_cast<Eigen::Index>(da * dc));
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t c = 0; c < dc; ++c)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t c2 = 0; c2 < dc; ++c2)
          for (std::size_t b = 0; b < db; ++b) {
            const auto r = static_cast<Eigen::Index>((a * db + b) * dc + c);
            const auto s = static_cast<Eigen::Index>((a2 * db + b) * dc + c2);
            out(static_cast<Eigen::Index>(a * dc + c),
                static_cast<Eigen::Index>(a2 * dc + c2)) += rho(r, s);
          }
  return out;
}

}  // namespace

TEST_CASE("composite space sizes and validation") {
  const auto s = CompositeSpace::qubits_and_resonator(2, 10);
  CHECK(s.size() == 3);
  CHECK(s.total() == 44);
  CHECK(s.dim(2) == 11);
  const std::size_t sites[] = {0, 2};
  CHECK(s.total_of(sites) == 22);
  CHECK_THROWS_AS(CompositeSpace({2, 1}), DimensionError);
  CHECK_THROWS_AS(CompositeSpace(std::vector<std::size_t>{}), DimensionError);
}

TEST_CASE("pauli and ladder operators") {
  const Complex i{0.0, 1.0};
  CHECK(approx_equal(sigma_x() * sigma_y() - sigma_y() * sigma_x(), 2.0 * i * sigma_z(), 1e-15));
  // sigma_z |e> = |e> with |e> the first basis vector.
  CHECK(sigma_z()(0, 0) == Complex{1.0, 0.0});
  CHECK(approx_equal(sigma_plus() * sigma_minus(), diag({1, 0}), 0.0));
  CHECK(approx_equal(sigma_plus() + sigma_minus(), sigma_x(), 0.0));

  const ComplexMatrix a = destroy(4);
  for (Eigen::Index n = 1; n <= 4; ++n) {
    CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(static_cast<double>(n))));
  }
  const ComplexMatrix comm = a * a.adjoint() - a.adjoint() * a;
  // [a, a^dag] = 1 except at the truncation edge.
  CHECK(approx_equal(comm.topLeftCorner(4, 4), identity(4), 1e-14));
  CHECK(comm(4, 4).real() == doctest::Approx(-4.0));
}

TEST_CASE("kron identities") {
  CHECK(approx_equal(kron(identity(2), identity(2)), identity(4), 0.0));
  const ComplexMatrix xx = kron(sigma_x(), sigma_x());
  CHECK(approx_equal(xx * xx, identity(4), 1e-15));
  // |e> (x) |g> is basis index 1.
  const ComplexMatrix zi = kron(sigma_z(), identity(2));
  CHECK(zi(1, 1) == Complex{1.0, 0.0});

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_matrix(rng, 2, 2);
    const auto b = random_matrix(rng, 3, 3);
    const auto c = random_matrix(rng, 2, 2);
    CHECK(approx_equal(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-12));
  }
}

TEST_CASE("embed") {
  const CompositeSpace two{2, 2};
  CHECK(approx_equal(embed(sigma_z(), 0, two), kron(sigma_z(), identity(2)), 0.0));
  const auto s = CompositeSpace::qubits_and_resonator(2, 3);
  const ComplexMatrix a = embed(destroy(3), 2, s);
  const ComplexMatrix x = embed(sigma_x(), 0, s);
  CHECK(max_abs(a * x - x * a) < 1e-15);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(approx_equal(embed(identity(s.dim(k)), k, s), identity(s.total()), 0.0));
  }
  CHECK_THROWS_AS(embed(sigma_x(), 2, s), DimensionError);
  CHECK_THROWS_AS(embed(sigma_x(), 3, s), DimensionError);
}

TEST_CASE("partial trace against index summation") {
  std::mt19937_64 rng(7);
  const CompositeSpace s{2, 3, 2};
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = random_density(rng, 12);
    const auto kept = partial_trace(rho, s, {0, 2});
    CHECK(approx_equal(kept, brute_partial_trace_middle(rho, 2, 3, 2), 1e-14));
    CHECK(std::abs(kept.trace() - rho.trace()) < 1e-12);
    CHECK(std::abs(partial_trace(rho, s, {1}).trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("partial trace of products and Bell states") {
  std::mt19937_64 rng(8);
  const auto ra = random_density(rng, 2);
  const ComplexMatrix rb = 3.0 * random_density(rng, 3);
  const CompositeSpace s{2, 3};
  CHECK(approx_equal(partial_trace(kron(ra, rb), s, {0}), ra * 3.0, 1e-12));

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix rho = bell * bell.adjoint();
  CHECK(approx_equal(partial_trace(rho, CompositeSpace{2, 2}, {0}), identity(2) / 2.0, 1e-15));
  CHECK_THROWS_AS(partial_trace(rho, CompositeSpace{2, 2}, {}), DimensionError);
  CHECK_THROWS_AS(partial_trace(rho, CompositeSpace{2, 2}, {0, 0}), DimensionError);
  CHECK_THROWS_AS(partial_trace(rho, CompositeSpace{2, 2}, {2}), DimensionError);
  CHECK_THROWS_AS(partial_trace(rho, CompositeSpace{2, 3}, {0}), DimensionError);
}

TEST_CASE("hermitian eigendecomposition") {
  const auto d = hermitian_eigs(diag({3, 1, 2}));
  CHECK(d.values(0) == doctest::Approx(3.0));
  CHECK(d.values(1) == doctest::Approx(2.0));
  CHECK(d.values(2) == doctest::Approx(1.0));
  const auto x = hermitian_eigs(sigma_x());
  CHECK(x.values(0) == doctest::Approx(1.0));
  CHECK(x.values(1) == doctest::Approx(-1.0));

  std::mt19937_64 rng(9);
  const auto h = random_hermitian(rng, 8);
  const auto e = hermitian_eigs(h);
  CHECK(std::abs(e.values.sum() - h.trace().real()) < 1e-10);
  const ComplexMatrix back =
      e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  CHECK(approx_equal(back, h, 1e-10));

  const auto rho = random_density(rng, 6);
  CHECK(std::abs(hermitian_eigs(rho).values.sum() - rho.trace().real()) < 1e-10);

  ComplexMatrix bad = h;
  bad(0, 1) += 1e-3;
  CHECK_THROWS_AS(hermitian_eigs(bad), NotHermitianError);
}

TEST_CASE("psd square root") {
  CHECK(approx_equal(psd_sqrt(identity(3)).root, identity(3), 1e-15));
  CHECK(approx_equal(psd_sqrt(diag({4, 9})).root, diag({2, 3}), 1e-14));

  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix m = 5.0 * random_density(rng, 5, 3);
    const auto s = psd_sqrt(m).root;
    CHECK(max_abs(s * s - m) <= 1e-10);
    CHECK(hermiticity_defect(s) < 1e-12);
  }
  const auto psi = nanomech::testing::random_pure(rng, 4);
  const ComplexMatrix p = psi * psi.adjoint();
  CHECK(approx_equal(psd_sqrt(p).root, p, 1e-12));

  CHECK(psd_sqrt(diag({1, -1e-10})).clamped == doctest::Approx(1e-10));
  CHECK_THROWS_AS(psd_sqrt(diag({1, -1e-6})), NotPositiveError);
  CHECK_NOTHROW(psd_sqrt(diag({1, -1e-6}), 1e-5));
}

TEST_CASE("general eigenvalues") {
  ComplexMatrix nil = ComplexMatrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  for (const auto& ev : general_eigenvalues(nil)) CHECK(std::abs(ev) < 1e-15);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = Complex{1.0, 2.0};
  d(1, 1) = 3.0;
  auto evs = general_eigenvalues(d);
  std::sort(evs.begin(), evs.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(evs[0] - Complex{1.0, 2.0}) < 1e-14);
  CHECK(std::abs(evs[1] - Complex{3.0, 0.0}) < 1e-14);

  // rho rho~ for a Bell state has spectrum {1, 0, 0, 0}.
  ComplexVector bell = ComplexVector::Zero(4);
  bell(1) = bell(2) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix rho = bell * bell.adjoint();
  const ComplexMatrix yy = kron(sigma_y(), sigma_y());
  const auto spec = general_eigenvalues(rho * yy * rho.conjugate() * yy);
  double largest = 0.0, rest = 0.0;
  for (const auto& ev : spec) {
    if (std::abs(ev) > std::abs(largest)) {
      rest += std::abs(largest);
      largest = ev.real();
    } else {
      rest += std::abs(ev);
    }
  }
  CHECK(largest == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rest < 1e-12);
}

TEST_CASE("vec and unvec are column stacking") {
  std::mt19937_64 rng(12);
  const auto m = random_matrix(rng, 3, 4);
  const auto v = vec(m);
  CHECK(v(1) == m(1, 0));
  CHECK(v(3) == m(0, 1));
  CHECK(approx_equal(unvec(v, 3), m, 0.0));
  CHECK_THROWS_AS(unvec(v, 5), DimensionError);
}
