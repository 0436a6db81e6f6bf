#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "nsv/fields/operators.hpp"
#include "nsv/spectral/fft.hpp"
#include "nsv/spectral/spectral.hpp"
#include "support.hpp"

using namespace nsv;
using nsv::testing::max_diff;

namespace {

const GridSpec torus64 = GridSpec::periodic(2, 64);

ScalarField sample(const GridSpec& g, double (*fn)(const Point&)) {
  return ScalarField::sample(g, [fn](const Point& p) { return fn(p); });
}

// Direct O(n^2) DFT of one line, used as an independent oracle.
std::vector<fft::Complex> naive_dft(const std::vector<fft::Complex>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<fft::Complex> out(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const double a = -2.0 * kPi * k * j / n;
      out[k] += x[j] * fft::Complex(std::cos(a), std::sin(a));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("single-axis transform matches a direct DFT on every strided line") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int n : {8, 16, 64}) {
    const Index3 shape{3, n, 5};
    std::vector<fft::Complex> x(3 * n * 5);
    for (auto& c : x) c = {g(rng), g(rng)};
    auto y = x;
    fft::transform_axis(y, shape, 1, false);
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 5; ++k) {
        std::vector<fft::Complex> line(n);
        for (int j = 0; j < n; ++j) line[j] = x[(i * n + j) * 5 + k];
        const auto ref = naive_dft(line);
        for (int j = 0; j < n; ++j) CHECK(std::abs(y[(i * n + j) * 5 + k] - ref[j]) < 1e-12);
      }
    }
    fft::transform_axis(y, shape, 1, true);
    for (std::size_t m = 0; m < x.size(); ++m) CHECK(std::abs(y[m] - x[m]) < 1e-14);
  }
}

TEST_CASE("full transform equals successive axis transforms and inverts") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const Index3 shape{16, 8, 1};
  std::vector<fft::Complex> x(16 * 8);
  for (auto& c : x) c = {g(rng), g(rng)};
  auto full = x, axes = x;
  fft::transform(full, shape, 2, false);
  fft::transform_axis(axes, shape, 0, false);
  fft::transform_axis(axes, shape, 1, false);
  for (std::size_t m = 0; m < x.size(); ++m) CHECK(std::abs(full[m] - axes[m]) < 1e-12);
  fft::transform(full, shape, 2, true);
  for (std::size_t m = 0; m < x.size(); ++m) CHECK(std::abs(full[m] - x[m]) < 1e-14);
}

TEST_CASE("spectral round trip and exact conjugate symmetry") {
  std::mt19937_64 rng(2);
  for (const GridSpec& grid : {torus64, GridSpec::periodic(3, 16)}) {
    const ScalarField s = nsv::testing::random_scalar(grid, rng, 5, 8);
    const SpectralField f = forward_transform(s);
    for (std::size_t n = 0; n < f.size(); ++n) {
      CHECK(f[f.conjugate_index(n)] == std::conj(f[n]));
    }
    CHECK(max_diff(inverse_transform(f), s) <= 1e-12 * max_abs(s));
  }
}

TEST_CASE("poisson examples") {
  CHECK(max_abs(solve_poisson_periodic(ScalarField(torus64))) == 0.0);
  const auto p1 = solve_poisson_periodic(sample(torus64, [](const Point& p) { return -std::sin(p[0]); }));
  CHECK(max_diff(p1, sample(torus64, [](const Point& p) { return std::sin(p[0]); })) < 1e-10);
  const auto p2 = solve_poisson_periodic(sample(torus64, [](const Point& p) {
    return -2.0 * std::sin(p[0]) * std::sin(p[1]);
  }));
  CHECK(max_diff(p2, sample(torus64, [](const Point& p) { return std::sin(p[0]) * std::sin(p[1]); })) <
        1e-10);
}

TEST_CASE("poisson rejects a right-hand side with non-zero mean") {
  try {
    solve_poisson_periodic(ScalarField::constant(torus64, 0.25));
    FAIL("expected SolvabilityError");
  } catch (const SolvabilityError& e) {
    CHECK(std::string(e.what()).find("0.25") != std::string::npos);
  }
}

TEST_CASE("poisson solution satisfies the equation with zero mean gauge") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField raw = nsv::testing::random_scalar(torus64, rng, 6, 6);
    const ScalarField rhs = laplacian(raw);  // zero mean, no Nyquist content
    const ScalarField p = solve_poisson_periodic(rhs);
    CHECK(max_diff(laplacian(p), rhs) < 1e-10);
    CHECK(std::abs(volume_integral(p)) < 1e-10);
  }
}

TEST_CASE("property: poisson solve is linear") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField a = laplacian(nsv::testing::random_scalar(torus64, rng));
    const ScalarField b = laplacian(nsv::testing::random_scalar(torus64, rng));
    CHECK(max_diff(solve_poisson_periodic(a + b),
                   solve_poisson_periodic(a) + solve_poisson_periodic(b)) < 1e-12);
  }
}

TEST_CASE("leray projection examples") {
  const auto tg = VectorField::sample(torus64, [](const Point& p) {
    return Vec3{std::sin(p[0]) * std::cos(p[1]), -std::cos(p[0]) * std::sin(p[1]), 0.0};
  });
  CHECK(max_diff(leray_project(tg), tg) < 1e-12);

  std::mt19937_64 rng(5);
  const ScalarField s = nsv::testing::random_scalar(torus64, rng);
  CHECK(max_abs(leray_project(gradient(s))) < 1e-10);

  const auto sx = VectorField::sample(torus64, [](const Point& p) { return Vec3{std::sin(p[0]), 0.0, 0.0}; });
  const VectorField out = leray_project(sx);
  CHECK(max_abs(divergence(out)) < 1e-10);
  // Brute-force reference: v - grad(solve(div v)).
  const VectorField ref = sx - gradient(solve_poisson_periodic(divergence(sx)));
  CHECK(max_diff(out, ref) < 1e-12);
}

TEST_CASE("property: leray projection is idempotent and keeps the mean") {
  std::mt19937_64 rng(6);
  for (const GridSpec& grid : {torus64, GridSpec::periodic(3, 16)}) {
    for (int trial = 0; trial < 4; ++trial) {
      const VectorField v = nsv::testing::random_vector(grid, rng, 4, 6) +
                            VectorField::sample(grid, [](const Point&) { return Vec3{0.3, -0.2, 0.1}; });
      const VectorField p = leray_project(v);
      CHECK(max_abs(divergence(p)) < 1e-10);
      CHECK(max_diff(leray_project(p), p) < 1e-12);
      for (int d = 0; d < grid.dims(); ++d) {
        CHECK(std::abs(volume_integral(p[d]) - volume_integral(v[d])) < 1e-10);
      }
    }
  }
}

TEST_CASE("dealias product examples") {
  const auto one = ScalarField::constant(torus64, 1.0);
  CHECK(max_diff(dealias_product(one, one, DealiasPolicy::two_thirds), one) < 1e-14);
  const auto sx = sample(torus64, [](const Point& p) { return std::sin(p[0]); });
  CHECK(max_diff(dealias_product(sx, one, DealiasPolicy::two_thirds), sx) < 1e-14);

  // sin(31 x)^2 on n = 64: inspect every mode of the result with a direct DFT.
  const auto hi = sample(torus64, [](const Point& p) { return std::sin(31.0 * p[0]); });
  const ScalarField prod = dealias_product(hi, hi, DealiasPolicy::two_thirds);
  std::vector<fft::Complex> line(64);
  for (int j = 0; j < 64; ++j) {
    for (int i = 0; i < 64; ++i) line[i] = prod.at(i, j);
    const auto modes = naive_dft(line);
    for (int k = 0; k < 64; ++k) {
      if (3 * std::abs(fft::signed_mode(k, 64)) > 64) CHECK(std::abs(modes[k]) < 1e-10);
    }
  }
}

TEST_CASE("two-thirds mask keeps |k| <= n/3 only") {
  const GridSpec g = GridSpec::periodic(2, 32);
  CHECK(dealias_keeps({10, -10, 0}, g));
  CHECK_FALSE(dealias_keeps({11, 0, 0}, g));
  CHECK_FALSE(dealias_keeps({0, -16, 0}, g));
}

TEST_CASE("property: parseval energy matches quadrature") {
  std::mt19937_64 rng(7);
  for (const GridSpec& grid : {torus64, GridSpec::periodic(3, 16)}) {
    for (int trial = 0; trial < 4; ++trial) {
      const VectorField v = nsv::testing::random_vector(grid, rng, 5, 6);
      const double e = energy(v);
      CHECK(std::abs(spectral_energy(v) - e) <= 1e-10 * e);
    }
  }
}
