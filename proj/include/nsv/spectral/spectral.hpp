#pragma once

#include <stdexcept>
#include <vector>

#include "nsv/fields/field.hpp"
#include "nsv/spectral/fft.hpp"

namespace nsv {

// Poisson right-hand side with non-zero mean on a torus.
class SolvabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DealiasPolicy { none, two_thirds };

// Fourier coefficients of a real periodic scalar, full complex layout in FFT
// bin order. Coefficients are unnormalized (the k = 0 bin is the sample sum).
class SpectralField {
 public:
  SpectralField(GridSpec grid, std::vector<fft::Complex> modes);

  const GridSpec& grid() const { return grid_; }
  const Index3& shape() const { return shape_; }
  std::size_t size() const { return modes_.size(); }
  const std::vector<fft::Complex>& modes() const { return modes_; }
  const fft::Complex& operator[](std::size_t i) const { return modes_[i]; }

  // Flat index of the bin holding wavenumber -k for bin `flat`.
  std::size_t conjugate_index(std::size_t flat) const;
  // Signed integer wavenumbers of bin `flat`.
  Index3 wavenumbers(std::size_t flat) const;

 private:
  GridSpec grid_;
  Index3 shape_;
  std::vector<fft::Complex> modes_;
};

// The forward transform symmetrizes bins pairwise so that
// modes[-k] == conj(modes[k]) holds exactly.
SpectralField forward_transform(const ScalarField& s);
ScalarField inverse_transform(const SpectralField& s);

// Zero every bin with |k_i| > n_i / 3 on any axis.
void apply_dealias(std::vector<fft::Complex>& modes, const GridSpec& grid, DealiasPolicy policy);
bool dealias_keeps(const Index3& k, const GridSpec& grid);

// Solves laplacian(p) = rhs on the torus with volume_integral(p) == 0.
// Throws SolvabilityError if |mean(rhs)| > 1e-10.
ScalarField solve_poisson_periodic(const ScalarField& rhs);

// Orthogonal projection onto discretely divergence-free fields; the mean
// velocity is left unchanged.
VectorField leray_project(const VectorField& v);

// Pointwise product a*b with the top third of modes removed under two_thirds.
ScalarField dealias_product(const ScalarField& a, const ScalarField& b, DealiasPolicy policy);

// Energy computed from Fourier coefficients (Parseval), equal to energy(v).
double spectral_energy(const VectorField& v);

// Fourier-space helpers shared with the time steppers. Coefficients follow the
// SpectralField normalization.
namespace spectral {

// Effective wavenumber vectors per bin (Nyquist bins map to 0).
struct Wavenumbers {
  explicit Wavenumbers(const GridSpec& grid);
  std::vector<Vec3> k;         // per bin
  std::vector<double> k2;      // |k|^2 per bin
  std::vector<char> keep;      // dealias mask for two_thirds
};

// In-place Leray projection of coefficient arrays (one per component).
void project(std::vector<std::vector<fft::Complex>>& comps, const Wavenumbers& wn, int dims);

}  // namespace spectral

}  // namespace nsv
