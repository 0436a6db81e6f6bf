#include "nsv/spectral/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace nsv::fft {

namespace {

// Key: shape, axis (-dims for a full transform), direction.
using Key = std::tuple<Index3, int, bool>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Index3& shape, int axis, bool inverse) {
    std::lock_guard lock(mutex_);
    const Key key{shape, axis, inverse};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int n : shape) total *= n;
    // FFTW_ESTIMATE leaves the buffer untouched and picks the same plan every time.
    std::vector<Complex> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan;
    if (axis < 0) {
      plan = fftw_plan_dft(-axis, shape.data(), buf, buf, sign, flags);
    } else {
      int stride = 1;
      for (int d = axis + 1; d < 3; ++d) stride *= shape[d];
      const int outer = static_cast<int>(total / (static_cast<std::size_t>(stride) * shape[axis]));
      const fftw_iodim line{shape[axis], stride, stride};
      const fftw_iodim loops[2] = {{outer, stride * shape[axis], stride * shape[axis]}, {stride, 1, 1}};
      plan = fftw_plan_guru_dft(1, &line, 2, loops, buf, buf, sign, flags);
    }
    if (plan == nullptr) throw std::runtime_error("FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(fftw_plan plan, std::vector<Complex>& data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void scale(std::vector<Complex>& data, double factor) {
  for (auto& c : data) c *= factor;
}

}  // namespace

void transform(std::vector<Complex>& data, const Index3& shape, int dims, bool inverse) {
  Index3 full = shape;
  std::size_t total = 1;
  for (int d = 0; d < dims; ++d) total *= shape[d];
  for (int d = dims; d < 3; ++d) {
    if (shape[d] != 1) throw std::invalid_argument("trailing FFT axes must have length 1");
    full[d] = 1;
  }
  execute(cache().get(full, -dims, inverse), data);
  if (inverse) scale(data, 1.0 / static_cast<double>(total));
}

void transform_axis(std::vector<Complex>& data, const Index3& shape, int axis, bool inverse) {
  execute(cache().get(shape, axis, inverse), data);
  if (inverse) scale(data, 1.0 / shape[axis]);
}

}  // namespace nsv::fft
