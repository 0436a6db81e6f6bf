#include "nsv/fields/nsf1.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "nsv/fields/errors.hpp"

namespace nsv {

namespace {

static_assert(std::endian::native == std::endian::little,
              "NSF1 encoding assumes a little-endian host");

constexpr char kMagic[4] = {'N', 'S', 'F', '1'};

template <class T>
void put(std::ostream& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) {
    throw FormatError(std::string("NSF1 payload truncated while reading ") + what);
  }
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

void write_nsf1(std::ostream& out, const VectorField& v) {
  const GridSpec& g = v.grid();
  if (!v.staggered() && v[0].centering() != kNodes) {
    throw FormatError("NSF1 stores collocated fields on nodes only");
  }
  out.write(kMagic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dims()));
  for (int d = 0; d < g.dims(); ++d) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.cells(d)));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(v.layout()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(g.kind()));
  for (int d = 0; d < g.dims(); ++d) put<double>(out, g.length(d));
  for (const auto& c : v.components()) {
    for (double x : c.values()) put<double>(out, x);
  }
}

void write_nsf1(const std::filesystem::path& path, const VectorField& v) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_nsf1(out, v);
  if (!out) throw FormatError("failed writing " + path.string());
}

VectorField read_nsf1(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw FormatError("NSF1 payload truncated before magic");
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not an NSF1 file (bad magic)");
  const auto dims = get<std::uint32_t>(in, "dimension");
  if (dims != 2 && dims != 3) throw FormatError("NSF1 dimension must be 2 or 3");
  Index3 cells{1, 1, 1};
  for (std::uint32_t d = 0; d < dims; ++d) {
    const auto n = get<std::uint32_t>(in, "cell counts");
    if (n > (1u << 20)) throw FormatError("NSF1 cell count out of range");
    cells[d] = static_cast<int>(n);
  }
  const auto layout = get<std::uint8_t>(in, "layout tag");
  const auto domain = get<std::uint8_t>(in, "domain tag");
  if (layout > 1) throw FormatError("NSF1 unknown layout tag " + std::to_string(layout));
  if (domain > 1) throw FormatError("NSF1 unknown domain tag " + std::to_string(domain));
  Vec3 lengths{1.0, 1.0, 1.0};
  for (std::uint32_t d = 0; d < dims; ++d) lengths[d] = get<double>(in, "lengths");

  std::optional<GridSpec> grid;
  try {
    grid.emplace(static_cast<int>(dims), cells, lengths, static_cast<DomainKind>(domain));
  } catch (const GridError& e) {
    throw FormatError(std::string("NSF1 header describes an invalid grid: ") + e.what());
  }
  const auto lay = static_cast<Layout>(layout);
  if (lay == Layout::staggered_mac && grid->periodic()) {
    throw FormatError("NSF1 staggered layout on a periodic domain");
  }
  std::vector<ScalarField> comps;
  for (std::uint32_t d = 0; d < dims; ++d) {
    const Staggering c = lay == Layout::staggered_mac ? face_centering(static_cast<int>(d)) : kNodes;
    ScalarField probe(*grid, c);
    std::vector<double> values(probe.size());
    const auto bytes = static_cast<std::streamsize>(values.size() * sizeof(double));
    if (!in.read(reinterpret_cast<char*>(values.data()), bytes)) {
      throw FormatError("NSF1 payload truncated in component " + std::to_string(d));
    }
    try {
      comps.emplace_back(*grid, c, std::move(values));
    } catch (const NonFiniteError&) {
      throw FormatError("NSF1 component " + std::to_string(d) + " holds non-finite values");
    }
  }
  return VectorField(lay, std::move(comps));
}

VectorField read_nsf1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_nsf1(in);
}

}  // namespace nsv
