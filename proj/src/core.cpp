#include "projfree/core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace projfree {

namespace {

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
  }
}

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

Vector Vector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw ArgumentError("basis: index out of range");
  Vector e(dim);
  e[index] = 1.0;
  return e;
}

bool Vector::all_finite() const noexcept {
  for (double c : coords_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double distance(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

void axpy(double alpha, const Vector& x, Vector& y) {
  require_same_dim(x, y, "axpy");
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += alpha * x[i];
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "add");
  Vector out(a);
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] += b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "subtract");
  Vector out(a);
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] -= b[i];
  return out;
}

Vector operator-(const Vector& a) { return -1.0 * a; }

Vector operator*(double s, const Vector& a) {
  Vector out(a);
  for (double& c : out.coords()) c *= s;
  return out;
}

Vector convex_step(const Vector& x, const Vector& v, double gamma) {
  require_same_dim(x, v, "convex_step");
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ArgumentError("convex_step: step size must lie in [0, 1]");
  }
  Vector out(x);
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] += gamma * (v[i] - x[i]);
  return out;
}

std::string to_string(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed),
      stream_id_(stream_id),
      key_(mix64(mix64(seed + kGolden) ^ (stream_id * 0xd6e8feb86659fd93ULL))) {}

RngStream RngStream::child(std::uint64_t label) const noexcept {
  return RngStream(seed_, mix64(stream_id_ ^ mix64(label + kGolden)) ^ 1ULL);
}

std::uint64_t RngStream::next_u64() noexcept {
  return mix64(key_ + kGolden * (++counter_));
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw ArgumentError("uniform_index: empty range");
  // Reject the lowest (2^64 mod n) values so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t r = next_u64();
  while (r < threshold) r = next_u64();
  return r % n;
}

double RngStream::normal() noexcept {
  // Box-Muller, one variate per call; u1 is kept away from zero.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> sample_indices(RngStream& rng, std::size_t n,
                                        std::size_t b) {
  if (n == 0) throw ArgumentError("sample_indices: n must be positive");
  if (b == 0) throw ArgumentError("sample_indices: b must be positive");
  std::vector<std::size_t> out(b);
  for (auto& idx : out) idx = static_cast<std::size_t>(rng.uniform_index(n));
  return out;
}

}  // namespace projfree
