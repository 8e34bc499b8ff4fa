#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace projfree {

/// Raised when two operands live in different ambient dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for out-of-domain parameters (negative step, empty batch, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense point in R^d. Iterates, LMO vertices and gradients all use this.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
  Vector(std::initializer_list<double> values) : coords_(values) {}
  explicit Vector(std::vector<double> values) : coords_(std::move(values)) {}

  static Vector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }

  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  bool all_finite() const noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> coords_;
};

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double distance(const Vector& a, const Vector& b);

/// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator-(const Vector& a);
Vector operator*(double s, const Vector& a);

/// x + gamma (v - x). Throws ArgumentError unless 0 <= gamma <= 1.
Vector convex_step(const Vector& x, const Vector& v, double gamma);

std::string to_string(const Vector& v);

// ---------------------------------------------------------------------------
// Randomness

/// Counter-based generator. Draw k of stream (seed, id) is a fixed function
/// of (seed, id, k), so sequences are identical on every platform. Child
/// streams are keyed by hashing the parent id with a label.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t position() const noexcept { return counter_; }

  RngStream child(std::uint64_t label) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform in {0, ..., n-1}, unbiased (rejection on the short tail).
  std::uint64_t uniform_index(std::uint64_t n);
  double normal() noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Purpose labels for deriving independent child streams from a run seed.
namespace streams {
inline constexpr std::uint64_t kIndexSampling = 0x5a4d'504cULL;
inline constexpr std::uint64_t kDataGeneration = 0x4441'5441ULL;
inline constexpr std::uint64_t kOutputSelection = 0x4f55'5450ULL;
inline constexpr std::uint64_t kGapEvaluation = 0x4556'414cULL;
inline constexpr std::uint64_t kPresample = 0x5052'4553ULL;
}  // namespace streams

/// b i.i.d. uniform draws from {0, ..., n-1} (0-based), with replacement,
/// in draw order.
std::vector<std::size_t> sample_indices(RngStream& rng, std::size_t n,
                                        std::size_t b);

// ---------------------------------------------------------------------------
// Oracle accounting

enum class Accounting { kAlgorithm, kGapEvaluation };

struct OracleCounters {
  std::uint64_t sfo = 0;
  std::uint64_t ifo = 0;
  std::uint64_t lo = 0;
  std::uint64_t gap_lo = 0;
  std::uint64_t gap_ifo = 0;

  void add_gradients(std::uint64_t count, Accounting mode) noexcept {
    (mode == Accounting::kAlgorithm ? ifo : gap_ifo) += count;
  }
  void add_linear_oracle(Accounting mode) noexcept {
    (mode == Accounting::kAlgorithm ? lo : gap_lo) += 1;
  }

  friend bool operator==(const OracleCounters&,
                         const OracleCounters&) = default;
};

}  // namespace projfree
