#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace inside {

using Vector = std::vector<double>;

// Closed two-value set. Adding labels means extending the bank gender byte
// and the planner's group iteration together.
enum class Gender : std::uint8_t { Male = 0, Female = 1 };

inline constexpr Gender kGenders[] = {Gender::Male, Gender::Female};

std::string_view to_string(Gender g) noexcept;
std::optional<Gender> parse_gender(std::string_view token) noexcept;

struct SpeakerEmbedding {
  std::string id;
  Gender gender = Gender::Male;
  Vector vector;  // unit norm once inside an EmbeddingSet
};

// Interpolation weight in [0, 1]; 0 yields the first parent, 1 the second.
class InterpolationCoefficient {
 public:
  explicit InterpolationCoefficient(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

struct SyntheticIdentity {
  std::string id;
  std::string parent_a;
  std::string parent_b;
  double alpha = 0.5;
  Gender gender = Gender::Male;
  Vector vector;
};

// Angles below this use normalized linear interpolation instead of the
// sin-ratio form.
inline constexpr double kSmallAngle = 1e-6;
// Angles above pi minus this are rejected as antipodal.
inline constexpr double kAntipodalMargin = 1e-6;

// Dot product with a fixed four-lane accumulation order. Every kernel and
// primitive goes through this so serial and parallel paths agree bitwise.
double dot(std::span<const double> a, std::span<const double> b) noexcept;

Vector normalize(std::span<const double> v);
double cosine_distance(std::span<const double> a, std::span<const double> b);

/// Angle between two unit vectors, arccos of the clamped dot product.
double angle_between(std::span<const double> a, std::span<const double> b);

/// Spherical linear interpolation between unit vectors `from` and `to`.
///
/// The result is re-normalized. alpha == 0 and alpha == 1 return copies of
/// the endpoints without any arithmetic. Throws AntipodalPair when the two
/// inputs are (numerically) opposite since the great circle is not unique.
Vector slerp(std::span<const double> from, std::span<const double> to,
             InterpolationCoefficient alpha);

// Generates `syn-<strategy>-<gender>-<seq>` names with an independent
// 1-based counter per gender.
class SyntheticIdNamer {
 public:
  explicit SyntheticIdNamer(std::string strategy_tag);
  std::string next(Gender g);

 private:
  std::string tag_;
  std::map<Gender, std::uint64_t> counters_;
};

SyntheticIdentity interpolate_identity(const SpeakerEmbedding& a,
                                       const SpeakerEmbedding& b,
                                       InterpolationCoefficient alpha,
                                       SyntheticIdNamer& namer);

}  // namespace inside
