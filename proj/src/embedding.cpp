#include "inside/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "inside/error.hpp"

namespace inside {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AntipodalPair: return "AntipodalPair";
    case ErrorKind::InvalidAlpha: return "InvalidAlpha";
    case ErrorKind::GenderMismatch: return "GenderMismatch";
    case ErrorKind::IdenticalParents: return "IdenticalParents";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GroupTooSmall: return "GroupTooSmall";
    case ErrorKind::TargetExceedsCapacity: return "TargetExceedsCapacity";
    case ErrorKind::UnknownIdentity: return "UnknownIdentity";
    case ErrorKind::EmptyPool: return "EmptyPool";
    case ErrorKind::PoolTooSmall: return "PoolTooSmall";
    case ErrorKind::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::Input: return "INPUT";
    case ErrorCategory::Capacity: return "CAPACITY";
    case ErrorCategory::Io: return "IO";
  }
  return "INPUT";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::TargetExceedsCapacity:
    case ErrorKind::PoolTooSmall:
      return ErrorCategory::Capacity;
    case ErrorKind::IoFailure:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Input;
  }
}

std::string_view to_string(Gender g) noexcept {
  return g == Gender::Male ? "male" : "female";
}

std::optional<Gender> parse_gender(std::string_view token) noexcept {
  if (token == "male" || token == "m" || token == "M" || token == "0") {
    return Gender::Male;
  }
  if (token == "female" || token == "f" || token == "F" || token == "1") {
    return Gender::Female;
  }
  return std::nullopt;
}

InterpolationCoefficient::InterpolationCoefficient(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::InvalidAlpha,
                "interpolation coefficient must lie in [0, 1], got " + std::to_string(value));
  }
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

namespace {

void require_same_dim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector dimensions differ: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
}

}  // namespace

Vector normalize(std::span<const double> v) {
  const double norm = std::sqrt(dot(v, v));
  if (!(norm >= 1e-12)) {
    throw Error(ErrorKind::ZeroVector, "cannot normalize a zero (or non-finite) vector");
  }
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  return std::clamp(1.0 - dot(a, b), 0.0, 2.0);
}

double angle_between(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

Vector slerp(std::span<const double> from, std::span<const double> to,
             InterpolationCoefficient alpha) {
  require_same_dim(from, to);
  const double t = alpha.value();
  if (t == 0.0) return Vector(from.begin(), from.end());
  if (t == 1.0) return Vector(to.begin(), to.end());

  const double theta = angle_between(from, to);
  if (theta > std::numbers::pi - kAntipodalMargin) {
    throw Error(ErrorKind::AntipodalPair,
                "cannot interpolate between antipodal vectors (angle " + std::to_string(theta) + ")");
  }

  Vector out(from.size());
  if (theta < kSmallAngle) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (1.0 - t) * from[k] + t * to[k];
  } else {
    const double s = std::sin(theta);
    const double wa = std::sin((1.0 - t) * theta) / s;
    const double wb = std::sin(t * theta) / s;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = wa * from[k] + wb * to[k];
  }
  return normalize(out);
}

SyntheticIdNamer::SyntheticIdNamer(std::string strategy_tag) : tag_(std::move(strategy_tag)) {}

std::string SyntheticIdNamer::next(Gender g) {
  const std::uint64_t seq = ++counters_[g];
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06llu", static_cast<unsigned long long>(seq));
  return "syn-" + tag_ + "-" + std::string(to_string(g)) + "-" + buf;
}

SyntheticIdentity interpolate_identity(const SpeakerEmbedding& a, const SpeakerEmbedding& b,
                                       InterpolationCoefficient alpha, SyntheticIdNamer& namer) {
  if (a.id == b.id) {
    throw Error(ErrorKind::IdenticalParents, "cannot interpolate identity '" + a.id + "' with itself");
  }
  if (a.gender != b.gender) {
    throw Error(ErrorKind::GenderMismatch,
                "parents '" + a.id + "' and '" + b.id + "' have different genders");
  }
  SyntheticIdentity out;
  out.vector = slerp(a.vector, b.vector, alpha);
  out.id = namer.next(a.gender);
  out.parent_a = a.id;
  out.parent_b = b.id;
  out.alpha = alpha.value();
  out.gender = a.gender;
  return out;
}

}  // namespace inside
