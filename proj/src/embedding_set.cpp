#include "inside/embedding_set.hpp"

#include "inside/error.hpp"

namespace inside {

EmbeddingSet::EmbeddingSet(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) {
    throw Error(ErrorKind::InvalidArgument, "embedding dimension must be positive");
  }
}

void EmbeddingSet::add(SpeakerEmbedding e) {
  if (e.id.empty()) throw Error(ErrorKind::InvalidArgument, "embedding id must be non-empty");
  if (e.vector.size() != dimension_) {
    throw Error(ErrorKind::DimensionMismatch,
                "embedding '" + e.id + "' has dimension " + std::to_string(e.vector.size()) +
                    ", set expects " + std::to_string(dimension_));
  }
  if (index_.contains(e.id)) throw Error(ErrorKind::DuplicateId, "duplicate embedding id '" + e.id + "'");
  try {
    e.vector = normalize(e.vector);
  } catch (const Error&) {
    throw Error(ErrorKind::ZeroVector, "embedding '" + e.id + "' has zero norm");
  }
  const std::size_t pos = records_.size();
  index_.emplace(e.id, pos);
  (e.gender == Gender::Male ? male_ : female_).push_back(pos);
  records_.push_back(std::move(e));
}

std::optional<std::size_t> EmbeddingSet::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const SpeakerEmbedding& EmbeddingSet::at(std::string_view id) const {
  auto pos = find(id);
  if (!pos) throw Error(ErrorKind::UnknownIdentity, "unknown identity '" + std::string(id) + "'");
  return records_[*pos];
}

std::span<const std::size_t> EmbeddingSet::group(Gender g) const noexcept {
  return g == Gender::Male ? std::span<const std::size_t>(male_) : std::span<const std::size_t>(female_);
}

}  // namespace inside
