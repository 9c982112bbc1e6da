#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "inside/embedding.hpp"

namespace inside {

// Indexed collection of unit-norm speaker embeddings sharing one dimension.
// Vectors are normalized on insertion.
class EmbeddingSet {
 public:
  explicit EmbeddingSet(std::size_t dimension);

  // Normalizes `e.vector`; throws DimensionMismatch, DuplicateId, ZeroVector
  // or InvalidArgument (empty id).
  void add(SpeakerEmbedding e);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  const std::vector<SpeakerEmbedding>& records() const noexcept { return records_; }
  const SpeakerEmbedding& operator[](std::size_t pos) const { return records_[pos]; }

  std::optional<std::size_t> find(std::string_view id) const;
  const SpeakerEmbedding& at(std::string_view id) const;  // throws UnknownIdentity

  // Record positions of one gender, in insertion order.
  std::span<const std::size_t> group(Gender g) const noexcept;

 private:
  std::size_t dimension_;
  std::vector<SpeakerEmbedding> records_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> male_;
  std::vector<std::size_t> female_;
};

}  // namespace inside
