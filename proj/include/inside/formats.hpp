#pragma once

// On-disk formats: pair plans (text) and embedding banks (binary `INSD` or
// tab-separated text).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "inside/embedding.hpp"
#include "inside/embedding_set.hpp"
#include "inside/pair_planner.hpp"

namespace inside {

// ---- pair plans ----------------------------------------------------------
//
//   #pairplan v1 strategy=<random|nearest_neighbor> seed=<u64> dim=<N>
//   <id_a>\t<id_b>\t<alpha %.17g>
//
// target_count is restored as the number of pair lines. max_level_reached is
// not part of the format and reads back as 0.

struct PlanFile {
  PairPlan plan;
  std::size_t dimension = 0;
};

void write_plan(std::ostream& out, const PairPlan& plan, std::size_t dimension);
PlanFile read_plan(std::istream& in);

void write_plan_file(const std::filesystem::path& path, const PairPlan& plan, std::size_t dimension);
PlanFile read_plan_file(const std::filesystem::path& path);

// ---- embedding banks -----------------------------------------------------
//
// Binary layout, all integers little-endian:
//   "INSD" u16 version=1 u32 dimension u64 count
//   count x { u16 id_len, id bytes, u8 gender (0 male, 1 female),
//             dimension x f32 }
//
// Text layout, one record per line: id \t gender \t v1,v2,...
// Blank lines and lines starting with '#' are skipped.

struct BankRecord {
  std::string id;
  Gender gender = Gender::Male;
  std::vector<float> values;

  friend bool operator==(const BankRecord&, const BankRecord&) = default;
};

struct EmbeddingBank {
  std::uint32_t dimension = 0;
  std::vector<BankRecord> records;

  friend bool operator==(const EmbeddingBank&, const EmbeddingBank&) = default;
};

inline constexpr char kBankMagic[4] = {'I', 'N', 'S', 'D'};
inline constexpr std::uint16_t kBankVersion = 1;

void write_bank(std::ostream& out, const EmbeddingBank& bank);
void write_bank_text(std::ostream& out, const EmbeddingBank& bank);
// Detects binary vs text from the first four bytes.
EmbeddingBank read_bank(std::istream& in);

void write_bank_file(const std::filesystem::path& path, const EmbeddingBank& bank);
EmbeddingBank read_bank_file(const std::filesystem::path& path);

// Narrowing to f32 happens here and only here.
EmbeddingBank to_bank(const EmbeddingSet& set);
EmbeddingBank to_bank(std::span<const SyntheticIdentity> identities, std::size_t dimension);

// Widens to f64 and normalizes every record.
EmbeddingSet to_embedding_set(const EmbeddingBank& bank);

}  // namespace inside
