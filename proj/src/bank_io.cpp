#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "inside/error.hpp"
#include "inside/formats.hpp"

namespace inside {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error(ErrorKind::ParseError, "embedding bank: unexpected end of file");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{bytes[i]} << (8 * i);
  return static_cast<T>(v);
}

EmbeddingBank read_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kBankMagic, 4) != 0) throw Error(ErrorKind::ParseError, "embedding bank: bad magic");
  const auto version = get_le<std::uint16_t>(in);
  if (version != kBankVersion) {
    throw Error(ErrorKind::ParseError, "embedding bank: unsupported version " + std::to_string(version));
  }
  EmbeddingBank bank;
  bank.dimension = get_le<std::uint32_t>(in);
  const auto count = get_le<std::uint64_t>(in);
  bank.records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
  for (std::uint64_t r = 0; r < count; ++r) {
    BankRecord rec;
    rec.id.resize(get_le<std::uint16_t>(in));
    if (!in.read(rec.id.data(), static_cast<std::streamsize>(rec.id.size()))) {
      throw Error(ErrorKind::ParseError, "embedding bank: truncated id");
    }
    const auto g = get_le<std::uint8_t>(in);
    if (g > 1) throw Error(ErrorKind::ParseError, "embedding bank: bad gender byte for '" + rec.id + "'");
    rec.gender = static_cast<Gender>(g);
    rec.values.resize(bank.dimension);
    for (float& x : rec.values) x = std::bit_cast<float>(get_le<std::uint32_t>(in));
    bank.records.push_back(std::move(rec));
  }
  return bank;
}

EmbeddingBank read_text(std::istream& in) {
  EmbeddingBank bank;
  std::string line;
  std::size_t lineno = 0;
  bool have_dim = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto where = "embedding text line " + std::to_string(lineno);
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw Error(ErrorKind::ParseError, where + ": expected id<TAB>gender<TAB>values");
    BankRecord rec;
    rec.id = line.substr(0, t1);
    const auto g = parse_gender(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    if (!g) throw Error(ErrorKind::ParseError, where + ": unknown gender");
    rec.gender = *g;

    std::string_view rest = std::string_view(line).substr(t2 + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      auto tok = rest.substr(0, comma);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      float v{};
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw Error(ErrorKind::ParseError, where + ": bad value '" + std::string(tok) + "'");
      }
      rec.values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!have_dim) {
      bank.dimension = static_cast<std::uint32_t>(rec.values.size());
      have_dim = true;
    } else if (rec.values.size() != bank.dimension) {
      throw Error(ErrorKind::DimensionMismatch, where + ": dimension differs from earlier records");
    }
    bank.records.push_back(std::move(rec));
  }
  return bank;
}

}  // namespace

void write_bank(std::ostream& out, const EmbeddingBank& bank) {
  out.write(kBankMagic, 4);
  put_le<std::uint16_t>(out, kBankVersion);
  put_le<std::uint32_t>(out, bank.dimension);
  put_le<std::uint64_t>(out, bank.records.size());
  for (const auto& rec : bank.records) {
    if (rec.id.size() > 0xffff) throw Error(ErrorKind::InvalidArgument, "embedding id too long");
    if (rec.values.size() != bank.dimension) {
      throw Error(ErrorKind::DimensionMismatch, "record '" + rec.id + "' does not match bank dimension");
    }
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(rec.id.size()));
    out.write(rec.id.data(), static_cast<std::streamsize>(rec.id.size()));
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(rec.gender));
    for (float x : rec.values) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(x));
  }
}

void write_bank_text(std::ostream& out, const EmbeddingBank& bank) {
  for (const auto& rec : bank.records) {
    out << rec.id << '\t' << to_string(rec.gender) << '\t';
    for (std::size_t k = 0; k < rec.values.size(); ++k) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof(buf), rec.values[k]);
      if (k) out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

EmbeddingBank read_bank(std::istream& in) {
  char head[4] = {};
  in.read(head, 4);
  const auto got = in.gcount();
  in.clear();
  in.seekg(0);
  if (got == 4 && std::memcmp(head, kBankMagic, 4) == 0) return read_binary(in);
  return read_text(in);
}

void write_bank_file(const std::filesystem::path& path, const EmbeddingBank& bank) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for writing");
  write_bank(out, bank);
  if (!out.flush()) throw Error(ErrorKind::IoFailure, "failed writing '" + path.string() + "'");
}

EmbeddingBank read_bank_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "'");
  return read_bank(in);
}

EmbeddingBank to_bank(const EmbeddingSet& set) {
  EmbeddingBank bank;
  bank.dimension = static_cast<std::uint32_t>(set.dimension());
  for (const auto& e : set.records()) {
    bank.records.push_back({e.id, e.gender, std::vector<float>(e.vector.begin(), e.vector.end())});
  }
  return bank;
}

EmbeddingBank to_bank(std::span<const SyntheticIdentity> identities, std::size_t dimension) {
  EmbeddingBank bank;
  bank.dimension = static_cast<std::uint32_t>(dimension);
  for (const auto& s : identities) {
    bank.records.push_back({s.id, s.gender, std::vector<float>(s.vector.begin(), s.vector.end())});
  }
  return bank;
}

EmbeddingSet to_embedding_set(const EmbeddingBank& bank) {
  EmbeddingSet set(bank.dimension);
  for (const auto& rec : bank.records) {
    set.add({rec.id, rec.gender, Vector(rec.values.begin(), rec.values.end())});
  }
  return set;
}

}  // namespace inside
