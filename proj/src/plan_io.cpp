#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "inside/error.hpp"
#include "inside/formats.hpp"

namespace inside {

namespace {

std::string format_alpha(double alpha) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", alpha);
  return buf;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError, "invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string_view header_field(std::string_view token, std::string_view key) {
  if (token.substr(0, key.size()) != key || token.size() <= key.size() || token[key.size()] != '=') {
    throw Error(ErrorKind::ParseError, "pair plan header: expected field '" + std::string(key) + "'");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

void write_plan(std::ostream& out, const PairPlan& plan, std::size_t dimension) {
  out << "#pairplan v1 strategy=" << to_string(plan.strategy) << " seed=" << plan.seed
      << " dim=" << dimension << '\n';
  for (const auto& p : plan.pairs) {
    out << p.id_a << '\t' << p.id_b << '\t' << format_alpha(p.alpha) << '\n';
  }
}

PlanFile read_plan(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "pair plan: missing header");

  std::istringstream hs(line);
  std::string magic, version, strategy, seed, dim;
  if (!(hs >> magic >> version >> strategy >> seed >> dim) || magic != "#pairplan" || version != "v1") {
    throw Error(ErrorKind::ParseError, "pair plan: bad header '" + line + "'");
  }
  PlanFile file;
  const auto strat = parse_strategy(header_field(strategy, "strategy"));
  if (!strat) throw Error(ErrorKind::ParseError, "pair plan: unknown strategy in '" + line + "'");
  file.plan.strategy = *strat;
  file.plan.seed = parse_number<std::uint64_t>(header_field(seed, "seed"), "seed");
  file.dimension = parse_number<std::size_t>(header_field(dim, "dim"), "dimension");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw Error(ErrorKind::ParseError, "pair plan line " + std::to_string(lineno) + ": expected 3 fields");
    }
    PlannedPair p;
    p.id_a = line.substr(0, t1);
    p.id_b = line.substr(t1 + 1, t2 - t1 - 1);
    p.alpha = parse_number<double>(std::string_view(line).substr(t2 + 1), "alpha");
    if (p.id_a.empty() || p.id_b.empty() || !(p.id_a < p.id_b)) {
      throw Error(ErrorKind::ParseError,
                  "pair plan line " + std::to_string(lineno) + ": ids must satisfy id_a < id_b");
    }
    InterpolationCoefficient check(p.alpha);
    file.plan.pairs.push_back(std::move(p));
  }
  file.plan.target_count = file.plan.pairs.size();
  return file;
}

void write_plan_file(const std::filesystem::path& path, const PairPlan& plan, std::size_t dimension) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for writing");
  write_plan(out, plan, dimension);
  if (!out.flush()) throw Error(ErrorKind::IoFailure, "failed writing '" + path.string() + "'");
}

PlanFile read_plan_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "'");
  return read_plan(in);
}

}  // namespace inside
