// Writes the inputs the CLI tests run against into argv[1].

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fixtures.hpp"
#include "inside/formats.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  inside::write_bank_file(dir / "real.insd", inside::to_bank(fixtures::random_set(8, 5, 16, 1)));
  std::ofstream(dir / "texts.txt") << fixtures::transcript_corpus(60, 100, 140);
  std::ofstream(dir / "spec.txt") << "dimension = 6\nutterances_per_identity = 3\nprobe_count = 20\n"
                                     "[cluster]\ngender = male\nkappa = 20\nmembers = 6\n"
                                     "[cluster]\ngender = female\nkappa = 20\nmembers = 5\n";
  std::ofstream(dir / "expand.ini") << "seed = 5\nstrategy = random\nutterances = 2\n";
  std::ofstream(dir / "bad.ini") << "sed = 1\n";
  std::ofstream(dir / "garbage.insd") << "INSD\x01";
  return 0;
}
