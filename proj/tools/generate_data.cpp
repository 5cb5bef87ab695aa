// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0

// Regenerates the committed synthetic datasets under data/.  Run from the
// repository root:  ./build/priorgsa_datagen

#include <cstdint>
#include <cstdio>

#include "priorgsa/io.hpp"
#include "priorgsa/linear_problem.hpp"
#include "priorgsa/seir.hpp"

namespace {

void write_series(const std::string& path, const priorgsa::Vector& times,
                  const priorgsa::Vector& values,
                  const std::string& generator, std::uint64_t seed) {
  priorgsa::CsvTable table({"t", "value"});
  table.add_metadata("generator", generator);
  table.add_metadata("seed", std::to_string(seed));
  for (long i = 0; i < times.size(); ++i) {
    table.add_row(std::vector<double>{times[i], values[i]});
  }
  priorgsa::write_text_file(path, table.to_string());
  std::printf("wrote %s (%ld rows)\n", path.c_str(), times.size());
}

}  // namespace

int main() {
  priorgsa::ensure_directory("data");

  {
    const std::uint64_t seed = 7;
    const priorgsa::Vector data = priorgsa::linear_benchmark::simulate_data(seed);
    priorgsa::Vector times(4);
    times << 0.0, 0.5, 1.5, 2.5;
    write_series("data/linear_data.csv", times, data, "linear", seed);
  }

  {
    const std::uint64_t seed = 5;
    const priorgsa::Vector data = priorgsa::seir_benchmark::simulate_data(seed);
    write_series("data/seir_data.csv", priorgsa::seir_benchmark::observation_times(),
                 data, "seir", seed);
  }

  return 0;
}
