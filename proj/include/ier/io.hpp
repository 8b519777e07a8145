#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ier/model.hpp"
#include "ier/test_outcome.hpp"

namespace ier {

/// Parses n rows of n comma-separated decimals. Blank trailing lines are
/// ignored. Throws ParseError naming the 1-based row and column of the first
/// bad cell, DimensionError for ragged or non-square input.
RealMatrix parse_matrix_csv(const std::string& text);
RealMatrix read_matrix_csv(const std::filesystem::path& path);

/// Shortest round-trip decimals.
std::string format_matrix_csv(const RealMatrix& m);
/// 0/1 cells.
std::string format_adjacency_csv(const AdjacencyMatrix& a);

/// Reads a probability matrix file and validates it.
ProbabilityMatrix read_probability_matrix(const std::filesystem::path& path,
                                          ValidationNotes* notes = nullptr);

struct PopulationMeta {
  int n = 0;
  int m = 0;
  std::optional<std::uint64_t> seed;
};

/// Writes graph_000.csv .. graph_{m-1}.csv and meta.json into `dir`,
/// creating it if needed. Throws IoError.
void write_population(const std::filesystem::path& dir, const GraphPopulation& pop,
                      std::optional<std::uint64_t> seed = std::nullopt);

/// Reads a population directory and checks it against meta.json. Throws
/// IoError for missing files, ParseError for malformed content and
/// DimensionError when meta.json disagrees with the graphs.
GraphPopulation read_population(const std::filesystem::path& dir,
                                PopulationMeta* meta = nullptr);

std::string to_json(const TestOutcome& outcome, int indent = 2);
/// Inverse of to_json. Throws ParseError.
TestOutcome outcome_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ier
