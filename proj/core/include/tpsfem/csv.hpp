#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tpsfem/morley.hpp"
#include "tpsfem/smoother.hpp"
#include "tpsfem/system.hpp"

namespace tpsfem {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Inverse of format_double; throws IoError on malformed input.
double parse_double(const std::string& s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Plain comma-separated output, one header line, LF line endings; fields
/// must not contain commas or newlines.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Numeric table convenience: every cell goes through format_double.
void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

/// Samples: header `x,y,value` or `x,y,value,truth`.
void write_samples(const std::filesystem::path& path, const SampleSet& samples);
SampleSet read_samples(const std::filesystem::path& path);

/// Fitted function: header `dof_id,kind,entity_id,coeff` with kind in
/// {vertex, edge}. The mesh itself is not persisted: readers attach the
/// coefficients to a compatible space (the unit-square uniform mesh whose
/// division count is implied by the vertex count, unless a space is given).
void write_morley(const std::filesystem::path& path, const MorleyFunction& f);
MorleyFunction read_morley(const std::filesystem::path& path,
                           std::shared_ptr<const MorleySpace> space = nullptr);

/// Weight-iteration trace: header `k,lambda,mesh_div,residual_n,seminorm_2h`.
void write_trace(const std::filesystem::path& path, const LambdaTrace& trace);

}  // namespace tpsfem
