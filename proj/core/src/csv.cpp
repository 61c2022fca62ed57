#include "tpsfem/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "tpsfem/errors.hpp"
#include "tpsfem/mesh.hpp"

namespace tpsfem {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void require_header(const CsvTable& table, const std::vector<std::string>& want,
                    const std::filesystem::path& path) {
  if (table.header != want) {
    throw IoError("unexpected header in " + path.string());
  }
}

long long parse_int(const std::string& s, const char* what) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw IoError(std::string("malformed ") + what + ": '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw IoError("malformed number: '" + s + "'");
  }
  return v;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  auto out = open_for_write(path);
  const auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw InvalidArgument("csv row width does not match header");
    }
    write_row(row);
  }
  if (!out) throw IoError("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      table.header = split_line(line);
      first = false;
    } else {
      auto row = split_line(line);
      if (row.size() != table.header.size()) {
        throw IoError("ragged row in " + path.string());
      }
      table.rows.push_back(std::move(row));
    }
  }
  if (first) throw IoError("empty csv: " + path.string());
  return table;
}

void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  CsvTable table;
  table.header = header;
  table.rows.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) cells.push_back(format_double(v));
    table.rows.push_back(std::move(cells));
  }
  write_csv(path, table);
}

void write_samples(const std::filesystem::path& path,
                   const SampleSet& samples) {
  CsvTable table;
  const bool truth = samples.has_truth();
  table.header = truth ? std::vector<std::string>{"x", "y", "value", "truth"}
                       : std::vector<std::string>{"x", "y", "value"};
  for (int i = 0; i < samples.size(); ++i) {
    std::vector<std::string> row{format_double(samples.points[i].x),
                                 format_double(samples.points[i].y),
                                 format_double(samples.values[i])};
    if (truth) row.push_back(format_double(samples.truth[i]));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

SampleSet read_samples(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::vector<std::string> plain{"x", "y", "value"};
  const std::vector<std::string> with_truth{"x", "y", "value", "truth"};
  if (table.header != plain && table.header != with_truth) {
    throw IoError("unexpected header in " + path.string());
  }
  const bool truth = table.header.size() == 4;
  SampleSet samples;
  for (const auto& row : table.rows) {
    samples.points.push_back(
        Point2{parse_double(row[0]), parse_double(row[1])});
    samples.values.push_back(parse_double(row[2]));
    if (truth) samples.truth.push_back(parse_double(row[3]));
  }
  return samples;
}

void write_morley(const std::filesystem::path& path, const MorleyFunction& f) {
  if (!f.space) throw InvalidArgument("write_morley: function has no space");
  const MorleySpace& space = *f.space;
  const Mesh2D& mesh = space.mesh();
  CsvTable table;
  table.header = {"dof_id", "kind", "entity_id", "coeff"};
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const int dof = space.vertex_dof(v);
    table.rows.push_back({std::to_string(dof), "vertex", std::to_string(v),
                          format_double(f.coeffs[dof])});
  }
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const int dof = space.edge_dof(e);
    table.rows.push_back({std::to_string(dof), "edge", std::to_string(e),
                          format_double(f.coeffs[dof])});
  }
  write_csv(path, table);
}

MorleyFunction read_morley(const std::filesystem::path& path,
                           std::shared_ptr<const MorleySpace> space) {
  const CsvTable table = read_csv(path);
  require_header(table, {"dof_id", "kind", "entity_id", "coeff"}, path);

  int vertex_rows = 0, edge_rows = 0;
  for (const auto& row : table.rows) {
    if (row[1] == "vertex") {
      ++vertex_rows;
    } else if (row[1] == "edge") {
      ++edge_rows;
    } else {
      throw IoError("unknown dof kind '" + row[1] + "' in " + path.string());
    }
  }

  if (!space) {
    // Infer the unit-square uniform mesh: (m+1)^2 vertices and
    // 2m(m+1) + m^2 edges.
    const int m =
        static_cast<int>(std::lround(std::sqrt(static_cast<double>(vertex_rows)))) - 1;
    if (m < 1 || (m + 1) * (m + 1) != vertex_rows ||
        2 * m * (m + 1) + m * m != edge_rows) {
      throw IoError("dof counts in " + path.string() +
                    " do not match a uniform unit-square mesh");
    }
    auto mesh = std::make_shared<Mesh2D>(build_uniform_mesh(m));
    space = std::make_shared<MorleySpace>(mesh);
  }

  if (vertex_rows != space->mesh().vertex_count() ||
      edge_rows != space->mesh().edge_count()) {
    throw IoError("dof counts in " + path.string() +
                  " do not match the target space");
  }

  MorleyFunction f;
  f.coeffs.assign(space->dof_count(), 0.0);
  std::vector<bool> seen(f.coeffs.size(), false);
  for (const auto& row : table.rows) {
    const long long entity = parse_int(row[2], "entity id");
    const bool vertex = row[1] == "vertex";
    const int limit = vertex ? space->mesh().vertex_count()
                             : space->mesh().edge_count();
    if (entity < 0 || entity >= limit) {
      throw IoError("entity id out of range in " + path.string());
    }
    const int dof = vertex ? space->vertex_dof(static_cast<int>(entity))
                           : space->edge_dof(static_cast<int>(entity));
    if (parse_int(row[0], "dof id") != dof) {
      throw IoError("dof id does not match its entity in " + path.string());
    }
    if (seen[dof]) throw IoError("duplicate dof in " + path.string());
    seen[dof] = true;
    f.coeffs[dof] = parse_double(row[3]);
  }
  for (bool s : seen) {
    if (!s) throw IoError("missing dof rows in " + path.string());
  }
  f.space = std::move(space);
  return f;
}

void write_trace(const std::filesystem::path& path, const LambdaTrace& trace) {
  CsvTable table;
  table.header = {"k", "lambda", "mesh_div", "residual_n", "seminorm_2h"};
  for (const LambdaIterate& it : trace.iterates) {
    table.rows.push_back({std::to_string(it.k), format_double(it.lambda),
                          std::to_string(it.mesh_divisions),
                          format_double(it.residual_n),
                          format_double(it.seminorm_2h)});
  }
  write_csv(path, table);
}

}  // namespace tpsfem
