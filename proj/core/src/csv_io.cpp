#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "htc/error.hpp"
#include "htc/io.hpp"

namespace htc::io {

namespace {

using Row = std::vector<std::string>;

// RFC 4180 subset: comma separated, optional double quotes with "" escapes,
// LF or CRLF line ends, blank lines ignored. Each row remembers its line.
struct Table {
  std::vector<Row> rows;
  std::vector<std::size_t> lines;
};

Table split_csv(std::string_view text) {
  Table table;
  Row row;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  std::size_t line = 1;
  std::size_t row_line = 1;

  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    if (row_has_content) {
      table.rows.push_back(std::move(row));
      table.lines.push_back(row_line);
    }
    row.clear();
    row_has_content = false;
  };

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      default:
        if (c != ' ' && c != '\t') row_has_content = true;
        field.push_back(c);
    }
  }
  if (quoted) fail(ErrorCategory::parse, "unterminated quoted field at line " + std::to_string(line));
  end_row();
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  if (s == "inf" || s == "Inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool is_number(std::string_view s) { return parse_number(s).has_value(); }

// Numeric table with the optional header row and label column removed.
struct NumericTable {
  std::vector<std::vector<double>> values;
  std::optional<std::vector<std::string>> labels;
  std::vector<std::string> header;  // numeric column names, if any
};

NumericTable numeric_table(std::string_view text) {
  const Table table = split_csv(text);
  if (table.rows.empty()) fail(ErrorCategory::parse, "CSV input is empty");

  const std::size_t width = table.rows.front().size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != width) {
      fail(ErrorCategory::parse, "ragged CSV: line " + std::to_string(table.lines[r]) + " has " +
                                     std::to_string(table.rows[r].size()) + " fields, expected " +
                                     std::to_string(width));
    }
  }

  // A label column is a first column that is non-numeric in every row after
  // the first; a header is a first row with a non-numeric value column.
  bool label_col = false;
  if (width > 1) {
    if (table.rows.size() > 1) {
      label_col = std::all_of(table.rows.begin() + 1, table.rows.end(),
                              [](const Row& row) { return !is_number(row[0]); });
    } else {
      label_col = !is_number(table.rows[0][0]) &&
                  std::all_of(table.rows[0].begin() + 1, table.rows[0].end(),
                              [](const std::string& s) { return is_number(s); });
    }
  }
  const std::size_t first_value = label_col ? 1 : 0;
  const bool header = std::any_of(table.rows[0].begin() + static_cast<std::ptrdiff_t>(first_value),
                                  table.rows[0].end(),
                                  [](const std::string& s) { return !is_number(s); });

  NumericTable out;
  if (header) {
    for (std::size_t c = first_value; c < width; ++c) out.header.emplace_back(trim(table.rows[0][c]));
  }
  if (label_col) out.labels.emplace();
  for (std::size_t r = header ? 1 : 0; r < table.rows.size(); ++r) {
    const Row& row = table.rows[r];
    if (label_col) out.labels->emplace_back(trim(row[0]));
    std::vector<double> values;
    values.reserve(width - first_value);
    for (std::size_t c = first_value; c < width; ++c) {
      const auto v = parse_number(row[c]);
      if (!v) {
        fail(ErrorCategory::parse, "non-numeric value '" + std::string(trim(row[c])) + "' at line " +
                                       std::to_string(table.lines[r]) + ", column " +
                                       std::to_string(c + 1));
      }
      values.push_back(*v);
    }
    out.values.push_back(std::move(values));
  }
  if (out.values.empty()) fail(ErrorCategory::parse, "CSV input has no data rows");
  if (out.values.front().empty()) fail(ErrorCategory::parse, "CSV input has no numeric columns");
  return out;
}

std::string escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join_indices(const std::vector<std::size_t>& items) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k > 0) out.push_back(' ');
    out += std::to_string(items[k] + 1);
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  if (x == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCategory::io, "read failure on '" + path.string() + "'");
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorCategory::io, "write failure on '" + path.string() + "'");
}

PointCloud parse_points_csv(std::string_view text) {
  NumericTable t = numeric_table(text);
  PointCloud pc;
  pc.coords.resize(static_cast<Eigen::Index>(t.values.size()),
                   static_cast<Eigen::Index>(t.values.front().size()));
  for (std::size_t r = 0; r < t.values.size(); ++r) {
    for (std::size_t c = 0; c < t.values[r].size(); ++c) {
      pc.coords(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t.values[r][c];
    }
  }
  pc.labels = std::move(t.labels);
  validate_point_cloud(pc);
  return pc;
}

PointCloud load_points_csv(const std::filesystem::path& path) {
  try {
    return parse_points_csv(read_file(path));
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::io) throw;
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

void write_points_csv(const PointCloud& pc, const std::filesystem::path& path,
                      const std::vector<std::string>& column_names) {
  std::string out;
  if (!column_names.empty()) {
    if (pc.labels) out += "label,";
    for (std::size_t c = 0; c < column_names.size(); ++c) {
      out += (c > 0 ? "," : "") + escape(column_names[c]);
    }
    out += '\n';
  }
  for (std::size_t r = 0; r < pc.size(); ++r) {
    if (pc.labels) out += escape((*pc.labels)[r]) + ",";
    for (std::size_t c = 0; c < pc.dim(); ++c) {
      if (c > 0) out += ',';
      out += format_number(pc.coords(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out += '\n';
  }
  write_file(path, out);
}

DistanceMatrix parse_distance_csv(std::string_view text) {
  NumericTable t = numeric_table(text);
  const std::size_t n = t.values.size();
  if (t.values.front().size() != n) {
    fail(ErrorCategory::parse, "distance matrix is not square: " + std::to_string(n) + " rows, " +
                                   std::to_string(t.values.front().size()) + " columns");
  }
  std::vector<double> dense;
  dense.reserve(n * n);
  for (const auto& row : t.values) dense.insert(dense.end(), row.begin(), row.end());
  DistanceMatrix dm = DistanceMatrix::from_dense(n, std::move(dense));
  if (t.labels) {
    dm.set_labels(std::move(*t.labels));
  } else if (t.header.size() == n) {
    dm.set_labels(std::move(t.header));
  }
  return dm;
}

DistanceMatrix load_distance_csv(const std::filesystem::path& path) {
  try {
    return parse_distance_csv(read_file(path));
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::io) throw;
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

void write_distance_csv(const DistanceMatrix& dm, const std::filesystem::path& path) {
  std::string out;
  const auto& labels = dm.labels();
  if (labels) {
    out += "label";
    for (const auto& l : *labels) out += "," + escape(l);
    out += '\n';
  }
  for (std::size_t i = 0; i < dm.size(); ++i) {
    if (labels) out += escape((*labels)[i]) + ",";
    for (std::size_t j = 0; j < dm.size(); ++j) {
      if (j > 0) out += ',';
      out += format_number(dm(i, j));
    }
    out += '\n';
  }
  write_file(path, out);
}

std::string barcode_csv(const Barcode& b) {
  std::vector<BarInterval> rows = b.intervals;
  std::stable_sort(rows.begin(), rows.end(), [](const BarInterval& x, const BarInterval& y) {
    if (x.death != y.death) return x.death > y.death;
    return x.representative < y.representative;
  });
  std::string out = "representative,birth,death\n";
  for (const auto& r : rows) {
    out += std::to_string(r.representative + 1) + "," + format_number(r.birth) + "," +
           format_number(r.death) + "\n";
  }
  return out;
}

void export_barcode(const Barcode& b, const std::filesystem::path& path) {
  write_file(path, barcode_csv(b));
}

Barcode parse_barcode_csv(std::string_view text) {
  const NumericTable t = numeric_table(text);
  Barcode b;
  for (const auto& row : t.values) {
    if (row.size() != 3 || row[0] < 1) fail(ErrorCategory::parse, "barcode rows need representative,birth,death");
    b.intervals.push_back({static_cast<std::size_t>(row[0]) - 1, row[1], row[2]});
  }
  std::sort(b.intervals.begin(), b.intervals.end(),
            [](const BarInterval& x, const BarInterval& y) { return x.representative < y.representative; });
  return b;
}

std::string dendrogram_csv(const Dendrogram& d) {
  std::string out = "node,height,size,children\n";
  for (std::size_t k = 0; k < d.nodes().size(); ++k) {
    const auto& node = d.nodes()[k];
    out += std::to_string(d.leaf_count() + k + 1) + "," + format_number(node.height) + "," +
           std::to_string(node.size) + "," + join_indices(node.children) + "\n";
  }
  return out;
}

void export_dendrogram(const Dendrogram& d, const std::filesystem::path& path) {
  write_file(path, dendrogram_csv(d));
}

Dendrogram parse_dendrogram_csv(std::string_view text) {
  const Table table = split_csv(text);
  if (table.rows.empty() || table.rows[0].size() != 4 || trim(table.rows[0][0]) != "node") {
    fail(ErrorCategory::parse, "dendrogram CSV needs a node,height,size,children header");
  }
  // The first node id fixes the leaf count.
  std::vector<std::pair<double, std::vector<std::size_t>>> nodes;
  std::size_t leaves = 0;
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const Row& row = table.rows[r];
    const auto id = parse_number(row[0]);
    const auto height = parse_number(row[1]);
    if (row.size() != 4 || !id || !height) {
      fail(ErrorCategory::parse, "bad dendrogram row at line " + std::to_string(table.lines[r]));
    }
    if (r == 1) leaves = static_cast<std::size_t>(*id) - 1;
    std::vector<std::size_t> children;
    std::istringstream ss(row[3]);
    std::size_t child = 0;
    while (ss >> child) children.push_back(child - 1);
    nodes.emplace_back(*height, std::move(children));
  }
  if (nodes.empty()) fail(ErrorCategory::parse, "dendrogram CSV has no nodes");
  Dendrogram d(leaves);
  for (auto& [height, children] : nodes) d.add_node(height, std::move(children));
  return d;
}

std::string betti_csv(const ClusterHierarchy& h) {
  std::string out = "r,b0\n";
  for (std::size_t m = 0; m < h.grid.values.size(); ++m) {
    const std::size_t idx = std::min(m, h.levels.size() - 1);
    out += format_number(h.grid.values[m]) + "," + std::to_string(h.levels[idx].cluster_count()) + "\n";
  }
  return out;
}

std::string outliers_csv(const std::vector<OutlierEntry>& ranking,
                         const std::vector<std::string>* labels) {
  std::string out = "rank,merge_level,size,representative,members";
  if (labels) out += ",labels";
  out += '\n';
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    const auto& e = ranking[k];
    out += std::to_string(k + 1) + "," + format_number(e.merge_level) + "," +
           std::to_string(e.items.size()) + "," + std::to_string(e.items.front() + 1) + "," +
           join_indices(e.items);
    if (labels) {
      std::string names;
      for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i > 0) names += ' ';
        names += (*labels)[e.items[i]];
      }
      out += "," + escape(names);
    }
    out += '\n';
  }
  return out;
}

std::string assignments_csv(const std::vector<std::size_t>& assignments, std::size_t noise_value,
                            const std::vector<std::string>* labels) {
  std::string out = "item,label,cluster\n";
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    out += std::to_string(i + 1) + "," + (labels ? escape((*labels)[i]) : std::string()) + "," +
           (assignments[i] == noise_value ? std::string("NOISE") : std::to_string(assignments[i] + 1)) +
           "\n";
  }
  return out;
}

}  // namespace htc::io
