#include "largeness/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "largeness/errors.hpp"

namespace largeness {

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw DomainError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

bool parse_index(const std::string& text, Index& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Matrix parse_matrix_csv(const std::string& text) {
  Matrix m;
  for (const auto& line : data_lines(text)) {
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) {
      double v;
      if (!parse_double(cell, v)) throw DomainError("matrix entry '" + trim(cell) + "' is not a number");
      row.push_back(v);
    }
    m.push_back(std::move(row));
  }
  if (m.empty()) throw DomainError("matrix is empty");
  for (const auto& row : m) {
    if (row.size() != m.size()) throw DomainError("matrix is not square");
  }
  return m;
}

DiscreteMeasure parse_measure_csv(const FiniteMetricSpace& space, const std::string& text) {
  std::vector<Atom> atoms;
  bool first = true;
  for (const auto& line : data_lines(text)) {
    const auto cells = split(line, ',');
    Index point;
    double mass;
    const bool ok = cells.size() == 2 && parse_index(cells[0], point) && parse_double(cells[1], mass);
    if (!ok) {
      if (first) {  // header
        first = false;
        continue;
      }
      throw DomainError("bad measure row '" + line + "'");
    }
    first = false;
    if (point >= space.size()) throw DomainError("measure point outside the space");
    atoms.push_back({point, mass});
  }
  return DiscreteMeasure(space, std::move(atoms));
}

std::string measure_csv(const DiscreteMeasure& mu) {
  std::string out = "point_index,mass\n";
  for (const auto& a : mu.atoms()) out += std::to_string(a.point) + "," + format_real(a.mass) + "\n";
  return out;
}

std::string plan_csv(const TransportPlan& plan) {
  std::string out = "source_index,target_index,mass\n";
  for (const auto& e : plan.edges()) {
    out += std::to_string(e.source) + "," + std::to_string(e.target) + "," + format_real(e.mass) + "\n";
  }
  return out;
}

std::string profile_csv(const CoveringProfile& profile) {
  std::string out = "epsilon,cover_upper,packing_lower,sample_size\n";
  for (const auto& e : profile.entries) {
    out += format_real(e.epsilon) + "," + std::to_string(e.cover_upper) + "," +
           std::to_string(e.packing_lower) + "," + std::to_string(profile.sample_size) + "\n";
  }
  return out;
}

std::string crit_csv(const CritEstimate& estimate) {
  std::string out = "epsilon,s_of_epsilon,family,sigma\n";
  for (const auto& [eps, s] : estimate.per_epsilon) {
    out += format_real(eps) + "," + format_real(s) + "," + family_name(estimate.family) + "," +
           format_real(estimate.sigma) + "\n";
  }
  return out;
}

std::string placement_csv(const CubePlacement& placement) {
  std::string out;
  for (std::size_t a = 0; a < placement.dimension; ++a) out += "offset" + std::to_string(a) + ",";
  out += "ratio\n";
  for (std::size_t n = 0; n < placement.ratios.size(); ++n) {
    for (double o : placement.offsets[n]) out += format_real(o) + ",";
    out += format_real(placement.ratios[n]) + "\n";
  }
  return out;
}

std::string entropy_csv(const EntropyReport& report) {
  std::string out = "n,epsilon,count,log_ratio\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.n) + "," + format_real(r.epsilon) + "," + std::to_string(r.count) + "," +
           format_real(r.log_ratio) + "\n";
  }
  return out;
}

std::string mmdim_csv(const MmdimReport& report) {
  std::string out = "n,epsilon,count,log_ratio,k,base_scale,log_lower\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.n) + "," + format_real(r.epsilon) + "," + std::to_string(r.base_count) +
           "," + format_real(r.ratio) + "," + std::to_string(r.k) + "," + format_real(r.base_scale) +
           "," + format_real(r.log_lower) + "\n";
  }
  return out;
}

std::string partition_csv(const Partition& partition) {
  std::string out = "point_index,block_id\n";
  for (std::size_t p = 0; p < partition.block_of.size(); ++p) {
    out += std::to_string(p) + "," + std::to_string(partition.block_of[p]) + "\n";
  }
  return out;
}

std::string subset_csv(const FiniteSubset& subset) {
  std::string out = "point_index\n";
  for (Index p : subset.points()) out += std::to_string(p) + "\n";
  return out;
}

}  // namespace largeness
