#include "spdc/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw NumericError("csv: cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NumericError("csv: cannot read " + path);
  return in;
}

void expect_header(const std::string& got, const std::string& want,
                   const std::string& path) {
  if (got != want) {
    throw NumericError("csv: " + path + ": unexpected header \"" + got + "\"");
  }
}

double to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::uint64_t to_u64(const std::string& s) { return std::strtoull(s.c_str(), nullptr, 10); }

}  // namespace

static const char* kScanHeader =
    "mode,d_s[m],d_i[m],coord_s,coord_i,coincidences,singles_s,singles_i,"
    "dwell[s],seed";

void write_scan_csv(const std::string& path, const ScanCsv& scan) {
  auto out = open_out(path);
  out << kScanHeader << "\n";
  for (const auto& r : scan.records) {
    out << scan.mode << ',' << fmt(r.d_s) << ',' << fmt(r.d_i) << ','
        << fmt(r.coord_s) << ',' << fmt(r.coord_i) << ',' << r.coincidences
        << ',' << r.singles_s << ',' << r.singles_i << ',' << fmt(r.dwell_time)
        << ',' << scan.seed << "\n";
  }
}

ScanCsv read_scan_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw NumericError("csv: " + path + ": empty");
  expect_header(line, kScanHeader, path);
  ScanCsv scan;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) throw NumericError("csv: " + path + ": bad row");
    scan.mode = f[0];
    CoincidenceRecord r;
    r.d_s = to_double(f[1]);
    r.d_i = to_double(f[2]);
    r.coord_s = to_double(f[3]);
    r.coord_i = to_double(f[4]);
    r.coincidences = to_u64(f[5]);
    r.singles_s = to_u64(f[6]);
    r.singles_i = to_u64(f[7]);
    r.dwell_time = to_double(f[8]);
    scan.seed = to_u64(f[9]);
    scan.records.push_back(r);
  }
  return scan;
}

static const char* kSweepHeader =
    "phi_0,w_over_lc,var_x_minus[m^2],var_p_plus[hbar^2 m^-2],product[hbar^2],"
    "err_product[hbar^2]";

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
  auto out = open_out(path);
  out << kSweepHeader << "\n";
  for (const auto& row : sweep.rows) {
    if (!row.ok) continue;
    out << fmt(row.phi_0) << ',' << fmt(row.w_over_lc) << ','
        << fmt(row.var_x_minus) << ',' << fmt(row.var_p_plus) << ','
        << fmt(row.product) << ',' << fmt(row.err_product) << "\n";
  }
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw NumericError("csv: " + path + ": empty");
  expect_header(line, kSweepHeader, path);
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) throw NumericError("csv: " + path + ": bad row");
    SweepRow row;
    row.phi_0 = to_double(f[0]);
    row.w_over_lc = to_double(f[1]);
    row.var_x_minus = to_double(f[2]);
    row.var_p_plus = to_double(f[3]);
    row.product = to_double(f[4]);
    row.err_product = to_double(f[5]);
    row.ok = true;
    rows.push_back(row);
  }
  return rows;
}

static const char* kSectionsHeader = "domain,axis,coordinate,value";

void write_sections_csv(const std::string& path, const SectionsCsv& sections) {
  auto out = open_out(path);
  out << kSectionsHeader << "\n";
  for (std::size_t j = 0; j < sections.axis.size(); ++j) {
    out << sections.domain << ",plus," << fmt(sections.axis[j]) << ','
        << fmt(sections.plus[j]) << "\n";
  }
  for (std::size_t j = 0; j < sections.axis.size(); ++j) {
    out << sections.domain << ",minus," << fmt(sections.axis[j]) << ','
        << fmt(sections.minus[j]) << "\n";
  }
}

SectionsCsv read_sections_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw NumericError("csv: " + path + ": empty");
  expect_header(line, kSectionsHeader, path);
  SectionsCsv sections;
  std::vector<double> minus_axis;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4) throw NumericError("csv: " + path + ": bad row");
    sections.domain = f[0];
    if (f[1] == "plus") {
      sections.axis.push_back(to_double(f[2]));
      sections.plus.push_back(to_double(f[3]));
    } else {
      minus_axis.push_back(to_double(f[2]));
      sections.minus.push_back(to_double(f[3]));
    }
  }
  if (minus_axis != sections.axis) {
    throw NumericError("csv: " + path + ": plus/minus axes differ");
  }
  return sections;
}

static const char* kDistHeader = "domain,coord_s,coord_i,value";

void write_distribution_csv(const std::string& path,
                            const JointDistribution& dist) {
  auto out = open_out(path);
  out << kDistHeader << "\n";
  const std::size_t n = dist.grid().size();
  const char* domain =
      dist.domain() == Domain::Position ? "position" : "momentum";
  for (std::size_t s = 0; s < n; ++s) {
    const std::string cs = fmt(dist.coord(s));
    for (std::size_t i = 0; i < n; ++i) {
      out << domain << ',' << cs << ',' << fmt(dist.coord(i)) << ','
          << fmt(dist.at(s, i)) << "\n";
    }
  }
}

JointDistribution read_distribution_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw NumericError("csv: " + path + ": empty");
  expect_header(line, kDistHeader, path);
  std::vector<double> values;
  std::string domain;
  std::vector<double> coords;  // first row's idler coordinates
  bool first_row_done = false;
  double first_coord_s = 0.0;
  std::size_t row_len = 0, count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4) throw NumericError("csv: " + path + ": bad row");
    domain = f[0];
    const double cs = to_double(f[1]);
    if (count == 0) first_coord_s = cs;
    if (!first_row_done && cs == first_coord_s) {
      coords.push_back(to_double(f[2]));
    } else {
      first_row_done = true;
      if (row_len == 0) row_len = coords.size();
    }
    values.push_back(to_double(f[3]));
    ++count;
  }
  const std::size_t n = coords.size();
  if (n < 2 || values.size() != n * n) {
    throw NumericError("csv: " + path + ": malformed distribution grid");
  }
  const double step = coords[1] - coords[0];
  const Domain dom = domain == "position" ? Domain::Position : Domain::Frequency;
  // Reconstruct the grid: position grids carry dx directly, momentum grids
  // store q spacing dq = 2 pi / (n dx).
  const double dx = dom == Domain::Position
                        ? step
                        : 2.0 * std::numbers::pi / (static_cast<double>(n) * step);
  return JointDistribution(Grid1D(n, dx), std::move(values), dom);
}

}  // namespace spdc
