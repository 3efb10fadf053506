#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spdc/analysis_types.hpp"
#include "spdc/biphoton.hpp"
#include "spdc/virtual_lab.hpp"

namespace spdc {

/// CSV emission and ingestion. Doubles are written with 17 significant
/// digits so every file round-trips bit-exactly through its own reader.

struct ScanCsv {
  std::string mode;
  std::uint64_t seed = 0;
  std::vector<CoincidenceRecord> records;
};

// mode,d_s[m],d_i[m],coord_s,coord_i,coincidences,singles_s,singles_i,dwell[s],seed
void write_scan_csv(const std::string& path, const ScanCsv& scan);
ScanCsv read_scan_csv(const std::string& path);

// phi_0,w_over_lc,var_x_minus[m^2],var_p_plus[hbar^2 m^-2],product[hbar^2],err_product[hbar^2]
void write_sweep_csv(const std::string& path, const SweepResult& sweep);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

struct SectionsCsv {
  std::string domain;  // "position" | "momentum"
  std::vector<double> axis;
  std::vector<double> plus;
  std::vector<double> minus;
};

// domain,axis,coordinate,value   (axis is "plus" or "minus")
void write_sections_csv(const std::string& path, const SectionsCsv& sections);
SectionsCsv read_sections_csv(const std::string& path);

// domain,coord_s,coord_i,value
void write_distribution_csv(const std::string& path,
                            const JointDistribution& dist);
JointDistribution read_distribution_csv(const std::string& path);

}  // namespace spdc
