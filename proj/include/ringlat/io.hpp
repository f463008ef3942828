#pragma once

#include <string>
#include <vector>

#include "ringlat/analysis.hpp"
#include "ringlat/propagator.hpp"

namespace ringlat {

// 17-significant-digit scientific form; round-trips doubles exactly.
std::string format_float(double v);

// Writes via a temporary file in the same directory plus rename.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// Trace CSV: sorted "# key=value" metadata lines, a header line
// "t,<value_name>", then one row per sample.
std::string trace_to_csv(const ObservableTrace& trace);
ObservableTrace trace_from_csv(const std::string& content);

void write_trace_csv(const std::string& path, const ObservableTrace& trace);
ObservableTrace read_trace_csv(const std::string& path);

// Band table CSV with columns q,n,E_n (energies in E_r).
struct BandTableRow {
  double q = 0.0;
  int n = 0;
  double energy = 0.0;
};
std::string band_table_to_csv(const std::vector<BandTableRow>& rows);
std::vector<BandTableRow> band_table_from_csv(const std::string& content);

// Snapshot dump of stored trajectory states: per sampled time a line
// "# t=<time>" followed by rows "phi,re_psi,im_psi".
std::string trajectory_states_to_text(const Trajectory& traj);

}  // namespace ringlat
