#include "ringlat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ringlat/errors.hpp"

namespace ringlat {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw NumericalError("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trace_to_csv(const ObservableTrace& trace) {
  std::ostringstream out;
  for (const auto& [key, value] : trace.metadata) out << "# " << key << "=" << value << "\n";
  out << "t," << trace.value_name << "\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << format_float(trace.times[i]) << "," << format_float(trace.values[i]) << "\n";
  return out.str();
}

ObservableTrace trace_from_csv(const std::string& content) {
  ObservableTrace trace;
  std::istringstream in(content);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        trace.metadata[key] = line.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ValidationError("trace CSV header lacks a comma");
      trace.value_name = line.substr(comma + 1);
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("trace CSV row lacks a comma: " + line);
    trace.times.push_back(std::stod(line.substr(0, comma)));
    trace.values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (!header_seen) throw ValidationError("trace CSV has no header line");
  return trace;
}

void write_trace_csv(const std::string& path, const ObservableTrace& trace) {
  write_text_atomic(path, trace_to_csv(trace));
}

ObservableTrace read_trace_csv(const std::string& path) {
  return trace_from_csv(read_text(path));
}

std::string band_table_to_csv(const std::vector<BandTableRow>& rows) {
  std::ostringstream out;
  out << "q,n,E_n\n";
  for (const auto& r : rows)
    out << format_float(r.q) << "," << r.n << "," << format_float(r.energy) << "\n";
  return out.str();
}

std::vector<BandTableRow> band_table_from_csv(const std::string& content) {
  std::vector<BandTableRow> rows;
  std::istringstream in(content);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ValidationError("band CSV row needs three columns: " + line);
    BandTableRow r;
    r.q = std::stod(line.substr(0, c1));
    r.n = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    r.energy = std::stod(line.substr(c2 + 1));
    rows.push_back(r);
  }
  if (!header_seen) throw ValidationError("band CSV has no header line");
  return rows;
}

std::string trajectory_states_to_text(const Trajectory& traj) {
  if (traj.states.empty()) throw ValidationError("trajectory holds no stored states");
  std::ostringstream out;
  out << "phi,re_psi,im_psi\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << "# t=" << format_float(traj.times[i]) << "\n";
    const auto& psi = traj.states[i].amplitudes;
    const Eigen::VectorXd phi = angular_grid(static_cast<int>(psi.size()));
    for (int j = 0; j < psi.size(); ++j)
      out << format_float(phi[j]) << "," << format_float(psi[j].real()) << ","
          << format_float(psi[j].imag()) << "\n";
  }
  return out.str();
}

}  // namespace ringlat
