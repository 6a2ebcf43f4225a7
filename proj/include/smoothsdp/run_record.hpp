#pragma once

// Per-iteration CSV: header `k,wall_seconds,gap,value_estimate,m_used,pct_eigs,delta_cert,eig_gap`,
// decimal point, shortest round-trip doubles, `nan` for unavailable values.

#include "smoothsdp/instance_io.hpp"
#include "smoothsdp/nesterov.hpp"

#include <istream>
#include <ostream>
#include <vector>

namespace smoothsdp {

inline constexpr std::string_view kCsvHeader = "k,wall_seconds,gap,value_estimate,m_used,pct_eigs,delta_cert,eig_gap";

struct RunRow {
  std::int64_t k = 0;
  double wall_seconds = 0.0;
  double gap = 0.0;
  double value_estimate = 0.0;
  std::int64_t m_used = 0;
  double pct_eigs = 0.0;
  double delta_cert = 0.0;
  double eig_gap = 0.0;
};

inline std::vector<RunRow> to_rows(const std::vector<IterationRecord>& history) {
  std::vector<RunRow> rows;
  rows.reserve(history.size());
  for (const auto& h : history)
    rows.push_back({h.k, h.wall_seconds, h.gap, h.value_estimate, static_cast<std::int64_t>(h.m_used), h.pct_eigs,
                    h.delta_cert, h.eig_gap});
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<RunRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.k << ',' << format_double(r.wall_seconds) << ',' << format_double(r.gap) << ','
       << format_double(r.value_estimate) << ',' << r.m_used << ',' << format_double(r.pct_eigs) << ','
       << format_double(r.delta_cert) << ',' << format_double(r.eig_gap) << '\n';
  }
}

inline std::vector<RunRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw FormatError("unexpected CSV header");
  std::vector<RunRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 8) throw FormatError("CSV row must have 8 fields: " + line);
    auto to_int = [](std::string_view s) {
      std::int64_t v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw FormatError("cannot parse integer '" + std::string(s) + "'");
      return v;
    };
    rows.push_back({to_int(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), to_int(f[4]),
                    parse_double(f[5]), parse_double(f[6]), parse_double(f[7])});
  }
  return rows;
}

}  // namespace smoothsdp
