#pragma once

// Output emitters. CSV uses comma separators and LF line ends, no BOM;
// quotients are printed with six decimals; JSON field order is fixed.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "wpn/checkpoints.hpp"
#include "wpn/distribution.hpp"
#include "wpn/solutions.hpp"
#include "wpn/within.hpp"

namespace wpn::io {

using Json = nlohmann::ordered_json;

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string fixed(const std::optional<double>& v, int digits = 6) { return v ? fixed(*v, digits) : ""; }

inline std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline void write_series_csv(std::ostream& out, const CheckpointSeries& rows) {
  out << "x,count,quotient\n";
  for (const auto& r : rows) out << r.x << ',' << r.count << ',' << fixed(r.quotient) << '\n';
}

inline Json to_json(const SolutionRecord& r) {
  Json j;
  j["n"] = r.n;
  j["sigma_n"] = r.sigma_n;
  j["classification"] = std::string(to_string(r.classification));
  if (r.witnesses.empty()) {
    j["witness"] = nullptr;
  } else {
    j["witness"] = Json{{"p", r.witnesses.front().p}, {"m", r.witnesses.front().m}};
  }
  if (r.witnesses.size() > 1) {
    Json all = Json::array();
    for (const auto& w : r.witnesses) all.push_back(Json{{"p", w.p}, {"m", w.m}});
    j["witnesses"] = all;
  }
  return j;
}

inline void write_solutions_json(std::ostream& out, const std::vector<SolutionRecord>& records) {
  Json arr = Json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

inline void write_solution_ndjson(std::ostream& out, const SolutionRecord& r) { out << to_json(r).dump() << '\n'; }

inline void write_cdf_csv(std::ostream& out, const EmpiricalCDF& cdf) {
  out << "u,F\n";
  for (const auto& p : cdf.points) out << p.u << ',' << fixed(p.value) << '\n';
}

inline void write_phase_csv(std::ostream& out, const PhaseReport& report) {
  out << "x,density,reference_value\n";
  for (const auto& r : report.rows) out << r.x << ',' << fixed(r.density) << ',' << fixed(r.reference) << '\n';
}

inline void write_table1_csv(std::ostream& out, const Table1Report& report) {
  out << "c,x,quotient,published,deviation\n";
  const std::size_t v = report.best_variant;
  for (const auto& cell : report.cells)
    out << fixed(cell.c.to_double(), 1) << ',' << cell.x << ',' << fixed(cell.quotients[v]) << ','
        << fixed(cell.published) << ',' << sci(cell.quotients[v] - cell.published) << '\n';
}

}  // namespace wpn::io
