#pragma once

// Artifact serialization: CSV with 12-significant-digit decimals and JSON
// with stable key order.  Every artifact embeds the tool version and the
// config hash so re-runs are byte-comparable.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cocyclelab/lyapunov.hpp"
#include "cocyclelab/regularity.hpp"
#include "cocyclelab/splitting.hpp"

namespace cocyclelab {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

inline std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// 12 significant digits, locale-independent.
inline std::string format_sig(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string point_label(const BasePoint& p) {
  if (const auto* c = std::get_if<CirclePoint>(&p))
    return std::to_string(c->x.num) + "/" + std::to_string(c->x.den);
  if (const auto* t = std::get_if<TorusPoint>(&p))
    return "(" + std::to_string(t->x.num) + "/" + std::to_string(t->x.den) + "," +
           std::to_string(t->y.num) + "/" + std::to_string(t->y.den) + ")";
  const auto& s = std::get<SymbolicPoint>(p);
  return "L" + std::to_string(s.level) + "@" + std::to_string(s.origin);
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& config_hash) : out_(path) {
    if (!out_) throw InvalidParameter("cannot open output file " + path);
    out_ << "# tool_version=" << kToolVersion << "\n";
    out_ << "# config_hash=" << config_hash << "\n";
  }

  void header(const std::vector<std::string>& cols) { write_row(cols); }

  void row(const std::vector<std::string>& cells) { write_row(cells); }

 private:
  void write_row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }
  std::ofstream out_;
};

inline Json meta_block(const std::string& config_hash) {
  Json m;
  m["tool_version"] = kToolVersion;
  m["config_hash"] = config_hash;
  return m;
}

inline void write_json(const std::string& path, const Json& payload) {
  std::ofstream out(path);
  if (!out) throw InvalidParameter("cannot open output file " + path);
  out << payload.dump(2) << "\n";
}

// -- typed serializers -------------------------------------------------------

inline Json to_json(const FiniteTimeSpectrum& s) {
  Json j;
  j["point"] = point_label(s.point);
  j["n"] = s.horizon;
  j["direction"] = s.direction == Direction::forward ? "forward" : "backward";
  j["values"] = s.values;
  return j;
}

inline Json to_json(const ExactSpectrum& s) {
  Json j;
  j["point"] = point_label(s.source);
  j["period"] = s.period;
  Json pairs = Json::array();
  for (const auto& [chi, mult] : s.pairs) {
    Json p;
    p["chi"] = chi;
    p["multiplicity"] = mult;
    pairs.push_back(p);
  }
  j["pairs"] = pairs;
  return j;
}

inline Json to_json(const DominationVerdict& v) {
  Json j;
  j["k"] = v.k;
  j["dominated"] = v.dominated;
  j["fitted_rate"] = v.fitted_rate;
  j["fitted_offset"] = v.fitted_offset;
  j["min_gap_over_sample"] = v.min_gap_over_sample;
  j["residual"] = v.residual;
  return j;
}

inline Json to_json(const SackerSellEstimate& e) {
  Json j;
  Json intervals = Json::array();
  for (const auto& [alpha, beta] : e.intervals) {
    Json iv;
    iv["alpha"] = alpha;
    iv["beta"] = beta;
    intervals.push_back(iv);
  }
  j["intervals"] = intervals;
  j["grid_min"] = e.grid.front();
  j["grid_max"] = e.grid.back();
  j["grid_size"] = e.grid.size();
  j["horizon"] = e.horizon;
  return j;
}

inline Json to_json(const RegularityReport& r) {
  Json j;
  j["point"] = point_label(r.forward_spectrum.point);
  j["forward"] = r.forward_spectrum.values;
  j["backward"] = r.backward_spectrum.values;
  j["discrepancy"] = r.discrepancy;
  j["checkpoints"] = r.checkpoints;
  j["discrepancy_checkpoints"] = r.discrepancy_checkpoints;
  j["angle_decay_rate"] = r.angle_decay_rate;
  j["convergence_half_life"] = r.convergence_half_life;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  return j;
}

inline Json to_json(const CompleteRegularityReport& r) {
  Json j;
  Json per = Json::array();
  for (const auto& p : r.per_point) per.push_back(to_json(p));
  j["per_point"] = per;
  j["spectrum_spread"] = r.spectrum_spread;
  j["uniformity_deficit"] = r.uniformity_deficit;
  j["verdict"] = to_string(r.verdict);
  return j;
}

inline Json to_json(const OscillationReport& r) {
  Json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  auto records = [](const std::vector<WitnessRecord>& v) {
    Json arr = Json::array();
    for (const auto& rec : v) {
      Json e;
      e["point"] = point_label(rec.point);
      e["witness_n"] = rec.witness_n;
      e["extreme_value"] = rec.extreme_value;
      arr.push_back(e);
    }
    return arr;
  };
  j["i_witnesses"] = records(r.i_witnesses);
  j["i_failures"] = records(r.i_failures);
  j["s_witnesses"] = records(r.s_witnesses);
  j["s_failures"] = records(r.s_failures);
  return j;
}

}  // namespace cocyclelab
