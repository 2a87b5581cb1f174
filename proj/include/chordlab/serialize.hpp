#pragma once
//
// Report output. JSON is canonical: keys sorted, floats with 17 significant
// digits, two-space indentation, trailing newline. CSV tables carry a fixed
// header per report type.
//

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chordlab/chords.hpp"
#include "chordlab/electro.hpp"
#include "chordlab/errors.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/spectral.hpp"

namespace chordlab {

using Json = nlohmann::json;  // std::map-backed objects, so keys iterate sorted

enum class Format { json, csv };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_json_string(std::string& out, const std::string& s) {
  out += Json(s).dump(-1, ' ', false, Json::error_handler_t::replace);
}

inline void write_canonical(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_json_string(out, it.key());
        out += ": ";
        write_canonical(out, it.value(), indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_canonical(out, j[i], indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_canonical(out, j[i], indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        // Keep floats recognizable as floats after a round trip.
        if (out.find_first_of(".eE", out.size() - std::char_traits<char>::length(buf)) ==
            std::string::npos)
          out += ".0";
      }
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string canonical_json(const Json& j) {
  std::string out;
  detail::write_canonical(out, j, 0);
  out += "\n";
  return out;
}

inline std::string render_csv(const Table& t) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    return s + "\n";
  };
  std::string out = line(t.header);
  for (const auto& r : t.rows) out += line(r);
  return out;
}

/// Writes `text` to `path`, or to stdout when the path is empty or "-".
inline void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Report conversions
// ---------------------------------------------------------------------------

inline Json to_json(const InequalityReport& r) {
  return Json{{"N", r.n},         {"m", r.m},         {"p", r.p},
              {"L", r.length},    {"lhs", r.lhs},     {"rhs", r.rhs},
              {"deficit", r.deficit}, {"holds", r.holds}};
}

inline std::vector<std::string> csv_cells(const InequalityReport& r) {
  return {std::to_string(r.n), std::to_string(r.m), format_double(r.p),
          format_double(r.length), format_double(r.lhs), format_double(r.rhs),
          format_double(r.deficit), r.holds ? "true" : "false"};
}

inline Table to_table(const std::vector<InequalityReport>& reports) {
  Table t{{"N", "m", "p", "L", "lhs", "rhs", "deficit", "holds"}, {}};
  for (const auto& r : reports) t.rows.push_back(csv_cells(r));
  return t;
}

inline Json to_json(const std::vector<InequalityReport>& reports) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

/// Configuration as a loop spec of type "polygon".
inline Json to_json(const PointConfiguration& cfg) {
  Json pts = Json::array();
  for (const auto& p : cfg.points()) pts.push_back(p);
  return Json{{"type", "polygon"}, {"L", cfg.length()}, {"points", pts}};
}

inline Table to_table(const PointConfiguration& cfg) {
  Table t;
  t.header = {"index"};
  const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < cfg.dim(); ++i)
    t.header.push_back(i < 3 ? axes[i] : "x" + std::to_string(i));
  for (int k = 0; k < cfg.size(); ++k) {
    std::vector<std::string> row{std::to_string(k)};
    for (double x : cfg.at(k)) row.push_back(format_double(x));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Json to_json(const GroundState& gs) {
  return Json{{"kappa1", gs.kappa1},
              {"energy", gs.energy},
              {"eigvec", gs.eigvec},
              {"iterations", gs.iterations}};
}

inline Table to_table(const GroundState& gs) {
  Table t{{"kappa1", "energy", "iterations"}, {}};
  t.rows.push_back({format_double(gs.kappa1), format_double(gs.energy),
                    std::to_string(gs.iterations)});
  return t;
}

inline Json to_json(const KKTReport& k) {
  Json active = Json::array();
  for (bool a : k.active) active.push_back(a);
  return Json{{"multipliers", k.multipliers},
              {"slacks", k.slacks},
              {"constraints", k.constraints},
              {"active", active},
              {"residual", k.residual},
              {"feasibility", k.feasibility},
              {"complementarity", k.complementarity},
              {"objective", k.objective},
              {"penalty", k.penalty},
              {"outer_iterations", k.outer_iterations},
              {"inner_iterations", k.inner_iterations},
              {"restart", k.restart},
              {"converged", k.converged}};
}

inline Json to_json(const OptimizationResult& r) {
  return Json{{"configuration", to_json(r.configuration)}, {"kkt", to_json(r.kkt)}};
}

/// One row per bead: coordinates, then the multiplier, slack and constraint
/// value of the constraint between bead r and bead r+1.
inline Table to_table(const OptimizationResult& r) {
  Table t = to_table(r.configuration);
  for (const char* h : {"multiplier", "slack", "constraint", "active"}) t.header.push_back(h);
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    t.rows[k].push_back(format_double(r.kkt.multipliers[k]));
    t.rows[k].push_back(format_double(r.kkt.slacks[k]));
    t.rows[k].push_back(format_double(r.kkt.constraints[k]));
    t.rows[k].push_back(r.kkt.active[k] ? "true" : "false");
  }
  return t;
}

template <class T>
void emit_report(const T& value, Format format, const std::string& path) {
  write_text(format == Format::json ? canonical_json(to_json(value)) : render_csv(to_table(value)),
             path);
}

}  // namespace chordlab
