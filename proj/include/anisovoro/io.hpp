#pragma once

// File formats: site CSV, JSON sidecars and reports with canonical key
// order and fixed 17-significant-digit floats, and PGM/PPM rasters.
// All writers are byte-deterministic for fixed inputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "anisovoro/diagram.hpp"
#include "anisovoro/net.hpp"

namespace anisovoro {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// nlohmann::json already keeps keys sorted; this dump additionally pins
// float formatting so reports diff cleanly across runs.
inline void canonical_dump(const nlohmann::json& j, std::string& out, int indent,
                           int depth) {
  const std::string pad(static_cast<size_t>(indent * depth), ' ');
  const std::string pad_in(static_cast<size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        canonical_dump(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        canonical_dump(el, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

inline std::string canonical_dump(const nlohmann::json& j, int indent = 2) {
  std::string out;
  canonical_dump(j, out, indent, 0);
  out += "\n";
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

template <int N>
inline std::string sites_to_csv(const std::vector<Vec<N>>& sites) {
  std::string out;
  for (const auto& s : sites) {
    for (int i = 0; i < N; ++i) {
      if (i) out += ',';
      out += format_double(s[i]);
    }
    out += '\n';
  }
  return out;
}

template <int N>
inline std::vector<Vec<N>> sites_from_csv(const std::string& csv) {
  std::vector<Vec<N>> sites;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Vec<N> v;
    std::istringstream ls(line);
    std::string cell;
    for (int i = 0; i < N; ++i) {
      if (!std::getline(ls, cell, ','))
        throw std::runtime_error("site csv: expected " + std::to_string(N) +
                                 " columns");
      v[i] = std::stod(cell);
    }
    sites.push_back(v);
  }
  return sites;
}

template <int N>
inline nlohmann::json grid_to_json(const Grid<N>& g) {
  nlohmann::json j;
  j["box"] = {{"min", detail::vec_to_json<N>(g.box.min)},
              {"max", detail::vec_to_json<N>(g.box.max)}};
  nlohmann::json res = nlohmann::json::array();
  for (int i = 0; i < N; ++i) res.push_back(g.res[i]);
  j["res"] = res;
  return j;
}

template <int N>
inline Grid<N> grid_from_json(const nlohmann::json& j) {
  Grid<N> g;
  g.box.min = detail::vec_from_json<N>(j.at("box").at("min"));
  g.box.max = detail::vec_from_json<N>(j.at("box").at("max"));
  const auto& res = j.at("res");
  if (!res.is_array() || res.size() != N)
    throw std::runtime_error("grid json: res must have one entry per axis");
  for (int i = 0; i < N; ++i) g.res[i] = res[static_cast<size_t>(i)].get<int>();
  g.validate();
  return g;
}

template <int N>
inline nlohmann::json net_sidecar(const AsymmetricNet<N>& net, const Grid<N>& grid,
                                  uint64_t seed) {
  nlohmann::json j;
  j["epsilon"] = net.epsilon;
  j["kind"] = kind_name(net.kind);
  j["grid"] = grid_to_json(grid);
  j["seed"] = seed;
  j["site_count"] = net.sites.size();
  return j;
}

// Deterministic per-site palette; never emits pure red, which is
// reserved for orphan cells.
inline std::array<uint8_t, 3> site_color(int site) {
  const uint64_t h = (static_cast<uint64_t>(site) + 1) * 0x9e3779b97f4a7c15ull;
  auto chan = [&](int shift, int lo) {
    return static_cast<uint8_t>(lo + ((h >> shift) & 0x7f));
  };
  std::array<uint8_t, 3> rgb{chan(8, 64), chan(24, 64), chan(40, 64)};
  if (rgb[0] == 255 && rgb[1] == 0 && rgb[2] == 0) rgb[1] = 32;
  return rgb;
}

// 2D label rasters. Row 0 of the image is the top of the domain (max
// y); axis 0 runs left to right.
inline std::string labels_to_pgm(const Grid<2>& grid, const std::vector<int32_t>& labels) {
  std::string out = "P5\n" + std::to_string(grid.res[0]) + " " +
                    std::to_string(grid.res[1]) + "\n255\n";
  out.reserve(out.size() + static_cast<size_t>(grid.cell_count()));
  for (int y = grid.res[1] - 1; y >= 0; --y)
    for (int x = 0; x < grid.res[0]; ++x) {
      const int64_t c = grid.linear_of({x, y});
      out += static_cast<char>(labels[static_cast<size_t>(c)] % 256);
    }
  return out;
}

inline std::string labels_to_ppm(const Grid<2>& grid, const std::vector<int32_t>& labels,
                                 const std::vector<uint8_t>& orphan_mask) {
  std::string out = "P6\n" + std::to_string(grid.res[0]) + " " +
                    std::to_string(grid.res[1]) + "\n255\n";
  out.reserve(out.size() + 3 * static_cast<size_t>(grid.cell_count()));
  for (int y = grid.res[1] - 1; y >= 0; --y)
    for (int x = 0; x < grid.res[0]; ++x) {
      const size_t c = static_cast<size_t>(grid.linear_of({x, y}));
      if (!orphan_mask.empty() && orphan_mask[c]) {
        out += static_cast<char>(255);
        out += static_cast<char>(0);
        out += static_cast<char>(0);
      } else {
        const auto rgb = site_color(labels[c]);
        out += static_cast<char>(rgb[0]);
        out += static_cast<char>(rgb[1]);
        out += static_cast<char>(rgb[2]);
      }
    }
  return out;
}

template <int N>
inline std::vector<uint8_t> orphan_mask(const LabeledDiagram<N>& d) {
  std::vector<uint8_t> mask(static_cast<size_t>(d.grid.cell_count()), 0);
  for (int ci : d.confirmed_orphans)
    for (int64_t cell : d.components[static_cast<size_t>(ci)].cells)
      mask[static_cast<size_t>(cell)] = 1;
  return mask;
}

// The middle slice along the last axis, for rasterizing 3D diagrams.
inline void slice_labels(const Grid<3>& grid, const std::vector<int32_t>& labels,
                         const std::vector<uint8_t>& mask, Grid<2>& grid2,
                         std::vector<int32_t>& labels2, std::vector<uint8_t>& mask2) {
  grid2.box = Box<2>{{grid.box.min[0], grid.box.min[1]}, {grid.box.max[0], grid.box.max[1]}};
  grid2.res = {grid.res[0], grid.res[1]};
  const int z = grid.res[2] / 2;
  labels2.resize(static_cast<size_t>(grid2.cell_count()));
  mask2.assign(static_cast<size_t>(grid2.cell_count()), 0);
  for (int y = 0; y < grid.res[1]; ++y)
    for (int x = 0; x < grid.res[0]; ++x) {
      const size_t from = static_cast<size_t>(grid.linear_of({x, y, z}));
      const size_t to = static_cast<size_t>(grid2.linear_of({x, y}));
      labels2[to] = labels[from];
      if (!mask.empty()) mask2[to] = mask[from];
    }
}

// Component report rows: {site, component_size, is_main, bbox}.
template <int N>
inline nlohmann::json components_to_json(const LabeledDiagram<N>& d) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t ci = 0; ci < d.components.size(); ++ci) {
    const auto& comp = d.components[ci];
    nlohmann::json row;
    row["site"] = comp.site;
    row["component_size"] = comp.cells.size();
    row["is_main"] = comp.is_main;
    nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
    for (int i = 0; i < N; ++i) {
      lo.push_back(comp.bbox_lo[i]);
      hi.push_back(comp.bbox_hi[i]);
    }
    row["bbox"] = {{"lo", lo}, {"hi", hi}};
    row["confirmed_orphan"] =
        std::find(d.confirmed_orphans.begin(), d.confirmed_orphans.end(),
                  static_cast<int>(ci)) != d.confirmed_orphans.end();
    row["resolution_suspect"] =
        std::find(d.dropped_suspects.begin(), d.dropped_suspects.end(),
                  static_cast<int>(ci)) != d.dropped_suspects.end();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace anisovoro
