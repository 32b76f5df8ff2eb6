#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "phononbus/errors.hpp"
#include "phononbus/version.hpp"

namespace phononbus::cli {

// 17 significant digits round-trip an IEEE double exactly, and snprintf with
// a fixed format produces the same bytes on every run and thread count. The
// byte-reproducibility contract of the output files rides on this.
inline std::string fmt_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

// FNV-1a over the canonical config text. Stable across platforms, cheap,
// and collisions do not matter: the hash only labels output files so runs
// can be matched back to the exact configuration that produced them.
inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

// One observable series: a file stem, column names, and preformatted cells.
// Cells are strings so integer and float formatting is decided at the point
// that knows the quantity, not by the writer.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size()) {
      throw InvalidArgument("Table '" + name + "': row has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(columns.size()));
    }
    rows.push_back(std::move(cells));
  }
};

// Provenance block written at the top of every CSV. Deliberately contains
// no timestamps, hostnames, or thread counts: two runs with the same config
// and seed must produce byte-identical files.
struct CsvHeader {
  std::string scheme;
  std::string config_text;
  std::uint64_t master_seed = 0;
};

inline std::string render_csv(const Table& table, const CsvHeader& header) {
  std::string out;
  out += "# phonon-bus ";
  out += version_string;
  out += "\n# scheme: " + header.scheme;
  out += "\n# config-hash: " + hex64(fnv1a64(header.config_text));
  out += "\n# master-seed: " + std::to_string(header.master_seed);
  out += "\n# config: " + header.config_text + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const std::vector<std::string>& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  f.flush();
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace phononbus::cli
