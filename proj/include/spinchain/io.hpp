#pragma once

// Text serializations. Everything is written through fmt, which never
// consults the C++ locale, so '.' is always the decimal separator.
//
// Trajectory:  CSV, header "t_seconds,value", 12 significant digits.
// Spectrum:    CSV, header "freq_hz,magnitude".
// Tables, block dumps and match reports: YAML documents, values in Hz
// with four decimals.

#include "spinchain/analytic.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/hamiltonian.hpp"
#include "spinchain/spectro.hpp"

#include <fmt/format.h>

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinchain::io {

inline std::string trajectory_csv(const Trajectory& t) {
  std::string out = "t_seconds,value\n";
  for (std::size_t i = 0; i < t.values.size(); ++i) out += fmt::format("{:.12g},{:.12g}\n", t.time(i), t.values[i]);
  return out;
}

inline std::string spectrum_csv(const Spectrum& s) {
  std::string out = "freq_hz,magnitude\n";
  for (std::size_t i = 0; i < s.freq.size(); ++i) out += fmt::format("{:.12g},{:.12g}\n", s.freq[i], s.magnitude[i]);
  return out;
}

namespace detail {

inline std::string hz(double v) {
  // Avoid "-0.0000" for values that round to zero.
  std::string s = fmt::format("{:.4f}", v);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

inline std::string hz(cplx v) {
  if (std::abs(v.imag()) > 1e-12) return fmt::format("[{}, {}]", hz(v.real()), hz(v.imag()));
  return hz(v.real());
}

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

inline std::string label_list(const std::vector<ProductLabel>& labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? ", " : "") + quoted(labels[i].str());
  return out + "]";
}

inline void matrix_rows(std::string& out, const Matrix& m, const std::string& indent) {
  for (Index r = 0; r < m.rows(); ++r) {
    out += indent + "- [";
    for (Index c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + hz(m(r, c));
    out += "]\n";
  }
}

}  // namespace detail

/// `header` is emitted verbatim before the table (already formatted YAML).
inline std::string transition_table_text(const TransitionTable& t, const std::string& header = {}) {
  std::string out = header;
  out += "energies_hz:\n";
  for (const auto& lv : t.levels) out += fmt::format("  - {{k: {}, E: {}}}\n", lv.k, detail::hz(lv.energy));
  out += "transitions_hz:\n";
  for (const auto& tr : t.transitions) out += fmt::format("  - {{k: {}, l: {}, nu: {}}}\n", tr.k, tr.l, detail::hz(tr.nu));
  return out;
}

inline std::string couplings_text(const std::vector<Coupling>& cs, const std::string& key) {
  if (cs.empty()) return key + ": []\n";
  std::string out = key + ":\n";
  for (const auto& c : cs) {
    out += fmt::format("  - {{a: {}, b: {}, value: {}, kind: {}}}\n", detail::quoted(c.a.str()), detail::quoted(c.b.str()),
                       detail::hz(c.value), coupling_kind_name(c.kind));
  }
  return out;
}

inline std::string block_dump_text(const BlockDecomposition& d, const std::string& header = {}) {
  std::string out = header;
  out += "blocks:\n";
  for (const auto& b : d.blocks) {
    out += fmt::format("  - excitations: {}\n", b.excitations);
    out += fmt::format("    size: {}\n", b.labels.size());
    out += "    labels: " + detail::label_list(b.labels) + "\n";
    out += "    matrix_hz:\n";
    detail::matrix_rows(out, b.matrix, "      ");
  }
  out += couplings_text(d.couplings, "couplings");
  out += couplings_text(d.inter_block(), "inter_block_couplings");
  return out;
}

inline std::string matrix_text(const std::string& key, const std::vector<ProductLabel>& labels, const Matrix& m) {
  std::string out = key + ":\n";
  out += "  labels: " + detail::label_list(labels) + "\n";
  out += "  matrix_hz:\n";
  detail::matrix_rows(out, m, "    ");
  return out;
}

inline std::string match_report_text(const PeakMatchReport& r, const std::string& header = {}) {
  std::string out = header;
  out += fmt::format("tolerance_hz: {}\n", detail::hz(r.tolerance));
  out += fmt::format("split_window_hz: {}\n", detail::hz(r.split_window));
  out += r.peaks.empty() ? "peaks: []\n" : "peaks:\n";
  for (const auto& p : r.peaks) out += fmt::format("  - {{freq: {}, magnitude: {:.6g}}}\n", detail::hz(p.freq), p.magnitude);
  out += "matches:\n";
  for (const auto& m : r.matches) {
    out += fmt::format("  - {{line: {}, predicted: {}, ", m.line.name(), detail::hz(m.line.nu));
    if (m.matched) {
      out += fmt::format("peak: {}, error: {}, matched: true", detail::hz(m.peak->freq), detail::hz(m.error));
    } else {
      out += "peak: null, error: null, matched: false";
    }
    out += fmt::format(", split: {}}}\n", m.split ? "true" : "false");
  }
  out += "unmatched_predictions: [";
  for (std::size_t i = 0; i < r.unmatched_predictions.size(); ++i) {
    out += (i ? ", " : "") + r.unmatched_predictions[i].name();
  }
  out += "]\nunmatched_peaks: [";
  for (std::size_t i = 0; i < r.unmatched_peaks.size(); ++i) out += (i ? ", " : "") + detail::hz(r.unmatched_peaks[i].freq);
  out += r.additivity.empty() ? "]\nadditivity: []\n" : "]\nadditivity:\n";
  for (const auto& a : r.additivity) {
    out += fmt::format("  - {{k: {}, l: {}, m: {}, residual: {}}}\n", a.k, a.l, a.m, detail::hz(a.residual));
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace spinchain::io
