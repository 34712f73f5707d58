#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embtext/error.hpp"

namespace embtext {

// Predicted probabilities of one fixed class, per (model, document), for one
// fold. The substrate for ranked model comparison.
struct RunMatrix {
  std::vector<std::string> model_names;
  std::vector<std::int64_t> doc_ids;
  std::vector<bool> truth;                       // doc is in the class
  std::vector<std::vector<double>> probs;        // [model][doc]
  std::string reference_model;                   // saturation source

  void validate() const {
    if (model_names.size() != probs.size())
      throw DataError("run matrix: model count mismatch");
    for (const auto& col : probs) {
      if (col.size() != doc_ids.size()) throw DataError("run matrix: doc count mismatch");
      for (double p : col)
        if (!(p >= 0.0 && p <= 1.0)) throw DataError("run matrix: probability out of [0,1]");
    }
    if (truth.size() != doc_ids.size()) throw DataError("run matrix: truth size mismatch");
  }

  std::size_t reference_index() const {
    for (std::size_t m = 0; m < model_names.size(); ++m)
      if (model_names[m] == reference_model) return m;
    throw DataError("reference model not in run matrix: " + reference_model);
  }
};

// Per (model, doc): rank in [1, n], rank 1 = highest predicted probability.
struct RankMatrix {
  std::vector<std::string> model_names;
  std::vector<std::int64_t> doc_ids;
  std::vector<bool> truth;
  std::vector<std::vector<std::int32_t>> ranks;  // [model][doc]
  std::string reference_model;

  std::size_t models() const { return model_names.size(); }
  std::size_t docs() const { return doc_ids.size(); }

  std::size_t reference_index() const {
    for (std::size_t m = 0; m < model_names.size(); ++m)
      if (model_names[m] == reference_model) return m;
    throw DataError("reference model not in rank matrix: " + reference_model);
  }
};

// Ranks by descending probability; rank 1 is the most probable document.
// Ties break by ascending document id.
inline std::vector<std::int32_t> ranks(std::span<const double> probs,
                                       std::span<const std::int64_t> doc_ids = {}) {
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    if (!doc_ids.empty()) return doc_ids[a] < doc_ids[b];
    return a < b;
  });
  std::vector<std::int32_t> out(probs.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    out[order[pos]] = static_cast<std::int32_t>(pos + 1);
  return out;
}

inline RankMatrix rank_matrix(const RunMatrix& run) {
  run.validate();
  RankMatrix rm;
  rm.model_names = run.model_names;
  rm.doc_ids = run.doc_ids;
  rm.truth = run.truth;
  rm.reference_model = run.reference_model;
  for (const auto& col : run.probs) rm.ranks.push_back(ranks(col, run.doc_ids));
  return rm;
}

// ---------------------------------------------------------------------------
// CSV: header doc_id,truth,<model1>,...,<modelM>; one row per document.
// ---------------------------------------------------------------------------

inline std::string parallel_coords_csv(const RankMatrix& rm) {
  std::string out = "doc_id,truth";
  for (const auto& name : rm.model_names) out += "," + name;
  out += '\n';
  for (std::size_t d = 0; d < rm.docs(); ++d) {
    out += std::to_string(rm.doc_ids[d]);
    out += rm.truth[d] ? ",true" : ",false";
    for (std::size_t m = 0; m < rm.models(); ++m)
      out += "," + std::to_string(rm.ranks[m][d]);
    out += '\n';
  }
  return out;
}

inline RankMatrix parse_parallel_coords_csv(std::string_view text) {
  RankMatrix rm;
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    if (end > start) lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) throw DataError("parallel coordinates csv: empty input");

  auto split = [](std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t s = 0;
    while (true) {
      std::size_t e = line.find(',', s);
      if (e == std::string_view::npos) {
        cells.push_back(line.substr(s));
        break;
      }
      cells.push_back(line.substr(s, e - s));
      s = e + 1;
    }
    return cells;
  };

  std::vector<std::string_view> header = split(lines[0]);
  if (header.size() < 3 || header[0] != "doc_id" || header[1] != "truth")
    throw DataError("parallel coordinates csv: bad header");
  for (std::size_t m = 2; m < header.size(); ++m)
    rm.model_names.emplace_back(header[m]);
  rm.ranks.assign(rm.model_names.size(), {});

  for (std::size_t row = 1; row < lines.size(); ++row) {
    std::vector<std::string_view> cells = split(lines[row]);
    if (cells.size() != header.size())
      throw DataError("parallel coordinates csv: row " + std::to_string(row) +
                      " arity mismatch");
    std::int64_t id = 0;
    auto r = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), id);
    if (r.ec != std::errc{}) throw DataError("parallel coordinates csv: bad doc id");
    rm.doc_ids.push_back(id);
    if (cells[1] == "true")
      rm.truth.push_back(true);
    else if (cells[1] == "false")
      rm.truth.push_back(false);
    else
      throw DataError("parallel coordinates csv: bad truth value");
    for (std::size_t m = 0; m < rm.model_names.size(); ++m) {
      std::int32_t rank = 0;
      auto rr = std::from_chars(cells[m + 2].data(), cells[m + 2].data() + cells[m + 2].size(), rank);
      if (rr.ec != std::errc{}) throw DataError("parallel coordinates csv: bad rank");
      rm.ranks[m].push_back(rank);
    }
  }
  return rm;
}

// ---------------------------------------------------------------------------
// SVG: one vertical axis per model, one polyline per document. Hue encodes
// truth (blue in class, red not), saturation falls linearly with the
// reference model's rank from 100% at rank 1 to a 25% floor.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

inline std::string parallel_coords_svg(const RankMatrix& rm) {
  if (rm.models() < 2)
    throw DataError("parallel coordinates plot needs at least 2 models");
  const std::size_t m = rm.models();
  const std::size_t n = rm.docs();
  const std::size_t ref = rm.reference_index();

  const double width = 120.0 * static_cast<double>(m);
  const double height = 640.0;
  const double left = 60.0, right = width - 60.0;
  const double top = 50.0, bottom = height - 30.0;
  auto axis_x = [&](std::size_t i) {
    return m == 1 ? (left + right) / 2.0
                  : left + (right - left) * static_cast<double>(i) / static_cast<double>(m - 1);
  };
  auto rank_y = [&](std::int32_t rank) {
    if (n <= 1) return (top + bottom) / 2.0;
    return top + (bottom - top) * static_cast<double>(rank - 1) / static_cast<double>(n - 1);
  };

  char buf[256];
  std::string svg;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\">\n",
                width, height, width, height);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t i = 0; i < m; ++i) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\" stroke-width=\"1\"/>\n",
                  axis_x(i), top, axis_x(i), bottom);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"12\">",
                  axis_x(i), top - 12.0);
    svg += buf;
    svg += detail::xml_escape(rm.model_names[i]);
    svg += "</text>\n";
  }

  for (std::size_t d = 0; d < n; ++d) {
    int hue = rm.truth[d] ? 220 : 0;  // blue in class, red otherwise
    double sat = 100.0;
    if (n > 1) {
      double rel = static_cast<double>(rm.ranks[ref][d] - 1) / static_cast<double>(n - 1);
      sat = 100.0 - 75.0 * rel;  // rank 1 fully saturated
    }
    svg += "<polyline fill=\"none\" stroke=\"hsl(";
    std::snprintf(buf, sizeof buf, "%d, %.1f%%, 45%%)\" stroke-width=\"1\" points=\"", hue, sat);
    svg += buf;
    for (std::size_t i = 0; i < m; ++i) {
      std::snprintf(buf, sizeof buf, "%s%.1f,%.1f", i ? " " : "", axis_x(i),
                    rank_y(rm.ranks[i][d]));
      svg += buf;
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

// Documents whose maximum pairwise rank difference across models reaches the
// threshold, sorted by gap descending (ties by ascending doc id).
inline std::vector<std::pair<std::int64_t, std::int32_t>> disagreement_report(
    const RankMatrix& rm, std::int32_t threshold) {
  std::vector<std::pair<std::int64_t, std::int32_t>> out;
  for (std::size_t d = 0; d < rm.docs(); ++d) {
    std::int32_t lo = rm.ranks[0][d], hi = rm.ranks[0][d];
    for (std::size_t m = 1; m < rm.models(); ++m) {
      lo = std::min(lo, rm.ranks[m][d]);
      hi = std::max(hi, rm.ranks[m][d]);
    }
    if (hi - lo >= threshold) out.emplace_back(rm.doc_ids[d], hi - lo);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace embtext
