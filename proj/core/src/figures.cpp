#include "cartelscreen/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cartelscreen/csv.hpp"
#include "cartelscreen/decimal.hpp"
#include "cartelscreen/errors.hpp"
#include "cartelscreen/mgp_screens.hpp"

namespace cartelscreen {
namespace {

int metric_index(const std::string& metric) {
  for (std::size_t i = 0; i < kMgpNames.size(); ++i) {
    if (metric == kMgpNames[i]) return static_cast<int>(i);
  }
  std::string names;
  for (const char* n : kMgpNames) names += std::string(" ") + n;
  throw InputError("unknown series metric '" + metric + "'; expected one of" +
                   names);
}

}  // namespace

std::vector<HourlyPoint> hourly_series(const std::vector<Tender>& mgp,
                                       const std::string& metric) {
  const int idx = metric_index(metric);
  std::vector<HourlyPoint> series;
  series.reserve(mgp.size());
  for (const Tender& t : mgp) {
    HourlyPoint p;
    char buf[16];
    std::snprintf(buf, sizeof(buf), " %02d", t.hour);
    p.timestamp = format_date(t.date) + buf;
    p.value = mgp_vector(t)[static_cast<std::size_t>(idx)];
    p.label = t.label;
    series.push_back(std::move(p));
  }
  return series;
}

void export_hourly_series(const std::vector<HourlyPoint>& series,
                          const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(series.size());
  for (const HourlyPoint& p : series) {
    rows.push_back({p.timestamp, format_double(p.value), label_name(p.label)});
  }
  write_csv(path, {"timestamp", "value", "label"}, rows);
}

void export_series_svg(const std::vector<HourlyPoint>& series,
                       const std::string& metric, const std::string& path) {
  const double width = 960, height = 360;
  const double ml = 70, mr = 20, mt = 30, mb = 40;  // margins
  double lo = 0, hi = 1;
  if (!series.empty()) {
    lo = hi = series.front().value;
    for (const HourlyPoint& p : series) {
      lo = std::min(lo, p.value);
      hi = std::max(hi, p.value);
    }
  }
  if (hi <= lo) hi = lo + 1;

  const double n = std::max<std::size_t>(series.size(), 1);
  auto px = [&](std::size_t i) {
    return ml + (width - ml - mr) * (n == 1 ? 0.5 : i / (n - 1));
  };
  auto py = [&](double v) {
    return height - mb - (height - mt - mb) * (v - lo) / (hi - lo);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << ml << "\" y=\"" << mt - 10
      << "\" font-family=\"sans-serif\" font-size=\"14\">" << metric
      << " by hour</text>\n";
  svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(hi) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(hi) << "</text>\n";
  svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(lo) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(lo) << "</text>\n";
  if (!series.empty()) {
    svg << "<text x=\"" << px(0) << "\" y=\"" << height - mb + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << series.front().timestamp << "</text>\n";
    svg << "<text x=\"" << px(series.size() - 1) << "\" y=\""
        << height - mb + 16
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << series.back().timestamp << "</text>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const HourlyPoint& p = series[i];
    const char* fill = p.label == Label::Collusive    ? "#d62728"
                       : p.label == Label::Competitive ? "#1f77b4"
                                                        : "#999999";
    svg << "<circle cx=\"" << px(i) << "\" cy=\"" << py(p.value)
        << "\" r=\"2.2\" fill=\"" << fill << "\" fill-opacity=\"0.75\"/>\n";
  }
  svg << "<circle cx=\"" << width - mr - 180 << "\" cy=\"" << mt
      << "\" r=\"4\" fill=\"#d62728\"/>\n";
  svg << "<text x=\"" << width - mr - 170 << "\" y=\"" << mt + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\">collusive</text>\n";
  svg << "<circle cx=\"" << width - mr - 90 << "\" cy=\"" << mt
      << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
  svg << "<text x=\"" << width - mr - 80 << "\" y=\"" << mt + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\">competitive</text>\n";
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << svg.str();
  if (!out) throw IoError("failed writing " + path);
}

std::map<TenderKey, Label> load_labels(const std::string& path) {
  const CsvTable table = read_csv(path);
  const int c_zone = table.column("zone");
  const int c_date = table.column("date");
  const int c_hour = table.column("hour");
  const int c_label = table.column("label");
  if (c_zone < 0 || c_date < 0 || c_hour < 0 || c_label < 0) {
    throw SchemaError(path + ": expected columns zone,date,hour,label");
  }
  std::map<TenderKey, Label> labels;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    if (row.size() != table.header.size()) {
      throw RowError(path + ": line " + std::to_string(line) +
                     ": wrong field count");
    }
    TenderKey key;
    key.zone = row[c_zone];
    try {
      key.day = day_number(parse_date(row[c_date]));
      key.hour = std::stoi(row[c_hour]);
    } catch (const std::exception& e) {
      throw RowError(path + ": line " + std::to_string(line) + ": " + e.what());
    }
    labels[key] = parse_label(row[c_label]);
  }
  return labels;
}

void set_labels(std::vector<Tender>& tenders,
                const std::map<TenderKey, Label>& labels) {
  for (Tender& t : tenders) {
    const auto it = labels.find(key_of(t));
    t.label = it == labels.end() ? Label::Unlabeled : it->second;
  }
}

}  // namespace cartelscreen
