#pragma once

#include <map>
#include <string>
#include <vector>

#include "cartelscreen/market_data.hpp"

namespace cartelscreen {

// Hour-by-hour series of one MGP screen, used to eyeball withholding episodes
// against the labeled windows.
struct HourlyPoint {
  std::string timestamp;  // "YYYY-MM-DD HH"
  double value = 0;
  Label label = Label::Unlabeled;
};

// metric is one of kMgpNames. Tenders are taken in the given (chronological)
// order.
std::vector<HourlyPoint> hourly_series(const std::vector<Tender>& mgp,
                                       const std::string& metric);

// CSV with header timestamp,value,label.
void export_hourly_series(const std::vector<HourlyPoint>& series,
                          const std::string& path);

// Standalone SVG scatter of the series; collusive hours are drawn in a
// distinct color so episodes stand out.
void export_series_svg(const std::vector<HourlyPoint>& series,
                       const std::string& metric, const std::string& path);

// Reads a labels file (zone,date,hour,label) as written by the simulator.
std::map<TenderKey, Label> load_labels(const std::string& path);

// Sets tender labels from the map; keys not present stay Unlabeled.
void set_labels(std::vector<Tender>& tenders,
                const std::map<TenderKey, Label>& labels);

}  // namespace cartelscreen
