#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cartelscreen/config.hpp"
#include "cartelscreen/market_data.hpp"

namespace cartelscreen {

struct IngestStats {
  std::size_t rows_total = 0;
  std::size_t rows_hour25 = 0;  // DST hour, dropped per design
};

// Reads a tender CSV and groups rows into tenders sorted chronologically
// (date, hour, zone). Offer order within a tender follows the file.
// Malformed rows raise RowError listing the offending line numbers.
std::vector<Tender> ingest(const std::string& path, Market market,
                           IngestStats* stats = nullptr);

// Labels tenders from the spec windows: inside a window (and passing the
// day filter, which gates the collusive label only) -> Collusive; strictly
// after the last window -> Competitive; anything else -> Unlabeled.
void apply_labels(std::vector<Tender>& tenders, const DatasetSpec& spec);

// Within each label class, tenders with an identical sorted price multiset
// collapse to the chronologically first one. Input must be in chronological
// order; output preserves it.
std::vector<Tender> dedup_msd(const std::vector<Tender>& tenders);

// Keeps every minority-class tender plus a seeded uniform subset of the
// majority class of equal size; original order preserved.
std::vector<Tender> undersample(const std::vector<Tender>& tenders,
                                std::uint64_t seed);

struct Record {
  Tender msd;
  Tender mgp;
  Label label = Label::Unlabeled;
};

struct Provenance {
  DatasetSpec spec;
  std::size_t msd_ingested = 0;
  std::size_t mgp_ingested = 0;
  std::size_t labeled_collusive = 0;
  std::size_t labeled_competitive = 0;
  std::size_t labeled_excluded = 0;   // Unlabeled, dropped
  std::size_t empty_after_restrict = 0;
  std::size_t after_dedup = 0;
  std::size_t after_undersample = 0;
};

struct LabeledDataset {
  std::vector<Record> records;
  Provenance provenance;
  CartelType cartel_type() const { return provenance.spec.cartel_type; }
};

// Full assembly pipeline: zone filter, label, (Complete) restrict MSD offers
// to cartel units, dedup, undersample, then join each surviving MSD tender
// to the same zone/timestamp MGP tender. MGP tenders are never restricted
// or deduplicated.
LabeledDataset build_dataset(std::vector<Tender> msd, std::vector<Tender> mgp,
                             const DatasetSpec& spec);

std::string provenance_summary(const Provenance& p);

}  // namespace cartelscreen
