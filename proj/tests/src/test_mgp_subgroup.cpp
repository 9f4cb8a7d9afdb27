#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "cartelscreen/classical_screens.hpp"
#include "cartelscreen/errors.hpp"
#include "cartelscreen/mgp_screens.hpp"
#include "cartelscreen/subgroup_screens.hpp"
#include "test_helpers.hpp"

using namespace cartelscreen;

TEST_CASE("withholding screens on a small MGP tender") {
  const Tender t = testutil::mgp_tender("Z", "2016-01-01", 1,
                                        {{10, true}, {20, false}, {5, true}});
  const WithholdingScreens s = mgp_screens(t);
  CHECK(s.n_offers == 3);
  CHECK(s.total_qty == 35);
  CHECK(s.n_accepted == 2);
  CHECK(s.accepted_qty == 15);
  const auto v = mgp_vector(t);
  CHECK(v == std::array<double, 4>{3, 35, 2, 15});
}

TEST_CASE("withholding screens on an empty tender are all zero") {
  const Tender t = testutil::mgp_tender("Z", "2016-01-01", 1, {});
  CHECK(mgp_vector(t) == std::array<double, 4>{0, 0, 0, 0});
}

TEST_CASE("quantity totals are exact and order independent") {
  Tender a = testutil::mgp_tender("Z", "2016-01-01", 1, {});
  Tender b = a;
  for (const char* q : {"0.1", "0.2", "0.3", "17.45"}) {
    Offer o;
    o.unit_id = "u";
    o.quantity_text = q;
    o.accepted = true;
    a.offers.push_back(o);
    b.offers.insert(b.offers.begin(), o);  // reversed order
  }
  CHECK(mgp_screens(a).total_qty == mgp_screens(b).total_qty);
  CHECK(mgp_screens(a).total_qty == 18.05);
  CHECK(mgp_screens(a).accepted_qty == mgp_screens(a).total_qty);
}

TEST_CASE("withholding screens validate their input") {
  Tender msd = testutil::msd_tender("Z", "2016-01-01", 1, {1, 2});
  CHECK_THROWS_AS(mgp_screens(msd), InputError);
  Tender t = testutil::mgp_tender("Z", "2016-01-01", 1, {{1, true}});
  t.offers[0].quantity_text.clear();
  CHECK_THROWS_AS(mgp_screens(t), InputError);
}

TEST_CASE("subgroup feature naming and layout") {
  const auto& names = subgroup_names();
  REQUIRE(names.size() == 96);
  CHECK(names[0] == "sub3_var_min");
  CHECK(names[3] == "sub3_var_median");
  CHECK(names[4] == "sub3_cv_min");
  CHECK(names[47] == "sub3_n_bids_median");
  CHECK(names[48] == "sub4_var_min");
  CHECK(names[95] == "sub4_n_bids_median");
}

TEST_CASE("subgroup enumeration is lexicographic") {
  const auto groups = enumerate_subgroups({10, 20, 30, 40}, 3);
  REQUIRE(groups.size() == 4);
  CHECK(groups[0] == std::vector<double>{10, 20, 30});
  CHECK(groups[1] == std::vector<double>{10, 20, 40});
  CHECK(groups[2] == std::vector<double>{10, 30, 40});
  CHECK(groups[3] == std::vector<double>{20, 30, 40});
  CHECK(enumerate_subgroups({1, 2}, 3).empty());
  CHECK(enumerate_subgroups({1, 2, 3, 4, 5}, 4).size() == 5);
  CHECK_THROWS_AS(enumerate_subgroups({1, 2, 3}, 2), InputError);
}

TEST_CASE("size-3 subgroup summary of four ascending prices") {
  // diff over the four triples of {1,2,3,4} is {1,1,2,1}
  const SubgroupSummary s = subgroup_summary({1, 2, 3, 4});
  const auto& names = subgroup_names();
  const auto at = [&](const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    REQUIRE(it != names.end());
    const auto v = s.values[static_cast<std::size_t>(it - names.begin())];
    REQUIRE(v.has_value());
    return *v;
  };
  CHECK(at("sub3_diff_min") == 1.0);
  CHECK(at("sub3_diff_max") == 2.0);
  CHECK(at("sub3_diff_mean") == 1.25);
  CHECK(at("sub3_diff_median") == 1.0);
  CHECK(at("sub3_n_bids_min") == 3.0);
  CHECK(at("sub4_n_bids_max") == 4.0);
}

TEST_CASE("with n equal to k the summary collapses to the classical value") {
  const std::vector<double> prices = {10, 10.5, 11, 14};
  const SubgroupSummary s = subgroup_summary(prices);
  const auto classical = classical_vector(prices);
  // one size-4 subgroup: every defined stat equals the whole-tender screen
  for (int sc = 0; sc < 12; ++sc) {
    for (int stat = 0; stat < 4; ++stat) {
      const auto& cell = s.values[48 + sc * 4 + stat];
      if (!classical[sc]) {
        CHECK(!cell.has_value());
      } else {
        REQUIRE(cell.has_value());
        CHECK(*cell == *classical[sc]);
      }
    }
  }
}

TEST_CASE("three offers leave every size-4 cell missing") {
  const SubgroupSummary s = subgroup_summary({5, 6, 9});
  for (int i = 48; i < 96; ++i) CHECK(!s.values[i].has_value());
  // while the single size-3 subgroup is the tender itself
  const auto classical = classical_vector({5, 6, 9});
  REQUIRE(s.values[16].has_value());  // sub3_diff_min
  CHECK(*s.values[16] == *classical[4]);
}

TEST_CASE("missing subgroup values are skipped, not zeroed") {
  const auto& names = subgroup_names();
  const auto idx = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::find(names.begin(), names.end(), name) - names.begin());
  };

  // {5,5,5} contributes no skew; the three {5,5,9} triples share one value
  const SubgroupSummary s = subgroup_summary({5, 5, 5, 9});
  REQUIRE(s.values[idx("sub3_skew_min")].has_value());
  CHECK(*s.values[idx("sub3_skew_min")] > 0);
  CHECK(*s.values[idx("sub3_skew_min")] == *s.values[idx("sub3_skew_max")]);
  // var is defined (zero) for the flat triple, so it does contribute:
  // values {0, 16/3, 16/3, 16/3}
  CHECK(*s.values[idx("sub3_var_min")] == 0.0);
  CHECK(*s.values[idx("sub3_var_mean")] == doctest::Approx(4.0));

  // diff over the triples of {1,5,5,9} is {4,4,4,0}
  const SubgroupSummary t = subgroup_summary({1, 5, 5, 9});
  CHECK(*t.values[idx("sub3_diff_min")] == 0.0);
  CHECK(*t.values[idx("sub3_diff_max")] == 4.0);
  CHECK(*t.values[idx("sub3_diff_mean")] == 3.0);
  CHECK(*t.values[idx("sub3_diff_median")] == 4.0);
}

TEST_CASE("subgroup summary matches an independent exhaustive recomputation") {
  // straightforward recursive enumeration + naive summary statistics
  const std::vector<std::vector<double>> tenders = {
      {100, 110, 200, 500},
      {10, 10.5, 11, 14, 20},
      {3, 1, 4, 1, 5, 9, 2},         // includes a tie
      {50, 50, 50, 50, 50, 51},      // mostly degenerate
  };
  for (const auto& prices : tenders) {
    const SubgroupSummary got = subgroup_summary(prices);
    const int n = static_cast<int>(prices.size());
    int base = 0;
    for (const int k : {3, 4}) {
      std::vector<std::vector<double>> per_screen(12);
      std::vector<int> pick;
      std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(pick.size()) == k) {
          std::vector<double> g;
          for (const int i : pick) g.push_back(prices[i]);
          const auto vec = classical_vector(g);
          for (int s = 0; s < 12; ++s) {
            if (vec[s]) per_screen[s].push_back(*vec[s]);
          }
          return;
        }
        for (int i = start; i < n; ++i) {
          pick.push_back(i);
          rec(i + 1);
          pick.pop_back();
        }
      };
      rec(0);
      for (int s = 0; s < 12; ++s) {
        auto vals = per_screen[s];
        for (int stat = 0; stat < 4; ++stat) {
          const auto& cell = got.values[base + s * 4 + stat];
          if (vals.empty()) {
            CHECK(!cell.has_value());
            continue;
          }
          std::sort(vals.begin(), vals.end());
          double expect = 0;
          if (stat == 0) expect = vals.front();
          else if (stat == 1) expect = vals.back();
          else if (stat == 2) {
            for (const double v : vals) expect += v;
            expect /= static_cast<double>(vals.size());
          } else {
            const std::size_t m = vals.size();
            expect = m % 2 ? vals[m / 2]
                           : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
          }
          REQUIRE(cell.has_value());
          CHECK(std::abs(*cell - expect) <=
                1e-12 * std::max(1.0, std::abs(expect)));
        }
      }
      base += 48;
    }
  }
}

TEST_CASE("the enumeration cap refuses oversized tenders") {
  std::vector<double> prices(9);
  for (int i = 0; i < 9; ++i) prices[i] = i + 1;
  // C(9,4) = 126
  CHECK_THROWS_WITH_AS(subgroup_summary(prices, 125),
                       doctest::Contains("exceeds cap"), ResourceError);
  CHECK_NOTHROW(subgroup_summary(prices, 126));
}
