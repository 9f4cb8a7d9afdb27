#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cartelscreen/classical_screens.hpp"
#include "cartelscreen/config.hpp"

namespace cartelscreen {

enum class TestMethod { MWExact, MWNormal, KSAsymptotic };

std::string test_method_name(TestMethod m);

struct TestResult {
  double statistic = 0;                // MW: U of the first sample; KS: D
  std::optional<double> p_value;       // absent when undefined (zero variance)
  TestMethod method = TestMethod::MWNormal;
  std::size_t n1 = 0, n2 = 0;
};

// Two-sided Mann-Whitney with midrank ties. Exact enumeration when
// n1+n2 <= 12 and the pooled sample is tie-free, otherwise the normal
// approximation with tie-corrected variance and (optionally) a continuity
// correction of 0.5.
TestResult mann_whitney(const std::vector<double>& x,
                        const std::vector<double>& y,
                        bool continuity_correction = true);

// Two-sample Kolmogorov-Smirnov; D is exact (integer arithmetic over the
// pooled points), the p-value comes from the asymptotic Kolmogorov
// distribution at sqrt(n1*n2/(n1+n2)) * D.
TestResult ks_two_sample(const std::vector<double>& x,
                         const std::vector<double>& y);

// Survival function of the Kolmogorov distribution, Q(t) = P(K > t).
double kolmogorov_q(double t);

struct SignificanceRow {
  std::string screen;
  std::optional<double> stat_mw, p_mw, stat_ks, p_ks;
};

// One row per feature column, comparing collusive (label 1) against
// competitive values; Missing cells are dropped from the samples. Columns
// empty in either class get an all-NA row.
std::vector<SignificanceRow> screen_significance_report(
    const std::vector<std::string>& names,
    const std::vector<std::vector<ScreenValue>>& columns,
    const std::vector<int>& labels, const TestConfig& tc = {});

}  // namespace cartelscreen
