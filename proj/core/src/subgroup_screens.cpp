#include "cartelscreen/subgroup_screens.hpp"

#include <algorithm>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {
namespace {

long long choose(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (1LL << 60)) return 1LL << 60;
  }
  return r;
}

// Calls fn(subgroup) for every k-combination in lexicographic index order.
template <class Fn>
void for_each_subgroup(const std::vector<double>& prices, int k, Fn&& fn) {
  const int n = static_cast<int>(prices.size());
  if (n < k) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<double> group(k);
  for (;;) {
    for (int i = 0; i < k; ++i) group[i] = prices[idx[i]];
    fn(group);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double median_inplace(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

const std::vector<std::string>& subgroup_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    out.reserve(kSubgroupFeatureCount);
    for (const int k : {3, 4}) {
      for (const char* screen : kClassicalNames) {
        for (const char* stat : {"min", "max", "mean", "median"}) {
          out.push_back("sub" + std::to_string(k) + "_" + screen + "_" + stat);
        }
      }
    }
    return out;
  }();
  return names;
}

std::vector<std::vector<double>> enumerate_subgroups(
    const std::vector<double>& prices, int k) {
  if (k != 3 && k != 4) throw InputError("subgroup size must be 3 or 4");
  std::vector<std::vector<double>> out;
  for_each_subgroup(prices, k,
                    [&out](const std::vector<double>& g) { out.push_back(g); });
  return out;
}

SubgroupSummary subgroup_summary(const std::vector<double>& prices,
                                 long long cap) {
  const long long worst = choose(static_cast<long long>(prices.size()), 4);
  if (worst > cap) {
    throw ResourceError("subgroup enumeration refused: C(" +
                        std::to_string(prices.size()) + ",4) = " +
                        std::to_string(worst) + " exceeds cap " +
                        std::to_string(cap));
  }

  SubgroupSummary out;
  int base = 0;
  for (const int k : {3, 4}) {
    std::array<std::vector<double>, 12> collected;
    for_each_subgroup(prices, k, [&collected](const std::vector<double>& g) {
      const auto vec = classical_vector(g);
      for (int s = 0; s < 12; ++s) {
        if (vec[s]) collected[s].push_back(*vec[s]);
      }
    });
    for (int s = 0; s < 12; ++s) {
      auto& vals = collected[s];
      if (vals.empty()) continue;  // all Missing or n < k
      double mn = vals[0], mx = vals[0], sum = 0;
      for (const double v : vals) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        sum += v;
      }
      const int cell = base + s * 4;
      out.values[cell + 0] = mn;
      out.values[cell + 1] = mx;
      out.values[cell + 2] = sum / static_cast<double>(vals.size());
      out.values[cell + 3] = median_inplace(vals);
    }
    base += 48;
  }
  return out;
}

}  // namespace cartelscreen
