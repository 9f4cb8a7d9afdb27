#include "cartelscreen/folds.hpp"

#include "cartelscreen/errors.hpp"
#include "cartelscreen/rng.hpp"

namespace cartelscreen {

std::vector<int> stratified_folds(const std::vector<int>& y, int k,
                                  std::uint64_t seed) {
  if (k < 2) throw DatasetError("need at least 2 folds");
  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(derive_seed(seed, seed_tag("folds"), attempt));
    std::vector<int> folds(y.size(), -1);
    for (const int cls : {0, 1}) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == cls) idx.push_back(i);
      }
      rng.shuffle(idx);
      for (std::size_t j = 0; j < idx.size(); ++j) {
        folds[idx[j]] = static_cast<int>(j % k);
      }
    }
    std::vector<int> pos(k, 0), neg(k, 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      (y[i] == 1 ? pos : neg)[folds[i]] += 1;
    }
    bool ok = true;
    for (int f = 0; f < k; ++f) ok = ok && pos[f] > 0 && neg[f] > 0;
    if (ok) return folds;
  }
  throw DatasetError("could not stratify " + std::to_string(y.size()) +
                     " rows into " + std::to_string(k) +
                     " folds with both classes present");
}

}  // namespace cartelscreen
