#pragma once

#include <string>

#include "cartelscreen/super_learner.hpp"

namespace cartelscreen {

// Versioned text container for a fitted ensemble. All floating-point values
// are stored as hex floats, so save/load round-trips bit-exactly and two
// identical runs produce byte-identical files.
void save_ensemble(const TrainedEnsemble& model, const std::string& path);
TrainedEnsemble load_ensemble(const std::string& path);

}  // namespace cartelscreen
