#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smse/dataset.hpp"

namespace smse {

/// Published fixture datasets: uk, uk5, netherlands, netherlands5,
/// new_orleans, new_orleans5, western, artificial3. Throws DataError for an
/// unknown name.
CaptureDataset builtin_dataset(std::string_view name);

std::vector<std::string> builtin_dataset_names();

}  // namespace smse
