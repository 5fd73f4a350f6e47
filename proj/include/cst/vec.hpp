#pragma once

#include <vector>

namespace cst {

using Vec = std::vector<double>;

}  // namespace cst
