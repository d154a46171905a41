#pragma once

namespace ab {

inline constexpr const char* kVersionString =
    "ab-forces 1.0.0 (specfun/1 ideal/1 finite/1 force/1 analysis/1 cli/1)";

} // namespace ab
