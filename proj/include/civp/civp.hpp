#pragma once

// Umbrella header for the civp tiled-multiplication model.

#include "civp/error.hpp"      // IWYU pragma: export
#include "civp/fpmul.hpp"      // IWYU pragma: export
#include "civp/partition.hpp"  // IWYU pragma: export
#include "civp/report.hpp"     // IWYU pragma: export
#include "civp/tiles.hpp"      // IWYU pragma: export
#include "civp/wideint.hpp"    // IWYU pragma: export
