#pragma once

#include "cmx/cli/bench.hpp"

namespace cmx::tools {

// Probe backed by the replacement global operator new in alloc_tracker.cpp.
cli::AllocProbe allocation_probe();

}  // namespace cmx::tools
