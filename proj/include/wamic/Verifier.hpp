#pragma once

#include "wamic/IR.hpp"

namespace wamic {

/// Structural + type verification. Returns every finding; an empty list means
/// the module is clean. Never mutates and never aborts midway, so running it
/// twice yields identical diagnostics.
DiagList verifyModule(const IrModule &module);

} // namespace wamic
