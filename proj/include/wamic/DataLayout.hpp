#pragma once

#include "wamic/IR.hpp"

#include <optional>

namespace wamic {

struct DataSegment {
  std::string symbol;
  TypeDesc type; // memref type
  int64_t offset = 0;
  std::vector<uint8_t> bytes;
};

/// Static placement of module data in linear memory. Segments start at 1024,
/// each aligned to its element width; the heap begins past the last segment,
/// rounded up to 16 bytes.
struct DataLayout {
  static constexpr int64_t kBaseOffset = 1024;
  static constexpr int64_t kPageSize = 65536;
  static constexpr int64_t kDefaultHeapReserve = 1 << 20;

  std::vector<DataSegment> segments;
  int64_t heapBase = kBaseOffset;
  int64_t pageCount = 17;

  int64_t memoryBytes() const { return pageCount * kPageSize; }
};

/// Lays out the module's `memref.global` declarations in order. Modules that
/// already carry assigned segments (`ssawasm.data` / `wasm.data`, plus a
/// memory op) reproduce the stored placement instead. Returns nullopt and a
/// SegmentOverflow diagnostic when the layout exceeds 32-bit space.
std::optional<DataLayout> computeDataLayout(const IrModule &module,
                                            int64_t heapReserve, DiagList &diags);

} // namespace wamic
