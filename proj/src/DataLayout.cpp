#include "wamic/DataLayout.hpp"

namespace wamic {

static int64_t alignUp(int64_t v, int64_t a) { return (v + a - 1) / a * a; }

std::optional<DataLayout> computeDataLayout(const IrModule &module,
                                            int64_t heapReserve,
                                            DiagList &diags) {
  DataLayout layout;
  int64_t cursor = DataLayout::kBaseOffset;
  bool anyFixed = false;

  for (const auto &op : module.ops) {
    bool isGlobal = op->is("memref", "global");
    bool isData = op->is("ssawasm", "data") || op->is("wasm", "data");
    if (!isGlobal && !isData)
      continue;

    DataSegment seg;
    seg.symbol = op->symbolAttrOr("sym", "");
    const AttrValue *type = op->attr("type");
    if (type && type->kind == AttrKind::Type)
      seg.type = type->type;
    const AttrValue *init = op->attr("init");
    if (init && init->kind == AttrKind::Bytes)
      seg.bytes = init->bytes;

    int64_t size = seg.type.kind == TypeKind::MemRef
                       ? seg.type.byteSize()
                       : static_cast<int64_t>(seg.bytes.size());
    if (seg.bytes.empty() && size > 0)
      seg.bytes.assign(static_cast<size_t>(size), 0);

    if (isData) {
      // Placement was already assigned by an earlier lowering.
      seg.offset = op->intAttrOr("offset", cursor);
      anyFixed = true;
    } else {
      int64_t align = scalarWidth(seg.type.elem);
      seg.offset = alignUp(cursor, align);
    }
    cursor = seg.offset + size;
    layout.segments.push_back(std::move(seg));
  }

  layout.heapBase = alignUp(cursor, 16);
  int64_t end = layout.heapBase + heapReserve;
  if (end > (int64_t(1) << 32)) {
    diags.push_back(
        diag("SegmentOverflow", "data layout exceeds 32-bit address space"));
    return std::nullopt;
  }
  layout.pageCount = (end + DataLayout::kPageSize - 1) / DataLayout::kPageSize;

  // A memory op pinned by an earlier pass wins over the recomputation.
  if (anyFixed) {
    for (const auto &op : module.ops) {
      if (op->is("ssawasm", "memory") || op->is("wasm", "memory")) {
        layout.pageCount = op->intAttrOr("pages", layout.pageCount);
        layout.heapBase = op->intAttrOr("heap_base", layout.heapBase);
      }
    }
  }
  return layout;
}

} // namespace wamic
