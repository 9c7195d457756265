#pragma once

namespace scanplan::detail {

extern const int kMcEdgeTable[256];
extern const int kMcTriTable[256][16];

} // namespace scanplan::detail
