#pragma once

namespace dbel::limits {

// World enumeration (formula evaluation, joint distributions): 2^20 worlds.
inline constexpr int kMaxEnumerationVars = 20;

// Dense world-to-world transition matrices: 2^12 x 2^12 entries.
inline constexpr int kMaxMatrixVars = 12;

// Unrolled networks: total variable count across all slices.
inline constexpr int kMaxUnrolledVars = 24;

} // namespace dbel::limits
