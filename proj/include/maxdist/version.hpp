#pragma once

namespace maxdist {

inline constexpr const char* kVersion = "1.0.0";

// Identifier of the counter-based generator scheme; recorded in output
// provenance so results can be tied to the stream derivation in use.
inline constexpr const char* kRngId = "philox4x32-10";

}  // namespace maxdist
