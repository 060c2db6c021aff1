#pragma once

#include <string>

#include "resgas/esn_reservoir.hpp"
#include "resgas/rng_reservoir.hpp"

namespace resgas {

// Reservoir snapshots: little-endian binary, magic + version + variant id +
// dims + params + state + row-major matrices (+ mask for RNG variants),
// closed by a CRC32 of everything before it. Round-trips are bit-exact.

enum class SnapshotKind { Esn, Rng };

void save_snapshot(const std::string& path, const EsnReservoir& reservoir);
void save_snapshot(const std::string& path, const RngReservoir& reservoir);

// Kind stored in the header treats a snapshot as ESN (variant id 0) or RNG.
SnapshotKind snapshot_kind(const std::string& path);

EsnReservoir load_esn_snapshot(const std::string& path);
RngReservoir load_rng_snapshot(const std::string& path);

// IEEE CRC32 (reflected), exposed for the dataset cache format.
std::uint32_t crc32(const void* data, std::size_t len);

}  // namespace resgas
