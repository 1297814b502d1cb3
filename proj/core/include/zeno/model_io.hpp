#pragma once

#include <string>

#include "zeno/models.hpp"

namespace zeno {

/// Model file does not match the documented schema; message carries the line.
struct ParseError : Error {
  using Error::Error;
};

/// Plain-text model file, schema (one section per line group, '#' comments):
///
///   zenotarget-model v1
///   dims <d0> <d1>
///   factors <f0> <f1> ...        (optional, default: d0 d1)
///   h0_factors <i0> <i1> ...     (optional, default: 0)
///   gamma <g>
///   H                            (d^2 entries, row-major, "re im" per entry,
///   <re> <im> ... one matrix row per line)
///   L <count>                    (then <count> matrices like H)
///   psi_zeno                     (d0 entries on one line)
///   psi_target                   (d1 entries on one line)
///
/// Validation: H Hermitian to 1e-10 (rejected otherwise), states normalized
/// within 1e-6 (then renormalized exactly).
ModelBundle read_model_file(const std::string& path);

void write_model_file(const std::string& path, const ModelBundle& bundle);

}  // namespace zeno
