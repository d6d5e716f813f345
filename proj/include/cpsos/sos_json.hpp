#pragma once

#include "cpsos/poly_json.hpp"
#include "cpsos/sos.hpp"

namespace cpsos {

/// Blocks, rows (monomial + rhs) and sparse triplets [row, block, i, j, value];
/// the output is a pure function of the program, so equal programs serialize
/// to equal bytes.
Json program_to_json(const SosProgram& program);

/// Gram matrices as dense row-major "%.17g" strings, so the doubles round-trip.
Json certificate_to_json(const Certificate& cert, std::size_t n);
Certificate certificate_from_json(const Json& j, std::size_t* n = nullptr);

std::string_view to_string(BlockKind kind);

}  // namespace cpsos
