#pragma once

// Command-line driver shared by the plfan executable and the golden tests.
//
//   plfan phi    --gens "1,0;0,1;1,1" --alpha 1,1,1 --v 1,1
//   plfan fan    --gens "1,0;0,1;1,1" [--linearity | --normal-fan-alpha A] [--smooth] [--check]
//   plfan verify SYSTEM.json|- [--p-bound N] [--d-cap N] [--L N] [--no-smooth] [--no-refine]
//
// Exit codes: 0 ok / verified, 1 domain failure / falsified, 2 usage, input or budget error.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "plfan/graded.hpp"

namespace plfan::cli {

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Parses the system file schema
/// { "ambient_dim": n, "grading_rank": s,
///   "generators": [ { "degree": [..s ints..], "ideal": [[..n ints..], ...] }, ... ],
///   "caps": { "d_cap": .., "p_bound": .., "L": .., "seed": .. } }   (caps optional)
/// Throws InvalidInput on schema violations.
struct SystemFile {
  GradedSystem system;
  VerifyOptions caps;
};
SystemFile parse_system(const nlohmann::json& j);

/// "1,0;0,1" -> {(1,0),(0,1)}; entries may be "p/q".
std::vector<QVector> parse_vector_list(const std::string& text);
QVector parse_vector(const std::string& text);

/// FNV-1a 64-bit digest, hex.
std::string digest(const std::string& bytes);

}  // namespace plfan::cli
