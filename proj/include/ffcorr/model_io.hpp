#pragma once

#include <iosfwd>
#include <string>

#include "ffcorr/model.hpp"

namespace ffcorr {

// Model file format (JSON):
//   {"n": int, "local_dim": int, "range": int, "positions": [int...],
//    "terms": [{"sites": [int...], "matrix": [[re, im]...] row-major,
//               "projector": bool (optional)}]}
// Matrix entries are [re, im] pairs in row-major order.
HamiltonianSpec load_spec(std::istream& in);
HamiltonianSpec load_spec_file(const std::string& path);
std::string spec_to_json(const HamiltonianSpec& spec);
void save_spec_file(const HamiltonianSpec& spec, const std::string& path);

}  // namespace ffcorr
