#pragma once

#include <filesystem>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "tensorinv/group.hpp"
#include "tensorinv/spaces.hpp"
#include "tensorinv/sym_tensor.hpp"

namespace tensorinv {

inline constexpr std::string_view kToolName = "tensorinv";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Tensor text format (JSON-shaped), 1-based indices:
///   {"order": m, "dim": n, "entries": [[[i1,...,im], value], ...]}
/// Unlisted symmetry classes are zero. Readers reject duplicate canonical
/// indices and out-of-range indices; entries may list any permutation of a
/// class's indices.
nlohmann::json tensor_to_json(const SymTensor& t);
SymTensor tensor_from_json(const nlohmann::json& j);

SymTensor read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const SymTensor& t, const std::filesystem::path& path);
SymTensor parse_tensor(const std::string& text);

nlohmann::json spec_to_json(const TensorSpaceSpec& s);
nlohmann::json spec_to_json(const GroupSpec& g);
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);  // row-major nested arrays

}  // namespace tensorinv
