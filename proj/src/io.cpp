#include "tensorinv/io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tensorinv {

nlohmann::json tensor_to_json(const SymTensor& t) {
  nlohmann::json entries = nlohmann::json::array();
  const auto& classes = t.table().classes();
  for (int k = 0; k < t.num_classes(); ++k) {
    if (t.class_value(k) == 0.0) continue;
    nlohmann::json idx = nlohmann::json::array();
    for (int i : classes[k]) idx.push_back(i + 1);  // 1-based on disk
    entries.push_back(nlohmann::json::array({idx, t.class_value(k)}));
  }
  return nlohmann::json{{"order", t.order()}, {"dim", t.dim()}, {"entries", entries}};
}

SymTensor tensor_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("order") || !j.contains("dim") || !j.contains("entries"))
    throw std::runtime_error("tensor file: expected object with order, dim, entries");
  const int order = j.at("order").get<int>();
  const int dim = j.at("dim").get<int>();
  if (order < 0) throw std::runtime_error("tensor file: order must be >= 0");
  if (dim < 1) throw std::runtime_error("tensor file: dim must be >= 1");
  SymTensor t(order, dim);
  std::set<int> seen;
  for (const auto& entry : j.at("entries")) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::runtime_error("tensor file: each entry must be [[indices], value]");
    const auto& idx_json = entry[0];
    if (!idx_json.is_array() || static_cast<int>(idx_json.size()) != order)
      throw std::runtime_error("tensor file: index tuple length must equal the order");
    MultiIndex idx;
    for (const auto& v : idx_json) {
      const int i = v.get<int>();
      if (i < 1 || i > dim)
        throw std::runtime_error("tensor file: index " + std::to_string(i) +
                                 " out of range 1.." + std::to_string(dim));
      idx.push_back(i - 1);
    }
    const int k = order == 0 ? 0 : t.table().class_of(idx);
    if (!seen.insert(k).second)
      throw std::runtime_error("tensor file: duplicate canonical index (two entries name the same "
                               "symmetry class)");
    t.set_class(k, entry[1].get<double>());
  }
  return t;
}

SymTensor parse_tensor(const std::string& text) {
  return tensor_from_json(nlohmann::json::parse(text));
}

SymTensor read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tensor file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("tensor file '" + path.string() + "': " + e.what());
  }
  return tensor_from_json(j);
}

void write_tensor_file(const SymTensor& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write tensor file '" + path.string() + "'");
  out << tensor_to_json(t).dump(2) << '\n';
}

nlohmann::json spec_to_json(const TensorSpaceSpec& s) {
  return nlohmann::json{{"kind", to_string(s.kind)}, {"order", s.order}, {"dim", s.dim}};
}

nlohmann::json spec_to_json(const GroupSpec& g) {
  return nlohmann::json{{"kind", to_string(g.kind)}, {"dim", g.dim}};
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tensorinv
