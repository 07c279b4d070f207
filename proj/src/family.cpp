#include "tensorinv/family.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tensorinv {

std::vector<int> InvariantFamily::degrees() const {
  std::vector<int> out;
  out.reserve(members.size());
  for (const FamilyMember& m : members) out.push_back(m.declared_degree);
  return out;
}

std::vector<std::string> InvariantFamily::member_names() const {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (const FamilyMember& m : members) out.push_back(m.name);
  return out;
}

namespace {

// The input symbol is the unique symbol that is neither a let name nor a
// builtin, across lets and members.
std::string infer_input_symbol(const std::vector<LetBinding>& lets,
                               const std::vector<FamilyMember>& members) {
  std::set<std::string> let_names;
  for (const LetBinding& l : lets) let_names.insert(l.name);
  std::set<std::string> inputs;
  auto scan = [&](const ContractionExpr& e) {
    for (const Factor& f : e.factors)
      if (!is_builtin_symbol(f.symbol) && !let_names.count(f.symbol)) inputs.insert(f.symbol);
  };
  for (const LetBinding& l : lets) scan(l.expr);
  for (const FamilyMember& m : members) scan(m.expr);
  if (inputs.size() != 1)
    throw std::invalid_argument("family must reference exactly one input tensor symbol, found " +
                                std::to_string(inputs.size()));
  return *inputs.begin();
}

}  // namespace

void InvariantFamily::validate() const {
  space.validate();
  group.validate();
  if (members.empty()) throw std::invalid_argument("family has no members");
  if (space.dim != group.dim)
    throw std::invalid_argument("family space and group dimensions differ");
  const std::string inferred = infer_input_symbol(lets, members);
  if (inferred != input_symbol)
    throw std::invalid_argument("family input symbol mismatch: uses '" + inferred +
                                "', declared '" + input_symbol + "'");
  std::set<std::string> seen;
  for (const LetBinding& l : lets)
    if (!seen.insert(l.name).second)
      throw std::invalid_argument("duplicate let name '" + l.name + "'");
  for (const FamilyMember& m : members) {
    if (!m.expr.free_labels().empty())
      throw std::invalid_argument("member '" + m.name + "' is not a scalar expression (free labels '" +
                                  m.expr.free_labels() + "')");
    const int deg = polynomial_degree(m.expr, lets, input_symbol);
    if (deg != m.declared_degree)
      throw std::invalid_argument("member '" + m.name + "' declares degree " +
                                  std::to_string(m.declared_degree) + " but has degree " +
                                  std::to_string(deg));
  }
}

namespace {

InvariantFamily make_st33(const std::string& name, const char* fourth_name, int fourth_degree,
                          const char* fourth_expr, bool with_e_let, bool with_w_let) {
  InvariantFamily f;
  f.name = name;
  f.space = {SpaceKind::St, 3, 3};
  f.group = {GroupKind::O, 3};
  f.input_symbol = "A";
  f.lets.push_back({"B", "ij", parse_expr("A_ipq A_jpq")});
  if (with_e_let) f.lets.push_back({"E", "ij", parse_expr("A_ipq A_jrs A_kpr A_kqs")});
  if (with_w_let) f.lets.push_back({"w", "i", parse_expr("A_ipq B_pq")});
  f.members.push_back({"J2", 2, parse_expr("A_ijk A_ijk")});
  f.members.push_back({"J4", 4, parse_expr("B_ij B_ij")});
  f.members.push_back({"J6", 6, parse_expr("B_ij B_jk B_ki")});
  f.members.push_back({fourth_name, fourth_degree, parse_expr(fourth_expr)});
  f.validate();
  return f;
}

}  // namespace

InvariantFamily builtin_family(const std::string& id) {
  if (id == "ST33_DEFAULT")
    return make_st33("ST33_DEFAULT", "J8", 8, "E_ij E_ij", true, false);
  if (id == "S23_CLASSICAL") {
    InvariantFamily f;
    f.name = "S23_CLASSICAL";
    f.space = {SpaceKind::S, 2, 3};
    f.group = {GroupKind::O, 3};
    f.input_symbol = "T";
    f.members.push_back({"I1", 1, parse_expr("T_ii")});
    f.members.push_back({"I2", 2, parse_expr("T_ij T_ij")});
    f.members.push_back({"I3", 3, parse_expr("T_ij T_jk T_ki")});
    f.validate();
    return f;
  }
  throw std::invalid_argument("unknown builtin family id '" + id + "'");
}

bool is_builtin_family_id(const std::string& id) {
  return id == "ST33_DEFAULT" || id == "S23_CLASSICAL";
}

std::vector<InvariantFamily> family_candidates(const InvariantFamily& f) {
  if (f.name == "ST33_DEFAULT") {
    return {
        f,
        make_st33("ST33_DEFAULT/J8B", "J8B", 8, "E_ij B_jk B_ki", true, false),
        make_st33("ST33_DEFAULT/J10", "J10", 10, "w_i B_ij B_jk w_k", false, true),
    };
  }
  return {f};
}

namespace {

[[noreturn]] void fail_at(int line, int col, const std::string& msg) {
  throw std::invalid_argument("family parse error at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + msg);
}

}  // namespace

InvariantFamily parse_family(const std::string& text, const std::string& name_hint) {
  InvariantFamily f;
  f.name = name_hint;
  bool have_space = false, have_group = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    const int col = static_cast<int>(line.find(head)) + 1;

    if (head == "space") {
      std::string kind;
      int m = 0, n = 0;
      if (!(ls >> kind >> m >> n)) fail_at(lineno, col, "expected 'space <T|S|St> <order> <dim>'");
      try {
        f.space = {space_kind_from_string(kind), m, n};
        f.space.validate();
      } catch (const std::exception& e) {
        fail_at(lineno, col, e.what());
      }
      have_space = true;
    } else if (head == "group") {
      std::string kind;
      int n = 0;
      if (!(ls >> kind >> n)) fail_at(lineno, col, "expected 'group <O|SO> <dim>'");
      try {
        f.group = {group_kind_from_string(kind), n};
        f.group.validate();
      } catch (const std::exception& e) {
        fail_at(lineno, col, e.what());
      }
      have_group = true;
    } else if (head == "let") {
      std::string target, eq;
      if (!(ls >> target >> eq) || eq != "=")
        fail_at(lineno, col, "expected 'let Name_indices = expression'");
      const auto us = target.find('_');
      if (us == std::string::npos || us == 0 || us + 1 == target.size())
        fail_at(lineno, col, "let target must look like Name_indices");
      std::string rest;
      std::getline(ls, rest);
      try {
        f.lets.push_back({target.substr(0, us), target.substr(us + 1), parse_expr(rest)});
      } catch (const std::exception& e) {
        fail_at(lineno, col, e.what());
      }
    } else if (head == "inv") {
      std::string name, eq;
      int degree = 0;
      if (!(ls >> name >> degree >> eq) || eq != "=")
        fail_at(lineno, col, "expected 'inv Name degree = expression'");
      std::string rest;
      std::getline(ls, rest);
      try {
        f.members.push_back({name, degree, parse_expr(rest)});
      } catch (const std::exception& e) {
        fail_at(lineno, col, e.what());
      }
    } else {
      fail_at(lineno, col, "unknown directive '" + head + "'");
    }
  }
  if (!have_space) throw std::invalid_argument("family parse error: missing 'space' line");
  if (!have_group) throw std::invalid_argument("family parse error: missing 'group' line");
  if (f.members.empty()) throw std::invalid_argument("family parse error: no 'inv' members");
  f.input_symbol = infer_input_symbol(f.lets, f.members);
  f.validate();
  return f;
}

InvariantFamily load_family(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open family file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_family(ss.str(), path.stem().string());
}

std::string family_to_text(const InvariantFamily& f) {
  std::ostringstream out;
  out << "space " << to_string(f.space.kind) << ' ' << f.space.order << ' ' << f.space.dim << '\n';
  out << "group " << to_string(f.group.kind) << ' ' << f.group.dim << '\n';
  for (const LetBinding& l : f.lets)
    out << "let " << l.name << '_' << l.indices << " = " << to_string(l.expr) << '\n';
  for (const FamilyMember& m : f.members)
    out << "inv " << m.name << ' ' << m.declared_degree << " = " << to_string(m.expr) << '\n';
  return out.str();
}

void save_family(const InvariantFamily& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write family file '" + path.string() + "'");
  out << family_to_text(f);
}

Eigen::VectorXd eval_family(const InvariantFamily& f, const SymTensor& a, bool check_membership,
                            bool cache_lets) {
  if (a.order() != f.space.order || a.dim() != f.space.dim)
    throw std::invalid_argument("eval_family: tensor shape does not match family space");
  if (check_membership) {
    const double tol = 1e-9 * std::max(1.0, frobenius_norm(a));
    if (!in_space(a, f.space, tol))
      throw std::invalid_argument("eval_family: tensor is not in the family's space (tolerance " +
                                  std::to_string(tol) + ")");
  }
  EvalContext ctx;
  ctx.dim = f.space.dim;
  ctx.tensors[f.input_symbol] = a;
  Eigen::VectorXd out(f.size());
  if (cache_lets) {
    const EvalContext bound = bind_lets(ctx, f.lets);
    for (int i = 0; i < f.size(); ++i) out[i] = evaluate(f.members[i].expr, bound).scalar;
  } else {
    for (int i = 0; i < f.size(); ++i)
      out[i] = evaluate(f.members[i].expr, bind_lets(ctx, f.lets)).scalar;
  }
  return out;
}

Eigen::VectorXd scale_behavior(const InvariantFamily& f, const SymTensor& a, double lambda) {
  if (lambda == 0.0) throw std::invalid_argument("scale_behavior: lambda must be nonzero");
  return eval_family(f, a * lambda);
}

Eigen::MatrixXd jacobian_fd(const InvariantFamily& f, const SymTensor& a,
                            const SubspaceBasis& basis, double h) {
  if (h <= 0.0) h = 1e-6 * std::max(1.0, frobenius_norm(a));
  Eigen::MatrixXd jac(f.size(), basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    const Eigen::VectorXd fp = eval_family(f, a + h * basis.elements[j], false);
    const Eigen::VectorXd fm = eval_family(f, a - h * basis.elements[j], false);
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

InvarianceReport check_invariance(const InvariantFamily& f, const SymTensor& a, int num_samples,
                                  double tol, Rng& rng) {
  if (num_samples < 1) throw std::invalid_argument("check_invariance: num_samples must be >= 1");
  InvarianceReport rep;
  rep.samples = num_samples;
  rep.tol = tol;
  const Eigen::VectorXd base = eval_family(f, a);
  for (int s = 0; s < num_samples; ++s) {
    const OrthogonalMatrix g = haar_sample(f.group, rng);
    const Eigen::VectorXd moved = eval_family(f, act(g, a), false);
    double dev = 0.0;
    for (int i = 0; i < base.size(); ++i)
      dev = std::max(dev, std::abs(moved[i] - base[i]) / std::max(1.0, std::abs(base[i])));
    if (dev >= rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_g = g.matrix();
    }
  }
  rep.passed = rep.max_deviation <= tol;
  return rep;
}

}  // namespace tensorinv
