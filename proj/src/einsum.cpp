#include "tensorinv/einsum.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tensorinv {

bool is_builtin_symbol(const std::string& s) { return s == "d" || s == "e"; }

namespace {

std::map<char, int> letter_counts(const ContractionExpr& expr) {
  std::map<char, int> counts;
  for (const Factor& f : expr.factors)
    for (char c : f.labels)
      if (c >= 'a' && c <= 'z') ++counts[c];
  return counts;
}

}  // namespace

std::string ContractionExpr::free_labels() const {
  std::string out;
  for (auto [c, k] : letter_counts(*this))
    if (k == 1) out.push_back(c);
  return out;
}

std::string ContractionExpr::bound_labels() const {
  std::string out;
  for (auto [c, k] : letter_counts(*this))
    if (k == 2) out.push_back(c);
  return out;
}

ContractionExpr parse_expr(const std::string& text) {
  ContractionExpr expr;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto us = tok.find('_');
    if (us == std::string::npos || us == 0 || us + 1 == tok.size())
      throw std::invalid_argument("malformed factor '" + tok + "' (expected Name_labels)");
    const std::string name = tok.substr(0, us);
    const std::string labels = tok.substr(us + 1);
    if (!std::isalpha(static_cast<unsigned char>(name[0])))
      throw std::invalid_argument("malformed factor '" + tok + "': symbol must start with a letter");
    for (char c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)))
        throw std::invalid_argument("malformed factor '" + tok + "': bad symbol character");
    for (char c : labels)
      if (!((c >= 'a' && c <= 'z') || (c >= '1' && c <= '9')))
        throw std::invalid_argument("malformed factor '" + tok +
                                    "': labels must be letters a-z or digits 1-9");
    expr.factors.push_back({name, labels});
  }
  if (expr.factors.empty()) throw std::invalid_argument("empty contraction expression");

  std::map<char, int> counts = letter_counts(expr);
  if (counts.size() > 12)
    throw std::invalid_argument("more than 12 distinct labels in one expression");
  for (auto [c, k] : counts)
    if (k > 2)
      throw std::invalid_argument(std::string("label '") + c + "' used " + std::to_string(k) +
                                  " times (each label may appear once or twice)");
  for (const Factor& f : expr.factors) {
    if (f.symbol == "d" && f.labels.size() != 2)
      throw std::invalid_argument("builtin 'd' takes exactly 2 labels");
    if (f.symbol == "e" && f.labels.size() != 3)
      throw std::invalid_argument("builtin 'e' takes exactly 3 labels");
  }
  return expr;
}

std::string to_string(const ContractionExpr& expr) {
  std::string out;
  for (std::size_t i = 0; i < expr.factors.size(); ++i) {
    if (i) out.push_back(' ');
    out += expr.factors[i].symbol;
    out.push_back('_');
    out += expr.factors[i].labels;
  }
  return out;
}

double DenseResult::scalar() const {
  if (!labels.empty()) throw std::logic_error("DenseResult::scalar on a non-scalar result");
  return data[0];
}

namespace {

int levi_civita3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  // parity of the 3-cycle structure
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

enum class FactorKind { Tensor, Delta, Epsilon };

struct BoundFactor {
  FactorKind kind;
  const SymTensor* tensor = nullptr;
  // Per slot: letter id >= 0 into the assignment vector, or -(fixed_index+1).
  std::vector<int> slots;
};

}  // namespace

DenseResult evaluate_dense(const ContractionExpr& expr, const EvalContext& ctx) {
  const int n = ctx.dim;
  if (n < 1) throw std::invalid_argument("evaluate: context dimension must be >= 1");

  const std::string free = expr.free_labels();
  const std::string bound = expr.bound_labels();
  std::map<char, int> letter_id;
  for (char c : free) letter_id[c] = static_cast<int>(letter_id.size());
  for (char c : bound) letter_id[c] = static_cast<int>(letter_id.size());

  std::vector<BoundFactor> bfs;
  bfs.reserve(expr.factors.size());
  for (const Factor& f : expr.factors) {
    BoundFactor bf;
    if (f.symbol == "d") {
      bf.kind = FactorKind::Delta;
    } else if (f.symbol == "e") {
      bf.kind = FactorKind::Epsilon;
      if (n != 3) throw std::invalid_argument("builtin 'e' is defined only for dimension 3");
    } else {
      bf.kind = FactorKind::Tensor;
      auto it = ctx.tensors.find(f.symbol);
      if (it == ctx.tensors.end())
        throw std::invalid_argument("unresolved symbol '" + f.symbol + "'");
      bf.tensor = &it->second;
      if (bf.tensor->dim() != n)
        throw std::invalid_argument("tensor '" + f.symbol + "' has dimension " +
                                    std::to_string(bf.tensor->dim()) + ", context expects " +
                                    std::to_string(n));
      if (bf.tensor->order() != static_cast<int>(f.labels.size()))
        throw std::invalid_argument("tensor '" + f.symbol + "' has order " +
                                    std::to_string(bf.tensor->order()) + " but is used with " +
                                    std::to_string(f.labels.size()) + " labels");
    }
    for (char c : f.labels) {
      if (c >= '1' && c <= '9') {
        const int fixed = c - '1';  // 0-based pinned index
        if (fixed >= n)
          throw std::invalid_argument(std::string("pinned index '") + c +
                                      "' out of range for dimension " + std::to_string(n));
        bf.slots.push_back(-(fixed + 1));
      } else {
        bf.slots.push_back(letter_id.at(c));
      }
    }
    bfs.push_back(std::move(bf));
  }

  const int num_free = static_cast<int>(free.size());
  const int num_bound = static_cast<int>(bound.size());
  const int num_letters = num_free + num_bound;

  DenseResult out;
  out.labels = free;
  out.dim = n;
  std::int64_t out_size = 1;
  for (int i = 0; i < num_free; ++i) out_size *= n;
  out.data.assign(static_cast<std::size_t>(out_size), 0.0);

  std::vector<int> assign(std::max(num_letters, 1), 0);
  std::vector<int> idxbuf(16, 0);

  auto factor_value = [&](const BoundFactor& bf) -> double {
    const int arity = static_cast<int>(bf.slots.size());
    for (int s = 0; s < arity; ++s) {
      const int code = bf.slots[s];
      idxbuf[s] = code >= 0 ? assign[code] : -code - 1;
    }
    switch (bf.kind) {
      case FactorKind::Delta:
        return idxbuf[0] == idxbuf[1] ? 1.0 : 0.0;
      case FactorKind::Epsilon:
        return static_cast<double>(levi_civita3(idxbuf[0], idxbuf[1], idxbuf[2]));
      case FactorKind::Tensor:
        return bf.tensor->value(std::span<const int>(idxbuf.data(), arity));
    }
    return 0.0;
  };

  // Free labels enumerate output entries; for each, the bound labels are
  // summed with the alphabetically first label outermost and the last
  // innermost (plain odometer order on the bound block).
  std::int64_t flat = 0;
  while (true) {
    double acc = 0.0;
    for (int i = num_free; i < num_letters; ++i) assign[i] = 0;
    while (true) {
      double prod = 1.0;
      for (const BoundFactor& bf : bfs) prod *= factor_value(bf);
      acc += prod;
      int s = num_letters - 1;
      for (; s >= num_free; --s) {
        if (++assign[s] < n) break;
        assign[s] = 0;
      }
      if (s < num_free) break;
    }
    out.data[flat++] = acc;
    int s = num_free - 1;
    for (; s >= 0; --s) {
      if (++assign[s] < n) break;
      assign[s] = 0;
    }
    if (s < 0) break;
  }
  return out;
}

EvalContext bind_lets(const EvalContext& ctx, const std::vector<LetBinding>& lets) {
  EvalContext out = ctx;
  for (const LetBinding& let : lets) {
    if (is_builtin_symbol(let.name))
      throw std::invalid_argument("let name '" + let.name + "' collides with a builtin symbol");
    if (out.tensors.count(let.name))
      throw std::invalid_argument("let name '" + let.name + "' collides with an existing symbol");
    DenseResult dr = evaluate_dense(let.expr, out);
    std::string declared = let.indices;
    std::string sorted_decl = declared;
    std::sort(sorted_decl.begin(), sorted_decl.end());
    if (sorted_decl != dr.labels)
      throw std::invalid_argument("let '" + let.name + "': declared indices '" + declared +
                                  "' do not match the expression's free labels '" + dr.labels + "'");
    std::set<char> uniq(declared.begin(), declared.end());
    if (uniq.size() != declared.size())
      throw std::invalid_argument("let '" + let.name + "': repeated declared index");
    // The intermediate is stored symmetrized, so the slot order of the
    // declared indices cannot change any downstream value.
    out.tensors[let.name] =
        tensorinv::symmetrize(static_cast<int>(dr.labels.size()), dr.dim, dr.data);
  }
  return out;
}

EvalResult evaluate(const ContractionExpr& expr, const EvalContext& ctx) {
  DenseResult dr = evaluate_dense(expr, ctx);
  EvalResult res;
  if (dr.labels.empty()) {
    res.is_scalar = true;
    res.scalar = dr.data[0];
  } else {
    res.is_scalar = false;
    res.tensor = symmetrize(static_cast<int>(dr.labels.size()), dr.dim, dr.data);
  }
  return res;
}

EvalResult evaluate(const ContractionExpr& expr, const EvalContext& ctx,
                    const std::vector<LetBinding>& lets) {
  return evaluate(expr, bind_lets(ctx, lets));
}

int polynomial_degree(const ContractionExpr& expr, const std::vector<LetBinding>& lets,
                      const std::string& symbol) {
  std::map<std::string, int> let_degree;
  for (const LetBinding& let : lets) {
    int deg = 0;
    for (const Factor& f : let.expr.factors) {
      if (f.symbol == symbol)
        deg += 1;
      else if (auto it = let_degree.find(f.symbol); it != let_degree.end())
        deg += it->second;
    }
    let_degree[let.name] = deg;
  }
  int deg = 0;
  for (const Factor& f : expr.factors) {
    if (f.symbol == symbol)
      deg += 1;
    else if (auto it = let_degree.find(f.symbol); it != let_degree.end())
      deg += it->second;
  }
  return deg;
}

}  // namespace tensorinv
