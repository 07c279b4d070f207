#pragma once

#include <map>
#include <string>
#include <vector>

#include "tensorinv/sym_tensor.hpp"

namespace tensorinv {

/// One factor of a contraction expression: a symbol plus its index labels.
/// A label is a single letter a-z (free if it occurs once in the whole
/// expression, summed if twice) or a digit 1-9 pinning that slot to a fixed
/// 1-based index. Builtins: "d" (Kronecker delta, 2 labels) and "e"
/// (Levi-Civita, 3 labels, dimension 3 only).
struct Factor {
  std::string symbol;
  std::string labels;
};

struct ContractionExpr {
  std::vector<Factor> factors;

  /// Sorted letters occurring exactly once; these are the output slots.
  std::string free_labels() const;
  /// Sorted letters occurring exactly twice.
  std::string bound_labels() const;
};

/// Parse whitespace-separated factors of the form Name_labels,
/// e.g. "A_ipq A_jpq". Rejects empty input, malformed tokens, labels used
/// three or more times, more than 12 distinct labels, and builtin symbols
/// with the wrong arity.
ContractionExpr parse_expr(const std::string& text);

/// Canonical printing; parse_expr(to_string(e)) reproduces e.
std::string to_string(const ContractionExpr& expr);

/// Named intermediate, e.g. "B_ij = A_ipq A_jpq". The declared indices must
/// be a permutation of the expression's free labels.
struct LetBinding {
  std::string name;
  std::string indices;
  ContractionExpr expr;
};

struct EvalContext {
  int dim = 1;
  std::map<std::string, SymTensor> tensors;
};

/// Raw evaluation result before symmetrization: data is a dense row-major
/// array over the sorted free labels (empty labels means a scalar in
/// data[0]).
struct DenseResult {
  std::string labels;
  int dim = 1;
  std::vector<double> data;

  double scalar() const;
};

/// Explicit nested summation over all bound labels, looped in alphabetical
/// order with the last label innermost. No contraction-order optimization;
/// the iteration order is part of the contract so results are
/// bit-reproducible.
DenseResult evaluate_dense(const ContractionExpr& expr, const EvalContext& ctx);

/// Evaluate the lets once, in order, extending the context. Each bound
/// intermediate is stored as a symmetrized SymTensor.
EvalContext bind_lets(const EvalContext& ctx, const std::vector<LetBinding>& lets);

struct EvalResult {
  bool is_scalar = true;
  double scalar = 0.0;
  SymTensor tensor;
};

EvalResult evaluate(const ContractionExpr& expr, const EvalContext& ctx);
EvalResult evaluate(const ContractionExpr& expr, const EvalContext& ctx,
                    const std::vector<LetBinding>& lets);

/// Total number of occurrences of `symbol` after inlining lets (each
/// occurrence counts 1).
int polynomial_degree(const ContractionExpr& expr, const std::vector<LetBinding>& lets,
                      const std::string& symbol);

bool is_builtin_symbol(const std::string& s);

}  // namespace tensorinv
