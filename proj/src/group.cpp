#include "tensorinv/group.hpp"

#include <cmath>
#include <stdexcept>

namespace tensorinv {

std::string to_string(GroupKind k) { return k == GroupKind::O ? "O" : "SO"; }

GroupKind group_kind_from_string(const std::string& s) {
  if (s == "O") return GroupKind::O;
  if (s == "SO") return GroupKind::SO;
  throw std::invalid_argument("unknown group kind '" + s + "' (expected O or SO)");
}

void GroupSpec::validate() const {
  if (dim < 2) throw std::invalid_argument("group dimension must be >= 2");
}

int group_dim(const GroupSpec& spec) {
  spec.validate();
  return spec.dim * (spec.dim - 1) / 2;
}

OrthogonalMatrix::OrthogonalMatrix(Eigen::MatrixXd m, GroupSpec parent)
    : m_(std::move(m)), parent_(parent) {
  parent_.validate();
  const int n = parent_.dim;
  if (m_.rows() != n || m_.cols() != n)
    throw std::invalid_argument("OrthogonalMatrix: matrix size does not match group dimension");
  const double ortho_err = (m_.transpose() * m_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (ortho_err > 1e-10)
    throw std::invalid_argument("OrthogonalMatrix: g^T g deviates from identity beyond 1e-10");
  det_ = m_.determinant();
  if (std::abs(std::abs(det_) - 1.0) > 1e-10)
    throw std::invalid_argument("OrthogonalMatrix: determinant is not +-1 within 1e-10");
  if (parent_.kind == GroupKind::SO && det_ < 0.0)
    throw std::invalid_argument("OrthogonalMatrix: SO element must have determinant +1");
}

std::vector<SkewGenerator> so_generators(int n) {
  if (n < 2) throw std::invalid_argument("so_generators: n must be >= 2");
  std::vector<SkewGenerator> gens;
  gens.reserve(n * (n - 1) / 2);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
      w(p, q) = 1.0;
      w(q, p) = -1.0;
      gens.push_back({std::move(w)});
    }
  }
  return gens;
}

Eigen::MatrixXd expm_skew(const Eigen::MatrixXd& omega) {
  const int n = static_cast<int>(omega.rows());
  double nrm = omega.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd w = omega / std::ldexp(1.0, squarings);
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 13; ++k) {
    term = (term * w) / k;
    x += term;
  }
  for (int s = 0; s < squarings; ++s) x = x * x;
  return x;
}

OrthogonalMatrix haar_sample(const GroupSpec& spec, Rng& rng) {
  spec.validate();
  const int n = spec.dim;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  if (spec.kind == GroupKind::SO && q.determinant() < 0.0) q.col(0) = -q.col(0);
  return OrthogonalMatrix(std::move(q), spec);
}

namespace detail {

void dense_act(const Eigen::MatrixXd& g, int order, int dim, std::vector<double>& data,
               std::vector<double>& scratch) {
  // One mode at a time: out[j at slot s] = sum_p g(j, p) in[p at slot s].
  // Row-major strides: slot s has stride dim^(order-1-s).
  scratch.resize(data.size());
  std::int64_t stride = 1;
  for (int s = order - 1; s >= 0; --s) {
    const std::int64_t block = stride * dim;          // one full cycle of slot s
    const std::int64_t total = static_cast<std::int64_t>(data.size());
    for (std::int64_t base = 0; base < total; base += block) {
      for (std::int64_t inner = 0; inner < stride; ++inner) {
        for (int j = 0; j < dim; ++j) {
          double acc = 0.0;
          for (int p = 0; p < dim; ++p) acc += g(j, p) * data[base + p * stride + inner];
          scratch[base + j * stride + inner] = acc;
        }
      }
    }
    data.swap(scratch);
    stride *= dim;
  }
}

}  // namespace detail

SymTensor act(const Eigen::MatrixXd& g, const SymTensor& t) {
  if (g.rows() != t.dim() || g.cols() != t.dim())
    throw std::invalid_argument("act: matrix dimension does not match tensor dimension");
  std::vector<double> dense = t.to_dense();
  std::vector<double> scratch;
  detail::dense_act(g, t.order(), t.dim(), dense, scratch);
  return symmetrize(t.order(), t.dim(), dense);
}

SymTensor act(const OrthogonalMatrix& g, const SymTensor& t) { return act(g.matrix(), t); }

SymTensor infinitesimal_act(const Eigen::MatrixXd& omega, const SymTensor& t) {
  if (omega.rows() != t.dim() || omega.cols() != t.dim())
    throw std::invalid_argument("infinitesimal_act: matrix dimension does not match tensor dimension");
  const int order = t.order(), dim = t.dim();
  const std::vector<double> dense = t.to_dense();
  std::vector<double> acc(dense.size(), 0.0);
  // Leibniz rule: one mode application per slot, summed.
  std::int64_t stride = 1;
  for (int s = order - 1; s >= 0; --s) {
    const std::int64_t block = stride * dim;
    const std::int64_t total = static_cast<std::int64_t>(dense.size());
    for (std::int64_t base = 0; base < total; base += block) {
      for (std::int64_t inner = 0; inner < stride; ++inner) {
        for (int j = 0; j < dim; ++j) {
          double a = 0.0;
          for (int p = 0; p < dim; ++p) a += omega(j, p) * dense[base + p * stride + inner];
          acc[base + j * stride + inner] += a;
        }
      }
    }
    stride *= dim;
  }
  return symmetrize(order, dim, acc);
}

SymTensor infinitesimal_act(const SkewGenerator& omega, const SymTensor& t) {
  return infinitesimal_act(omega.omega, t);
}

}  // namespace tensorinv
