#include "fdsec/conic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "fdsec/error.hpp"

namespace fdsec {
namespace {

void check_block(const ConicProblem& p, const BlockTerm& t, const std::string& where) {
  if (t.block < 0 || t.block >= static_cast<int>(p.psd_dims.size())) {
    fail(ErrorCode::InvalidArgument, where + ": undeclared PSD block " + std::to_string(t.block));
  }
  const int d = p.psd_dims[t.block];
  if (t.coeff.rows() != d || t.coeff.cols() != d) {
    fail(ErrorCode::InvalidArgument, where + ": coefficient size mismatch on block " + std::to_string(t.block));
  }
  if (!t.coeff.allFinite()) fail(ErrorCode::InvalidArgument, where + ": non-finite coefficient");
  if ((t.coeff - t.coeff.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, t.coeff.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::InvalidArgument, where + ": coefficient matrix is not symmetric");
  }
}

std::size_t count_nnz(const RealMatrix& m) {
  std::size_t n = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (m(i, j) != 0.0) ++n;
  return n;
}

void write_terms(std::ostream& out, const std::vector<BlockTerm>& psd,
                 const std::vector<std::pair<int, double>>& lin) {
  for (const auto& t : psd) {
    for (Eigen::Index j = 0; j < t.coeff.cols(); ++j)
      for (Eigen::Index i = 0; i <= j; ++i)
        if (t.coeff(i, j) != 0.0) out << "  psd " << t.block << ' ' << i << ' ' << j << ' ' << t.coeff(i, j) << '\n';
  }
  for (const auto& [i, v] : lin)
    if (v != 0.0) out << "  lin " << i << ' ' << v << '\n';
}

std::size_t terms_nnz(const std::vector<BlockTerm>& psd, const std::vector<std::pair<int, double>>& lin) {
  std::size_t n = 0;
  for (const auto& t : psd) n += count_nnz(t.coeff);
  for (const auto& [i, v] : lin) n += (v != 0.0);
  return n;
}

std::string expect_word(std::istream& in, const char* want) {
  std::string w;
  if (!(in >> w) || (want && w != want)) {
    fail(ErrorCode::Parse, std::string("conic problem: expected '") + (want ? want : "token") + "', got '" + w + "'");
  }
  return w;
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) fail(ErrorCode::Parse, std::string("conic problem: bad ") + what);
  return v;
}

void read_terms(std::istream& in, std::size_t nnz, const std::vector<int>& dims,
                std::vector<BlockTerm>& psd, std::vector<std::pair<int, double>>& lin) {
  for (std::size_t e = 0; e < nnz; ++e) {
    const std::string kind = expect_word(in, nullptr);
    if (kind == "psd") {
      const int b = read_value<int>(in, "block");
      const int i = read_value<int>(in, "row");
      const int j = read_value<int>(in, "col");
      const double v = read_value<double>(in, "value");
      if (b < 0 || b >= static_cast<int>(dims.size()) || i < 0 || j < 0 || i >= dims[b] || j >= dims[b]) {
        fail(ErrorCode::Parse, "conic problem: psd index out of range");
      }
      auto it = std::find_if(psd.begin(), psd.end(), [b](const BlockTerm& t) { return t.block == b; });
      if (it == psd.end()) {
        psd.push_back({b, RealMatrix::Zero(dims[b], dims[b])});
        it = psd.end() - 1;
      }
      it->coeff(i, j) = v;
      it->coeff(j, i) = v;
    } else if (kind == "lin") {
      const int i = read_value<int>(in, "index");
      const double v = read_value<double>(in, "value");
      lin.emplace_back(i, v);
    } else {
      fail(ErrorCode::Parse, "conic problem: unknown term '" + kind + "'");
    }
  }
}

}  // namespace

void ConicProblem::validate() const {
  for (int d : psd_dims) {
    if (d <= 0 || d % 2 != 0) fail(ErrorCode::InvalidArgument, "conic problem: PSD block dims must be positive and even");
  }
  if (orthant_dim < 0) fail(ErrorCode::InvalidArgument, "conic problem: negative orthant dimension");
  if (objective_psd.size() != psd_dims.size()) fail(ErrorCode::InvalidArgument, "conic problem: objective block count");
  for (std::size_t b = 0; b < psd_dims.size(); ++b) check_block(*this, {static_cast<int>(b), objective_psd[b]}, "objective");
  if (objective_orthant.size() != orthant_dim || !objective_orthant.allFinite()) {
    fail(ErrorCode::InvalidArgument, "conic problem: objective orthant size/finite");
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    const std::string where = "constraint " + std::to_string(i) + " (" + c.label + ")";
    for (const auto& t : c.psd) check_block(*this, t, where);
    for (const auto& [v, coef] : c.orthant) {
      if (v < 0 || v >= orthant_dim) fail(ErrorCode::InvalidArgument, where + ": undeclared orthant variable");
      if (!std::isfinite(coef)) fail(ErrorCode::InvalidArgument, where + ": non-finite coefficient");
    }
    if (!std::isfinite(c.rhs)) fail(ErrorCode::InvalidArgument, where + ": non-finite rhs");
  }
}

double evaluate_functional(const LinearConstraint& c, const ConicPoint& x) {
  double v = 0.0;
  for (const auto& t : c.psd) v += (t.coeff.array() * x.psd.at(t.block).array()).sum();
  for (const auto& [i, coef] : c.orthant) v += coef * x.orthant(i);
  return v;
}

double evaluate_objective(const ConicProblem& p, const ConicPoint& x) {
  double v = p.objective_orthant.size() ? p.objective_orthant.dot(x.orthant) : 0.0;
  for (std::size_t b = 0; b < p.psd_dims.size(); ++b) v += (p.objective_psd[b].array() * x.psd.at(b).array()).sum();
  return v;
}

double constraint_slack(const LinearConstraint& c, const ConicPoint& x) {
  const double lhs = evaluate_functional(c, x);
  return c.sense == Sense::GreaterEqual ? lhs - c.rhs : c.rhs - lhs;
}

void write_conic_problem(std::ostream& out, const ConicProblem& p) {
  const auto old_precision = out.precision(17);
  out << "fdsec-conic 1\n";
  out << "psd_blocks " << p.psd_dims.size();
  for (int d : p.psd_dims) out << ' ' << d;
  out << "\northant " << p.orthant_dim << '\n';
  std::vector<BlockTerm> obj;
  for (std::size_t b = 0; b < p.objective_psd.size(); ++b) obj.push_back({static_cast<int>(b), p.objective_psd[b]});
  std::vector<std::pair<int, double>> lin;
  for (int i = 0; i < p.orthant_dim; ++i) lin.emplace_back(i, p.objective_orthant(i));
  out << "objective " << terms_nnz(obj, lin) << '\n';
  write_terms(out, obj, lin);
  out << "constraints " << p.constraints.size() << '\n';
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    out << "con " << i << ' ' << (c.label.empty() ? "-" : c.label) << ' '
        << (c.sense == Sense::GreaterEqual ? ">=" : "<=") << ' ' << c.rhs << ' ' << terms_nnz(c.psd, c.orthant) << '\n';
    write_terms(out, c.psd, c.orthant);
  }
  out << "end\n";
  out.precision(old_precision);
}

ConicProblem read_conic_problem(std::istream& in) {
  ConicProblem p;
  expect_word(in, "fdsec-conic");
  if (read_value<int>(in, "version") != 1) fail(ErrorCode::Parse, "conic problem: unsupported version");
  expect_word(in, "psd_blocks");
  const int nb = read_value<int>(in, "block count");
  if (nb < 0) fail(ErrorCode::Parse, "conic problem: negative block count");
  for (int b = 0; b < nb; ++b) p.psd_dims.push_back(read_value<int>(in, "block dim"));
  expect_word(in, "orthant");
  p.orthant_dim = read_value<int>(in, "orthant dim");
  for (int d : p.psd_dims) p.objective_psd.push_back(RealMatrix::Zero(d, d));
  p.objective_orthant = RealVector::Zero(p.orthant_dim);

  expect_word(in, "objective");
  std::vector<BlockTerm> obj;
  std::vector<std::pair<int, double>> lin;
  read_terms(in, read_value<std::size_t>(in, "nnz"), p.psd_dims, obj, lin);
  for (auto& t : obj) p.objective_psd[t.block] = t.coeff;
  for (const auto& [i, v] : lin) {
    if (i < 0 || i >= p.orthant_dim) fail(ErrorCode::Parse, "conic problem: objective orthant index");
    p.objective_orthant(i) = v;
  }

  expect_word(in, "constraints");
  const auto m = read_value<std::size_t>(in, "constraint count");
  for (std::size_t i = 0; i < m; ++i) {
    expect_word(in, "con");
    read_value<std::size_t>(in, "constraint index");
    LinearConstraint c;
    c.label = expect_word(in, nullptr);
    if (c.label == "-") c.label.clear();
    const std::string sense = expect_word(in, nullptr);
    if (sense == ">=") c.sense = Sense::GreaterEqual;
    else if (sense == "<=") c.sense = Sense::LessEqual;
    else fail(ErrorCode::Parse, "conic problem: bad sense '" + sense + "'");
    c.rhs = read_value<double>(in, "rhs");
    read_terms(in, read_value<std::size_t>(in, "nnz"), p.psd_dims, c.psd, c.orthant);
    p.constraints.push_back(std::move(c));
  }
  expect_word(in, "end");
  p.validate();
  return p;
}

}  // namespace fdsec
