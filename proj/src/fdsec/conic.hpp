#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdsec/linalg.hpp"

namespace fdsec {

enum class Sense { GreaterEqual, LessEqual };

/// Coefficient matrix of one constraint (or the objective) on one PSD block.
struct BlockTerm {
  int block = 0;
  RealMatrix coeff;  // symmetric, psd_dims[block] square
};

/// sum_b <coeff_b, X_b> + sum_i orthant_i x_i   (sense)   rhs
struct LinearConstraint {
  std::vector<BlockTerm> psd;
  std::vector<std::pair<int, double>> orthant;  // (variable index, coefficient)
  double rhs = 0.0;
  Sense sense = Sense::GreaterEqual;
  std::string label;
};

/// Minimize a linear functional over a product of real symmetric PSD blocks
/// and a nonnegative orthant, subject to affine inequalities.
struct ConicProblem {
  std::vector<int> psd_dims;           // each even (real embedding of Hermitian)
  int orthant_dim = 0;
  std::vector<RealMatrix> objective_psd;  // one per block
  RealVector objective_orthant;
  std::vector<LinearConstraint> constraints;

  /// Throws InvalidArgument on undeclared blocks, size mismatches, odd block
  /// dimensions, asymmetric coefficients, or non-finite data.
  void validate() const;
};

/// A point in the cone: one symmetric matrix per PSD block plus the orthant.
struct ConicPoint {
  std::vector<RealMatrix> psd;
  RealVector orthant;
};

/// Left-hand side of constraint `c` evaluated at `x`.
double evaluate_functional(const LinearConstraint& c, const ConicPoint& x);
double evaluate_objective(const ConicProblem& p, const ConicPoint& x);
/// Signed slack: lhs - rhs for >=, rhs - lhs for <=.
double constraint_slack(const LinearConstraint& c, const ConicPoint& x);

/// Text format:
///   fdsec-conic 1
///   psd_blocks <count> <d_1> ... <d_count>
///   orthant <n>
///   objective <nnz>
///     psd <block> <i> <j> <value>      (i <= j, upper triangle)
///     lin <index> <value>
///   constraints <m>
///   con <index> <label> <">=" | "<="> <rhs> <nnz>
///     psd ... / lin ...                (as above)
///   end
/// Values use 17 significant digits; zero entries are omitted.
void write_conic_problem(std::ostream& out, const ConicProblem& p);
ConicProblem read_conic_problem(std::istream& in);

}  // namespace fdsec
