#include "fdsec/zf_receiver.hpp"

#include "fdsec/error.hpp"

namespace fdsec {

ReceiverSet zf_receivers(const std::vector<ComplexVector>& g) {
  ReceiverSet out;
  if (g.empty()) return out;
  const Eigen::Index n = g.front().size();
  ComplexMatrix q(n, static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g[j].size() != n) fail(ErrorCode::InvalidArgument, "zf_receivers: channel length mismatch");
    q.col(static_cast<Eigen::Index>(j)) = g[j];
  }
  const ComplexMatrix pinv = pseudoinverse_full_col_rank(q);
  out.r.reserve(g.size());
  for (Eigen::Index j = 0; j < pinv.rows(); ++j) out.r.push_back(pinv.row(j).adjoint());
  return out;
}

}  // namespace fdsec
