#include "sigmak/equation/spectral.hpp"

#include <cmath>
#include <vector>

#include "sigmak/common/errors.hpp"

namespace sigmak::equation {

GeneralizedEigen generalized_eigen(const Eigen::MatrixXd& T, const Eigen::MatrixXd& g) {
  require(T.rows() == g.rows() && T.cols() == g.cols() && T.rows() == T.cols(), ErrorKind::dimension,
          "tensor and metric sizes differ");
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  require(llt.info() == Eigen::Success, ErrorKind::metric, "metric is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  GeneralizedEigen out;
  out.Linv = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
  Eigen::MatrixXd M = out.Linv * T * out.Linv.transpose();
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  out.lambda = es.eigenvalues();
  out.Q = es.eigenvectors();
  return out;
}

Eigen::MatrixXd spectral_gradient(const symfunc::OperatorSpec& op, const Eigen::MatrixXd& T, const Eigen::MatrixXd& g) {
  const auto ge = generalized_eigen(T, g);
  const std::vector<double> lam(ge.lambda.data(), ge.lambda.data() + ge.lambda.size());
  const std::vector<double> f = symfunc::F_gradient(op, lam);
  const Eigen::VectorXd fv = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
  const Eigen::MatrixXd B = ge.Linv.transpose() * ge.Q;
  return B * fv.asDiagonal() * B.transpose();
}

double spectral_second_derivative(const symfunc::OperatorSpec& op, const Eigen::MatrixXd& T, const Eigen::MatrixXd& g,
                                  const Eigen::MatrixXd& E, double gap_tol) {
  const auto ge = generalized_eigen(T, g);
  const int n = static_cast<int>(ge.lambda.size());
  const std::vector<double> lam(ge.lambda.data(), ge.lambda.data() + n);
  const std::vector<double> f = symfunc::F_gradient(op, lam);
  const Eigen::MatrixXd H = symfunc::F_hessian(op, lam);
  const Eigen::MatrixXd Et = ge.Q.transpose() * ge.Linv * E * ge.Linv.transpose() * ge.Q;
  const double scale = std::max(1.0, ge.lambda.cwiseAbs().maxCoeff());
  double out = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out += H(i, j) * Et(i, i) * Et(j, j);
      if (i == j) continue;
      const double gap = lam[static_cast<std::size_t>(i)] - lam[static_cast<std::size_t>(j)];
      const double gamma = std::abs(gap) > gap_tol * scale
                               ? (f[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(j)]) / gap
                               : H(i, i) - H(i, j);
      out += gamma * Et(i, j) * Et(i, j);
    }
  return out;
}

}  // namespace sigmak::equation
