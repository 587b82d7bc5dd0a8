#include "cellflow/lsmr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cellflow {

namespace {

struct Givens {
  double c, s, r;
};

// Stable plane rotation zeroing b in (a, b).
Givens sym_ortho(double a, double b) {
  if (b == 0.0) return {a == 0.0 ? 1.0 : std::copysign(1.0, a), 0.0, std::abs(a)};
  if (a == 0.0) return {0.0, std::copysign(1.0, b), std::abs(b)};
  if (std::abs(b) > std::abs(a)) {
    const double tau = a / b;
    const double s = std::copysign(1.0, b) / std::sqrt(1.0 + tau * tau);
    return {s * tau, s, b / s};
  }
  const double tau = b / a;
  const double c = std::copysign(1.0, a) / std::sqrt(1.0 + tau * tau);
  return {c, c * tau, a / c};
}

}  // namespace

LsmrResult lsmr(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b, double atol,
                double btol, int max_iterations) {
  const Eigen::Index n = a.cols();
  LsmrResult res;
  res.x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd u = b;
  const double normb = u.norm();
  double beta = normb;
  if (beta > 0) u /= beta;
  Eigen::VectorXd v = a.transpose() * u;
  double alpha = v.norm();
  if (alpha > 0) v /= alpha;

  res.residual_norm = beta;
  res.normal_residual_norm = alpha * beta;
  if (res.normal_residual_norm == 0.0) return res;

  double zetabar = alpha * beta;
  double alphabar = alpha;
  double rho = 1.0, rhobar = 1.0, cbar = 1.0, sbar = 0.0;
  Eigen::VectorXd h = v;
  Eigen::VectorXd hbar = Eigen::VectorXd::Zero(n);

  // ||r|| estimation state
  double betadd = beta, betad = 0.0, rhodold = 1.0, tautildeold = 0.0;
  double thetatilde = 0.0, zeta = 0.0;

  double norm_a2 = alpha * alpha;

  Eigen::VectorXd scratch_m(a.rows());
  Eigen::VectorXd scratch_n(n);

  for (int itn = 1; itn <= max_iterations; ++itn) {
    res.iterations = itn;
    scratch_m.noalias() = a * v;
    u = scratch_m - alpha * u;
    beta = u.norm();
    if (beta > 0) {
      u /= beta;
      scratch_n.noalias() = a.transpose() * u;
      v = scratch_n - beta * v;
      alpha = v.norm();
      if (alpha > 0) v /= alpha;
    }

    // Undamped problem: the first rotation is the identity.
    const double alphahat = alphabar;
    const double rhoold = rho;
    const Givens g1 = sym_ortho(alphahat, beta);
    rho = g1.r;
    const double thetanew = g1.s * alpha;
    alphabar = g1.c * alpha;

    const double rhobarold = rhobar;
    const double zetaold = zeta;
    const double thetabar = sbar * rho;
    const Givens g2 = sym_ortho(cbar * rho, thetanew);
    cbar = g2.c;
    sbar = g2.s;
    rhobar = g2.r;
    zeta = cbar * zetabar;
    zetabar = -sbar * zetabar;

    hbar = h - (thetabar * rho / (rhoold * rhobarold)) * hbar;
    res.x += (zeta / (rho * rhobar)) * hbar;
    h = v - (thetanew / rho) * h;

    const double betaacute = betadd;
    const double betahat = g1.c * betaacute;
    betadd = -g1.s * betaacute;
    const double thetatildeold = thetatilde;
    const Givens g3 = sym_ortho(rhodold, thetabar);
    thetatilde = g3.s * rhobar;
    rhodold = g3.c * rhobar;
    betad = -g3.s * betad + g3.c * betahat;
    tautildeold = (zetaold - thetatildeold * tautildeold) / g3.r;
    const double taud = (zeta - thetatilde * tautildeold) / rhodold;
    const double normr = std::sqrt((betad - taud) * (betad - taud) + betadd * betadd);

    norm_a2 += beta * beta;
    const double norm_a = std::sqrt(norm_a2);
    norm_a2 += alpha * alpha;

    const double normar = std::abs(zetabar);
    const double normx = res.x.norm();
    res.residual_norm = normr;
    res.normal_residual_norm = normar;

    const double test1 = normr / normb;
    const double test2 = (norm_a * normr) != 0.0 ? normar / (norm_a * normr)
                                                 : std::numeric_limits<double>::infinity();
    const double t1 = test1 / (1.0 + norm_a * normx / normb);
    const double rtol = btol + atol * norm_a * normx / normb;

    if (test1 <= rtol) {
      res.stop = LsmrStop::Compatible;
      return res;
    }
    if (test2 <= atol) {
      res.stop = LsmrStop::LeastSquares;
      return res;
    }
    if (1.0 + t1 <= 1.0) {
      res.stop = LsmrStop::MachineCompatible;
      return res;
    }
    if (1.0 + test2 <= 1.0) {
      res.stop = LsmrStop::MachineLeastSquares;
      return res;
    }
  }
  res.stop = LsmrStop::IterationLimit;
  return res;
}

}  // namespace cellflow
