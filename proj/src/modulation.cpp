#include "oeem/modulation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <numbers>

#include "oeem/errors.hpp"
#include "oeem/rng.hpp"

namespace oeem {

using std::numbers::pi;

std::vector<SpinTone> to_tones(const std::vector<SpinCoupling>& couplings) {
  std::vector<SpinTone> out;
  out.reserve(couplings.size());
  for (const auto& c : couplings) out.push_back(to_tone(c));
  return out;
}

void ModulationParams::validate() const {
  for (const auto& s : spins) {
    if (!(s.rho >= 0.0 && s.rho <= 1.0)) throw ConfigError("rho must lie in [0,1]");
    if (!(s.delta_g >= 0.0) || !(s.delta_e >= 0.0)) throw ConfigError("splittings must be >= 0");
  }
  if (!(t2 > 0.0)) throw ConfigError("T2 must be positive");
  if (!(gamma >= 1.0)) throw ConfigError("stretch exponent must be >= 1");
}

void EchoTrace::validate() const {
  if (tau.size() != values.size()) throw ConfigError("trace grid/value length mismatch");
  if (tau.size() < 2) return;
  const double step = tau[1] - tau[0];
  if (!(step > 0.0)) throw ConfigError("trace grid must be strictly increasing");
  for (std::size_t i = 1; i < tau.size(); ++i) {
    const double d = tau[i] - tau[i - 1];
    if (std::abs(d - step) > 1e-9 * std::abs(step)) {
      throw ConfigError("trace grid must be uniform to 1e-9 relative");
    }
  }
}

std::vector<double> uniform_grid(double tau_max, std::size_t n_samples) {
  if (n_samples < 2 || !(tau_max > 0.0)) throw ConfigError("bad trace grid request");
  std::vector<double> g(n_samples);
  const double dt = tau_max / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) g[i] = static_cast<double>(i) * dt;
  return g;
}

double envelope(double tau, std::span<const SpinTone> spins) {
  double prod = 1.0;
  for (const auto& s : spins) {
    const double cg = 1.0 - std::cos(2.0 * pi * s.delta_g * tau);
    const double ce = 1.0 - std::cos(2.0 * pi * s.delta_e * tau);
    prod *= 1.0 - 0.5 * s.rho * cg * ce;
  }
  return prod;
}

static double sample_at(const ModulationParams& p, double tau, double noise_sigma,
                        std::uint64_t seed, std::uint64_t index) {
  double v = envelope(tau, p.spins) * std::exp(-std::pow(2.0 * tau / p.t2, p.gamma));
  if (p.mode == TraceMode::intensity) v *= v;
  if (noise_sigma > 0.0) v += noise_sigma * rng::gaussian_at(seed, index);
  return v;
}

EchoTrace synthesize_trace(const ModulationParams& params, std::vector<double> tau_grid,
                           double noise_sigma, std::uint64_t rng_seed) {
  params.validate();
  EchoTrace t;
  t.tau = std::move(tau_grid);
  t.mode = params.mode;
  t.noise_sigma = noise_sigma;
  t.rng_seed = rng_seed;
  t.values.resize(t.tau.size());
  const std::int64_t n = static_cast<std::int64_t>(t.tau.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    t.values[i] = sample_at(params, t.tau[i], noise_sigma, rng_seed, i);
  }
  t.validate();
  return t;
}

EchoTrace synthesize_trace_serial(const ModulationParams& params, std::vector<double> tau_grid,
                                  double noise_sigma, std::uint64_t rng_seed) {
  params.validate();
  EchoTrace t;
  t.tau = std::move(tau_grid);
  t.mode = params.mode;
  t.noise_sigma = noise_sigma;
  t.rng_seed = rng_seed;
  t.values.resize(t.tau.size());
  for (std::size_t i = 0; i < t.tau.size(); ++i) {
    t.values[i] = sample_at(params, t.tau[i], noise_sigma, rng_seed, i);
  }
  t.validate();
  return t;
}

namespace {

using Mat4c = Eigen::Matrix4cd;
using Mat2c = Eigen::Matrix2cd;
using cd = std::complex<double>;

Mat2c pauli_dot(const Vec3& v) {
  Mat2c m;
  m << cd(v.z(), 0), cd(v.x(), -v.y()), cd(v.x(), v.y()), cd(-v.z(), 0);
  return m;
}

// nuclear Zeeman Hamiltonian H = -g_Y mu_N B . I with I = sigma/2
Mat2c nuclear_hamiltonian(const Vec3& b, const PhysicalConstants& pc) {
  return -0.5 * pc.g_Y * pc.mu_N * pauli_dot(b);
}

Mat2c tls_rotation(double angle) {
  Mat2c m;
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  m << cd(c, 0), cd(-s, 0), cd(s, 0), cd(c, 0);  // exp(-i angle sigma_y / 2)
  return m;
}

}  // namespace

std::vector<double> quantum_echo_oracle(const Vec3& b_tot_g, const Vec3& b_tot_e,
                                        std::span<const double> tau_grid,
                                        const PhysicalConstants& pc) {
  const double hbar = pc.h / (2.0 * pi);

  // joint Hamiltonian, block-diagonal in the optical state
  Mat4c h = Mat4c::Zero();
  h.topLeftCorner<2, 2>() = nuclear_hamiltonian(b_tot_g, pc);
  h.bottomRightCorner<2, 2>() = nuclear_hamiltonian(b_tot_e, pc);
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h);
  const Mat4c v = es.eigenvectors();
  const Eigen::Vector4d evals = es.eigenvalues();

  const Mat2c id2 = Mat2c::Identity();
  auto lift = [&](const Mat2c& tls) {
    Mat4c out = Mat4c::Zero();
    out.topLeftCorner<2, 2>() = tls(0, 0) * id2;
    out.topRightCorner<2, 2>() = tls(0, 1) * id2;
    out.bottomLeftCorner<2, 2>() = tls(1, 0) * id2;
    out.bottomRightCorner<2, 2>() = tls(1, 1) * id2;
    return out;
  };
  const Mat4c p90 = lift(tls_rotation(pi / 2.0));
  const Mat4c p180 = lift(tls_rotation(pi));

  // |e><g| on the optical system; its trace against rho gives the emitted
  // field amplitude
  Mat4c raise = Mat4c::Zero();
  raise.bottomLeftCorner<2, 2>() = id2;

  // reference: identical sequence on a bare two-level system
  const Mat2c tls_p90 = tls_rotation(pi / 2.0);
  const Mat2c tls_p180 = tls_rotation(pi);
  Mat2c tls_rho = Mat2c::Zero();
  tls_rho(0, 0) = 1.0;
  tls_rho = tls_p90 * tls_rho * tls_p90.adjoint();
  tls_rho = tls_p180 * tls_rho * tls_p180.adjoint();
  const cd ref = tls_rho(0, 1);  // <e| rho |g>

  Mat4c rho0 = Mat4c::Zero();
  rho0.topLeftCorner<2, 2>() = 0.5 * id2;  // ground optical state, thermal nucleus

  std::vector<double> out(tau_grid.size());
  const std::int64_t n = static_cast<std::int64_t>(tau_grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    Eigen::Vector4cd phases;
    for (int k = 0; k < 4; ++k) {
      phases(k) = std::exp(cd(0.0, -evals(k) * tau_grid[i] / hbar));
    }
    const Mat4c u = v * phases.asDiagonal() * v.adjoint();
    Mat4c rho = p90 * rho0 * p90.adjoint();
    rho = u * rho * u.adjoint();
    rho = p180 * rho * p180.adjoint();
    rho = u * rho * u.adjoint();
    const cd signal = (rho * raise).trace();
    out[i] = (signal / ref).real();
  }
  return out;
}

}  // namespace oeem
