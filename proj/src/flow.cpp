#include "calabi/flow.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>

#include "json.hpp"

namespace calabi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using ComplexArray = Eigen::ArrayXXcd;

/// Integer frequency for index p on an N-point grid: 0..N/2, then negative.
inline double frequency(int p, int n) { return p <= n / 2 ? p : p - n; }

/// Complex-to-complex 2D transforms built from 1D passes; inverse includes
/// the 1/N^2 factor, so ifft2(fft2(f)) = f.
class Spectral {
 public:
  explicit Spectral(int n) : n_(n), k2_(n, n), dealias_(n, n) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double fx = frequency(i, n), fy = frequency(j, n);
        k2_(i, j) = kTwoPi * kTwoPi * (fx * fx + fy * fy);
        dealias_(i, j) =
            (std::abs(fx) <= n / 3.0 && std::abs(fy) <= n / 3.0) ? 1.0 : 0.0;  // 2/3 rule
      }
  }

  ComplexArray fft2(const Eigen::ArrayXXd& f) const {
    ComplexArray a = f.cast<std::complex<double>>();
    transform(a, /*inverse=*/false);
    return a;
  }

  Eigen::ArrayXXd ifft2(const ComplexArray& a) const {
    ComplexArray b = a;
    transform(b, /*inverse=*/true);
    return b.real();
  }

  /// -k^2 multiplier array (Laplacian symbol is -k2; callers pick signs).
  const Eigen::ArrayXXd& k2() const { return k2_; }
  const Eigen::ArrayXXd& dealias_mask() const { return dealias_; }

  Eigen::ArrayXXd laplacian(const Eigen::ArrayXXd& f) const {
    return ifft2((fft2(f) * (-k2_).cast<std::complex<double>>()).eval());
  }

 private:
  void transform(ComplexArray& a, bool inverse) const {
    Eigen::FFT<double> fft;
    Eigen::VectorXcd in(n_), out(n_);
    for (int j = 0; j < n_; ++j) {
      in = a.col(j).matrix();
      if (inverse)
        fft.inv(out, in);
      else
        fft.fwd(out, in);
      a.col(j) = out.array();
    }
    for (int i = 0; i < n_; ++i) {
      in = a.row(i).transpose().matrix();
      if (inverse)
        fft.inv(out, in);
      else
        fft.fwd(out, in);
      a.row(i) = out.array().transpose();
    }
  }

  int n_;
  Eigen::ArrayXXd k2_;
  Eigen::ArrayXXd dealias_;
};

const Spectral& spectral_for(int n) {
  static thread_local int cached_n = 0;
  static thread_local std::unique_ptr<Spectral> cached;
  if (cached_n != n) {
    cached = std::make_unique<Spectral>(n);
    cached_n = n;
  }
  return *cached;
}

Eigen::ArrayXXd density_from_phi(const Eigen::ArrayXXd& phi) {
  const Spectral& sp = spectral_for(static_cast<int>(phi.rows()));
  return 1.0 + 0.5 * sp.laplacian(phi);
}

void check_positive(const Eigen::ArrayXXd& u, double u_min) {
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      if (!(u(i, j) > u_min))
        throw FlowBreakdownError(static_cast<int>(i), static_cast<int>(j), u(i, j));
}

Eigen::ArrayXXd curvature_of(const Eigen::ArrayXXd& u) {
  const Spectral& sp = spectral_for(static_cast<int>(u.rows()));
  return -sp.laplacian(u.log()) / u;
}

double quadrature(const Eigen::ArrayXXd& f) { return f.mean(); }  // cell area 1/N^2

}  // namespace

void FlowConfig::validate() const {
  if (grid_size < 16 || (grid_size & (grid_size - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two >= 16, got " +
                                std::to_string(grid_size));
  if (!(u_min > 0.0 && u_min < 1.0))
    throw std::invalid_argument("u_min must lie in (0,1)");
  if (!(dt_init > 0.0) || !(dt_min > 0.0) || dt_max < dt_init)
    throw std::invalid_argument("inconsistent time-step controls");
}

FlowState make_flow_state(int n, const Eigen::ArrayXXd& phi, double u_min) {
  if (phi.rows() != n || phi.cols() != n) throw std::invalid_argument("phi must be N x N");
  FlowState s;
  s.n = n;
  s.phi = phi - phi.mean();  // the zero mode of phi never enters the metric
  s.u = density_from_phi(s.phi);
  check_positive(s.u, u_min);
  return s;
}

Eigen::ArrayXXd phi_zero(int n) { return Eigen::ArrayXXd::Zero(n, n); }

Eigen::ArrayXXd phi_cosine(int n, double eps) {
  Eigen::ArrayXXd phi(n, n);
  for (int i = 0; i < n; ++i) {
    const double v = eps * std::cos(kTwoPi * i / n);
    for (int j = 0; j < n; ++j) phi(i, j) = v;
  }
  return phi;
}

Eigen::ArrayXXd phi_random_band(int n, std::uint64_t seed, int band, double amplitude) {
  if (band < 1 || band > n / 3) throw std::invalid_argument("band must lie in [1, N/3]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  Eigen::ArrayXXd phi = Eigen::ArrayXXd::Zero(n, n);
  for (int m = -band; m <= band; ++m)
    for (int l = -band; l <= band; ++l) {
      if (m == 0 && l == 0) continue;
      const double a = amp(rng);
      const double th = phase(rng);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          phi(i, j) += a * std::cos(kTwoPi * (m * static_cast<double>(i) + l * static_cast<double>(j)) / n + th);
    }
  const Spectral& sp = spectral_for(n);
  const double vmax = (0.5 * sp.laplacian(phi)).abs().maxCoeff();
  if (vmax > 0) phi *= amplitude / vmax;
  return phi;
}

Eigen::ArrayXXd scalar_curvature(const FlowState& s, double u_min) {
  check_positive(s.u, u_min);
  return curvature_of(s.u);
}

double calabi_energy(const FlowState& s) {
  const Eigen::ArrayXXd r = curvature_of(s.u);
  return quadrature(r.square() * s.u);
}

double total_area(const FlowState& s) { return quadrature(s.u); }

double max_abs_curvature(const FlowState& s) { return curvature_of(s.u).abs().maxCoeff(); }

double gauss_bonnet_residual(const FlowState& s) {
  return quadrature(curvature_of(s.u) * s.u);
}

double dissipation_linear(const FlowState& s) {
  const Spectral& sp = spectral_for(s.n);
  return quadrature(sp.laplacian(curvature_of(s.u)).square());
}

FlowState step(const FlowState& s, const FlowConfig& cfg) {
  cfg.validate();
  const Spectral& sp = spectral_for(s.n);
  const Eigen::ArrayXXd r = scalar_curvature(s, cfg.u_min);
  const double rbar = quadrature(r * s.u) / quadrature(s.u);  // ~0; kept against drift
  const double energy = quadrature(r.square() * s.u);

  // Split d phi/dt = R - Rbar into the stiff linear part L = -(1/2) lap^2
  // and the dealiased remainder N = R - Rbar - L phi.
  const ComplexArray phi_hat = sp.fft2(s.phi);
  const Eigen::ArrayXXd k4 = sp.k2().square();
  const Eigen::ArrayXXd lin = sp.ifft2((phi_hat * (-0.5 * k4).cast<std::complex<double>>()).eval());
  ComplexArray nl_hat = sp.fft2(r - rbar - lin);
  nl_hat *= sp.dealias_mask().cast<std::complex<double>>();

  double dt = s.dt > 0 ? s.dt : cfg.dt_init;
  while (true) {
    if (dt < cfg.dt_min)
      throw StiffnessFailureError("time step underflowed dt_min = " + std::to_string(cfg.dt_min) +
                                  " at t = " + std::to_string(s.time));
    ComplexArray trial_hat =
        (phi_hat + dt * nl_hat) / (1.0 + 0.5 * dt * k4).cast<std::complex<double>>();
    trial_hat(0, 0) = 0.0;  // mean(phi) pinned to zero
    FlowState next;
    next.n = s.n;
    next.phi = sp.ifft2(trial_hat);
    next.u = density_from_phi(next.phi);
    next.history = s.history;

    bool ok = next.u.minCoeff() > cfg.u_min;
    double next_energy = 0.0;
    if (ok) {
      next_energy = calabi_energy(next);
      ok = next_energy <= energy + cfg.energy_tol_rel * energy + cfg.energy_tol_abs;
    }
    if (!ok) {
      dt *= 0.5;
      continue;
    }
    next.time = s.time + dt;
    next.dt = std::min(dt * cfg.dt_growth, cfg.dt_max);
    next.history.push_back(
        {next.time, next_energy, max_abs_curvature(next), total_area(next), dt});
    return next;
  }
}

RunResult run_flow(FlowState s, const FlowConfig& cfg) {
  cfg.validate();
  if (s.history.empty())
    s.history.push_back({s.time, calabi_energy(s), max_abs_curvature(s), total_area(s), 0.0});
  RunResult out{std::move(s), false};
  for (long i = 0; i < cfg.max_steps; ++i) {
    if (max_abs_curvature(out.state) < cfg.r_tol) {
      out.converged = true;
      return out;
    }
    if (out.state.time >= cfg.t_max) return out;
    out.state = step(out.state, cfg);
  }
  return out;
}

InterpolationCheck interpolation_check(const Eigen::ArrayXXd& T, const Rational& r,
                                       const Rational& p, const Rational& q, double tol) {
  if (r < Rational(1)) throw std::domain_error("interpolation exponent r must be >= 1");
  if (p.sign() <= 0 || q.sign() <= 0) throw std::domain_error("exponents p, q must be positive");
  if (Rational(1) / p + Rational(1) / q != Rational(1) / r)
    throw std::domain_error("exponent relation 1/p + 1/q = 1/r violated");

  const int n = static_cast<int>(T.rows());
  const Spectral& sp = spectral_for(n);
  const ComplexArray t_hat = sp.fft2(T);
  const std::complex<double> iu(0.0, 1.0);

  Eigen::ArrayXXd kx(n, n), ky(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      kx(i, j) = kTwoPi * frequency(i, n);
      ky(i, j) = kTwoPi * frequency(j, n);
    }
  const Eigen::ArrayXXd tx = sp.ifft2((t_hat * kx.cast<std::complex<double>>() * iu).eval());
  const Eigen::ArrayXXd ty = sp.ifft2((t_hat * ky.cast<std::complex<double>>() * iu).eval());
  const Eigen::ArrayXXd txx = sp.ifft2((t_hat * (-kx.square()).cast<std::complex<double>>()).eval());
  const Eigen::ArrayXXd tyy = sp.ifft2((t_hat * (-ky.square()).cast<std::complex<double>>()).eval());
  const Eigen::ArrayXXd txy = sp.ifft2((t_hat * (-(kx * ky)).cast<std::complex<double>>()).eval());

  const Eigen::ArrayXXd grad_sq = tx.square() + ty.square();
  const Eigen::ArrayXXd hess_sq = txx.square() + 2.0 * txy.square() + tyy.square();

  const double rd = r.to_double(), pd = p.to_double(), qd = q.to_double();
  InterpolationCheck out;
  out.lhs = std::pow(quadrature(grad_sq.pow(rd)), 1.0 / rd);
  const double hess_term = std::pow(quadrature(hess_sq.sqrt().pow(pd)), 1.0 / pd);
  const double t_term = std::pow(quadrature(T.abs().pow(qd)), 1.0 / qd);
  out.rhs = (2.0 * rd - 2.0 + 2.0) * hess_term * t_term;  // dimension n = 2
  out.holds = out.lhs <= out.rhs * (1.0 + tol) + 1e-300;
  return out;
}

double derivative_moment(const Eigen::ArrayXXd& T, int order) {
  if (order < 0 || order > 3) throw std::domain_error("derivative order must be in [0,3]");
  const int n = static_cast<int>(T.rows());
  const Spectral& sp = spectral_for(n);
  const ComplexArray t_hat = sp.fft2(T);
  // Parseval: int |grad^m T|^2 dA = sum_k |k|^(2m) |T_hat_k|^2 / N^4.
  const Eigen::ArrayXXd weight = sp.k2().pow(order);
  const double n4 = static_cast<double>(n) * n * static_cast<double>(n) * n;
  return (t_hat.abs2() * weight).sum() / n4;
}

void write_history_csv(const FlowState& s, std::ostream& os) {
  os << "time,calabi_energy,max_abs_R,total_area,dt\n";
  os.precision(17);
  for (const auto& h : s.history)
    os << h.time << ',' << h.calabi_energy << ',' << h.max_abs_r << ',' << h.total_area << ','
       << h.dt << '\n';
}

namespace {

void write_doubles_le(std::ofstream& f, const Eigen::ArrayXXd& a) {
  static_assert(sizeof(double) == 8);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      double v = a(i, j);
      if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, 8>>(v);
        std::reverse(bytes.begin(), bytes.end());
        v = std::bit_cast<double>(bytes);
      }
      f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

}  // namespace

void write_snapshot(const FlowState& s, const std::string& prefix) {
  {
    std::ofstream f(prefix + ".phi.f64", std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + prefix + ".phi.f64");
    write_doubles_le(f, s.phi);
  }
  {
    std::ofstream f(prefix + ".u.f64", std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + prefix + ".u.f64");
    write_doubles_le(f, s.u);
  }
  nlohmann::json sidecar{
      {"schema", 1},
      {"n", s.n},
      {"time", s.time},
      {"dtype", "float64"},
      {"endianness", "little"},
      {"layout", "row-major"},
      {"fields", {"phi", "u"}},
      {"conventions",
       "domain [0,1)^2, sample (i,j) at (i/N, j/N) with j fastest; "
       "u = 1 + lap(phi)/2; R = -lap(log u)/u; d phi/dt = R - Rbar"},
  };
  std::ofstream f(prefix + ".json");
  if (!f) throw std::runtime_error("cannot open " + prefix + ".json");
  f << sidecar.dump(2) << '\n';
}

}  // namespace calabi
