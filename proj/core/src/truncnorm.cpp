#include "mixssl/truncnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixssl/errors.hpp"
#include "mixssl/parallel.hpp"

namespace mixssl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

OrthantConstraint OrthantConstraint::from_binary_outcomes(std::span<const double> y_binary) {
  OrthantConstraint c;
  c.signs.reserve(y_binary.size());
  for (double y : y_binary) c.signs.push_back(y == 1.0 ? 1 : -1);
  return c;
}

bool OrthantConstraint::satisfied_by(const Vector& z) const {
  if (z.size() != static_cast<Eigen::Index>(signs.size())) return false;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    const double v = z(static_cast<Eigen::Index>(k));
    if (signs[k] > 0 ? !(v >= 0.0) : !(v < 0.0)) return false;
  }
  return true;
}

ConditionalGaussian ConditionalGaussian::make(Vector mean, Matrix precision) {
  if (!mean.allFinite()) throw NumericalError("conditional mean is not finite");
  auto factor = linalg::cholesky(precision);
  if (!factor) throw ConditioningError("binary-block precision is not positive definite");
  return ConditionalGaussian{std::move(mean), std::move(precision), std::move(*factor)};
}

Vector ConditionalGaussian::draw_centered(Engine& rng) const {
  std::normal_distribution<double> normal;
  Vector e(dim());
  for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = normal(rng);
  // precision = L L^T, so L^{-T} e ~ N(0, precision^{-1}).
  return precision_factor.L.transpose().triangularView<Eigen::Upper>().solve(e);
}

ConditionalGaussian conditional_of_binary_block(const Vector& mean, const Matrix& Omega,
                                                const Vector& y_continuous) {
  const Eigen::Index q = Omega.rows();
  const Eigen::Index qc = y_continuous.size();
  const Eigen::Index qb = q - qc;
  if (Omega.cols() != q || mean.size() != q || qc > q)
    throw InputShapeError("conditional_of_binary_block: dimension mismatch");
  Matrix omega_bb = Omega.bottomRightCorner(qb, qb);
  Vector m_b = mean.tail(qb);
  if (qc > 0) {
    auto factor = linalg::cholesky(omega_bb);
    if (!factor) throw ConditioningError("Omega_BB is singular or not positive definite");
    const Vector resid = y_continuous - mean.head(qc);
    const Vector cross = Omega.bottomLeftCorner(qb, qc) * resid;
    m_b -= factor->solve(cross);
  }
  return ConditionalGaussian::make(std::move(m_b), std::move(omega_bb));
}

ArcSet ArcSet::full() { return ArcSet::from_sorted({{0.0, kTwoPi}}); }

ArcSet ArcSet::from_sorted(Intervals intervals) {
  ArcSet out;
  out.intervals_ = std::move(intervals);
  return out;
}

ArcSet ArcSet::empty() { return ArcSet{}; }

ArcSet ArcSet::from_intervals(std::vector<Interval> intervals) {
  for (auto& [lo, hi] : intervals) {
    lo = std::clamp(lo, 0.0, kTwoPi);
    hi = std::clamp(hi, 0.0, kTwoPi);
  }
  std::erase_if(intervals, [](const Interval& iv) { return iv.second < iv.first; });
  std::sort(intervals.begin(), intervals.end());
  ArcSet out;
  for (const auto& iv : intervals) {
    if (!out.intervals_.empty() && iv.first <= out.intervals_.back().second)
      out.intervals_.back().second = std::max(out.intervals_.back().second, iv.second);
    else
      out.intervals_.push_back(iv);
  }
  return out;
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
  Intervals result;
  std::size_t a = 0;
  std::size_t b = 0;
  const auto& A = intervals_;
  const auto& B = other.intervals_;
  while (a < A.size() && b < B.size()) {
    const double lo = std::max(A[a].first, B[b].first);
    const double hi = std::min(A[a].second, B[b].second);
    if (lo <= hi) result.emplace_back(lo, hi);
    if (A[a].second < B[b].second) ++a;
    else ++b;
  }
  return from_sorted(std::move(result));
}

ArcSet ArcSet::unite(const ArcSet& other) const {
  std::vector<Interval> all(intervals_.begin(), intervals_.end());
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return from_intervals(std::move(all));
}

bool ArcSet::contains(double angle, double tol) const {
  for (const auto& [lo, hi] : intervals_)
    if (angle >= lo - tol && angle <= hi + tol) return true;
  return false;
}

double ArcSet::measure() const {
  double total = 0.0;
  for (const auto& [lo, hi] : intervals_) total += hi - lo;
  return total;
}

double ArcSet::at_fraction(double u) const {
  double remaining = u * measure();
  for (const auto& [lo, hi] : intervals_) {
    const double len = hi - lo;
    if (remaining <= len) return lo + remaining;
    remaining -= len;
  }
  return intervals_.empty() ? 0.0 : intervals_.back().second;
}

ArcSet ellipse_arc_intersection(double center, double amp_cos, double amp_sin, int sign,
                                double endpoint_tol) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  const double c = s * center;
  const double a = s * amp_cos;
  const double b = s * amp_sin;
  const double r = std::hypot(a, b);
  if (r == 0.0 || c >= r) return c >= 0.0 ? ArcSet::full() : ArcSet::empty();
  if (c < -r) return ArcSet::empty();

  // a cos(t) + b sin(t) = r cos(t - phi) >= -c  <=>  |t - phi| <= acos(-c / r).
  const double half = std::acos(std::clamp(-c / r, -1.0, 1.0)) + endpoint_tol;
  if (half >= std::numbers::pi) return ArcSet::full();
  const double phi = std::atan2(b, a);
  double lo = std::fmod(phi - half, kTwoPi);
  if (lo < 0.0) lo += kTwoPi;
  const double hi = lo + 2.0 * half;
  if (hi <= kTwoPi) return ArcSet::from_sorted({{lo, hi}});
  return ArcSet::from_sorted({{0.0, hi - kTwoPi}, {lo, kTwoPi}});
}

namespace {

struct StepWorkspace {
  Vector x;
  Vector nu;
  Vector proposal;
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  explicit StepWorkspace(Eigen::Index d) : x(d), nu(d), proposal(d) {}
};

// Advances z in place; false means every attempt produced an empty arc and z
// was left unchanged.
bool advance(Vector& z, const ConditionalGaussian& g, const OrthantConstraint& c, Engine& rng,
             StepWorkspace& ws) {
  const Eigen::Index d = g.dim();
  ws.x = z - g.mean;
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    for (Eigen::Index k = 0; k < d; ++k) ws.nu(k) = ws.normal(rng);
    // precision = L L^T, so L^{-T} e ~ N(0, precision^{-1}).
    g.precision_factor.L.transpose().triangularView<Eigen::Upper>().solveInPlace(ws.nu);

    ArcSet feasible = ArcSet::full();
    for (Eigen::Index k = 0; k < d && !feasible.is_empty(); ++k)
      feasible = feasible.intersect(ellipse_arc_intersection(
          g.mean(k), ws.x(k), ws.nu(k), c.signs[static_cast<std::size_t>(k)]));
    if (!feasible.contains(0.0, 1e-12))
      feasible = feasible.unite(ArcSet::from_intervals({{0.0, 0.0}}));
    if (!(feasible.measure() > 0.0)) break;

    const double angle = feasible.at_fraction(ws.unit(rng));
    ws.proposal = g.mean + ws.x * std::cos(angle) + ws.nu * std::sin(angle);
    // Endpoint rounding can land a hair outside; the sign test is exact.
    if (c.satisfied_by(ws.proposal)) {
      z.swap(ws.proposal);
      return true;
    }
  }
  return false;
}

void step(Vector& z, const ConditionalGaussian& g, const OrthantConstraint& c, Engine& rng,
          StepWorkspace& ws, SamplerDiagnostics* diagnostics) {
  if (diagnostics) diagnostics->steps.fetch_add(1, std::memory_order_relaxed);
  if (!advance(z, g, c, rng, ws) && diagnostics)
    diagnostics->empty_arc_fallbacks.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

Vector liness_step(const Vector& current, const ConditionalGaussian& g,
                   const OrthantConstraint& c, Engine& rng, SamplerDiagnostics* diagnostics) {
  const Eigen::Index d = g.dim();
  if (current.size() != d || static_cast<Eigen::Index>(c.signs.size()) != d)
    throw InputShapeError("liness_step: dimension mismatch");
  StepWorkspace ws(d);
  Vector z = current;
  step(z, g, c, rng, ws, diagnostics);
  return z;
}

LatentDraws sample_latents(const Dataset& data, const ModelState& state, int draws,
                           const SeedKey& key, const SamplerConfig& config, int threads,
                           SamplerDiagnostics* diagnostics) {
  if (draws < 1) throw ParameterError("sample_latents: H must be at least 1");
  if (config.burn_in < 0 || config.thin < 1)
    throw ParameterError("sample_latents: burn_in must be >= 0 and thin >= 1");
  const Eigen::Index n = data.n();
  const Eigen::Index q = data.q();
  const Eigen::Index qc = data.q_continuous();
  const Eigen::Index qb = q - qc;

  LatentDraws out;
  out.seeds.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    out.seeds[static_cast<std::size_t>(i)] =
        derive_seed(key.global_seed, {key.grid_index, key.iteration, static_cast<std::uint64_t>(i)});
  if (qb == 0) {
    out.draws.push_back(data.Y);
    return out;
  }

  const Matrix omega_bb = state.Omega.bottomRightCorner(qb, qb);
  const linalg::CholeskyFactor bb_factor = linalg::cholesky_or_throw(omega_bb, "Omega_BB");
  // m_{B|C} = m_B - K (y_C - m_C) with K = Omega_BB^{-1} Omega_BC.
  const Matrix K = qc > 0 ? bb_factor.solve(state.Omega.bottomLeftCorner(qb, qc)) : Matrix();
  const Matrix means = data.X * state.B;  // n x q

  out.draws.assign(static_cast<std::size_t>(draws), data.Y);

  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    Vector m_b = means.row(i).tail(qb).transpose();
    if (qc > 0) {
      const Vector resid = data.Y.row(i).head(qc).transpose() - means.row(i).head(qc).transpose();
      m_b -= K * resid;
    }
    const ConditionalGaussian g{std::move(m_b), omega_bb, bb_factor};
    std::vector<double> y_b(static_cast<std::size_t>(qb));
    for (Eigen::Index k = 0; k < qb; ++k) y_b[static_cast<std::size_t>(k)] = data.Y(i, qc + k);
    const auto constraint = OrthantConstraint::from_binary_outcomes(y_b);

    Engine rng = make_engine(out.seeds[row]);
    StepWorkspace ws(qb);
    Vector z(qb);
    for (Eigen::Index k = 0; k < qb; ++k)
      z(k) = constraint.signs[static_cast<std::size_t>(k)] > 0 ? 0.5 : -0.5;
    for (int b = 0; b < config.burn_in; ++b) step(z, g, constraint, rng, ws, diagnostics);
    for (int h = 0; h < draws; ++h) {
      for (int t = 0; t < config.thin; ++t) step(z, g, constraint, rng, ws, diagnostics);
      out.draws[static_cast<std::size_t>(h)].row(i).tail(qb) = z.transpose();
    }
  });
  return out;
}

}  // namespace mixssl
