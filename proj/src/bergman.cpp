#include "invmet/bergman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

namespace invmet {

namespace {

constexpr std::size_t kChunk = 4096;

int thread_count() {
  if (const char* env = std::getenv("INVMET_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return std::min(t, 256);
  }
  return 1;
}

void enumerate(int dim, int remaining, std::vector<int>& cur, int pos,
               std::vector<std::vector<int>>& out) {
  if (pos == dim - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[pos] = k;
    enumerate(dim, remaining - k, cur, pos + 1, out);
  }
}

// Powers z_j^k for k = 0..degree.
std::vector<std::vector<cplx>> power_table(const CPoint& z, int degree) {
  std::vector<std::vector<cplx>> pw(z.size(), std::vector<cplx>(degree + 1));
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    pw[j][0] = 1.0;
    for (int k = 1; k <= degree; ++k) pw[j][k] = pw[j][k - 1] * z[j];
  }
  return pw;
}

void monomial_values(const MonomialBasis& basis, const CPoint& z, cplx* out) {
  const auto pw = power_table(z, basis.degree);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    cplx v = 1.0;
    for (int j = 0; j < basis.dim; ++j) v *= pw[j][basis.multi_indices[a][j]];
    out[a] = v;
  }
}

// sum_i x_i conj(y_i), written out so that swapping x and y conjugates the
// result exactly.
cplx conj_sum(const CPoint& x, const CPoint& y) {
  double re = 0.0, im = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xi * yr - xr * yi;
  }
  return {re, im};
}

// Truncated bivariate series sum c(p, q) s^p t^q with p, q <= 2.
using Series = std::array<std::array<cplx, 3>, 3>;

Series series_mul(const Series& a, const Series& b) {
  Series r{};
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int p2 = 0; p + p2 < 3; ++p2)
        for (int q2 = 0; q + q2 < 3; ++q2) r[p + p2][q + q2] += a[p][q] * b[p2][q2];
  return r;
}

}  // namespace

MonomialBasis MonomialBasis::make(int dim, int degree) {
  if (dim < 1) throw DomainError("MonomialBasis: dim must be >= 1");
  if (degree < 0) throw DomainError("MonomialBasis: degree must be >= 0");
  MonomialBasis b;
  b.dim = dim;
  b.degree = degree;
  std::vector<int> cur(dim);
  for (int d = 0; d <= degree; ++d) enumerate(dim, d, cur, 0, b.multi_indices);
  return b;
}

int default_degree(int dim) { return dim == 1 ? 12 : 8; }
std::size_t default_count(int dim) { return dim == 1 ? 200000 : 1000000; }

GramMatrix gram_matrix(const Domain& domain, int degree, std::size_t count, std::uint64_t seed) {
  if (degree < 0) throw DomainError("gram_matrix: degree must be >= 0");
  if (count < 1000) throw DomainError("gram_matrix: count must be >= 1000");
  GramMatrix g;
  g.basis = MonomialBasis::make(domain.dim(), degree);
  g.quadrature_count = count;
  g.seed = seed;
  const InteriorSample sample = sample_interior_with_stats(domain, count, seed);
  g.volume_estimate = sample.volume_estimate();
  const double weight = sample.box_volume / static_cast<double>(sample.generated);

  const std::size_t nb = g.basis.size();
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<CMatrix> partial(chunks);
  const int threads = thread_count();
  const auto work = [&](std::size_t first) {
    const std::size_t stride = static_cast<std::size_t>(threads);
    CMatrix rows(kChunk, nb);
    std::vector<cplx> vals(nb);
    for (std::size_t c = first; c < chunks; c += stride) {
      const std::size_t lo = c * kChunk;
      const std::size_t hi = std::min(count, lo + kChunk);
      rows.resize(static_cast<Eigen::Index>(hi - lo), static_cast<Eigen::Index>(nb));
      for (std::size_t i = lo; i < hi; ++i) {
        monomial_values(g.basis, sample.points[i], vals.data());
        for (std::size_t a = 0; a < nb; ++a) rows(i - lo, a) = vals[a];
      }
      partial[c] = rows.adjoint() * rows;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, static_cast<std::size_t>(t));
    for (auto& th : pool) th.join();
  }
  g.entries = CMatrix::Zero(nb, nb);
  for (const CMatrix& p : partial) g.entries += p;
  g.entries *= weight;
  g.entries = 0.5 * (g.entries + g.entries.adjoint()).eval();
  return g;
}

KernelEvaluator orthonormalize(const GramMatrix& gram) {
  const CMatrix& G = gram.entries;
  const Eigen::Index nb = G.rows();
  if (nb == 0 || G.cols() != nb) throw DomainError("orthonormalize: empty or non-square Gram matrix");
  const double tol = 1e-10 * G.diagonal().real().sum();

  // Right-looking pivoted Cholesky on a working copy.
  CMatrix A = G;
  std::vector<Eigen::Index> perm(nb);
  for (Eigen::Index i = 0; i < nb; ++i) perm[i] = i;
  CMatrix L = CMatrix::Zero(nb, nb);
  Eigen::Index rank = 0;
  for (; rank < nb; ++rank) {
    Eigen::Index best = rank;
    for (Eigen::Index i = rank + 1; i < nb; ++i) {
      if (A(perm[i], perm[i]).real() > A(perm[best], perm[best]).real()) best = i;
    }
    std::swap(perm[rank], perm[best]);
    L.row(rank).swap(L.row(best));
    const double pivot = A(perm[rank], perm[rank]).real();
    if (pivot < -tol) {
      throw NumericalError("orthonormalize: Gram matrix indefinite at leading minor " +
                           std::to_string(rank + 1) + " (monomial index " +
                           std::to_string(perm[rank]) + ")");
    }
    if (pivot <= tol) break;
    const double s = std::sqrt(pivot);
    L(rank, rank) = s;
    for (Eigen::Index i = rank + 1; i < nb; ++i) L(i, rank) = A(perm[i], perm[rank]) / s;
    for (Eigen::Index i = rank + 1; i < nb; ++i) {
      for (Eigen::Index j = rank + 1; j < nb; ++j) {
        A(perm[i], perm[j]) -= L(i, rank) * std::conj(L(j, rank));
      }
    }
  }
  if (rank == 0) throw NumericalError("orthonormalize: Gram matrix has no positive pivot");

  // C_S = L11^{-H} on the kept monomials S = perm[0..rank).
  const CMatrix L11 = L.topLeftCorner(rank, rank);
  const CMatrix CS = L11.adjoint().triangularView<Eigen::Upper>().solve(CMatrix::Identity(rank, rank));
  CMatrix coeff = CMatrix::Zero(nb, rank);
  for (Eigen::Index i = 0; i < rank; ++i) coeff.row(perm[i]) = CS.row(i);
  std::vector<std::size_t> dropped;
  for (Eigen::Index i = rank; i < nb; ++i) dropped.push_back(static_cast<std::size_t>(perm[i]));
  std::sort(dropped.begin(), dropped.end());
  return KernelEvaluator(gram.basis, std::move(coeff), std::move(dropped), gram.seed,
                         gram.quadrature_count);
}

KernelEvaluator build_kernel(const Domain& domain, int degree, std::size_t count, std::uint64_t seed) {
  return orthonormalize(gram_matrix(domain, degree, count, seed));
}

KernelEvaluator::KernelEvaluator(MonomialBasis basis, CMatrix coeff, std::vector<std::size_t> dropped,
                                 std::uint64_t seed, std::uint64_t count)
    : basis_(std::move(basis)), coeff_(std::move(coeff)), dropped_(std::move(dropped)), seed_(seed), count_(count) {
  if (static_cast<std::size_t>(coeff_.rows()) != basis_.size()) {
    throw DomainError("KernelEvaluator: coefficient rows do not match the basis size");
  }
}

CMatrix KernelEvaluator::monomial_jet(const CPoint& z) const {
  // n = 1: columns are d^p z^k for p = 0, 1, 2. n > 1: value, then d/dz_j.
  const int n = basis_.dim;
  const int D = basis_.degree;
  const auto pw = power_table(z, D);
  const Eigen::Index nb = static_cast<Eigen::Index>(basis_.size());
  if (n == 1) {
    CMatrix jet = CMatrix::Zero(nb, 3);
    for (Eigen::Index a = 0; a < nb; ++a) {
      const int k = basis_.multi_indices[a][0];
      jet(a, 0) = pw[0][k];
      if (k >= 1) jet(a, 1) = static_cast<double>(k) * pw[0][k - 1];
      if (k >= 2) jet(a, 2) = static_cast<double>(k * (k - 1)) * pw[0][k - 2];
    }
    return jet;
  }
  CMatrix jet = CMatrix::Zero(nb, 1 + n);
  for (Eigen::Index a = 0; a < nb; ++a) {
    const auto& alpha = basis_.multi_indices[a];
    cplx v = 1.0;
    for (int j = 0; j < n; ++j) v *= pw[j][alpha[j]];
    jet(a, 0) = v;
    for (int j = 0; j < n; ++j) {
      if (alpha[j] == 0) continue;
      cplx d = static_cast<double>(alpha[j]);
      for (int k = 0; k < n; ++k) d *= pw[k][alpha[k] - (k == j ? 1 : 0)];
      jet(a, 1 + j) = d;
    }
  }
  return jet;
}

CPoint KernelEvaluator::basis_values(const CPoint& z) const {
  if (z.size() != basis_.dim) throw DomainError("KernelEvaluator: dimension mismatch");
  require_finite(z, "KernelEvaluator");
  CPoint m(static_cast<Eigen::Index>(basis_.size()));
  monomial_values(basis_, z, m.data());
  return coeff_.transpose() * m;
}

cplx KernelEvaluator::kernel(const CPoint& z, const CPoint& w) const {
  return conj_sum(basis_values(z), basis_values(w));
}

double KernelEvaluator::kernel_diag(const CPoint& z) const { return basis_values(z).squaredNorm(); }

CMatrix KernelEvaluator::metric_tensor(const CPoint& z) const {
  if (z.size() != basis_.dim) throw DomainError("KernelEvaluator: dimension mismatch");
  require_finite(z, "KernelEvaluator");
  const int n = basis_.dim;
  const CMatrix phi = coeff_.transpose() * monomial_jet(z);  // rank x (1 + n)
  const double K = phi.col(0).squaredNorm();
  if (!(K > 0.0)) throw NumericalError("bergman_metric: nonpositive kernel value");
  CMatrix g(n, n);
  for (int j = 0; j < n; ++j) {
    const cplx Kj = conj_sum(phi.col(1 + j), phi.col(0));
    for (int k = 0; k < n; ++k) {
      const cplx Kk_bar = conj_sum(phi.col(0), phi.col(1 + k));
      const cplx Kjk = conj_sum(phi.col(1 + j), phi.col(1 + k));
      g(j, k) = (K * Kjk - Kj * Kk_bar) / (K * K);
    }
  }
  return g;
}

double KernelEvaluator::metric(const CPoint& z, const CDirection& v) const {
  if (v.size() != basis_.dim) throw DomainError("bergman_metric: dimension mismatch");
  const CMatrix g = metric_tensor(z);
  // sum v_j conj(v_k) g_{j kbar}
  return (v.transpose() * g * v.conjugate())(0, 0).real();
}

double KernelEvaluator::curvature_1d(const CPoint& z) const {
  if (basis_.dim != 1) throw Unsupported("bergman_curvature_1d: defined for n = 1 only");
  require_finite(z, "bergman_curvature_1d");
  const CMatrix phi = coeff_.transpose() * monomial_jet(z);  // rank x 3
  // Taylor coefficients of K in (s, t) = (z - z0, conj(z - z0)).
  const double fact[3] = {1.0, 1.0, 2.0};
  Series k{};
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) k[p][q] = conj_sum(phi.col(p), phi.col(q)) / (fact[p] * fact[q]);
  const cplx k00 = k[0][0];
  if (!(k00.real() > 0.0)) throw NumericalError("bergman_curvature_1d: nonpositive kernel value");
  Series u = k;
  u[0][0] = 0.0;
  for (auto& row : u)
    for (auto& c : row) c /= k00;
  // log(1 + u) to total degree 4.
  Series L{};
  Series power = u;
  for (int m = 1; m <= 4; ++m) {
    const double c = (m % 2 ? 1.0 : -1.0) / m;
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) L[p][q] += c * power[p][q];
    power = series_mul(power, u);
  }
  // lambda = L_{1 1bar}, and its derivatives from the same series.
  const double lambda = L[1][1].real();
  const cplx lam_s = 2.0 * L[2][1];
  const cplx lam_t = 2.0 * L[1][2];
  const double lam_st = (4.0 * L[2][2]).real();
  if (!(lambda > 0.0)) throw NumericalError("bergman_curvature_1d: nonpositive metric");
  const double ddbar_log = (lambda * lam_st - (lam_s * lam_t).real()) / (lambda * lambda);
  return -ddbar_log / lambda;
}

void KernelEvaluator::save(std::ostream& out) const {
  out << "invmet-kernel 1\n";
  out << "dim " << basis_.dim << "\n";
  out << "degree " << basis_.degree << "\n";
  out << "seed " << seed_ << "\n";
  out << "count " << count_ << "\n";
  out << "rank " << coeff_.cols() << "\n";
  out << "dropped " << dropped_.size();
  for (std::size_t d : dropped_) out << " " << d;
  out << "\n";
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < coeff_.rows(); ++r) {
    for (Eigen::Index c = 0; c < coeff_.cols(); ++c) {
      out << (c ? " " : "") << coeff_(r, c).real() << " " << coeff_(r, c).imag();
    }
    out << "\n";
  }
}

KernelEvaluator KernelEvaluator::load(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "invmet-kernel" || version != 1) {
    throw DomainError("kernel file: unrecognized header");
  }
  const auto field = [&](const char* name) {
    std::string key;
    std::uint64_t v = 0;
    if (!(in >> key >> v) || key != name) throw DomainError(std::string("kernel file: expected '") + name + "'");
    return v;
  };
  const int dim = static_cast<int>(field("dim"));
  const int degree = static_cast<int>(field("degree"));
  const std::uint64_t seed = field("seed");
  const std::uint64_t count = field("count");
  const auto rank = static_cast<Eigen::Index>(field("rank"));
  const std::size_t ndropped = field("dropped");
  std::vector<std::size_t> dropped(ndropped);
  for (auto& d : dropped) {
    if (!(in >> d)) throw DomainError("kernel file: truncated dropped list");
  }
  MonomialBasis basis = MonomialBasis::make(dim, degree);
  CMatrix coeff(static_cast<Eigen::Index>(basis.size()), rank);
  for (Eigen::Index r = 0; r < coeff.rows(); ++r) {
    for (Eigen::Index c = 0; c < rank; ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw DomainError("kernel file: truncated coefficient matrix");
      coeff(r, c) = cplx(re, im);
    }
  }
  return KernelEvaluator(std::move(basis), std::move(coeff), std::move(dropped), seed, count);
}

void KernelEvaluator::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write " + path);
  save(f);
}

KernelEvaluator KernelEvaluator::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read " + path);
  return load(f);
}

Domain image_domain(const Domain& domain, const SqueezingCertificate& cert) {
  const BiholoMap inv = cert.map.inverse_map();
  const Domain base = domain;
  std::ostringstream desc;
  desc << "image of " << domain.description() << " under " << cert.map.describe();
  return Domain::generic(
      domain.dim(), [base, inv](const CPoint& y) { return base.rho(inv(y)); },
      cert.b * (1.0 + 1e-6), false, {}, desc.str());
}

KernelBounds kernel_center_bounds(const KernelEvaluator& image_ev, const SqueezingCertificate& cert) {
  const int n = image_ev.dim();
  const double vol = unit_ball_volume(n);
  KernelBounds kb;
  kb.value = image_ev.kernel_diag(CPoint::Zero(n));
  kb.lower = 1.0 / (std::pow(cert.b, 2 * n) * vol);
  kb.upper = 1.0 / (std::pow(cert.a, 2 * n) * vol);
  return kb;
}

GrowthTable boundary_growth(const Domain& domain, const std::vector<CPoint>& path, int degree,
                            std::size_t count, std::uint64_t seed) {
  GrowthTable table;
  if (path.empty()) return table;
  std::vector<double> dist;
  for (const CPoint& x : path) {
    const double d = boundary_distance(domain, x);
    if (d >= 1.0) {
      throw DomainError("boundary_growth: boundary distance >= 1; rescale the domain into the unit ball");
    }
    dist.push_back(d);
  }
  // Model automorphisms all land on the same normalized model.
  std::optional<KernelEvaluator> model_ev;
  if (domain.kind() == ModelKind::Disc) model_ev = build_kernel(Domain::disc(), degree, count, seed);
  if (domain.kind() == ModelKind::Ball) model_ev = build_kernel(Domain::ball(domain.dim()), degree, count, seed);
  if (domain.kind() == ModelKind::Polydisc) {
    model_ev = build_kernel(Domain::polydisc(domain.dim()), degree, count, seed);
  }
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const SqueezingCertificate cert = squeeze_at(domain, path[i]);
    const double k0 = model_ev ? model_ev->kernel_diag(CPoint::Zero(domain.dim()))
                               : build_kernel(image_domain(domain, cert), degree, count, seed)
                                     .kernel_diag(CPoint::Zero(domain.dim()));
    GrowthRow row;
    row.point = path[i];
    row.distance = dist[i];
    row.kernel = k0 * std::norm(cert.map.jacobian_det(path[i]));
    const double lg = -std::log(dist[i]);
    row.scaled = row.kernel * dist[i] * dist[i] * lg * lg;
    c = std::min(c, row.scaled);
    table.rows.push_back(row);
  }
  table.constant = c;
  return table;
}

}  // namespace invmet
