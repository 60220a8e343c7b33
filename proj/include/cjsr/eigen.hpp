#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "cjsr/error.hpp"
#include "cjsr/matrix.hpp"

namespace cjsr {

enum class NormKind { spectral, frobenius };

namespace detail {

inline double sign_of(double magnitude, double carrier) {
  return carrier >= 0.0 ? magnitude : -magnitude;
}

/// EISPACK-style balancing. First isolates eigenvalues that can be read
/// straight off the diagonal: rows (then columns) with no other entry in
/// the active window are permuted out, which deflates structural zero
/// rows exactly. The remaining window [low, high] is then equilibrated by
/// radix-2 diagonal similarity scaling. Eigenvalues are unchanged.
inline void balance_in_place(Matrix& a, std::size_t& low_out, std::size_t& high_out) {
  const long n = static_cast<long>(a.rows());
  long low = 0;
  long high = n - 1;

  auto exchange = [&](long j, long m) {
    if (j == m) return;
    for (long i = 0; i <= high; ++i) std::swap(a(i, j), a(i, m));
    for (long i = low; i < n; ++i) std::swap(a(j, i), a(m, i));
  };

  // rows whose only window entry is the diagonal isolate an eigenvalue
  bool moved = true;
  while (moved && high > 0) {
    moved = false;
    for (long j = high; j >= 0; --j) {
      bool isolated = true;
      for (long i = 0; i <= high; ++i)
        if (i != j && a(j, i) != 0.0) {
          isolated = false;
          break;
        }
      if (isolated) {
        exchange(j, high);
        --high;
        moved = true;
        break;
      }
    }
  }
  // columns likewise, pushed to the front
  moved = true;
  while (moved && low < high) {
    moved = false;
    for (long j = low; j <= high; ++j) {
      bool isolated = true;
      for (long i = low; i <= high; ++i)
        if (i != j && a(i, j) != 0.0) {
          isolated = false;
          break;
        }
      if (isolated) {
        exchange(j, low);
        ++low;
        moved = true;
        break;
      }
    }
  }

  // iterative scaling of the remaining window
  constexpr double radix = 2.0;
  constexpr double b2 = radix * radix;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (long i = low; i <= high; ++i) {
      double c = 0.0, r = 0.0;
      for (long j = low; j <= high; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= b2;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= b2;
      }
      if ((c + r) / f < 0.95 * s) {
        const double ginv = 1.0 / f;
        converged = false;
        for (long j = low; j < n; ++j) a(i, j) *= ginv;
        for (long j = 0; j <= high; ++j) a(j, i) *= f;
      }
    }
  }
  low_out = static_cast<std::size_t>(low);
  high_out = static_cast<std::size_t>(high);
}

/// Householder reduction to upper Hessenberg form inside the balanced
/// window (eigenvalues only, no transform accumulation).
inline void hessenberg_in_place(Matrix& a, std::size_t low, std::size_t high) {
  if (high < low + 2) return;
  std::vector<double> v(a.rows());
  for (std::size_t k = low; k + 2 <= high; ++k) {
    // Householder vector for column k, rows k+1..high.
    double colmax = 0.0;
    for (std::size_t i = k + 1; i <= high; ++i) colmax = std::max(colmax, std::abs(a(i, k)));
    if (colmax == 0.0) continue;
    double sq = 0.0;
    for (std::size_t i = k + 1; i <= high; ++i) {
      v[i] = a(i, k) / colmax;
      sq += v[i] * v[i];
    }
    double alpha = -sign_of(std::sqrt(sq), v[k + 1]);
    v[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i <= high; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // A <- P A on the window rows.
    for (std::size_t j = k; j <= high; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i <= high; ++i) s += v[i] * a(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i <= high; ++i) a(i, j) -= s * v[i];
    }
    // A <- A P on the window columns.
    for (std::size_t i = low; i <= high; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j <= high; ++j) s += a(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j <= high; ++j) a(i, j) -= s * v[j];
    }
    // Column k is now (…, alpha·colmax, 0, …, 0) up to rounding; force the
    // structural zeros so deflation tests see them exactly.
    a(k + 1, k) = alpha * colmax;
    for (std::size_t i = k + 2; i <= high; ++i) a(i, k) = 0.0;
  }
}

inline void apply_reflector(Matrix& h, long l, long en, long k, bool notlast, double x, double y,
                            double zz, double q, double r) {
  const long jmax = en;
  const long imax = std::min(en, k + 3);
  auto H = [&](long i, long j) -> double& {
    return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  if (!notlast) {
    for (long j = k; j <= jmax; ++j) {
      const double p = H(k, j) + q * H(k + 1, j);
      H(k, j) -= p * x;
      H(k + 1, j) -= p * y;
    }
    for (long i = l; i <= imax; ++i) {
      const double p = x * H(i, k) + y * H(i, k + 1);
      H(i, k) -= p;
      H(i, k + 1) -= p * q;
    }
  } else {
    for (long j = k; j <= jmax; ++j) {
      const double p = H(k, j) + q * H(k + 1, j) + r * H(k + 2, j);
      H(k, j) -= p * x;
      H(k + 1, j) -= p * y;
      H(k + 2, j) -= p * zz;
    }
    for (long i = l; i <= imax; ++i) {
      const double p = x * H(i, k) + y * H(i, k + 1) + zz * H(i, k + 2);
      H(i, k) -= p;
      H(i, k + 1) -= p * q;
      H(i, k + 2) -= p * r;
    }
  }
}

/// Francis double-shift QR on an upper Hessenberg matrix, reading
/// eigenvalues off the deflated 1x1 and 2x2 diagonal blocks inside the
/// balanced window; eigenvalues isolated by balancing are read straight
/// off the diagonal. Translated from the EISPACK HQR scheme. Throws
/// numerical_error carrying the largest converged |eigenvalue| if the
/// step budget is exhausted.
inline std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix h, std::size_t low_in,
                                                                std::size_t high_in,
                                                                std::size_t max_steps) {
  const std::size_t n = h.rows();
  const long low = static_cast<long>(low_in);
  const long high = static_cast<long>(high_in);
  std::vector<double> wr(n, 0.0), wi(n, 0.0);
  for (long i = 0; i < static_cast<long>(n); ++i) {
    if (i < low || i > high) {
      wr[static_cast<std::size_t>(i)] = h(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
      wi[static_cast<std::size_t>(i)] = 0.0;
    }
  }

  double anorm = 0.0;
  {
    long k = low;
    for (long i = low; i <= high; ++i) {
      for (long j = k; j <= high; ++j)
        anorm += std::abs(h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      k = i;
    }
  }

  long en = high;
  double t = 0.0;
  long steps_left = static_cast<long>(max_steps);
  auto H = [&](long i, long j) -> double& {
    return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };

  while (en >= low) {
    long its = 0;
    const long na = en - 1;
    const long enm2 = na - 1;
    bool deflated = false;

    while (!deflated) {
      // Look for a single small sub-diagonal element.
      long l = en;
      for (; l > low; --l) {
        double s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
        if (s == 0.0) s = anorm;
        const double tst1 = s;
        const double tst2 = tst1 + std::abs(H(l, l - 1));
        if (tst2 == tst1) break;
      }

      double x = H(en, en);
      if (l == en) {
        // One real root.
        wr[static_cast<std::size_t>(en)] = x + t;
        wi[static_cast<std::size_t>(en)] = 0.0;
        en = na;
        deflated = true;
        break;
      }
      double y = H(na, na);
      double w = H(en, na) * H(na, en);
      if (l == na) {
        // Two roots from the trailing 2x2 block.
        double p = (y - x) / 2.0;
        const double q = p * p + w;
        double zz = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          zz = p + sign_of(zz, p);
          wr[static_cast<std::size_t>(na)] = x + zz;
          wr[static_cast<std::size_t>(en)] =
              (zz != 0.0) ? x - w / zz : wr[static_cast<std::size_t>(na)];
          wi[static_cast<std::size_t>(na)] = 0.0;
          wi[static_cast<std::size_t>(en)] = 0.0;
        } else {
          wr[static_cast<std::size_t>(na)] = x + p;
          wr[static_cast<std::size_t>(en)] = x + p;
          wi[static_cast<std::size_t>(na)] = zz;
          wi[static_cast<std::size_t>(en)] = -zz;
        }
        en = enm2;
        deflated = true;
        break;
      }

      if (steps_left == 0) {
        double partial = 0.0;
        for (std::size_t i = static_cast<std::size_t>(en) + 1; i < n; ++i)
          partial = std::max(partial, std::hypot(wr[i], wi[i]));
        numerical_error err(
            "QR iteration did not converge within " + std::to_string(max_steps) + " steps",
            partial);
        throw err;
      }
      if (its == 10 || its == 20) {
        // Exceptional shift.
        t += x;
        for (long i = low; i <= en; ++i) H(i, i) -= x;
        const double s = std::abs(H(en, na)) + std::abs(H(na, enm2));
        x = 0.75 * s;
        y = x;
        w = -0.4375 * s * s;
      }
      ++its;
      --steps_left;

      // Look for two consecutive small sub-diagonal elements.
      long m = enm2;
      double p = 0.0, q = 0.0, r = 0.0;
      for (; m >= l; --m) {
        const double zz = H(m, m);
        const double rr = x - zz;
        const double ss = y - zz;
        p = (rr * ss - w) / H(m + 1, m) + H(m, m + 1);
        q = H(m + 1, m + 1) - zz - rr - ss;
        r = H(m + 2, m + 1);
        const double sc = std::abs(p) + std::abs(q) + std::abs(r);
        p /= sc;
        q /= sc;
        r /= sc;
        if (m == l) break;
        const double tst1 =
            std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(zz) + std::abs(H(m + 1, m + 1)));
        const double tst2 = tst1 + std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r));
        if (tst2 == tst1) break;
      }
      for (long i = m + 2; i <= en; ++i) {
        H(i, i - 2) = 0.0;
        if (i != m + 2) H(i, i - 3) = 0.0;
      }

      // Double QR step on rows l..en, columns m..en.
      for (long k = m; k <= na; ++k) {
        const bool notlast = (k != na);
        if (k != m) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          const double xx = std::abs(p) + std::abs(q) + std::abs(r);
          if (xx == 0.0) continue;
          p /= xx;
          q /= xx;
          r /= xx;
          const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
          H(k, k - 1) = -s * xx;
          p += s;
          x = p / s;
          y = q / s;
          const double zz = r / s;
          q /= p;
          r /= p;
          apply_reflector(h, l, en, k, notlast, x, y, zz, q, r);
        } else {
          const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
          if (l != m) H(k, k - 1) = -H(k, k - 1);
          p += s;
          x = p / s;
          y = q / s;
          const double zz = r / s;
          q /= p;
          r /= p;
          apply_reflector(h, l, en, k, notlast, x, y, zz, q, r);
        }
      }
    }
  }

  std::vector<std::complex<double>> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = {wr[i], wi[i]};
  return eigs;
}

/// Cyclic Jacobi eigenvalue iteration for a symmetric matrix; returns the
/// largest eigenvalue. Quadratically convergent; 60 sweeps is far beyond
/// what desk-scale matrices need.
inline double jacobi_max_eigenvalue(Matrix m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  const double fnorm = frobenius_norm(m);
  if (fnorm == 0.0) return 0.0;
  const double tol = 1e-15 * fnorm;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    off = std::sqrt(2.0 * off);
    if (off <= tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) <= 1e-3 * tol) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double tau =
            sign_of(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tau * tau + 1.0);
        const double s = tau * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  double best = m(0, 0);
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, m(i, i));
  return best;
}

}  // namespace detail

/// All (possibly complex) eigenvalues of a square matrix, via balancing,
/// Householder Hessenberg reduction and Francis double-shift QR.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  if (!a.square()) throw invalid_input("eigenvalues need a square matrix");
  const std::size_t n = a.rows();
  const double s = max_abs(a);
  if (s == 0.0) return std::vector<std::complex<double>>(n, {0.0, 0.0});
  Matrix work = scale(a, 1.0 / s);
  std::size_t low = 0, high = 0;
  detail::balance_in_place(work, low, high);
  detail::hessenberg_in_place(work, low, high);
  auto eigs = detail::hessenberg_eigenvalues(std::move(work), low, high, 100 * n);
  for (auto& e : eigs) e *= s;
  return eigs;
}

/// Spectral radius: max |lambda| over all eigenvalues.
inline double spectral_radius(const Matrix& a) {
  if (!a.square()) throw invalid_input("spectral radius needs a square matrix");
  const double s = max_abs(a);
  if (s == 0.0) return 0.0;
  Matrix work = scale(a, 1.0 / s);
  std::size_t low = 0, high = 0;
  detail::balance_in_place(work, low, high);
  detail::hessenberg_in_place(work, low, high);
  std::vector<std::complex<double>> eigs;
  try {
    eigs = detail::hessenberg_eigenvalues(std::move(work), low, high, 100 * a.rows());
  } catch (numerical_error& e) {
    e.partial_result *= s;
    throw;
  }
  double r = 0.0;
  for (const auto& e : eigs) r = std::max(r, std::abs(e));
  return s * r;
}

/// Operator 2-norm (largest singular value), computed as the square root of
/// the largest eigenvalue of A^T A by cyclic Jacobi.
inline double operator_norm(const Matrix& a) {
  const double s = max_abs(a);
  if (s == 0.0) return 0.0;
  const Matrix unit = scale(a, 1.0 / s);
  const Matrix gram = (a.rows() >= a.cols()) ? multiply(transpose(unit), unit)
                                             : multiply(unit, transpose(unit));
  const double lmax = detail::jacobi_max_eigenvalue(gram);
  return s * std::sqrt(std::max(0.0, lmax));
}

inline double matrix_norm(const Matrix& a, NormKind kind) {
  return kind == NormKind::spectral ? operator_norm(a) : frobenius_norm(a);
}

}  // namespace cjsr
