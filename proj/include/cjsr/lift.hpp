#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cjsr/eigen.hpp"
#include "cjsr/error.hpp"
#include "cjsr/matrix.hpp"
#include "cjsr/subshift.hpp"

namespace cjsr {

/// A finite set of d x d state matrices together with its K x K transition
/// sign matrix.
class MatrixSystem {
 public:
  MatrixSystem(std::vector<Matrix> matrices, SignMatrix sign)
      : matrices_(std::move(matrices)), sign_(std::move(sign)) {
    if (matrices_.empty()) throw invalid_input("system needs at least one state matrix");
    if (matrices_.size() != sign_.size())
      throw invalid_input("sign matrix size must match the number of state matrices");
    d_ = matrices_.front().rows();
    for (const Matrix& m : matrices_)
      if (!m.square() || m.rows() != d_)
        throw invalid_input("state matrices must be square and of equal dimension");
  }

  std::size_t alphabet_size() const { return matrices_.size(); }
  std::size_t dimension() const { return d_; }
  const std::vector<Matrix>& matrices() const { return matrices_; }
  const Matrix& matrix(std::size_t k) const { return matrices_[k]; }
  const SignMatrix& sign() const { return sign_; }

  Matrix product(const Word& word) const {
    return product_along_word(matrices_, word);
  }

  friend bool operator==(const MatrixSystem&, const MatrixSystem&) = default;

 private:
  std::vector<Matrix> matrices_;
  SignMatrix sign_;
  std::size_t d_;
};

/// The row-selector matrix delta_k^T S_k: row k of the sign matrix placed
/// in row k of an otherwise zero K x K matrix.
inline Matrix sign_row_selector(const SignMatrix& sign, std::size_t k) {
  const std::size_t K = sign.size();
  Matrix out(K, K);
  for (std::size_t j = 0; j < K; ++j)
    out(k, j) = sign.allows(static_cast<int>(k), static_cast<int>(j)) ? 1.0 : 0.0;
  return out;
}

/// The K matrices S^(k) = (delta_k^T S_k) (x) S_k of size Kd x Kd. Free
/// products of lifted matrices annihilate exactly on non-admissible words,
/// which turns constrained products into free ones.
class LiftedSystem {
 public:
  explicit LiftedSystem(const MatrixSystem& sys)
      : K_(sys.alphabet_size()), d_(sys.dimension()) {
    lifted_.reserve(K_);
    for (std::size_t k = 0; k < K_; ++k) {
      // Direct block placement: block (k, j) = S_k when s_kj = 1, zero
      // elsewhere. Identical to kron(sign_row_selector(sign, k), S_k).
      Matrix m(K_ * d_, K_ * d_);
      const Matrix& base = sys.matrix(k);
      for (std::size_t j = 0; j < K_; ++j) {
        if (!sys.sign().allows(static_cast<int>(k), static_cast<int>(j))) continue;
        for (std::size_t p = 0; p < d_; ++p)
          for (std::size_t q = 0; q < d_; ++q)
            m(k * d_ + p, j * d_ + q) = base(p, q);
      }
      lifted_.push_back(std::move(m));
    }
  }

  std::size_t alphabet_size() const { return K_; }
  std::size_t base_dimension() const { return d_; }
  std::size_t lifted_dimension() const { return K_ * d_; }
  const std::vector<Matrix>& matrices() const { return lifted_; }
  const Matrix& matrix(std::size_t k) const { return lifted_[k]; }

  Matrix product(const Word& word) const {
    return product_along_word(lifted_, word);
  }

 private:
  std::size_t K_;
  std::size_t d_;
  std::vector<Matrix> lifted_;
};

inline LiftedSystem build_lift(const MatrixSystem& sys) { return LiftedSystem(sys); }

/// Whether the lifted product along `word` is numerically zero. True for
/// every non-admissible word of length >= 2: structural zeros propagate
/// exactly, so the product vanishes bit-exactly.
inline bool check_annihilation(const LiftedSystem& lift, const Word& word) {
  if (word.size() < 2) throw invalid_input("annihilation check needs a word of length >= 2");
  double factor_scale = 0.0;
  for (const Matrix& m : lift.matrices())
    factor_scale = std::max(factor_scale, operator_norm(m));
  return nearly_zero(lift.product(word), factor_scale);
}

/// For an admissible word, the pair
///   (s_{last,first} * rho(base product), rho(lifted product)).
/// The two components agree: the wrap-around sign entry accounts for the
/// lifted product's trace structure.
inline std::pair<double, double> lifted_vs_base_radius(const MatrixSystem& sys,
                                                       const LiftedSystem& lift,
                                                       const Word& word) {
  if (!is_admissible(word, sys.sign()))
    throw invalid_input("lifted_vs_base_radius needs an admissible word");
  const double wrap = sys.sign().allows(word.back(), word.front()) ? 1.0 : 0.0;
  const double base = wrap * spectral_radius(sys.product(word));
  const double lifted = spectral_radius(lift.product(word));
  return {base, lifted};
}

}  // namespace cjsr
