#pragma once

// The zero-insertion transformation on binary expansions: bits of b in the
// block [gamma(k), gamma(k+1)) keep their positions and the whole block is
// shifted left by 2rk, i.e. 2r zero bits appear at every cut gamma(k). The
// map is strictly order-preserving and, for 2r > log2 h, preserves h-fold
// sum relations, so B_h[g] sets stay B_h[g].

#include <cstdint>
#include <string>
#include <vector>

#include "addrep/integer_set.hpp"

namespace addrep {

/// Strictly increasing cut-position map gamma with gamma(0) = 0, together
/// with its piecewise-linear real extension and the (bisected) inverse.
///
/// Forms: linear(s) is gamma(k) = s*k; table(v0=0, v1, ...) holds explicit
/// values and continues past the last entry by repeating the final
/// increment, so gamma stays total and strictly increasing.
class GammaSpec {
  public:
    static GammaSpec linear(std::uint64_t slope);
    static GammaSpec table(std::vector<std::uint64_t> values);

    /// Config syntax: "linear:17", "table:0,3,7,12", "from_epsilon:r=4,delta=0.5".
    static GammaSpec parse(const std::string& text);

    std::uint64_t operator()(std::uint64_t k) const;

    /// Piecewise-linear extension gamma(x) = gamma(k+1)(x-k) + gamma(k)(k+1-x)
    /// on [k, k+1].
    double real(double x) const;

    /// Inverse of the real extension, bisected to |error| <= 2^-30 in the
    /// argument. Requires y >= 0.
    double inverse(double y) const;

    std::string str() const;  // round-trips through parse()

  private:
    GammaSpec() = default;
    std::uint64_t slope_ = 0;                // linear form when > 0
    std::vector<std::uint64_t> table_;       // table form otherwise
};

/// Slope that makes gamma(x) = slope*x exceed log2(eps^{-1}(2^{-2rx})) for
/// power-form eps(x) = x^{-delta}: slope = ceil(2r/delta) + 1.
std::uint64_t gamma_slope_for_epsilon(double delta, long r);

struct TransformParams {
    long r = 1;  // half-length of the inserted zero block (2r zeros per cut)
    GammaSpec gamma = GammaSpec::linear(1);

    TransformParams(long r_, GammaSpec gamma_);

    /// Strict proposition hypothesis 2r > log2 h, i.e. 4^r > h.
    bool preserves_bhg(int h) const;
};

/// T_gamma^r(b) for b >= 1 (std::domain_error otherwise). Strictly
/// increasing in b.
mpz_class insert_zeros(const mpz_class& b, const TransformParams& params);

/// Elementwise transform; requires every element positive. Injectivity
/// keeps |result| = |B|.
IntegerSet transform_set(const IntegerSet& b, const TransformParams& params);

/// m_k = 2^{2rk + gamma(k)}, k >= 1. Residues of transformed values mod m_k
/// stay below m_k * 2^{-2r}.
mpz_class modulus_mk(std::uint64_t k, const TransformParams& params);

struct DensityRow {
    mpz_class x;
    std::uint64_t left = 0;   // T(B)(x)
    mpz_class right_bound;    // floor(x * 2^{-2r*gammainv(log2 x)})
    std::uint64_t right = 0;  // B(right_bound)
    bool strict = false;      // left > right
    bool vacuous = false;     // both sides zero
};

/// Evaluates both sides of the density comparison T(B)(x) > B(x * 2^{-2r *
/// gammainv(log2 x)}) at each x. The inner bound is floored before counting
/// (flooring only weakens the right side). Requires x >= 1.
std::vector<DensityRow> density_compare(const IntegerSet& b, const TransformParams& params,
                                        const std::vector<mpz_class>& xs);

/// CSV rows "x,left,right_bound,right,strict,vacuous".
std::string density_csv(const std::vector<DensityRow>& rows);

}  // namespace addrep
