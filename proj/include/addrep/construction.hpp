#pragma once

// The recursive construction that realizes a prescribed representation
// function: starting from a transformed B_h[g] set A_0, stage k inspects
// z_k and, when the current count falls short of f(z_k), adjoins the pair
// U_k = {u_{2k-1}, u_{2k}} whose (h-1,1)-fold sum telescopes to exactly
// z_k while every other combination lands far outside the working window.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "addrep/insert_zeros.hpp"
#include "addrep/integer_set.hpp"
#include "addrep/rep_count.hpp"

namespace addrep {

/// Construction parameter invariant violated (maps to CLI exit 3).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input set failed its B_h[g] certification (maps to CLI exit 4).
struct certification_error : std::runtime_error {
    certification_error(std::string msg, BhgWitness w)
        : std::runtime_error(std::move(msg)), witness(std::move(w)) {}
    BhgWitness witness;
};

/// Target f as a finite exception map over a finite default. This is the
/// minimal serializable family with liminf_{|n|->inf} f(n) >= g and a
/// computable n0: sub-g values can occur only at exception keys.
struct PrescribedFunction {
    ExtendedCount default_value = 1;
    std::map<mpz_class, ExtendedCount> exceptions;

    ExtendedCount operator()(const mpz_class& n) const;

    /// {"g": 1, "default": 1, "exceptions": {"0": 3, "7": "inf"}}
    /// Returns the function together with the file's g.
    static std::pair<PrescribedFunction, std::uint64_t> from_json(const Json& j);
    Json to_json(std::uint64_t g) const;
};

/// Least n0 >= 1 with f(n) >= g for all |n| >= n0: one past the largest
/// |key| among sub-g exceptions. Requires a finite default >= g
/// (std::invalid_argument otherwise).
mpz_class compute_n0(const PrescribedFunction& f, std::uint64_t g);

/// Smallest integer r with r > 1 + log2(h^2 + n0), computed exactly as the
/// least r with 2^{r-1} > h^2 + n0.
long choose_r(int h, const mpz_class& n0);

/// Linear gamma(k) = k * (ceil(2r/delta) + 1) for eps(x) = x^{-delta};
/// satisfies gamma(x) > log2(eps^{-1}(2^{-2rx})) for x >= 1.
GammaSpec gamma_from_epsilon(double delta, long r);

/// z_j = j - s(s+1) with s = floor(sqrt j). |z_j| <= sqrt(j), and
/// z_{s^2+s+i} = i whenever |i| <= s, so every integer recurs infinitely
/// often.
long long z_seq(std::uint64_t j);

struct ConstructionParams {
    int h = 2;
    std::uint64_t g = 1;
    long r = 1;
    GammaSpec gamma = GammaSpec::linear(1);
    mpz_class n0 = 1;

    TransformParams transform() const { return TransformParams(r, gamma); }

    /// Enforces 2^{r-1} > h^2 + n0 and the strict hypothesis 4^r > h;
    /// throws config_error naming the violated inequality.
    void validate() const;

    /// m_1 * 2^{-r-1} - 1: below this magnitude every representation
    /// decomposes into A_0 representations plus telescoped insertions.
    mpz_class window_safe_radius() const;
};

/// (u_{2k-1}, u_{2k}) = (-m_k * 2^{-r}, (h-1) * m_k * 2^{-r} + z_k); the
/// (h-1)-fold copy of the first plus the second telescopes to z_k.
std::pair<mpz_class, mpz_class> u_pair(std::uint64_t k, const ConstructionParams& params);

/// Transformed base set restricted to elements >= n0. Throws
/// std::runtime_error when the filter empties the set.
IntegerSet build_a0(const IntegerSet& b, const ConstructionParams& params);

enum class CountingMode { Full, Window, Auto };

struct StageRecord {
    std::uint64_t k = 0;
    long long z = 0;
    std::uint64_t count_before = 0;
    bool added = false;
    std::optional<std::pair<mpz_class, mpz_class>> u;

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct ConstructionState {
    ConstructionParams params;
    IntegerSet a0;
    IntegerSet a;  // A_K
    std::uint64_t stages = 0;
    std::vector<StageRecord> audit;
    CountingMode mode_used = CountingMode::Full;
    mpz_class truncation_radius;  // max element of the input B
};

/// Resolves r (explicit or choose_r) and gamma (explicit or via
/// epsilon_delta) against f, then validates all invariants.
ConstructionParams resolve_params(const PrescribedFunction& f, int h, std::uint64_t g,
                                  std::optional<long> r, std::optional<GammaSpec> gamma,
                                  std::optional<double> epsilon_delta);

/// Runs stages 1..K from the certified B_h[g] base set.
///
/// Full mode recounts r_{A_{k-1},h}(z_k) by enumeration each stage; window
/// mode exploits the class-disjointness structure and counts in O(1) per
/// stage after memoizing A_0 counts. Auto picks window beyond K = 30 when
/// the window bound permits. Throws certification_error if B fails is_bhg,
/// config_error on parameter violations, std::domain_error when window
/// mode is requested but floor(sqrt K) exceeds the safe radius or the
/// truncation of A_0 cannot cover the window.
ConstructionState construct(const IntegerSet& b, const PrescribedFunction& f,
                            const ConstructionParams& params, std::uint64_t stage_count,
                            CountingMode mode);

/// r_{A_K,h}(n) inside the safe window: A_0 count plus recorded additions
/// at z = n. Throws std::out_of_range beyond the radius.
std::uint64_t fast_window_count(const ConstructionState& state, int h, const mpz_class& n);

/// Explicit class sumsets A_k^{(s,t)} = (h-s-t)-fold sums of A_{k-1} plus
/// s*u_{2k-1} + t*u_{2k}, for s,t >= 0, s+t <= h. Requires stage k to have
/// performed an addition (std::invalid_argument otherwise).
std::map<std::pair<int, int>, IntegerSet> class_decompose(const ConstructionState& state,
                                                          std::uint64_t k);

struct ClassOverlap {
    std::pair<int, int> first;
    std::pair<int, int> second;
    mpz_class shared;  // one common element
};

struct ClassReport {
    std::map<std::pair<int, int>, IntegerSet> classes;
    bool disjoint_ok = false;   // pairwise disjoint except possibly {(0,0),(h-1,1)}
    std::vector<ClassOverlap> overlaps;
    bool magnitude_ok = false;  // min |element| > n0 outside the exempt classes
    mpz_class min_outside_magnitude;
};

/// Runs both class diagnostics at stage k: pairwise disjointness up to the
/// exempt pair, and the magnitude bound |n| > n0 outside it.
ClassReport class_lemma_report(const ConstructionState& state, std::uint64_t k);

struct PartialOrderReport {
    bool ok = true;
    std::uint64_t max_count = 0;  // max r_{A,h'}(m) observed over the window
    int worst_h = 0;
    mpz_class worst_n;
};

/// Checks r_{A,h'}(m) <= g for every 2 <= h' < h and every m in
/// [window_lo, window_hi]. Vacuous for h = 2.
PartialOrderReport partial_order_check(const ConstructionState& state, const mpz_class& window_lo,
                                       const mpz_class& window_hi);

/// Audit JSON: array of {"k", "z", "count_before", "added", "u"?}.
Json audit_to_json(const std::vector<StageRecord>& audit);
std::vector<StageRecord> audit_from_json(const Json& j);

}  // namespace addrep
