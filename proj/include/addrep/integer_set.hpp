#pragma once

// Finite sets of arbitrary-precision signed integers, stored as a sorted
// dense sequence. This is the carrier type for every set the toolkit
// manipulates: base B_h[g] sequences, their zero-insertion transforms, and
// the stages A_k of the prescribed-function construction. Elements routinely
// exceed machine width (stage k inserts values near 2^{2rk+gamma(k)}), so
// storage and serialization are GMP-backed and decimal-string based.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <nlohmann/json_fwd.hpp>

namespace addrep {

using Json = nlohmann::ordered_json;

/// A count that may be infinite. Codomain of prescribed targets: the order
/// is total (every finite value < infinity) and saturating increment is
/// defined (infinity + 1 = infinity).
class ExtendedCount {
  public:
    constexpr ExtendedCount() = default;
    constexpr ExtendedCount(std::uint64_t v) : finite_(v) {}

    static constexpr ExtendedCount infinity() {
        ExtendedCount c;
        c.infinite_ = true;
        return c;
    }

    constexpr bool is_infinite() const { return infinite_; }

    /// Finite value; must not be called on infinity.
    std::uint64_t value() const;

    ExtendedCount saturating_add(std::uint64_t d) const {
        return infinite_ ? *this : ExtendedCount(finite_ + d);
    }

    friend constexpr bool operator==(ExtendedCount a, ExtendedCount b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.finite_ == b.finite_);
    }
    friend constexpr bool operator<(ExtendedCount a, ExtendedCount b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.finite_ < b.finite_;
    }
    friend constexpr bool operator<=(ExtendedCount a, ExtendedCount b) { return a == b || a < b; }
    friend constexpr bool operator>(ExtendedCount a, ExtendedCount b) { return b < a; }
    friend constexpr bool operator>=(ExtendedCount a, ExtendedCount b) { return b <= a; }

    std::string str() const;

  private:
    std::uint64_t finite_ = 0;
    bool infinite_ = false;
};

/// Strictly increasing sequence of arbitrary-precision integers.
/// Immutable after construction; safe to share across threads.
class IntegerSet {
  public:
    IntegerSet() = default;

    /// Normalizing constructor: sorts and removes duplicates.
    static IntegerSet of(std::vector<mpz_class> values);

    /// Validating constructor: requires strictly increasing input.
    /// Throws std::invalid_argument on unsorted or duplicated values.
    static IntegerSet from_sorted(std::vector<mpz_class> values);

    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    const mpz_class& operator[](std::size_t i) const { return elems_[i]; }
    const mpz_class& min() const;
    const mpz_class& max() const;
    bool contains(const mpz_class& v) const;

    std::span<const mpz_class> elements() const { return elems_; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    friend bool operator==(const IntegerSet& a, const IntegerSet& b) {
        return a.elems_ == b.elems_;
    }

    /// JSON set format: {"name": str, "elements": ["-8192", "2", ...]} with
    /// decimal strings sorted ascending.
    Json to_json(const std::string& name) const;

    /// Parses the JSON set format. Rejects non-decimal, unsorted or
    /// duplicated elements (std::invalid_argument).
    static IntegerSet from_json(const Json& j);

    std::string describe() const;  // short human-readable summary

  private:
    std::vector<mpz_class> elems_;
};

/// Number of elements a of A with |a| <= x. Monotone nondecreasing in x;
/// equals |A| once x >= max |a|. Negative x yields 0.
std::uint64_t counting_function(const IntegerSet& a, const mpz_class& x);

/// min{|y| : x == y (mod m)}; always <= floor(m/2) and satisfies the
/// triangle inequality. Requires m >= 2 (std::invalid_argument otherwise).
mpz_class mod_norm(const mpz_class& x, const mpz_class& m);

/// Dilation t*A = {t*a : a in A}, t >= 1.
IntegerSet dilate(const mpz_class& t, const IntegerSet& a);

/// {4a : a in A, a >= 0} union {-4a+1 : a in A, a < 0}. Injective; maps a
/// two-sided Sidon set to a nonnegative one (residues 0 and 1 mod 4 keep
/// the branches from interacting).
IntegerSet fold_to_nonneg(const IntegerSet& a);

}  // namespace addrep
