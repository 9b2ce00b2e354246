#pragma once

// Exact order-h representation counts r_{A,h}(n): the number of
// nondecreasing h-tuples from A summing to n. Two routes are kept
// deliberately separate: a naive exhaustive oracle and a pruned enumerator;
// tests hold them against each other. The sets in this domain are tiny in
// cardinality and huge in magnitude, so everything is plain enumeration
// over arbitrary-precision elements (no convolution tricks).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "addrep/integer_set.hpp"

namespace addrep {

/// Reference oracle: enumerates every one of the C(|A|+h-1, h) multisets
/// and counts exact hits. No pruning by design; keep inputs small.
std::uint64_t rep_count_naive(std::span<const mpz_class> a, int h, const mpz_class& n);
std::uint64_t rep_count_naive(const IntegerSet& a, int h, const mpz_class& n);

/// Same value as rep_count_naive, computed by ordered depth-first multiset
/// enumeration with two-sided interval pruning. With mixed-sign elements
/// both bounds are required: partial + slots*candidate > n kills branches
/// from below, partial + slots*max(A) < n from above. h=2 takes a sorted
/// two-pointer pass.
std::uint64_t rep_count(std::span<const mpz_class> a, int h, const mpz_class& n);
std::uint64_t rep_count(const IntegerSet& a, int h, const mpz_class& n);

/// Window of exact representation counts, one entry per n in [lo, hi].
struct RepTable {
    mpz_class window_lo;
    mpz_class window_hi;
    std::vector<std::uint64_t> counts;  // counts[i] = r(lo + i)

    std::uint64_t at(const mpz_class& n) const;
    /// CSV with header "n,count", one row per n ascending.
    std::string to_csv() const;
};

/// Counts for every n in [lo, hi]; entries are independent and computed in
/// parallel when the window is large enough to bother.
RepTable rep_table(const IntegerSet& a, int h, const mpz_class& lo, const mpz_class& hi);

struct BhgWitness {
    mpz_class n;
    std::uint64_t count;  // full count, exceeds g
};

struct BhgResult {
    bool ok = false;
    std::optional<BhgWitness> witness;  // smallest violator when !ok
    explicit operator bool() const { return ok; }
};

/// True iff r_{A,h}(n) <= g over the whole sumset range. Achieved sums are
/// enumerated and tallied; unachieved n have count 0 <= g trivially.
BhgResult is_bhg(const IntegerSet& a, int h, std::uint64_t g);

/// max_n r_{A,h}(n); 0 for the empty set. The smallest g for which A is
/// B_h[g] (used to report a certified g rather than assume one).
std::uint64_t rep_count_max(const IntegerSet& a, int h);

/// All distinct m-fold multiset sums of A (m >= 0; the 0-fold sumset is {0}).
IntegerSet multiset_sums(std::span<const mpz_class> a, int m);

/// Full tally of h-fold multiset sums: value -> multiplicity.
std::map<mpz_class, std::uint64_t> sum_multiplicities(std::span<const mpz_class> a, int h);

}  // namespace addrep
