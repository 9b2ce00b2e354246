#pragma once

// Constructors for B_h[g] sequences: the greedy sequence, the quadratic
// residue Sidon blocks, and the dilated-block union with its per-level
// density report.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "addrep/integer_set.hpp"

namespace addrep {

/// First `count` elements of the greedy B_h[g] sequence: start from 1 and
/// repeatedly append the smallest positive integer whose inclusion keeps
/// every order-h representation count <= g. Seeded at 1 because the
/// transform downstream requires positive sets.
IntegerSet greedy_bh(int h, std::uint64_t g, std::size_t count);

/// Greedy B_h[g] elements up to and including `cap` (possibly empty).
IntegerSet greedy_bh_below(int h, std::uint64_t g, const mpz_class& cap);

/// {2p*i + (i^2 mod p) : 0 <= i < p} for prime p: a Sidon set of size p
/// inside [0, 2p^2). Throws std::invalid_argument for composite p.
IntegerSet erdos_turan_sidon(std::uint64_t p);

/// Supplies a finite B_h set inside [1, cap] for level k.
using BhProvider = std::function<IntegerSet(std::size_t level, const mpz_class& cap)>;

struct BlockDensityRow {
    std::size_t k = 0;
    mpz_class x_k;
    std::uint64_t count = 0;  // B(x_k) of the assembled union
    double ratio = 0.0;       // B(x_k) * omega(x_k) / x_k^{1/h}
};

struct BlockBasis {
    IntegerSet set;  // union over levels of (h*x_{k-1}) * B_k
    std::vector<BlockDensityRow> report;
    std::uint64_t certified_g = 0;  // max order-h representation count, measured
};

/// Union over k = 1..levels of (h*x_{k-1}) * B_k with B_k provided inside
/// [1, x_k / (h*x_{k-1})]. x must be strictly increasing with x[0] = 1 and
/// have levels+1 entries. A provider escaping its mandated interval raises
/// std::runtime_error. The certified g is measured on the truncated union,
/// never assumed.
BlockBasis block_basis(int h, std::size_t levels, const std::vector<mpz_class>& x,
                       const BhProvider& provider, const std::function<double(double)>& omega);

/// CSV rows "k,x_k,B(x_k),ratio".
std::string block_density_csv(const std::vector<BlockDensityRow>& rows);

}  // namespace addrep
