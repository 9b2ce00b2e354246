#include "addrep/rep_count.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace addrep {

namespace {

void check_h(int h) {
    if (h < 2) throw std::invalid_argument("rep count: order h must be >= 2");
}

std::uint64_t naive_rec(std::span<const mpz_class> a, std::size_t lo, int slots,
                        const mpz_class& partial, const mpz_class& n) {
    if (slots == 0) return partial == n ? 1 : 0;
    std::uint64_t total = 0;
    for (std::size_t i = lo; i < a.size(); ++i) {
        total += naive_rec(a, i, slots - 1, partial + a[i], n);
    }
    return total;
}

std::uint64_t two_pointer_pairs(std::span<const mpz_class> a, const mpz_class& n) {
    std::uint64_t count = 0;
    std::size_t i = 0, j = a.size();
    if (j == 0) return 0;
    --j;
    mpz_class s;
    while (i <= j) {
        s = a[i] + a[j];
        const int c = cmp(s, n);
        if (c == 0) {
            ++count;
            if (i == j) break;
            ++i;
            if (j == 0) break;
            --j;
        } else if (c < 0) {
            ++i;
        } else {
            if (j == 0) break;
            --j;
        }
    }
    return count;
}

std::uint64_t pruned_rec(std::span<const mpz_class> a, std::size_t lo, int slots,
                         const mpz_class& partial, const mpz_class& n, const mpz_class& amax) {
    if (slots == 0) return partial == n ? 1 : 0;
    std::uint64_t total = 0;
    mpz_class next, bound;
    for (std::size_t i = lo; i < a.size(); ++i) {
        next = partial + a[i];
        bound = next + (slots - 1) * a[i];
        if (bound > n) break;  // later candidates only grow the lower bound
        bound = next + (slots - 1) * amax;
        if (bound < n) continue;  // unreachable even with max elements
        total += pruned_rec(a, i, slots - 1, next, n, amax);
    }
    return total;
}

}  // namespace

std::uint64_t rep_count_naive(std::span<const mpz_class> a, int h, const mpz_class& n) {
    check_h(h);
    return naive_rec(a, 0, h, mpz_class(0), n);
}

std::uint64_t rep_count_naive(const IntegerSet& a, int h, const mpz_class& n) {
    return rep_count_naive(a.elements(), h, n);
}

std::uint64_t rep_count(std::span<const mpz_class> a, int h, const mpz_class& n) {
    check_h(h);
    if (a.empty()) return 0;
    if (h == 2) return two_pointer_pairs(a, n);
    return pruned_rec(a, 0, h, mpz_class(0), n, a.back());
}

std::uint64_t rep_count(const IntegerSet& a, int h, const mpz_class& n) {
    return rep_count(a.elements(), h, n);
}

std::uint64_t RepTable::at(const mpz_class& n) const {
    if (n < window_lo || n > window_hi) throw std::out_of_range("RepTable: n outside window");
    const mpz_class off = n - window_lo;
    return counts[off.get_ui()];
}

std::string RepTable::to_csv() const {
    std::ostringstream os;
    os << "n,count\n";
    mpz_class n = window_lo;
    for (std::size_t i = 0; i < counts.size(); ++i, ++n) {
        os << n.get_str() << ',' << counts[i] << '\n';
    }
    return os.str();
}

RepTable rep_table(const IntegerSet& a, int h, const mpz_class& lo, const mpz_class& hi) {
    check_h(h);
    if (lo > hi) throw std::invalid_argument("rep_table: window lo > hi");
    mpz_class width = hi - lo + 1;
    if (!width.fits_ulong_p()) throw std::invalid_argument("rep_table: window too wide");
    const std::size_t entries = width.get_ui();

    RepTable table{lo, hi, std::vector<std::uint64_t>(entries, 0)};
    auto worker = [&](std::size_t from, std::size_t to) {
        mpz_class n = lo + static_cast<unsigned long>(from);
        for (std::size_t i = from; i < to; ++i, ++n) {
            table.counts[i] = rep_count(a, h, n);
        }
    };

    const std::size_t min_chunk = 64;
    std::size_t nthreads = std::thread::hardware_concurrency();
    nthreads = std::min<std::size_t>(nthreads ? nthreads : 1, (entries + min_chunk - 1) / min_chunk);
    if (nthreads <= 1) {
        worker(0, entries);
        return table;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (entries + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t from = t * chunk;
        const std::size_t to = std::min(entries, from + chunk);
        if (from >= to) break;
        pool.emplace_back(worker, from, to);
    }
    for (auto& th : pool) th.join();
    return table;
}

namespace {

void tally_rec(std::span<const mpz_class> a, std::size_t lo, int slots, const mpz_class& partial,
               std::map<mpz_class, std::uint64_t>& out) {
    if (slots == 0) {
        ++out[partial];
        return;
    }
    for (std::size_t i = lo; i < a.size(); ++i) {
        tally_rec(a, i, slots - 1, partial + a[i], out);
    }
}

}  // namespace

std::map<mpz_class, std::uint64_t> sum_multiplicities(std::span<const mpz_class> a, int h) {
    check_h(h);
    std::map<mpz_class, std::uint64_t> out;
    tally_rec(a, 0, h, mpz_class(0), out);
    return out;
}

BhgResult is_bhg(const IntegerSet& a, int h, std::uint64_t g) {
    check_h(h);
    if (g < 1) throw std::invalid_argument("is_bhg: g must be >= 1");
    BhgResult res;
    if (a.empty()) {
        res.ok = true;
        return res;
    }
    const auto tally = sum_multiplicities(a.elements(), h);
    for (const auto& [n, count] : tally) {  // ascending: first violator is smallest
        if (count > g) {
            res.ok = false;
            res.witness = BhgWitness{n, count};
            return res;
        }
    }
    res.ok = true;
    return res;
}

std::uint64_t rep_count_max(const IntegerSet& a, int h) {
    check_h(h);
    if (a.empty()) return 0;
    std::uint64_t best = 0;
    for (const auto& [n, count] : sum_multiplicities(a.elements(), h)) {
        best = std::max(best, count);
    }
    return best;
}

IntegerSet multiset_sums(std::span<const mpz_class> a, int m) {
    if (m < 0) throw std::invalid_argument("multiset_sums: negative order");
    if (m == 0) return IntegerSet::of({mpz_class(0)});
    std::map<mpz_class, std::uint64_t> tally;
    tally_rec(a, 0, m, mpz_class(0), tally);
    std::vector<mpz_class> vals;
    vals.reserve(tally.size());
    for (const auto& [n, count] : tally) vals.push_back(n);
    return IntegerSet::from_sorted(std::move(vals));
}

}  // namespace addrep
