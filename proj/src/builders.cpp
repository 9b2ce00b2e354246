#include "addrep/builders.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "addrep/rep_count.hpp"

namespace addrep {

namespace {

// Multiset-sum tallies of the current set, one map per order 0..h. An
// incremental admissibility test against these is what keeps the greedy
// loop linear per candidate instead of re-enumerating all h-tuples.
class GreedySums {
  public:
    GreedySums(int h, std::uint64_t g) : h_(h), g_(g), sums_(static_cast<std::size_t>(h) + 1) {
        sums_[0][0] = 1;
    }

    bool admissible(long c) const {
        // New representations of n gained by adding c: sum over j >= 1 copies
        // of c completed by an (h-j)-multiset of the current set.
        std::map<long long, std::uint64_t> delta;
        for (int j = 1; j <= h_; ++j) {
            const long long base = static_cast<long long>(j) * c;
            for (const auto& [m, cnt] : sums_[h_ - j]) delta[m + base] += cnt;
        }
        for (const auto& [n, gain] : delta) {
            std::uint64_t existing = 0;
            if (auto it = sums_[h_].find(n); it != sums_[h_].end()) existing = it->second;
            if (existing + gain > g_) return false;
        }
        return true;
    }

    void insert(long c) {
        for (int order = h_; order >= 1; --order) {
            for (int j = 1; j <= order; ++j) {
                const long long base = static_cast<long long>(j) * c;
                for (const auto& [m, cnt] : sums_[order - j]) sums_[order][m + base] += cnt;
            }
        }
    }

  private:
    int h_;
    std::uint64_t g_;
    std::vector<std::map<long long, std::uint64_t>> sums_;
};

}  // namespace

IntegerSet greedy_bh(int h, std::uint64_t g, std::size_t count) {
    if (h < 2) throw std::invalid_argument("greedy_bh: h must be >= 2");
    if (g < 1) throw std::invalid_argument("greedy_bh: g must be >= 1");
    if (count == 0) throw std::invalid_argument("greedy_bh: count must be positive");

    GreedySums sums(h, g);
    std::vector<mpz_class> out;
    out.reserve(count);
    long c = 1;
    while (out.size() < count) {
        if (sums.admissible(c)) {
            sums.insert(c);
            out.emplace_back(c);
        }
        ++c;
        if (c < 0) throw std::overflow_error("greedy_bh: candidate overflow");
    }
    return IntegerSet::from_sorted(std::move(out));
}

IntegerSet greedy_bh_below(int h, std::uint64_t g, const mpz_class& cap) {
    if (h < 2) throw std::invalid_argument("greedy_bh_below: h must be >= 2");
    if (g < 1) throw std::invalid_argument("greedy_bh_below: g must be >= 1");

    GreedySums sums(h, g);
    std::vector<mpz_class> out;
    for (long c = 1; cap >= c; ++c) {
        if (sums.admissible(c)) {
            sums.insert(c);
            out.emplace_back(c);
        }
    }
    return IntegerSet::from_sorted(std::move(out));
}

namespace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

}  // namespace

IntegerSet erdos_turan_sidon(std::uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("erdos_turan_sidon: p must be prime");
    std::vector<mpz_class> out;
    out.reserve(p);
    for (std::uint64_t i = 0; i < p; ++i) {
        const std::uint64_t v = 2 * p * i + (i * i) % p;
        out.emplace_back(static_cast<unsigned long>(v));
    }
    return IntegerSet::from_sorted(std::move(out));  // 2p*i dominates, already increasing
}

BlockBasis block_basis(int h, std::size_t levels, const std::vector<mpz_class>& x,
                       const BhProvider& provider, const std::function<double(double)>& omega) {
    if (h < 2) throw std::invalid_argument("block_basis: h must be >= 2");
    if (x.size() != levels + 1) {
        throw std::invalid_argument("block_basis: x must hold levels+1 entries");
    }
    if (x[0] != 1) throw std::invalid_argument("block_basis: x[0] must be 1");
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] <= x[i - 1]) throw std::invalid_argument("block_basis: x must be strictly increasing");
    }

    std::vector<mpz_class> all;
    for (std::size_t k = 1; k <= levels; ++k) {
        const mpz_class scale = h * x[k - 1];
        const mpz_class cap = x[k] / scale;
        const IntegerSet level = provider(k, cap);
        if (!level.empty() && (level.min() < 1 || level.max() > cap)) {
            std::ostringstream os;
            os << "block_basis: level " << k << " set escapes [1, " << cap.get_str() << "]";
            throw std::runtime_error(os.str());
        }
        for (const auto& e : level) all.push_back(scale * e);
    }

    BlockBasis result;
    result.set = IntegerSet::of(std::move(all));
    result.certified_g = result.set.empty() ? 0 : rep_count_max(result.set, h);
    for (std::size_t k = 1; k <= levels; ++k) {
        BlockDensityRow row;
        row.k = k;
        row.x_k = x[k];
        row.count = counting_function(result.set, x[k]);
        const double xd = x[k].get_d();
        row.ratio = static_cast<double>(row.count) * omega(xd) / std::pow(xd, 1.0 / h);
        result.report.push_back(std::move(row));
    }
    return result;
}

std::string block_density_csv(const std::vector<BlockDensityRow>& rows) {
    std::ostringstream os;
    os << "k,x_k,B(x_k),ratio\n";
    for (const auto& r : rows) {
        os << r.k << ',' << r.x_k.get_str() << ',' << r.count << ',' << r.ratio << '\n';
    }
    return os.str();
}

}  // namespace addrep
