#include "addrep/insert_zeros.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace addrep {

GammaSpec GammaSpec::linear(std::uint64_t slope) {
    if (slope == 0) throw std::invalid_argument("GammaSpec: linear slope must be positive");
    GammaSpec g;
    g.slope_ = slope;
    return g;
}

GammaSpec GammaSpec::table(std::vector<std::uint64_t> values) {
    if (values.size() < 2) throw std::invalid_argument("GammaSpec: table needs >= 2 values");
    if (values[0] != 0) throw std::invalid_argument("GammaSpec: gamma(0) must be 0");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= values[i - 1]) {
            throw std::invalid_argument("GammaSpec: table must be strictly increasing");
        }
    }
    GammaSpec g;
    g.table_ = std::move(values);
    return g;
}

GammaSpec GammaSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("GammaSpec: expected form:args");
    const std::string form = text.substr(0, colon);
    const std::string args = text.substr(colon + 1);
    if (form == "linear") {
        return linear(std::stoull(args));
    }
    if (form == "table") {
        std::vector<std::uint64_t> vals;
        std::istringstream is(args);
        std::string item;
        while (std::getline(is, item, ',')) vals.push_back(std::stoull(item));
        return table(std::move(vals));
    }
    if (form == "from_epsilon") {
        // from_epsilon:r=4,delta=0.5
        long r = 0;
        double delta = 0;
        std::istringstream is(args);
        std::string item;
        while (std::getline(is, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("GammaSpec: bad from_epsilon arg");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            if (key == "r") {
                r = std::stol(val);
            } else if (key == "delta") {
                delta = std::stod(val);
            } else {
                throw std::invalid_argument("GammaSpec: unknown from_epsilon key '" + key + "'");
            }
        }
        return linear(gamma_slope_for_epsilon(delta, r));
    }
    throw std::invalid_argument("GammaSpec: unknown form '" + form + "'");
}

std::uint64_t GammaSpec::operator()(std::uint64_t k) const {
    if (slope_ > 0) return slope_ * k;
    if (k < table_.size()) return table_[k];
    // Continue past the table with its final increment.
    const std::uint64_t last = table_.back();
    const std::uint64_t step = table_[table_.size() - 1] - table_[table_.size() - 2];
    return last + step * (k - (table_.size() - 1));
}

double GammaSpec::real(double x) const {
    if (x < 0) throw std::out_of_range("GammaSpec: real extension needs x >= 0");
    const double kf = std::floor(x);
    const auto k = static_cast<std::uint64_t>(kf);
    const double g0 = static_cast<double>((*this)(k));
    const double g1 = static_cast<double>((*this)(k + 1));
    return g1 * (x - kf) + g0 * (kf + 1.0 - x);
}

double GammaSpec::inverse(double y) const {
    if (y < 0) throw std::out_of_range("GammaSpec: inverse needs y >= 0");
    if (y == 0) return 0.0;
    double hi = 1.0;
    while (real(hi) < y) hi *= 2.0;
    double lo = 0.0;
    const double tol = std::ldexp(1.0, -30);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (real(mid) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::string GammaSpec::str() const {
    std::ostringstream os;
    if (slope_ > 0) {
        os << "linear:" << slope_;
    } else {
        os << "table:";
        for (std::size_t i = 0; i < table_.size(); ++i) {
            if (i) os << ',';
            os << table_[i];
        }
    }
    return os.str();
}

std::uint64_t gamma_slope_for_epsilon(double delta, long r) {
    if (!(delta > 0)) throw std::invalid_argument("epsilon: delta must be positive");
    if (r < 1) throw std::invalid_argument("epsilon: r must be positive");
    const double ratio = 2.0 * static_cast<double>(r) / delta;
    return static_cast<std::uint64_t>(std::ceil(ratio)) + 1;
}

TransformParams::TransformParams(long r_, GammaSpec gamma_) : r(r_), gamma(std::move(gamma_)) {
    if (r < 1) throw std::invalid_argument("TransformParams: r must be positive");
}

bool TransformParams::preserves_bhg(int h) const {
    if (h < 1) return false;
    // 2r > log2 h  <=>  4^r > h; r <= 31 covers any sane h already.
    if (r >= 32) return true;
    return (std::uint64_t{1} << (2 * r)) > static_cast<std::uint64_t>(h);
}

mpz_class insert_zeros(const mpz_class& b, const TransformParams& params) {
    if (b < 1) throw std::domain_error("insert_zeros: b must be >= 1");
    const std::size_t bits = mpz_sizeinbase(b.get_mpz_t(), 2);
    mpz_class out = 0;
    mpz_class block;
    for (std::uint64_t k = 0; params.gamma(k) < bits; ++k) {
        const std::uint64_t lo = params.gamma(k);
        const std::uint64_t hi = params.gamma(k + 1);
        // block = bits [lo, hi) of b, kept at their original positions
        mpz_fdiv_q_2exp(block.get_mpz_t(), b.get_mpz_t(), lo);
        mpz_fdiv_r_2exp(block.get_mpz_t(), block.get_mpz_t(), hi - lo);
        mpz_mul_2exp(block.get_mpz_t(), block.get_mpz_t(),
                     lo + 2 * static_cast<std::uint64_t>(params.r) * k);
        out += block;
    }
    return out;
}

IntegerSet transform_set(const IntegerSet& b, const TransformParams& params) {
    std::vector<mpz_class> out;
    out.reserve(b.size());
    for (const auto& e : b) {
        if (e < 1) throw std::domain_error("transform_set: elements must be positive");
        out.push_back(insert_zeros(e, params));
    }
    return IntegerSet::from_sorted(std::move(out));  // order preservation keeps it sorted
}

mpz_class modulus_mk(std::uint64_t k, const TransformParams& params) {
    if (k < 1) throw std::invalid_argument("modulus_mk: k must be >= 1");
    const std::uint64_t exponent = 2 * static_cast<std::uint64_t>(params.r) * k + params.gamma(k);
    mpz_class m = 1;
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), exponent);
    return m;
}

namespace {

double log2_mpz(const mpz_class& x) {
    signed long exp = 0;
    const double d = mpz_get_d_2exp(&exp, x.get_mpz_t());  // x = d * 2^exp, d in [0.5, 1)
    return static_cast<double>(exp) + std::log2(d);
}

// floor(x * 2^-t) for real t >= 0, exact to double precision in 2^-frac.
mpz_class shift_down(const mpz_class& x, double t) {
    if (t <= 0) return x;
    const double it = std::floor(t);
    const double frac = t - it;
    if (it > 1e18) return 0;
    const auto ishift = static_cast<std::uint64_t>(it);
    // q = floor(2^-frac * 2^62), in (2^61, 2^62]
    const auto q = static_cast<unsigned long>(std::ldexp(std::exp2(-frac), 62));
    mpz_class out = x * mpz_class(q);
    mpz_fdiv_q_2exp(out.get_mpz_t(), out.get_mpz_t(), 62);
    mpz_fdiv_q_2exp(out.get_mpz_t(), out.get_mpz_t(), ishift);
    return out;
}

}  // namespace

std::vector<DensityRow> density_compare(const IntegerSet& b, const TransformParams& params,
                                        const std::vector<mpz_class>& xs) {
    const IntegerSet tb = transform_set(b, params);
    std::vector<DensityRow> rows;
    rows.reserve(xs.size());
    for (const auto& x : xs) {
        if (x < 1) throw std::out_of_range("density_compare: x must be >= 1");
        DensityRow row;
        row.x = x;
        const double ginv = params.gamma.inverse(log2_mpz(x));
        row.right_bound = shift_down(x, 2.0 * static_cast<double>(params.r) * ginv);
        row.left = counting_function(tb, x);
        row.right = counting_function(b, row.right_bound);
        row.strict = row.left > row.right;
        row.vacuous = row.left == 0 && row.right == 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string density_csv(const std::vector<DensityRow>& rows) {
    std::ostringstream os;
    os << "x,left,right_bound,right,strict,vacuous\n";
    for (const auto& r : rows) {
        os << r.x.get_str() << ',' << r.left << ',' << r.right_bound.get_str() << ',' << r.right
           << ',' << (r.strict ? 1 : 0) << ',' << (r.vacuous ? 1 : 0) << '\n';
    }
    return os.str();
}

}  // namespace addrep
