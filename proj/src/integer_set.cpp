#include "addrep/integer_set.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace addrep {

std::uint64_t ExtendedCount::value() const {
    if (infinite_) throw std::logic_error("ExtendedCount: value() on infinity");
    return finite_;
}

std::string ExtendedCount::str() const {
    return infinite_ ? "inf" : std::to_string(finite_);
}

IntegerSet IntegerSet::of(std::vector<mpz_class> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    IntegerSet s;
    s.elems_ = std::move(values);
    return s;
}

IntegerSet IntegerSet::from_sorted(std::vector<mpz_class> values) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i - 1] >= values[i]) {
            throw std::invalid_argument("IntegerSet: elements must be strictly increasing");
        }
    }
    IntegerSet s;
    s.elems_ = std::move(values);
    return s;
}

const mpz_class& IntegerSet::min() const {
    if (elems_.empty()) throw std::logic_error("IntegerSet: min() of empty set");
    return elems_.front();
}

const mpz_class& IntegerSet::max() const {
    if (elems_.empty()) throw std::logic_error("IntegerSet: max() of empty set");
    return elems_.back();
}

bool IntegerSet::contains(const mpz_class& v) const {
    return std::binary_search(elems_.begin(), elems_.end(), v);
}

Json IntegerSet::to_json(const std::string& name) const {
    Json j;
    j["name"] = name;
    Json arr = Json::array();
    for (const auto& e : elems_) arr.push_back(e.get_str());
    j["elements"] = std::move(arr);
    return j;
}

namespace {

mpz_class parse_decimal(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("IntegerSet: empty element string");
    // mpz_class accepts whitespace and 0x prefixes; the file format is
    // strictly decimal, so validate by hand.
    std::size_t i = text[0] == '-' ? 1 : 0;
    if (i == text.size()) throw std::invalid_argument("IntegerSet: bad element '" + text + "'");
    for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') {
            throw std::invalid_argument("IntegerSet: bad element '" + text + "'");
        }
    }
    return mpz_class(text, 10);
}

}  // namespace

IntegerSet IntegerSet::from_json(const Json& j) {
    if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array()) {
        throw std::invalid_argument("IntegerSet: expected {\"name\", \"elements\": [...]}");
    }
    std::vector<mpz_class> values;
    values.reserve(j["elements"].size());
    for (const auto& it : j["elements"]) {
        if (!it.is_string()) {
            throw std::invalid_argument("IntegerSet: elements must be decimal strings");
        }
        values.push_back(parse_decimal(it.get<std::string>()));
    }
    return from_sorted(std::move(values));  // rejects unsorted / duplicated input
}

std::string IntegerSet::describe() const {
    std::ostringstream os;
    os << "{";
    const std::size_t shown = std::min<std::size_t>(elems_.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i) os << ", ";
        os << elems_[i].get_str();
    }
    if (elems_.size() > shown) os << ", ...";
    os << "} (" << elems_.size() << " elements)";
    return os.str();
}

std::uint64_t counting_function(const IntegerSet& a, const mpz_class& x) {
    if (sgn(x) < 0) return 0;
    const auto elems = a.elements();
    const mpz_class neg = -x;
    auto lo = std::lower_bound(elems.begin(), elems.end(), neg);
    auto hi = std::upper_bound(elems.begin(), elems.end(), x);
    return static_cast<std::uint64_t>(hi - lo);
}

mpz_class mod_norm(const mpz_class& x, const mpz_class& m) {
    if (m < 2) throw std::invalid_argument("mod_norm: modulus must be >= 2");
    mpz_class y;
    mpz_mod(y.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());  // y in [0, m)
    mpz_class other = m - y;
    return y <= other ? y : other;
}

IntegerSet dilate(const mpz_class& t, const IntegerSet& a) {
    if (t < 1) throw std::invalid_argument("dilate: factor must be >= 1");
    std::vector<mpz_class> out;
    out.reserve(a.size());
    for (const auto& e : a) out.push_back(t * e);
    return IntegerSet::from_sorted(std::move(out));
}

IntegerSet fold_to_nonneg(const IntegerSet& a) {
    std::vector<mpz_class> out;
    out.reserve(a.size());
    for (const auto& e : a) {
        if (e >= 0) {
            out.push_back(4 * e);
        } else {
            out.push_back(-4 * e + 1);
        }
    }
    return IntegerSet::of(std::move(out));
}

}  // namespace addrep
