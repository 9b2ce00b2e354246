#include "addrep/construction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace addrep {

ExtendedCount PrescribedFunction::operator()(const mpz_class& n) const {
    if (auto it = exceptions.find(n); it != exceptions.end()) return it->second;
    return default_value;
}

namespace {

ExtendedCount count_from_json(const Json& v, const char* what) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return ExtendedCount::infinity();
        throw std::invalid_argument(std::string(what) + ": expected nonnegative integer or \"inf\"");
    }
    if (!v.is_number_unsigned()) {
        throw std::invalid_argument(std::string(what) + ": expected nonnegative integer or \"inf\"");
    }
    return ExtendedCount(v.get<std::uint64_t>());
}

}  // namespace

std::pair<PrescribedFunction, std::uint64_t> PrescribedFunction::from_json(const Json& j) {
    if (!j.is_object() || !j.contains("g") || !j.contains("default")) {
        throw std::invalid_argument("prescribed function: expected {\"g\", \"default\", \"exceptions\"}");
    }
    if (!j["g"].is_number_unsigned() || j["g"].get<std::uint64_t>() < 1) {
        throw std::invalid_argument("prescribed function: g must be a positive integer");
    }
    const auto g = j["g"].get<std::uint64_t>();
    PrescribedFunction f;
    f.default_value = count_from_json(j["default"], "default");
    if (f.default_value.is_infinite()) {
        throw std::invalid_argument("prescribed function: default must be finite");
    }
    if (f.default_value < ExtendedCount(g)) {
        throw std::invalid_argument("prescribed function: default must be >= g");
    }
    if (j.contains("exceptions")) {
        for (const auto& [key, val] : j["exceptions"].items()) {
            f.exceptions.emplace(mpz_class(key, 10), count_from_json(val, "exception"));
        }
    }
    return {std::move(f), g};
}

Json PrescribedFunction::to_json(std::uint64_t g) const {
    Json j;
    j["g"] = g;
    j["default"] = default_value.value();
    Json exc = Json::object();
    for (const auto& [n, v] : exceptions) {
        if (v.is_infinite()) {
            exc[n.get_str()] = "inf";
        } else {
            exc[n.get_str()] = v.value();
        }
    }
    j["exceptions"] = std::move(exc);
    return j;
}

mpz_class compute_n0(const PrescribedFunction& f, std::uint64_t g) {
    if (f.default_value.is_infinite() || f.default_value < ExtendedCount(g)) {
        throw std::invalid_argument("compute_n0: default must be finite and >= g");
    }
    mpz_class n0 = 1;
    for (const auto& [n, v] : f.exceptions) {
        if (v < ExtendedCount(g)) {
            mpz_class bound = abs(n) + 1;
            if (bound > n0) n0 = bound;
        }
    }
    return n0;
}

long choose_r(int h, const mpz_class& n0) {
    if (h < 2) throw std::invalid_argument("choose_r: h must be >= 2");
    if (n0 < 1) throw std::invalid_argument("choose_r: n0 must be positive");
    const mpz_class target = mpz_class(h) * h + n0;
    mpz_class pow2 = 1;  // 2^{r-1}
    long r = 1;
    while (pow2 <= target) {
        pow2 <<= 1;
        ++r;
    }
    return r;
}

GammaSpec gamma_from_epsilon(double delta, long r) {
    return GammaSpec::linear(gamma_slope_for_epsilon(delta, r));
}

long long z_seq(std::uint64_t j) {
    if (j < 1) throw std::invalid_argument("z_seq: j must be >= 1");
    mpz_class jz(static_cast<unsigned long>(j));
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), jz.get_mpz_t());
    mpz_class z = jz - s * (s + 1);
    return z.get_si();
}

void ConstructionParams::validate() const {
    if (h < 2) throw config_error("parameters: h must be >= 2");
    if (g < 1) throw config_error("parameters: g must be >= 1");
    if (n0 < 1) throw config_error("parameters: n0 must be positive");
    if (r < 1) throw config_error("parameters: r must be positive");
    const mpz_class target = mpz_class(h) * h + n0;
    mpz_class pow2 = 1;
    mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), static_cast<std::uint64_t>(r - 1));
    if (pow2 <= target) {
        std::ostringstream os;
        os << "parameters: need 2^(r-1) > h^2 + n0, violated by r=" << r << ", h=" << h
           << ", n0=" << n0.get_str();
        throw config_error(os.str());
    }
    if (r < 32 && (std::uint64_t{1} << (2 * r)) == static_cast<std::uint64_t>(h)) {
        std::ostringstream os;
        os << "parameters: 2r = log2 h exactly (h=" << h << ", r=" << r
           << "); the sum-preservation hypothesis is enforced strictly";
        throw config_error(os.str());
    }
    if (!transform().preserves_bhg(h)) {
        std::ostringstream os;
        os << "parameters: need 2r > log2 h, violated by r=" << r << ", h=" << h;
        throw config_error(os.str());
    }
}

mpz_class ConstructionParams::window_safe_radius() const {
    // m_1 * 2^{-r-1} - 1 = 2^{r + gamma(1) - 1} - 1
    const std::uint64_t exponent = static_cast<std::uint64_t>(r) + gamma(1) - 1;
    mpz_class radius = 1;
    mpz_mul_2exp(radius.get_mpz_t(), radius.get_mpz_t(), exponent);
    return radius - 1;
}

std::pair<mpz_class, mpz_class> u_pair(std::uint64_t k, const ConstructionParams& params) {
    if (k < 1) throw std::invalid_argument("u_pair: k must be >= 1");
    // m_k * 2^-r = 2^{2rk + gamma(k) - r}; integral since 2rk >= 2r > r
    const std::uint64_t exponent =
        2 * static_cast<std::uint64_t>(params.r) * k + params.gamma(k) - static_cast<std::uint64_t>(params.r);
    mpz_class shifted = 1;
    mpz_mul_2exp(shifted.get_mpz_t(), shifted.get_mpz_t(), exponent);
    mpz_class u1 = -shifted;
    mpz_class u2 = (params.h - 1) * shifted + z_seq(k);
    return {std::move(u1), std::move(u2)};
}

IntegerSet build_a0(const IntegerSet& b, const ConstructionParams& params) {
    const IntegerSet transformed = transform_set(b, params.transform());
    std::vector<mpz_class> kept;
    for (const auto& e : transformed) {
        if (e >= params.n0) kept.push_back(e);
    }
    if (kept.empty()) {
        throw std::runtime_error("build_a0: no transformed element reaches n0; enlarge B");
    }
    return IntegerSet::from_sorted(std::move(kept));
}

ConstructionParams resolve_params(const PrescribedFunction& f, int h, std::uint64_t g,
                                  std::optional<long> r, std::optional<GammaSpec> gamma,
                                  std::optional<double> epsilon_delta) {
    ConstructionParams params;
    params.h = h;
    params.g = g;
    params.n0 = compute_n0(f, g);
    params.r = r ? *r : choose_r(h, params.n0);
    if (gamma) {
        params.gamma = *gamma;
    } else if (epsilon_delta) {
        params.gamma = gamma_from_epsilon(*epsilon_delta, params.r);
    } else {
        throw config_error("parameters: gamma=auto requires an epsilon spec");
    }
    params.validate();
    return params;
}

namespace {

mpz_class isqrt_u64(std::uint64_t v) {
    mpz_class z(static_cast<unsigned long>(v));
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), z.get_mpz_t());
    return s;
}

}  // namespace

ConstructionState construct(const IntegerSet& b, const PrescribedFunction& f,
                            const ConstructionParams& params, std::uint64_t stage_count,
                            CountingMode mode) {
    params.validate();
    if (b.empty() || b.min() < 1) {
        throw config_error("construct: base set must be nonempty and positive");
    }
    if (auto cert = is_bhg(b, params.h, params.g); !cert) {
        std::ostringstream os;
        os << "construct: base set is not B_" << params.h << "[" << params.g << "]; witness n="
           << cert.witness->n.get_str() << " count=" << cert.witness->count;
        throw certification_error(os.str(), *cert.witness);
    }

    ConstructionState state;
    state.params = params;
    state.a0 = build_a0(b, params);
    state.truncation_radius = b.max();

    const mpz_class z_bound = stage_count ? isqrt_u64(stage_count) : mpz_class(0);
    const bool window_feasible =
        z_bound <= params.window_safe_radius() && (stage_count == 0 || state.a0.max() >= z_bound);
    if (mode == CountingMode::Auto) {
        mode = (stage_count > 30 && window_feasible) ? CountingMode::Window : CountingMode::Full;
    }
    if (mode == CountingMode::Window && !window_feasible) {
        throw std::domain_error(
            "construct: window mode needs floor(sqrt K) within the safe radius and the A_0 truncation");
    }
    state.mode_used = mode;

    std::vector<mpz_class> current(state.a0.begin(), state.a0.end());
    std::map<long long, std::uint64_t> base_counts;   // memo of r_{A_0,h}(z)
    std::map<long long, std::uint64_t> added_counts;  // additions recorded per z

    state.audit.reserve(stage_count);
    for (std::uint64_t k = 1; k <= stage_count; ++k) {
        const long long z = z_seq(k);
        const mpz_class zz(static_cast<long>(z));

        std::uint64_t count = 0;
        if (mode == CountingMode::Window) {
            auto it = base_counts.find(z);
            if (it == base_counts.end()) {
                it = base_counts.emplace(z, rep_count(state.a0, params.h, zz)).first;
            }
            count = it->second + added_counts[z];
        } else {
            count = rep_count(std::span<const mpz_class>(current), params.h, zz);
        }

        StageRecord rec;
        rec.k = k;
        rec.z = z;
        rec.count_before = count;
        if (ExtendedCount(count) < f(zz)) {
            auto [u1, u2] = u_pair(k, params);
            const bool fresh1 = !std::binary_search(current.begin(), current.end(), u1);
            const bool fresh2 = !std::binary_search(current.begin(), current.end(), u2);
            if (!fresh1 || !fresh2) {
                std::ostringstream os;
                os << "construct: stage " << k << " insertion collides with A_" << (k - 1)
                   << "; freshness invariant broken";
                throw std::logic_error(os.str());
            }
            current.insert(std::upper_bound(current.begin(), current.end(), u1), u1);
            current.insert(std::upper_bound(current.begin(), current.end(), u2), u2);
            ++added_counts[z];
            rec.added = true;
            rec.u = std::make_pair(std::move(u1), std::move(u2));
        }
        state.audit.push_back(std::move(rec));
    }

    state.a = IntegerSet::from_sorted(std::move(current));
    state.stages = stage_count;
    return state;
}

std::uint64_t fast_window_count(const ConstructionState& state, int h, const mpz_class& n) {
    if (h != state.params.h) throw std::invalid_argument("fast_window_count: order mismatch");
    if (abs(n) > state.params.window_safe_radius()) {
        throw std::out_of_range("fast_window_count: |n| beyond the safe window radius");
    }
    std::uint64_t count = rep_count(state.a0, h, n);
    for (const auto& rec : state.audit) {
        if (rec.added && mpz_class(static_cast<long>(rec.z)) == n) ++count;
    }
    return count;
}

namespace {

const StageRecord& added_stage(const ConstructionState& state, std::uint64_t k) {
    if (k < 1 || k > state.audit.size()) {
        throw std::invalid_argument("class diagnostics: stage not found in audit");
    }
    const StageRecord& rec = state.audit[k - 1];
    if (!rec.added || !rec.u) {
        throw std::invalid_argument("class diagnostics: stage performed no addition");
    }
    return rec;
}

std::vector<mpz_class> set_before_stage(const ConstructionState& state, std::uint64_t k) {
    std::vector<mpz_class> prev(state.a0.begin(), state.a0.end());
    for (const auto& rec : state.audit) {
        if (rec.k >= k) break;
        if (rec.added && rec.u) {
            prev.push_back(rec.u->first);
            prev.push_back(rec.u->second);
        }
    }
    std::sort(prev.begin(), prev.end());
    return prev;
}

}  // namespace

std::map<std::pair<int, int>, IntegerSet> class_decompose(const ConstructionState& state,
                                                          std::uint64_t k) {
    const StageRecord& rec = added_stage(state, k);
    const std::vector<mpz_class> prev = set_before_stage(state, k);
    const int h = state.params.h;

    std::map<std::pair<int, int>, IntegerSet> classes;
    for (int s = 0; s <= h; ++s) {
        for (int t = 0; s + t <= h; ++t) {
            const mpz_class offset = s * rec.u->first + t * rec.u->second;
            const IntegerSet sums = multiset_sums(prev, h - s - t);
            std::vector<mpz_class> shifted;
            shifted.reserve(sums.size());
            for (const auto& e : sums) shifted.push_back(e + offset);
            classes.emplace(std::make_pair(s, t), IntegerSet::from_sorted(std::move(shifted)));
        }
    }
    return classes;
}

ClassReport class_lemma_report(const ConstructionState& state, std::uint64_t k) {
    ClassReport report;
    report.classes = class_decompose(state, k);
    const int h = state.params.h;
    const std::pair<int, int> exempt_a{0, 0};
    const std::pair<int, int> exempt_b{h - 1, 1};

    report.disjoint_ok = true;
    for (auto it1 = report.classes.begin(); it1 != report.classes.end(); ++it1) {
        for (auto it2 = std::next(it1); it2 != report.classes.end(); ++it2) {
            const bool exempt = (it1->first == exempt_a && it2->first == exempt_b) ||
                                (it1->first == exempt_b && it2->first == exempt_a);
            if (exempt) continue;
            for (const auto& e : it1->second) {
                if (it2->second.contains(e)) {
                    report.disjoint_ok = false;
                    report.overlaps.push_back({it1->first, it2->first, e});
                    break;
                }
            }
        }
    }

    bool have_min = false;
    for (const auto& [st, cls] : report.classes) {
        if (st == exempt_a || st == exempt_b) continue;
        for (const auto& e : cls) {
            mpz_class mag = abs(e);
            if (!have_min || mag < report.min_outside_magnitude) {
                report.min_outside_magnitude = mag;
                have_min = true;
            }
        }
    }
    report.magnitude_ok = have_min && report.min_outside_magnitude > state.params.n0;
    return report;
}

PartialOrderReport partial_order_check(const ConstructionState& state, const mpz_class& window_lo,
                                       const mpz_class& window_hi) {
    PartialOrderReport report;
    if (window_lo > window_hi) throw std::invalid_argument("partial_order_check: bad window");
    for (int hp = 2; hp < state.params.h; ++hp) {
        for (mpz_class m = window_lo; m <= window_hi; ++m) {
            const std::uint64_t c = rep_count(state.a, hp, m);
            if (c > report.max_count) {
                report.max_count = c;
                report.worst_h = hp;
                report.worst_n = m;
            }
        }
    }
    report.ok = report.max_count <= state.params.g;
    return report;
}

Json audit_to_json(const std::vector<StageRecord>& audit) {
    Json arr = Json::array();
    for (const auto& rec : audit) {
        Json j;
        j["k"] = rec.k;
        j["z"] = rec.z;
        j["count_before"] = rec.count_before;
        j["added"] = rec.added;
        if (rec.added && rec.u) {
            j["u"] = Json::array({rec.u->first.get_str(), rec.u->second.get_str()});
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<StageRecord> audit_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("audit: expected an array of stage records");
    std::vector<StageRecord> audit;
    audit.reserve(j.size());
    for (const auto& it : j) {
        StageRecord rec;
        rec.k = it.at("k").get<std::uint64_t>();
        rec.z = it.at("z").get<long long>();
        rec.count_before = it.at("count_before").get<std::uint64_t>();
        rec.added = it.at("added").get<bool>();
        if (rec.added) {
            const auto& u = it.at("u");
            rec.u = std::make_pair(mpz_class(u.at(0).get<std::string>(), 10),
                                   mpz_class(u.at(1).get<std::string>(), 10));
        }
        audit.push_back(std::move(rec));
    }
    return audit;
}

}  // namespace addrep
