// Command-line front end: constructions, certifications, diagnostics, and
// CSV/JSON reports. Every command is deterministic given its flags and
// input files.
//
// Exit codes: 0 success, 1 property violation, 2 usage, 3 parameter
// invariant, 4 input certification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "addrep/builders.hpp"
#include "addrep/construction.hpp"
#include "addrep/insert_zeros.hpp"
#include "addrep/integer_set.hpp"
#include "addrep/rep_count.hpp"

namespace {

using addrep::Json;

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParams = 3;
constexpr int kExitCertification = 4;

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return Json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const Json& j) {
    write_text(path, j.dump(2) + "\n");
}

void emit_report(const std::optional<std::string>& path, const std::string& text) {
    if (path) {
        write_text(*path, text);
    } else {
        std::cout << text;
    }
}

std::vector<mpz_class> parse_mpz_list(const std::string& text) {
    std::vector<mpz_class> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) out.emplace_back(item, 10);
    return out;
}

std::optional<long> parse_auto_long(const std::string& text, const char* flag) {
    if (text == "auto") return std::nullopt;
    try {
        return std::stol(text);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string(flag) + ": expected 'auto' or an integer");
    }
}

double parse_epsilon(const std::string& text) {
    if (text.rfind("pow:", 0) != 0) {
        throw std::runtime_error("--epsilon: expected pow:<delta>, e.g. pow:0.5");
    }
    return std::stod(text.substr(4));
}

addrep::CountingMode parse_mode(const std::string& text) {
    if (text == "full") return addrep::CountingMode::Full;
    if (text == "window") return addrep::CountingMode::Window;
    if (text == "auto") return addrep::CountingMode::Auto;
    throw std::runtime_error("--mode: expected full, window or auto");
}

const char* mode_name(addrep::CountingMode mode) {
    switch (mode) {
        case addrep::CountingMode::Full: return "full";
        case addrep::CountingMode::Window: return "window";
        default: return "auto";
    }
}

// ---------------------------------------------------------------------------
// greedy
// ---------------------------------------------------------------------------

int run_greedy(int h, std::uint64_t g, std::size_t count, const std::string& out_path) {
    const addrep::IntegerSet set = addrep::greedy_bh(h, g, count);
    const auto cert = addrep::is_bhg(set, h, g);
    write_json(out_path, set.to_json("greedy-bh"));
    std::cout << "greedy B_" << h << "[" << g << "] " << set.describe()
              << " certified=" << (cert.ok ? "ok" : "FAIL") << "\n";
    return cert.ok ? 0 : kExitViolation;
}

// ---------------------------------------------------------------------------
// blocks
// ---------------------------------------------------------------------------

std::uint64_t largest_prime_at_most(std::uint64_t n) {
    auto prime = [](std::uint64_t p) {
        if (p < 2) return false;
        for (std::uint64_t d = 2; d * d <= p; ++d) {
            if (p % d == 0) return false;
        }
        return true;
    };
    for (std::uint64_t p = n; p >= 2; --p) {
        if (prime(p)) return p;
    }
    return 0;
}

int run_blocks(int h, std::size_t levels, const std::string& x_list, const std::string& provider,
               const std::string& omega_name, const std::string& out_path,
               const std::optional<std::string>& csv_path) {
    const std::vector<mpz_class> x = parse_mpz_list(x_list);

    addrep::BhProvider prov;
    if (provider == "greedy") {
        prov = [h](std::size_t, const mpz_class& cap) { return addrep::greedy_bh_below(h, 1, cap); };
    } else if (provider == "erdos-turan") {
        if (h != 2) throw std::runtime_error("--provider erdos-turan is only available for h=2");
        prov = [](std::size_t, const mpz_class& cap) {
            // Shift the quadratic-residue set by 1 to land in [1, 2p^2] <= cap.
            mpz_class root;
            mpz_class half = cap / 2;
            mpz_sqrt(root.get_mpz_t(), half.get_mpz_t());
            std::uint64_t p = largest_prime_at_most(root.fits_ulong_p() ? root.get_ui() : 0);
            if (p == 0) return addrep::IntegerSet();
            const addrep::IntegerSet base = addrep::erdos_turan_sidon(p);
            std::vector<mpz_class> shifted;
            shifted.reserve(base.size());
            for (const auto& e : base) shifted.push_back(e + 1);
            return addrep::IntegerSet::from_sorted(std::move(shifted));
        };
    } else {
        throw std::runtime_error("--provider: expected greedy or erdos-turan");
    }

    std::function<double(double)> omega;
    if (omega_name == "log2") {
        omega = [](double v) { return std::log2(v); };
    } else if (omega_name.rfind("pow:", 0) == 0) {
        const double alpha = std::stod(omega_name.substr(4));
        omega = [alpha](double v) { return std::pow(v, alpha); };
    } else {
        throw std::runtime_error("--omega: expected log2 or pow:<alpha>");
    }

    // The growth claim needs omega(x_k) > (h*x_{k-1})^{1/h}; x is free
    // otherwise, so violations are reported rather than fatal.
    for (std::size_t k = 1; k <= levels && k < x.size(); ++k) {
        const double lhs = omega(x[k].get_d());
        const double rhs = std::pow((h * x[k - 1]).get_d(), 1.0 / h);
        if (!(lhs > rhs)) {
            std::cerr << "warning: omega(x_" << k << ") = " << lhs << " <= (h*x_" << (k - 1)
                      << ")^(1/h) = " << rhs << "\n";
        }
    }

    const addrep::BlockBasis basis = addrep::block_basis(h, levels, x, prov, omega);
    write_json(out_path, basis.set.to_json("block-basis"));
    if (csv_path) write_text(*csv_path, addrep::block_density_csv(basis.report));
    std::cout << "block basis " << basis.set.describe() << " certified g=" << basis.certified_g
              << "\n";
    if (!csv_path) std::cout << addrep::block_density_csv(basis.report);
    return 0;
}

// ---------------------------------------------------------------------------
// prescribe
// ---------------------------------------------------------------------------

struct PrescribeArgs {
    int h = 2;
    std::uint64_t g = 1;
    std::string f_path;
    std::string b_path;
    std::uint64_t steps = 0;
    std::string r_text = "auto";
    std::string gamma_text = "auto";
    std::string epsilon_text;
    std::string mode_text = "auto";
    std::string out_path;
    std::string audit_path;
};

int run_prescribe(const PrescribeArgs& args) {
    const auto [f, file_g] = addrep::PrescribedFunction::from_json(read_json(args.f_path));
    if (file_g != args.g) {
        throw std::runtime_error("--g disagrees with the g recorded in " + args.f_path);
    }
    const auto base = addrep::IntegerSet::from_json(read_json(args.b_path));

    std::optional<long> r = parse_auto_long(args.r_text, "--r");
    std::optional<addrep::GammaSpec> gamma;
    if (args.gamma_text != "auto") gamma = addrep::GammaSpec::parse(args.gamma_text);
    std::optional<double> delta;
    if (!args.epsilon_text.empty()) delta = parse_epsilon(args.epsilon_text);

    const addrep::ConstructionParams params =
        addrep::resolve_params(f, args.h, args.g, r, gamma, delta);
    const addrep::ConstructionState state =
        addrep::construct(base, f, params, args.steps, parse_mode(args.mode_text));

    std::uint64_t additions = 0;
    for (const auto& rec : state.audit) additions += rec.added ? 1 : 0;

    std::cout << "h=" << params.h << " g=" << params.g << " n0=" << params.n0.get_str()
              << " r=" << params.r << " gamma=" << params.gamma.str()
              << " mode=" << mode_name(state.mode_used)
              << " safe_radius=" << params.window_safe_radius().get_str()
              << " truncation=" << state.truncation_radius.get_str() << "\n";
    std::cout << "|B|=" << base.size() << " |A0|=" << state.a0.size() << " stages=" << state.stages
              << " additions=" << additions << " |A|=" << state.a.size() << "\n";

    write_json(args.out_path, state.a.to_json("prescribed-set"));
    write_json(args.audit_path, addrep::audit_to_json(state.audit));
    return 0;
}

// ---------------------------------------------------------------------------
// verify subcommands
// ---------------------------------------------------------------------------

int run_verify_repfn(const std::string& in_path, int h, long long from, long long to,
                     const std::optional<std::string>& expect_path,
                     const std::optional<std::string>& csv_path) {
    const auto set = addrep::IntegerSet::from_json(read_json(in_path));
    const auto table = addrep::rep_table(set, h, mpz_class(from), mpz_class(to));
    emit_report(csv_path, table.to_csv());

    if (!expect_path) return 0;
    const auto [f, g] = addrep::PrescribedFunction::from_json(read_json(*expect_path));
    (void)g;
    for (mpz_class n(from); n <= to; ++n) {
        const addrep::ExtendedCount want = f(n);
        if (want.is_infinite()) continue;  // unbounded target: any count is on its way
        if (table.at(n) != want.value()) {
            std::cerr << "mismatch at n=" << n.get_str() << ": table=" << table.at(n)
                      << " expected=" << want.value() << "\n";
            return kExitViolation;
        }
    }
    std::cout << "repfn matches expectation on [" << from << ", " << to << "]\n";
    return 0;
}

int run_verify_bh(const std::string& in_path, int h, std::uint64_t g) {
    const auto set = addrep::IntegerSet::from_json(read_json(in_path));
    const auto cert = addrep::is_bhg(set, h, g);
    if (!cert.ok) {
        std::cerr << "not B_" << h << "[" << g << "]: witness n=" << cert.witness->n.get_str()
                  << " count=" << cert.witness->count << "\n";
        return kExitViolation;
    }
    std::cout << "certified B_" << h << "[" << g << "] " << set.describe() << "\n";
    return 0;
}

int run_verify_density(const std::string& in_path, long r, const std::string& gamma_text,
                       const std::string& xs_text, const std::optional<std::string>& csv_path) {
    const auto set = addrep::IntegerSet::from_json(read_json(in_path));
    const addrep::TransformParams params(r, addrep::GammaSpec::parse(gamma_text));
    const auto rows = addrep::density_compare(set, params, parse_mpz_list(xs_text));
    emit_report(csv_path, addrep::density_csv(rows));
    for (const auto& row : rows) {
        if (!row.strict && !row.vacuous) {
            std::cerr << "density comparison fails at x=" << row.x.get_str() << ": left=" << row.left
                      << " right=" << row.right << "\n";
            return kExitViolation;
        }
    }
    return 0;
}

struct LemmasArgs {
    std::string audit_path;
    std::string b_path;
    std::string f_path;
    int h = 2;
    std::uint64_t g = 1;
    std::string r_text = "auto";
    std::string gamma_text = "auto";
    std::string epsilon_text;
    std::uint64_t k = 0;        // 0 = first added stage
    long long window = 50;
};

int run_verify_lemmas(const LemmasArgs& args) {
    const auto [f, file_g] = addrep::PrescribedFunction::from_json(read_json(args.f_path));
    if (file_g != args.g) {
        throw std::runtime_error("--g disagrees with the g recorded in " + args.f_path);
    }
    const auto base = addrep::IntegerSet::from_json(read_json(args.b_path));
    const auto recorded = addrep::audit_from_json(read_json(args.audit_path));

    std::optional<long> r = parse_auto_long(args.r_text, "--r");
    std::optional<addrep::GammaSpec> gamma;
    if (args.gamma_text != "auto") gamma = addrep::GammaSpec::parse(args.gamma_text);
    std::optional<double> delta;
    if (!args.epsilon_text.empty()) delta = parse_epsilon(args.epsilon_text);

    const auto params = addrep::resolve_params(f, args.h, args.g, r, gamma, delta);
    const auto state =
        addrep::construct(base, f, params, recorded.size(), addrep::CountingMode::Auto);

    // The construction is deterministic, so the recorded audit must agree
    // with the reconstruction before any diagnostics mean anything.
    if (state.audit != recorded) {
        std::cerr << "audit does not match its deterministic reconstruction\n";
        return kExitViolation;
    }

    std::uint64_t stage = args.k;
    if (stage == 0) {
        for (const auto& rec : state.audit) {
            if (rec.added) {
                stage = rec.k;
                break;
            }
        }
    }
    if (stage == 0) {
        std::cerr << "no addition stage to inspect\n";
        return kExitViolation;
    }

    const auto report = addrep::class_lemma_report(state, stage);
    const auto order = addrep::partial_order_check(state, mpz_class(-args.window),
                                                   mpz_class(args.window));

    std::ostringstream os;
    os << "check,stage,ok,detail\n";
    os << "audit_replay," << state.stages << ",1,records=" << recorded.size() << "\n";
    os << "class_disjoint," << stage << ',' << (report.disjoint_ok ? 1 : 0) << ",overlaps="
       << report.overlaps.size() << "\n";
    os << "class_magnitude," << stage << ',' << (report.magnitude_ok ? 1 : 0)
       << ",min_outside=" << report.min_outside_magnitude.get_str()
       << " n0=" << params.n0.get_str() << "\n";
    os << "partial_order," << state.stages << ',' << (order.ok ? 1 : 0)
       << ",max_count=" << order.max_count << " window=" << args.window << "\n";
    std::cout << os.str();

    return (report.disjoint_ok && report.magnitude_ok && order.ok) ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integer sets with prescribed additive representation functions"};
    app.require_subcommand(1);

    int exit_code = 0;

    // greedy
    auto* greedy = app.add_subcommand("greedy", "build the greedy B_h[g] sequence");
    int gh = 2;
    std::uint64_t gg = 1;
    std::size_t gcount = 0;
    std::string gout;
    greedy->add_option("--h", gh, "order h")->required()->check(CLI::Range(2, 16));
    greedy->add_option("--g", gg, "bound g")->required();
    greedy->add_option("--count", gcount, "number of elements")->required();
    greedy->add_option("--out", gout, "output set JSON")->required();
    greedy->callback([&] { exit_code = run_greedy(gh, gg, gcount, gout); });

    // blocks
    auto* blocks = app.add_subcommand("blocks", "dilated-block union of finite B_h sets");
    int bh = 2;
    std::size_t blevels = 0;
    std::string bx, bprovider = "greedy", bomega = "log2", bout;
    std::optional<std::string> bcsv;
    blocks->add_option("--h", bh, "order h")->required()->check(CLI::Range(2, 16));
    blocks->add_option("--levels", blevels, "number of levels")->required();
    blocks->add_option("--x", bx, "comma-separated level sequence, x_0=1 first")->required();
    blocks->add_option("--provider", bprovider, "greedy | erdos-turan");
    blocks->add_option("--omega", bomega, "log2 | pow:<alpha>");
    blocks->add_option("--out", bout, "output set JSON")->required();
    blocks->add_option("--csv", bcsv, "density report CSV path (default: stdout)");
    blocks->callback([&] { exit_code = run_blocks(bh, blevels, bx, bprovider, bomega, bout, bcsv); });

    // prescribe
    auto* prescribe = app.add_subcommand("prescribe", "realize a prescribed representation function");
    PrescribeArgs pa;
    prescribe->add_option("--h", pa.h, "order h")->required()->check(CLI::Range(2, 16));
    prescribe->add_option("--g", pa.g, "bound g of the base set")->required();
    prescribe->add_option("--f", pa.f_path, "prescribed function JSON")->required();
    prescribe->add_option("--B", pa.b_path, "base B_h[g] set JSON")->required();
    prescribe->add_option("--steps", pa.steps, "stage count K")->required();
    prescribe->add_option("--r", pa.r_text, "auto | integer");
    prescribe->add_option("--gamma", pa.gamma_text, "auto | linear:S | table:... | from_epsilon:...");
    prescribe->add_option("--epsilon", pa.epsilon_text, "pow:<delta>, required when gamma=auto");
    prescribe->add_option("--mode", pa.mode_text, "full | window | auto");
    prescribe->add_option("--out", pa.out_path, "output set JSON")->required();
    prescribe->add_option("--audit", pa.audit_path, "output audit JSON")->required();
    prescribe->callback([&] { exit_code = run_prescribe(pa); });

    // verify
    auto* verify = app.add_subcommand("verify", "verification reports");
    verify->require_subcommand(1);

    auto* repfn = verify->add_subcommand("repfn", "representation-count table over a window");
    std::string vin;
    int vh = 2;
    long long vfrom = 0, vto = 0;
    std::optional<std::string> vexpect, vcsv;
    repfn->add_option("--in", vin, "set JSON")->required();
    repfn->add_option("--h", vh, "order h")->required()->check(CLI::Range(2, 16));
    repfn->add_option("--from", vfrom, "window start")->required();
    repfn->add_option("--to", vto, "window end")->required();
    repfn->add_option("--expect", vexpect, "prescribed function JSON to compare against");
    repfn->add_option("--csv", vcsv, "CSV path (default: stdout)");
    repfn->callback([&] { exit_code = run_verify_repfn(vin, vh, vfrom, vto, vexpect, vcsv); });

    auto* bhcmd = verify->add_subcommand("bh", "B_h[g] certification");
    std::string cin_path;
    int ch = 2;
    std::uint64_t cg = 1;
    bhcmd->add_option("--in", cin_path, "set JSON")->required();
    bhcmd->add_option("--h", ch, "order h")->required()->check(CLI::Range(2, 16));
    bhcmd->add_option("--g", cg, "bound g")->required();
    bhcmd->callback([&] { exit_code = run_verify_bh(cin_path, ch, cg); });

    auto* density = verify->add_subcommand("density", "transform density comparison");
    std::string din, dgamma, dxs;
    long dr = 1;
    std::optional<std::string> dcsv;
    density->add_option("--in", din, "base set JSON")->required();
    density->add_option("--r", dr, "zero-block half-length r")->required();
    density->add_option("--gamma", dgamma, "gamma spec")->required();
    density->add_option("--xs", dxs, "comma-separated sample points")->required();
    density->add_option("--csv", dcsv, "CSV path (default: stdout)");
    density->callback([&] { exit_code = run_verify_density(din, dr, dgamma, dxs, dcsv); });

    auto* lemmas = verify->add_subcommand("lemmas", "class-decomposition diagnostics");
    LemmasArgs la;
    lemmas->add_option("--in", la.audit_path, "audit JSON")->required();
    lemmas->add_option("--B", la.b_path, "base set JSON")->required();
    lemmas->add_option("--f", la.f_path, "prescribed function JSON")->required();
    lemmas->add_option("--h", la.h, "order h")->required()->check(CLI::Range(2, 16));
    lemmas->add_option("--g", la.g, "bound g")->required();
    lemmas->add_option("--r", la.r_text, "auto | integer");
    lemmas->add_option("--gamma", la.gamma_text, "auto | gamma spec");
    lemmas->add_option("--epsilon", la.epsilon_text, "pow:<delta>, required when gamma=auto");
    lemmas->add_option("--k", la.k, "stage to decompose (default: first addition)");
    lemmas->add_option("--window", la.window, "partial-order window half-width");
    lemmas->callback([&] { exit_code = run_verify_lemmas(la); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const addrep::certification_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCertification;
    } catch (const addrep::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParams;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParams;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return exit_code;
}
