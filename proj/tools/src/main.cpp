#include <array>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <w3j/errors.hpp>
#include <w3j/halfint.hpp>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using w3jcli::Common;
using w3jcli::OutFormat;

w3j::HalfInt parse_half(const std::string& text) {
    const auto v = w3j::HalfInt::parse(text);
    if (!v)
        throw CLI::ValidationError("half-integer",
                                   "cannot parse '" + text + "'");
    return *v;
}

std::array<w3j::HalfInt, 3> parse_triple(const std::vector<std::string>& v) {
    return {parse_half(v[0]), parse_half(v[1]), parse_half(v[2])};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wigner 3j-symbols: exact values and semiclassical geometry"};
    app.require_subcommand(1);
    // Let --out/--threads/... appear after the subcommand name as well.
    app.fallthrough();

    Common common;
    std::string out_name = "text";
    app.add_option("--out", out_name, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    app.add_option("--caustic-band", common.caustic_band,
                   "half-width of the caustic band in |cos gamma|")
        ->capture_default_str();
    app.add_option("--threads", common.threads, "worker threads for scans")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", common.seed, "seed for randomized validation")
        ->capture_default_str();

    // eval
    auto* eval = app.add_subcommand("eval", "one symbol, exact and asymptotic");
    std::vector<std::string> ev_j, ev_m;
    eval->add_option("--j", ev_j, "angular momenta j1 j2 j3 (e.g. 3/2)")
        ->expected(3)
        ->required();
    eval->add_option("--m", ev_m, "projections m1 m2 m3")
        ->expected(3)
        ->required();

    // scan
    auto* scan = app.add_subcommand("scan", "sweep the magnetic grid");
    std::vector<std::string> sc_j;
    std::string sc_m1;
    scan->add_option("--j", sc_j, "angular momenta j1 j2 j3")
        ->expected(3)
        ->required();
    scan->add_option("--m1", sc_m1, "fix m1 instead of sweeping it");

    // scaling
    auto* scaling =
        app.add_subcommand("scaling", "asymptotic error along a lambda ladder");
    std::vector<std::string> sl_j;
    std::string sl_m1 = "0";
    std::vector<int> sl_lambdas{1, 2, 4, 8};
    scaling->add_option("--j", sl_j, "base angular momenta j1 j2 j3")
        ->expected(3)
        ->required();
    scaling->add_option("--m1", sl_m1, "base m1 (scaled with lambda)")
        ->capture_default_str();
    scaling->add_option("--lambdas", sl_lambdas, "scale factors")
        ->delimiter(',')
        ->capture_default_str();

    // geometry
    auto* geometry =
        app.add_subcommand("geometry", "triangle shape and vector orientation");
    std::array<double, 3> ge_j{};
    std::array<double, 3> ge_m{0, 0, 0};
    geometry->add_option("--j", ge_j, "classical lengths j1 j2 j3")
        ->required();
    geometry->add_option("--m", ge_m, "classical projections m1 m2 m3");

    // maslov
    auto* maslov =
        app.add_subcommand("maslov", "contour actions and winding indices");
    std::string ma_manifold, ma_contour = "c1";
    int ma_site = 1;
    std::array<double, 3> ma_j{};
    std::array<double, 3> ma_m{0, 0, 0};
    maslov->add_option("--manifold", ma_manifold, "jm or wigner")
        ->check(CLI::IsMember({"jm", "wigner"}))
        ->required();
    maslov->add_option("--contour", ma_contour, "c1, c2 or c4")
        ->check(CLI::IsMember({"c1", "c2", "c4"}))
        ->capture_default_str();
    maslov->add_option("--site", ma_site, "which mode the contour lives on")
        ->check(CLI::Range(1, 3))
        ->capture_default_str();
    maslov->add_option("--j", ma_j, "classical lengths j1 j2 j3")
        ->required();
    maslov->add_option("--m", ma_m, "projections (jm manifold base point)");

    // validate
    auto* validate =
        app.add_subcommand("validate", "randomized invariant checks");
    bool va_quick = false;
    validate->add_flag("--quick", va_quick, "smaller sample sizes");

    // bench
    app.add_subcommand("bench", "timing checks against fixed budgets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    common.out = out_name == "csv"    ? OutFormat::Csv
                 : out_name == "json" ? OutFormat::Json
                                      : OutFormat::Text;

    try {
        if (eval->parsed())
            return w3jcli::cmd_eval(common, parse_triple(ev_j),
                                    parse_triple(ev_m), std::cout, std::cerr);
        if (scan->parsed()) {
            std::optional<w3j::HalfInt> m1;
            if (!sc_m1.empty()) m1 = parse_half(sc_m1);
            return w3jcli::cmd_scan(common, parse_triple(sc_j), m1, std::cout,
                                    std::cerr);
        }
        if (scaling->parsed())
            return w3jcli::cmd_scaling(common, parse_triple(sl_j),
                                       parse_half(sl_m1), sl_lambdas,
                                       std::cout, std::cerr);
        if (geometry->parsed())
            return w3jcli::cmd_geometry(common, ge_j, ge_m, std::cout,
                                        std::cerr);
        if (maslov->parsed())
            return w3jcli::cmd_maslov(common, ma_manifold, ma_contour, ma_site,
                                      ma_j, ma_m, std::cout, std::cerr);
        if (validate->parsed())
            return w3jcli::cmd_validate(common, va_quick, std::cout,
                                        std::cerr);
        return w3jcli::cmd_bench(common, std::cout, std::cerr);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const w3j::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
