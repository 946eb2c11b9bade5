#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <w3j/halfint.hpp>

namespace w3jcli {

enum class OutFormat { Text, Csv, Json };

// Options shared by every subcommand.
struct Common {
    OutFormat out = OutFormat::Text;
    double caustic_band = 1e-9;
    int threads = 1;
    std::uint64_t seed = 12345;
};

using JTriple = std::array<w3j::HalfInt, 3>;
using MTriple = std::array<w3j::HalfInt, 3>;

int cmd_eval(const Common& opt, const JTriple& j, const MTriple& m,
             std::ostream& os, std::ostream& err);

int cmd_scan(const Common& opt, const JTriple& j,
             std::optional<w3j::HalfInt> m1_fixed,
             std::ostream& os, std::ostream& err);

int cmd_scaling(const Common& opt, const JTriple& j, w3j::HalfInt m1,
                const std::vector<int>& lambdas,
                std::ostream& os, std::ostream& err);

int cmd_geometry(const Common& opt, const std::array<double, 3>& j,
                 const std::array<double, 3>& m,
                 std::ostream& os, std::ostream& err);

int cmd_maslov(const Common& opt, const std::string& manifold,
               const std::string& contour, int site,
               const std::array<double, 3>& j, const std::array<double, 3>& m,
               std::ostream& os, std::ostream& err);

int cmd_validate(const Common& opt, bool quick, std::ostream& os,
                 std::ostream& err);

int cmd_bench(const Common& opt, std::ostream& os, std::ostream& err);

}  // namespace w3jcli
