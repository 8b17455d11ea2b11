#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fms::cli {

// Exit status classes: 0 success, 2 hypothesis/axiom/precondition failure,
// 3 nonconvergent or absent witness, 4 configuration error.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 2;
inline constexpr int kExitNoResult = 3;
inline constexpr int kExitConfigError = 4;

/// Unresolvable configuration (unknown name, missing or malformed field).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flags shared by every subcommand.
struct Invocation {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::optional<std::size_t> max_iter_override;
    std::optional<double> tol_override;
};

int cmd_verify_space(const nlohmann::json& config, const Invocation& inv);
int cmd_verify_tnorm(const nlohmann::json& config, const Invocation& inv);
int cmd_solve(const nlohmann::json& config, const Invocation& inv);
int cmd_nc_demo(const nlohmann::json& config, const Invocation& inv);
int cmd_report(const nlohmann::json& config, const Invocation& inv);

/// Entry points used by main() and by the tests.
int run(int argc, char** argv);
int run(std::vector<std::string> args);  // without the program name

}  // namespace fms::cli
