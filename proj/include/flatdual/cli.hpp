#pragma once

/// \file
/// Command implementations behind the `flatdual` executable. Exposed as a
/// library so tests can drive each subcommand in-process.

#include <flatdual/diff_ops.hpp>
#include <flatdual/dual.hpp>

#include <json.hpp>

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flatdual::cli {

using Complex = std::complex<double>;
using json = nlohmann::json;

/// Stable process exit codes.
enum ExitCode : int { success = 0, usage_error = 2, non_finite_result = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i` (no spaces). Throws UsageError.
Complex parse_complex(std::string_view text);

/// Comma-separated list of complex literals.
std::vector<Complex> parse_complex_list(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

/// 17 significant digits, enough to round-trip a double.
std::string format_real(double v);
std::string format_complex(Complex z);

struct DerivativeReport {
    std::string expression;
    std::string variable;
    Complex at;
    int order = 0;
    int nest = 1;
    std::vector<Complex> values;  // D^k f at `at`, k = 0..order
    double elapsed_seconds = 0;

    bool all_finite() const;

    friend bool operator==(const DerivativeReport&, const DerivativeReport&) = default;
};

/// Seeds `var` at `at`, applies the expression `nest` times (each output
/// feeding the next application) and returns the derivative table.
DerivativeReport cmd_derivatives(const std::string& expression, const std::string& var, Complex at, int order,
                                 int nest);

DiffResult<double> cmd_grad(const std::string& expression, const std::vector<std::string>& vars,
                            const std::vector<Complex>& at);

/// `expressions` holds one component per entry (the CLI splits on ';').
DiffResult<double> cmd_jac(const std::vector<std::string>& expressions, const std::vector<std::string>& vars,
                           const std::vector<Complex>& at);

DiffResult<double> cmd_hess(const std::string& expression, const std::vector<std::string>& vars,
                            const std::vector<Complex>& at);

bool all_finite(const DiffResult<double>& result);

json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

json to_json(const DerivativeReport& report);
DerivativeReport derivative_report_from_json(const json& j);

json to_json(const DiffResult<double>& result);
DiffResult<double> diff_result_from_json(const json& j);

void print_plain(std::ostream& out, const DerivativeReport& report);
void print_plain(std::ostream& out, const DiffResult<double>& result);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flatdual::cli
