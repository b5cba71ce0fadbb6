#include <flatdual/cli.hpp>
#include <flatdual/expr.hpp>
#include <flatdual/functions.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>

namespace flatdual::cli {

namespace {

constexpr const char* grammar_help = R"(Expressions:
  operators   + - * / ^   ('^' is right associative and binds tighter than
                          unary minus: -x^2 is -(x^2); x^-2 is allowed)
  constants   pi, i (imaginary unit), decimal numbers with optional exponent
  functions   sin cos tan exp log sqrt asin acos atan sinh cosh tanh
              asinh acosh atanh inv absx conjg   (one argument)
              atan2                              (two arguments)
  Multiplication is always explicit: write 2*x, not 2x.
  Integer exponents (x^3, x^-2) use repeated multiplication; any other
  exponent is exp(b*log(a)) on the principal branch.

Complex numbers on the command line: 1.5, -2, 0.1+1i, 3-2.5i, 2i (no spaces).

Exit codes: 0 success, 2 usage or parse error, 3 non-finite result.
)";

double parse_real(std::string_view text, std::string_view whole)
{
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError("invalid complex number '" + std::string(whole) + "'");
    }
    return v;
}

// Imaginary coefficient text: "", "+", "-" mean +-1.
double parse_imag(std::string_view text, std::string_view whole)
{
    if (text.empty() || text == "+") {
        return 1.0;
    }
    if (text == "-") {
        return -1.0;
    }
    return parse_real(text, whole);
}

expr::Env bind(const std::vector<std::string>& vars, std::span<const Dual> values)
{
    expr::Env env;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        env.insert_or_assign(vars[i], values[i]);
    }
    return env;
}

void check_bound(const expr::Node& e, const std::vector<std::string>& vars)
{
    for (const auto& name : expr::free_variables(e)) {
        if (std::find(vars.begin(), vars.end(), name) == vars.end()) {
            throw expr::UnboundVariable(name);
        }
    }
}

CVector<double> to_vector(const std::vector<Complex>& v)
{
    CVector<double> out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = v[i];
    }
    return out;
}

void check_point(const std::vector<std::string>& vars, const std::vector<Complex>& at)
{
    if (vars.empty()) {
        throw UsageError("at least one variable is required");
    }
    if (vars.size() != at.size()) {
        throw UsageError("got " + std::to_string(vars.size()) + " variable(s) but " + std::to_string(at.size())
                         + " point coordinate(s)");
    }
}

json real_to_json(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

double real_from_json(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") {
            return std::numeric_limits<double>::quiet_NaN();
        }
        if (s == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        if (s == "-inf") {
            return -std::numeric_limits<double>::infinity();
        }
        throw UsageError("invalid number '" + s + "' in JSON");
    }
    return j.get<double>();
}

json complex_array(std::span<const Complex> values)
{
    json arr = json::array();
    for (const auto& z : values) {
        arr.push_back(complex_to_json(z));
    }
    return arr;
}

std::vector<Complex> complex_array_from_json(const json& arr)
{
    std::vector<Complex> out;
    for (const auto& z : arr) {
        out.push_back(complex_from_json(z));
    }
    return out;
}

DiffKind kind_from_string(const std::string& s)
{
    for (const auto k : {DiffKind::gradient, DiffKind::jacobian, DiffKind::hessian, DiffKind::directional}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw UsageError("unknown result kind '" + s + "'");
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

// ---------------------------------------------------------------------------
// Literals and formatting
// ---------------------------------------------------------------------------

Complex parse_complex(std::string_view text)
{
    if (text.empty()) {
        throw UsageError("empty complex number");
    }
    if (text.back() != 'i') {
        return {parse_real(text, text), 0.0};
    }
    const std::string_view body = text.substr(0, text.size() - 1);
    // The sign separating real and imaginary parts: not the leading sign and
    // not an exponent sign.
    for (std::size_t p = body.size(); p-- > 1;) {
        if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            return {parse_real(body.substr(0, p), text), parse_imag(body.substr(p), text)};
        }
    }
    return {0.0, parse_imag(body, text)};
}

std::vector<Complex> parse_complex_list(std::string_view text)
{
    std::vector<Complex> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_complex(item));
    }
    return out;
}

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex z)
{
    const bool negative_imag = std::signbit(z.imag()) && !std::isnan(z.imag());
    return format_real(z.real()) + (negative_imag ? "-" : "+") + format_real(std::abs(z.imag())) + "i";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

bool DerivativeReport::all_finite() const { return std::all_of(values.begin(), values.end(), finite); }

bool all_finite(const DiffResult<double>& result)
{
    return std::all_of(result.values.data(), result.values.data() + result.values.size(), finite);
}

DerivativeReport cmd_derivatives(const std::string& expression, const std::string& var, Complex at, int order,
                                 int nest)
{
    if (order < 0) {
        throw UsageError("--order must be >= 0");
    }
    if (nest < 1) {
        throw UsageError("--nest must be >= 1");
    }
    const auto tree = expr::parse(expression);
    check_bound(*tree, {var});

    DerivativeReport report{expression, var, at, order, nest, {}, 0.0};
    const auto start = std::chrono::steady_clock::now();

    Dual x = order == 0 ? Dual::constant(at, 0) : Dual::variable(at, order);
    expr::Env env;
    for (int step = 0; step < nest; ++step) {
        env.insert_or_assign(var, std::move(x));
        x = expr::eval_dual(*tree, env, order);
    }

    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.values.assign(x.coeffs().data(), x.coeffs().data() + x.coeffs().size());
    return report;
}

DiffResult<double> cmd_grad(const std::string& expression, const std::vector<std::string>& vars,
                            const std::vector<Complex>& at)
{
    check_point(vars, at);
    const auto tree = expr::parse(expression);
    check_bound(*tree, vars);
    const auto f = [&](std::span<const Dual> x) { return expr::eval_dual(*tree, bind(vars, x)); };
    const auto q = to_vector(at);
    return {DiffKind::gradient, gradient(f, q), q};
}

DiffResult<double> cmd_jac(const std::vector<std::string>& expressions, const std::vector<std::string>& vars,
                           const std::vector<Complex>& at)
{
    check_point(vars, at);
    if (expressions.empty()) {
        throw UsageError("jac needs at least one component expression");
    }
    std::vector<expr::NodePtr> trees;
    for (const auto& e : expressions) {
        trees.push_back(expr::parse(e));
        check_bound(*trees.back(), vars);
    }
    const auto f = [&](std::span<const Dual> x) {
        const auto env = bind(vars, x);
        std::vector<Dual> out;
        for (const auto& t : trees) {
            out.push_back(expr::eval_dual(*t, env));
        }
        return out;
    };
    const auto q = to_vector(at);
    return {DiffKind::jacobian, jacobian(f, q, static_cast<int>(trees.size())), q};
}

DiffResult<double> cmd_hess(const std::string& expression, const std::vector<std::string>& vars,
                            const std::vector<Complex>& at)
{
    check_point(vars, at);
    const auto tree = expr::parse(expression);
    check_bound(*tree, vars);
    const auto f = [&](std::span<const Dual> x) { return expr::eval_dual(*tree, bind(vars, x)); };
    const auto q = to_vector(at);
    return {DiffKind::hessian, hessian(f, q), q};
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

json complex_to_json(Complex z) { return {{"re", real_to_json(z.real())}, {"im", real_to_json(z.imag())}}; }

Complex complex_from_json(const json& j) { return {real_from_json(j.at("re")), real_from_json(j.at("im"))}; }

json to_json(const DerivativeReport& r)
{
    return {
        {"kind", "derivatives"},
        {"expression", r.expression},
        {"variable", r.variable},
        {"point", complex_array(std::span<const Complex>(&r.at, 1))},
        {"order", r.order},
        {"nest", r.nest},
        {"shape", {r.values.size()}},
        {"values", complex_array(r.values)},
        {"elapsed_s", r.elapsed_seconds},
    };
}

DerivativeReport derivative_report_from_json(const json& j)
{
    if (j.at("kind") != "derivatives") {
        throw UsageError("not a derivatives report");
    }
    DerivativeReport r;
    r.expression = j.at("expression").get<std::string>();
    r.variable = j.at("variable").get<std::string>();
    r.at = complex_from_json(j.at("point").at(0));
    r.order = j.at("order").get<int>();
    r.nest = j.at("nest").get<int>();
    r.values = complex_array_from_json(j.at("values"));
    r.elapsed_seconds = j.at("elapsed_s").get<double>();
    return r;
}

json to_json(const DiffResult<double>& r)
{
    // Row-major values; a gradient is reported with a one-element shape.
    json shape = r.kind == DiffKind::gradient ? json{r.values.rows()} : json{r.values.rows(), r.values.cols()};
    std::vector<Complex> flat;
    for (Eigen::Index i = 0; i < r.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < r.values.cols(); ++j) {
            flat.push_back(r.values(i, j));
        }
    }
    const std::vector<Complex> point(r.point.data(), r.point.data() + r.point.size());
    return {
        {"kind", to_string(r.kind)},
        {"point", complex_array(point)},
        {"shape", shape},
        {"values", complex_array(flat)},
    };
}

DiffResult<double> diff_result_from_json(const json& j)
{
    DiffResult<double> r;
    r.kind = kind_from_string(j.at("kind").get<std::string>());
    const auto point = complex_array_from_json(j.at("point"));
    r.point = to_vector(point);
    const auto& shape = j.at("shape");
    const Eigen::Index rows = shape.at(0).get<Eigen::Index>();
    const Eigen::Index cols = shape.size() > 1 ? shape.at(1).get<Eigen::Index>() : 1;
    const auto flat = complex_array_from_json(j.at("values"));
    if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
        throw UsageError("values do not match shape");
    }
    r.values.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            r.values(i, c) = flat[static_cast<std::size_t>(i * cols + c)];
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Plain text
// ---------------------------------------------------------------------------

void print_plain(std::ostream& out, const DerivativeReport& r)
{
    out << "derivatives of " << r.expression << " with respect to " << r.variable << " at " << format_complex(r.at)
        << " (order " << r.order << ", nest " << r.nest << ")\n";
    out << "k real imag\n";
    for (std::size_t k = 0; k < r.values.size(); ++k) {
        out << k << ' ' << format_real(r.values[k].real()) << ' ' << format_real(r.values[k].imag());
        if (!finite(r.values[k])) {
            out << "  # non-finite";
        }
        out << '\n';
    }
    out << "elapsed time (s): " << r.elapsed_seconds << '\n';
}

void print_plain(std::ostream& out, const DiffResult<double>& r)
{
    out << to_string(r.kind) << " at";
    for (Eigen::Index i = 0; i < r.point.size(); ++i) {
        out << ' ' << format_complex(r.point[i]);
    }
    out << '\n';
    for (Eigen::Index i = 0; i < r.values.rows(); ++i) {
        if (r.kind != DiffKind::gradient) {
            out << "row " << (i + 1) << ':';
        }
        for (Eigen::Index j = 0; j < r.values.cols(); ++j) {
            out << ' ' << format_complex(r.values(i, j));
            if (!finite(r.values(i, j))) {
                out << " # non-finite";
            }
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Arbitrary-order forward-mode derivatives of complex expressions", "flatdual"};
    app.footer(grammar_help);
    app.require_subcommand(1);

    std::string format = "plain";
    std::string precision;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"plain", "json"}));
        sub->add_option("--precision", precision,
                        "Reserved. The coefficient scalar is fixed at build time (double); this flag is ignored");
    };

    std::string expression;
    std::string var = "x";
    std::string at_text = "0";
    int order = 1;
    int nest = 1;
    auto* deriv = app.add_subcommand("derivatives", "Table of D^k f for k = 0..order at one point");
    deriv->add_option("--expr", expression, "Univariate expression")->required();
    deriv->add_option("--var", var, "Variable name")->capture_default_str();
    deriv->add_option("--at", at_text, "Evaluation point, e.g. 1.1 or 1.1+2.2i")->capture_default_str();
    deriv->add_option("--order", order, "Highest derivative order")->capture_default_str();
    deriv->add_option("--nest", nest, "Apply the expression to itself this many times")->capture_default_str();
    add_common(deriv);

    std::string exprs;
    std::string vars_text;
    std::string point_text;
    const auto add_operator = [&](const char* name, const char* help, const char* expr_help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--exprs,--expr", exprs, expr_help)->required();
        sub->add_option("--vars", vars_text, "Comma-separated variable names")->required();
        sub->add_option("--at", point_text, "Comma-separated complex coordinates")->required();
        add_common(sub);
        return sub;
    };
    auto* grad = add_operator("grad", "Gradient of a scalar expression", "Scalar expression");
    auto* jac = add_operator("jac", "Jacobian of a vector expression", "Component expressions separated by ';'");
    auto* hess = add_operator("hess", "Hessian of a scalar expression", "Scalar expression");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage_error;
    }

    if (!precision.empty()) {
        err << "note: --precision is ignored; this build uses double-precision coefficients\n";
    }
    const bool as_json = format == "json";

    try {
        if (deriv->parsed()) {
            const auto report = cmd_derivatives(expression, var, parse_complex(at_text), order, nest);
            if (as_json) {
                out << to_json(report).dump(2) << '\n';
            } else {
                print_plain(out, report);
            }
            if (!report.all_finite()) {
                err << "error: non-finite derivative components\n";
                return non_finite_result;
            }
            return success;
        }

        const auto vars = split(vars_text, ',');
        const auto at = parse_complex_list(point_text);
        DiffResult<double> result;
        if (grad->parsed()) {
            result = cmd_grad(exprs, vars, at);
        } else if (jac->parsed()) {
            result = cmd_jac(split(exprs, ';'), vars, at);
        } else if (hess->parsed()) {
            result = cmd_hess(exprs, vars, at);
        }
        if (as_json) {
            out << to_json(result).dump(2) << '\n';
        } else {
            print_plain(out, result);
        }
        if (!all_finite(result)) {
            err << "error: non-finite result\n";
            return non_finite_result;
        }
        return success;
    } catch (const expr::ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const expr::UnboundVariable& e) {
        err << "error: " << e.what() << '\n';
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    }
    return usage_error;
}

}  // namespace flatdual::cli
