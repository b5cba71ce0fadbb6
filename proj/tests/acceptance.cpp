// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <flatdual/cli.hpp>
#include <flatdual/expr.hpp>
#include <flatdual/flatdual.hpp>

#include "nested.hpp"
#include "oracles.hpp"

#include <sys/resource.h>
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace flatdual;
using namespace flatdual::testkit;
using Vec = CVector<double>;
using Mat = CMatrix<double>;
using Args = std::span<const Dual>;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail)
{
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
    if (!ok) {
        ++failures;
    }
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::mt19937_64 rng(20240531);

C random_complex(double r = 1.0)
{
    std::uniform_real_distribution<double> u(-r, r);
    return {u(rng), u(rng)};
}

Dual random_dual(int order)
{
    Dual d(order);
    for (int k = 0; k <= order; ++k) {
        d[k] = random_complex();
    }
    return d;
}

// --------------------------------------------------------------------------

void bell_equivalence()
{
    const auto start = std::chrono::steady_clock::now();
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<C> x(8);
        for (C& v : x) {
            v = random_complex();
        }
        for (int n = 0; n <= 8; ++n) {
            for (int k = 0; k <= n; ++k) {
                worst = std::max(worst, rel_err(bell_partial<double>(n, k, x), bell_oracle(n, k, x)));
            }
        }
    }
    const double t = seconds_since(start);
    report(1, worst <= 1e-10 && t < 5, "bell_partial vs oracle, max rel " + fmt(worst) + ", " + fmt(t) + " s");
}

void faa_di_bruno_equivalence()
{
    const auto start = std::chrono::steady_clock::now();
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Dual f = random_dual(6);
        const Dual g = random_dual(6);
        const auto table = [&f](C, int n) { return f.resized(n); };
        for (int n = 0; n <= 6; ++n) {
            worst = std::max(worst, rel_err(dnd(table, g, n), faa_di_bruno_oracle(f, g, n)));
        }
    }
    const double t = seconds_since(start);
    report(2, worst <= 1e-10 && t < 5, "dnd vs Faa di Bruno oracle, max rel " + fmt(worst) + ", " + fmt(t) + " s");
}

void closed_form_sin()
{
    const Dual s = lift(tables::sin_table{}, seed_variable(0.7, 20));
    double worst = 0;
    for (int k = 0; k <= 20; ++k) {
        worst = std::max(worst, rel_err(s[k], std::sin(0.7 + k * std::numbers::pi / 2)));
    }
    report(3, worst <= 1e-12, "sin at order 20 vs sin(x + k pi/2), max rel " + fmt(worst));
}

void branch_convention()
{
    const C v = asin(constant(1.1, 0))[0];
    const bool ok = std::round(v.real() * 1e4) / 1e4 == 1.5708 && std::round(v.imag() * 1e5) / 1e5 == 0.44357;
    std::ostringstream out;
    out.precision(17);
    out << "asin(1.1) = " << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
    report(4, ok, out.str());
}

const char* const damped_sine = "sin(x)*exp(-x^2)";

C scalar_iterate(C x, int times)
{
    for (int i = 0; i < times; ++i) {
        x = std::sin(x) * std::exp(-x * x);
    }
    return x;
}

Dual dual_iterate(const expr::Node& tree, Dual x, int times)
{
    for (int i = 0; i < times; ++i) {
        x = expr::eval_dual(tree, {{"x", x}});
    }
    return x;
}

void nested_stress()
{
    const auto tree = expr::parse(damped_sine);
    const auto start = std::chrono::steady_clock::now();
    const Dual r = dual_iterate(*tree, seed_variable(1.1, 15), 1000);
    const double t = seconds_since(start);
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    const double mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
    const double err = rel_err(r[0], scalar_iterate(1.1, 1000));
    const bool ok = r.order() == 15 && t < 10 && mb < 100 && err <= 1e-12;
    report(5, ok, "1000-fold nesting at order 15, " + fmt(t) + " s, peak " + fmt(mb) + " MB, component 0 rel " +
                      fmt(err));
}

void moderate_nesting()
{
    const auto tree = expr::parse(damped_sine);
    const auto start = std::chrono::steady_clock::now();
    const std::vector<C> expected = nested_dual_oracle(damped_sine, "x", 1.1, 10, 5);
    double worst_nested = 0;
    for (int n = 0; n <= 10; ++n) {
        const Dual r = dual_iterate(*tree, n == 0 ? constant(1.1, 0) : seed_variable(1.1, n), 5);
        for (int k = 0; k <= n; ++k) {
            worst_nested = std::max(worst_nested, rel_err(r[k], expected[static_cast<std::size_t>(k)]));
        }
    }
    const Dual r4 = dual_iterate(*tree, seed_variable(1.1, 4), 5);
    const auto scalar = [](C z) { return scalar_iterate(z, 5); };
    double worst_fd = 0;
    for (int k = 0; k <= 4; ++k) {
        worst_fd = std::max(worst_fd, rel_err(r4[k], richardson_diff(scalar, 1.1, k)));
    }
    const bool ok = worst_nested <= 1e-9 && worst_fd <= 1e-6;
    report(6, ok, "5-fold nesting vs nested duals (orders 0..10) max rel " + fmt(worst_nested) +
                      ", vs Richardson (orders 0..4) max rel " + fmt(worst_fd) + ", " + fmt(seconds_since(start)) +
                      " s");
}

void high_order_exp()
{
    const Dual e = exp(seed_variable(1.1, 100));
    double worst = 0;
    for (int k = 0; k <= 100; ++k) {
        worst = std::max(worst, rel_err(e[k], std::exp(1.1)));
    }
    report(7, e.order() == 100 && worst <= 1e-9, "exp at order 100, max rel " + fmt(worst));
}

void arcsin_recursion()
{
    double worst = 0;
    for (const C z : {C(0.5), C(0.3, 0.2)}) {
        const Dual a = asin(seed_variable(z, 6));
        for (int k = 0; k <= 6; ++k) {
            worst = std::max(worst, rel_err(a[k], arcsin_recursion_oracle(z, k)));
        }
    }
    report(8, worst <= 1e-9, "asin orders 0..6 vs recursion, max rel " + fmt(worst));
}

Dual fstest(Args r)
{
    const Dual p = r[0] * r[1] * r[2];
    return sin(p) + cos(p);
}

C fstest_scalar(const std::vector<C>& r)
{
    const C p = r[0] * r[1] * r[2];
    return std::sin(p) + std::cos(p);
}

std::vector<Dual> fvectest(Args r)
{
    const Dual &x = r[0], &y = r[1], &z = r[2], &w = r[3];
    return {sin(x * y * z * w), cos(x * y * z * w) * sqrt(w / y - x / z), sin(log(x * y * z * w))};
}

Vec sample_point(int m)
{
    Vec q(m);
    for (int i = 0; i < m; ++i) {
        q[i] = C((i + 1) / 10.0, 1.0);
    }
    return q;
}

void diff_ops_consistency()
{
    const Vec q4 = sample_point(4);
    const Mat j = jacobian(fvectest, q4, 3);
    double worst_jv = 0;
    for (int trial = 0; trial < 10; ++trial) {
        Vec v(4);
        for (int i = 0; i < 4; ++i) {
            v[i] = random_complex();
        }
        const Vec a = d1fvector(fvectest, v, q4, 3);
        const Vec b = j * v;
        for (int i = 0; i < 3; ++i) {
            worst_jv = std::max(worst_jv, rel_err(a[i], b[i]));
        }
    }

    const Vec q3 = sample_point(3);
    const Mat h = hessian(fstest, q3);
    const bool symmetric = h == h.transpose();
    const std::vector<C> qv(q3.data(), q3.data() + q3.size());
    double worst_fd = 0;
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            const C fd = richardson_partial2(fstest_scalar, qv, r, c);
            worst_fd = std::max(worst_fd, rel_err(h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), fd));
        }
    }

    double worst_pol = 0;
    for (int trial = 0; trial < 10; ++trial) {
        Vec v(3);
        for (int i = 0; i < 3; ++i) {
            v[i] = random_complex();
        }
        worst_pol = std::max(worst_pol, rel_err(d2fscalar(fstest, v, v, q3), d2fscalar(fstest, v, q3)));
    }

    const bool ok = worst_jv <= 1e-10 && symmetric && worst_fd <= 1e-5 && worst_pol <= 1e-11;
    report(9, ok, "J v max rel " + fmt(worst_jv) + ", hessian " + (symmetric ? "symmetric" : "NOT symmetric") +
                      ", vs finite differences max rel " + fmt(worst_fd) + ", polarization max rel " + fmt(worst_pol));
}

void inverse_pairs()
{
    using Fn = std::function<Dual(const Dual&)>;
    const std::vector<std::pair<Fn, Fn>> pairs{
        {[](const Dual& a) { return exp(a); }, [](const Dual& a) { return log(a); }},
        {[](const Dual& a) { return sin(a); }, [](const Dual& a) { return asin(a); }},
        {[](const Dual& a) { return tan(a); }, [](const Dual& a) { return atan(a); }},
        {[](const Dual& a) { return sinh(a); }, [](const Dual& a) { return asinh(a); }},
        {[](const Dual& a) { return cosh(a); }, [](const Dual& a) { return acosh(a); }},
        {[](const Dual& a) { return tanh(a); }, [](const Dual& a) { return atanh(a); }},
    };
    double worst = 0;
    for (const auto& [forward, inverse] : pairs) {
        for (int j = 0; j < 20; ++j) {
            const Dual x = seed_variable(std::polar(0.6, 0.15 + 0.3 * j), 8);
            worst = std::max(worst, max_taylor_err(forward(inverse(x)), x));
        }
    }
    report(10, worst <= 1e-10, "six inverse pairs, 20 points, order 8, max Taylor-scaled rel " + fmt(worst));
}

struct ProcessResult {
    int status = -1;
    std::string output;
};

ProcessResult run_cli(const std::string& args)
{
    ProcessResult result;
    const std::string command = std::string(FLATDUAL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        return result;
    }
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        result.output.append(buf, got);
    }
    const int status = pclose(pipe);
    result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

bool same_bits(C a, C b)
{
    return std::bit_cast<std::array<double, 2>>(a) == std::bit_cast<std::array<double, 2>>(b);
}

void cli_contract()
{
    struct Case {
        std::string args;
        std::function<bool(const cli::DerivativeReport&)> check;
    };
    const std::vector<Case> cases{
        {"derivatives --expr 'sin(x)*exp(-x^2)' --var x --at 1.1 --order 15 --nest 1000",
         [](const cli::DerivativeReport& r) {
             return r.values.size() == 16 && rel_err(r.values[0], scalar_iterate(1.1, 1000)) <= 1e-12;
         }},
        {"derivatives --expr x --at 5 --order 2",
         [](const cli::DerivativeReport& r) { return r.values == std::vector<C>{5, 1, 0}; }},
        {"derivatives --expr 'sin(x)^log(x*x)' --at 1.1+2.2i --order 5",
         [](const cli::DerivativeReport& r) {
             const auto g = [](C z) { return std::exp(std::log(z * z) * std::log(std::sin(z))); };
             if (r.values.size() != 6) {
                 return false;
             }
             for (int k = 0; k <= 3; ++k) {
                 if (rel_err(r.values[static_cast<std::size_t>(k)], richardson_diff(g, C(1.1, 2.2), k)) > 1e-6) {
                     return false;
                 }
             }
             return true;
         }},
    };
    int passed = 0;
    std::string detail;
    for (const auto& c : cases) {
        const ProcessResult p = run_cli(c.args + " --format json");
        bool ok = p.status == cli::success;
        if (ok) {
            try {
                const cli::json emitted = cli::json::parse(p.output);
                const auto back = cli::derivative_report_from_json(emitted);
                const auto again = cli::derivative_report_from_json(cli::json::parse(cli::to_json(back).dump()));
                ok = cli::to_json(back) == emitted && again.values.size() == back.values.size() && c.check(back);
                for (std::size_t k = 0; ok && k < back.values.size(); ++k) {
                    ok = same_bits(again.values[k], back.values[k]);
                }
            } catch (const std::exception& e) {
                detail += std::string(" [") + e.what() + "]";
                ok = false;
            }
        }
        passed += ok ? 1 : 0;
        if (!ok) {
            detail += " failed: " + c.args + " (exit " + std::to_string(p.status) + ")";
        }
    }
    // Documented error exits.
    const bool parse_error = run_cli("derivatives --expr 'x+' --at 5").status == cli::usage_error;
    const bool non_finite = run_cli("derivatives --expr 'log(x)' --at 0 --format json").status == cli::non_finite_result;
    report(11, passed == 3 && parse_error && non_finite,
           std::to_string(passed) + "/3 derivative examples exit 0 with bit-exact JSON round trip" +
               (parse_error ? ", parse error exits 2" : ", parse error exit WRONG") +
               (non_finite ? ", non-finite exits 3" : ", non-finite exit WRONG") + detail);
}

}  // namespace

int main()
{
    nested_stress();  // first, so peak RSS reflects this criterion alone
    bell_equivalence();
    faa_di_bruno_equivalence();
    closed_form_sin();
    branch_convention();
    moderate_nesting();
    high_order_exp();
    arcsin_recursion();
    diff_ops_consistency();
    inverse_pairs();
    cli_contract();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
