#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "frobenius/equation.hpp"
#include "frobenius/io.hpp"
#include "frobenius/recurrence.hpp"
#include "frobenius/series.hpp"
#include "frobenius/special.hpp"
#include "frobenius/w_tensor.hpp"

// Command implementations behind the `frobenius` CLI. Each writes CSV to
// `out`, a one-line diagnostic to `err`, and returns the process exit code:
// 0 success, 1 validation/parse failure, 2 numeric/domain failure.

namespace frobenius::cli {

inline constexpr long kDefaultMaxOrder = 4096;

inline long max_order_from_env() {
    if (const char* s = std::getenv("FROBENIUS_MAX_ORDER")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v >= 0) return v;
    }
    return kDefaultMaxOrder;
}

struct CoeffsOptions {
    std::string path;
    std::size_t point = 0;
    int branch = 1;
    long order = 10;
    std::string method = "closed";
    bool allow_log = false;
};

struct EvalOptions {
    std::string path;
    std::size_t point = 0;
    int branch = 1;
    long order = 60;
    std::vector<std::string> at;
    bool force = false;
};

struct VerifyOptions {
    std::string path;
    long order = 60;
};

struct RecurrenceOptions {
    std::string path;
    long order = 10;
    std::string method = "closed";
};

namespace detail {

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_numeric_failure(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline void check_order(long order) {
    if (order < 0) throw Error(ErrorCode::InvalidArgument, "--order must be >= 0");
    const long cap = max_order_from_env();
    if (order > cap)
        throw Error(ErrorCode::InvalidArgument,
                    "--order " + std::to_string(order) + " exceeds FROBENIUS_MAX_ORDER=" + std::to_string(cap));
}

inline SolveMethod parse_method(const std::string& m) {
    if (m == "direct") return SolveMethod::direct;
    if (m == "closed") return SolveMethod::closed;
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + m + "'");
}

inline Complex parse_point(const std::string& s) {
    std::size_t used = 0;
    const std::size_t comma = s.find(',');
    try {
        const std::string re = s.substr(0, comma);
        const double x = std::stod(re, &used);
        if (used != re.size()) throw std::invalid_argument(s);
        if (comma == std::string::npos) return {x, 0.0};
        const std::string im = s.substr(comma + 1);
        const double y = std::stod(im, &used);
        if (used != im.size()) throw std::invalid_argument(s);
        return {x, y};
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::InvalidArgument, "cannot parse point '" + s + "' (expected \"re,im\")");
    }
}

inline void write_row(std::ostream& out, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out << ',';
        out << c;
        first = false;
    }
    out << '\n';
}

inline std::string fmt(double x) { return io::format_double(x); }

inline FrobeniusSolution solve_branch(const FuchsianEquation& eq, std::size_t point, int branch, long order,
                                      SolveMethod method) {
    if (branch == 1) return first_solution(eq, point, order, method);
    if (branch == 2) return second_solution(eq, point, order, method);
    throw Error(ErrorCode::InvalidArgument, "--branch must be 1 or 2");
}

/// Ten points with |x - x_i| <= 0.3 r, away from the branch cut.
inline std::vector<Complex> residual_samples(Complex origin, double radius) {
    std::vector<Complex> pts;
    for (int k = 0; k < 10; ++k) {
        const double r = 0.3 * radius * (k + 1) / 10.0;
        const double theta = -2.8 + 5.6 * k / 9.0;
        pts.push_back(origin + std::polar(r, theta));
    }
    return pts;
}

/// Five points on |x - x_i| = 0.3 r.
inline std::vector<Complex> wronskian_samples(Complex origin, double radius) {
    std::vector<Complex> pts;
    for (int k = 0; k < 5; ++k) pts.push_back(origin + std::polar(0.3 * radius, -2.4 + 1.2 * k));
    return pts;
}

inline double max_relative_difference(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
        const double d = std::abs(a[k] - b[k]);
        if (d == 0.0) continue;
        worst = std::max(worst, d / std::max(std::abs(b[k]), 1e-300));
    }
    return a.size() == b.size() ? worst : std::numeric_limits<double>::infinity();
}

class CheckTable {
public:
    void add(const std::string& name, bool pass, const std::string& detail) {
        rows_.push_back({name, pass, detail});
        all_pass_ = all_pass_ && pass;
    }
    void add_error(const std::string& name, const std::exception& e) { add(name, false, e.what()); }

    bool all_pass() const noexcept { return all_pass_; }

    void print(std::ostream& out) const {
        write_row(out, {"check", "status", "detail"});
        for (const auto& r : rows_) {
            std::string detail = r.detail;
            std::replace(detail.begin(), detail.end(), ',', ';');
            write_row(out, {r.name, r.pass ? "pass" : "FAIL", detail});
        }
    }

private:
    struct Row {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Row> rows_;
    bool all_pass_ = true;
};

template <class Fn>
void run_check(CheckTable& table, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        table.add_error(name, e);
    }
}

inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

inline void verify_equation(const io::EquationFile& file, long order, CheckTable& table) {
    const FuchsianEquation eq = io::build(file);
    const PolynomialForm form = polynomial_form(eq);
    const std::size_t F = eq.finite_count();

    for (std::size_t i = 0; i < F; ++i) {
        const std::string at = "point" + std::to_string(i) + ".";
        const LocalFrame frame = shift_to_point(eq, i);
        const Complex origin = frame.origin;

        run_check(table, at + "indicial_roots", [&] {
            const IndicialData ind = indicial(frame);
            const double scale = std::abs(ind.g0_coeffs[2]) * (1.0 + std::norm(ind.rho2)) + std::abs(ind.g0_coeffs[1]);
            const double worst = std::max(std::abs(ind.g0(ind.rho1)), std::abs(ind.g0(ind.rho2))) / scale;
            table.add(at + "indicial_roots", worst <= tol::root_residual, sci(worst));
        });

        run_check(table, at + "gamma_recovery", [&] {
            Complex denom(1.0);
            for (std::size_t l = 0; l < F; ++l)
                if (l != i) denom *= origin - eq.singular_points()[l];
            const double err = std::abs(form.Q(origin) / denom - eq.gammas()[i]) / std::max(1.0, std::abs(eq.gammas()[i]));
            table.add(at + "gamma_recovery", err <= 1e-10, sci(err));
        });

        for (int branch = 1; branch <= 2; ++branch) {
            const std::string b = at + "branch" + std::to_string(branch) + ".";
            run_check(table, b + "direct_vs_closed", [&] {
                const auto d = solve_branch(eq, i, branch, order, SolveMethod::direct);
                const auto c = solve_branch(eq, i, branch, order, SolveMethod::closed);
                const double err = max_relative_difference(c.coeffs.values, d.coeffs.values);
                table.add(b + "direct_vs_closed", err <= 1e-10, sci(err));
            });
            run_check(table, b + "residual", [&] {
                const auto sol = solve_branch(eq, i, branch, order, SolveMethod::closed);
                double worst = 0.0;
                for (const Complex& x : residual_samples(origin, frame.radius))
                    worst = std::max(worst, residual(eq, sol, x));
                const double limit = sol.has_log() ? 1e-6 : 1e-8;
                table.add(b + "residual", worst <= limit, sci(worst));
            });
        }

        run_check(table, at + "wronskian", [&] {
            const auto f1 = first_solution(eq, i, order);
            const auto f2 = second_solution(eq, i, order);
            const auto samples = wronskian_samples(origin, frame.radius);
            const WronskianReport rep = wronskian_check(f1, f2, samples);
            table.add(at + "wronskian", !rep.dependent && rep.max_deviation <= 1e-6, sci(rep.max_deviation));
        });

        run_check(table, at + "growth_bound", [&] {
            const IndicialData ind = indicial(frame);
            const GrowthBound gb = growth_bound(frame, ind.rho1, 0.5 * frame.radius);
            const auto sol = first_solution(eq, i, std::max<long>(order, 200));
            table.add(at + "growth_bound", gb.dominates(sol.coeffs),
                      "M=" + sci(gb.M) + " P=" + sci(gb.P) + " N0=" + std::to_string(gb.N0));
        });
    }

    run_check(table, "infinity.indicial_roots", [&] {
        const IndicialData ind = indicial_at_infinity(eq);
        const double scale = std::abs(ind.g0_coeffs[2]) * (1.0 + std::norm(ind.rho1)) +
                             std::abs(ind.g0_coeffs[1]) * (1.0 + std::abs(ind.rho1)) + std::abs(ind.g0_coeffs[0]);
        const double worst = std::max(std::abs(ind.g0(ind.rho1)), std::abs(ind.g0(ind.rho2))) / scale;
        table.add("infinity.indicial_roots", worst <= tol::root_residual, sci(worst));
    });

    if (file.kind == io::EquationKind::hypergeometric) {
        const HypergeometricParams p{file.params.at("a"), file.params.at("b"), file.params.at("c")};
        run_check(table, "hypergeometric.pochhammer_coefficients", [&] {
            const auto sol = solution_with_exponent(eq, 0, 0.0, order);
            const double err = max_relative_difference(sol.coeffs.values, gauss_coefficients(p, order));
            table.add("hypergeometric.pochhammer_coefficients", err <= 1e-12, sci(err));
        });
        long n = 0;
        if (!near_integer(1.0 - p.c, tol::resonance, n)) {
            run_check(table, "hypergeometric.second_solution_form", [&] {
                const auto sol = solution_with_exponent(eq, 0, 1.0 - p.c, order);
                const HypergeometricParams t{p.a - p.c + 1.0, p.b - p.c + 1.0, 2.0 - p.c};
                double worst = 0.0;
                for (const Complex& x : wronskian_samples(0.0, 1.0)) {
                    const Complex ref = principal_pow(x, 1.0 - p.c) * gauss_2f1(t, x, order).value;
                    worst = std::max(worst, std::abs(evaluate(sol, x).value - ref) / std::abs(ref));
                }
                table.add("hypergeometric.second_solution_form", worst <= 1e-10, sci(worst));
            });
        }
    }
    if (file.kind == io::EquationKind::heun) {
        const HeunParams p{file.params.at("a"),     file.params.at("q"),     file.params.at("alpha"),
                           file.params.at("beta"),  file.params.at("gamma"), file.params.at("delta"),
                           file.params.at("epsilon")};
        run_check(table, "heun.three_term_coefficients", [&] {
            const auto sol = solution_with_exponent(eq, 0, 0.0, order);
            const double err = max_relative_difference(sol.coeffs.values, heun_coefficients(p, order));
            table.add("heun.three_term_coefficients", err <= 1e-12, sci(err));
        });
        long n = 0;
        if (!near_integer(1.0 - p.gamma, tol::resonance, n)) {
            run_check(table, "heun.second_solution_form", [&] {
                const auto sol = solution_with_exponent(eq, 0, 1.0 - p.gamma, order);
                const double r = std::min(1.0, std::abs(p.a));
                double worst = 0.0;
                for (const Complex& x : wronskian_samples(0.0, r / 1.5)) {
                    const Complex ref = heun_second_local(p, x, order).value;
                    worst = std::max(worst, std::abs(evaluate(sol, x).value - ref) / std::abs(ref));
                }
                table.add("heun.second_solution_form", worst <= 1e-10, sci(worst));
            });
        }
    }
}

inline void verify_rule(const io::RuleFile& file, long order, CheckTable& table) {
    const io::TableRule rule = file.rule();
    const long N = std::min(order, file.K());
    const auto phi = file.inhomogeneity();
    run_check(table, "rule.closed_vs_direct", [&] {
        const auto d = iterate_direct(rule, file.start, N);
        const auto c = closed_form_table(rule, file.start, N);
        const double err = max_relative_difference(c.values, d.values);
        table.add("rule.closed_vs_direct", err <= 1e-10, sci(err));
    });
    run_check(table, "rule.tensor_vs_closed", [&] {
        const long n = std::min<long>(N, kMaxContractionLength);
        double worst = 0.0;
        for (long k = 0; k <= n; ++k) {
            const Complex a = contract_multilinear(rule, k) * file.start;
            const Complex b = theorem1_closed_form(rule, file.start, k);
            if (a != b) worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
        }
        table.add("rule.tensor_vs_closed", worst <= 1e-12, sci(worst));
    });
    if (file.phi) {
        run_check(table, "rule.inhomogeneous_vs_direct", [&] {
            const auto d = iterate_direct_inhomogeneous(rule, phi, file.start, N);
            double worst = 0.0;
            for (long k = 0; k <= N; ++k) {
                const Complex c = theorem2_closed_form(rule, phi, file.start, k);
                const Complex ref = d.values[static_cast<std::size_t>(k)];
                if (c != ref) worst = std::max(worst, std::abs(c - ref) / std::max(std::abs(ref), 1e-300));
            }
            table.add("rule.inhomogeneous_vs_direct", worst <= 1e-10, sci(worst));
        });
    }
}

}  // namespace detail

inline int cmd_analyze(const std::string& path, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const FuchsianEquation eq = io::build(io::parse_equation_file(io::read_json_file(path)));
        using detail::fmt;
        std::ostringstream buf;
        detail::write_row(buf, {"point_re", "point_im", "rho1_re", "rho1_im", "rho2_re", "rho2_im", "classification",
                                "radius"});
        for (std::size_t i = 0; i < eq.finite_count(); ++i) {
            const IndicialData d = indicial(shift_to_point(eq, i));
            const Complex p = eq.singular_points()[i];
            detail::write_row(buf, {fmt(p.real()), fmt(p.imag()), fmt(d.rho1.real()), fmt(d.rho1.imag()),
                                    fmt(d.rho2.real()), fmt(d.rho2.imag()), to_string(d), fmt(eq.local_radius(i))});
        }
        // At infinity the radius is that of the disk |1/x| < 1 / max |x_i|.
        const IndicialData d = indicial_at_infinity(eq);
        double outer = 0.0;
        for (const auto& p : eq.singular_points()) outer = std::max(outer, std::abs(p));
        detail::write_row(buf, {"inf", "inf", fmt(d.rho1.real()), fmt(d.rho1.imag()), fmt(d.rho2.real()),
                                fmt(d.rho2.imag()), to_string(d), fmt(1.0 / outer)});
        out << buf.str();
        return 0;
    });
}

inline int cmd_coeffs(const CoeffsOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        detail::check_order(opt.order);
        const SolveMethod method = detail::parse_method(opt.method);
        const FuchsianEquation eq = io::build(io::parse_equation_file(io::read_json_file(opt.path)));
        if (opt.branch == 2 && !opt.allow_log) {
            const IndicialData ind = indicial(shift_to_point(eq, opt.point));
            if (ind.classification != ExponentClass::generic)
                throw Error(ErrorCode::Resonance,
                            "exponents differ by an integer at this point; pass --allow-log for the second branch",
                            ind.m);
        }
        const FrobeniusSolution sol = detail::solve_branch(eq, opt.point, opt.branch, opt.order, method);
        if (sol.has_log())
            err << "log_coefficient," << detail::fmt(sol.log_coefficient.real()) << ','
                << detail::fmt(sol.log_coefficient.imag()) << '\n';
        std::ostringstream buf;
        detail::write_row(buf, {"k", "w_re", "w_im"});
        for (std::size_t k = 0; k < sol.coeffs.values.size(); ++k) {
            const Complex w = sol.coeffs.values[k];
            detail::write_row(buf, {std::to_string(k), detail::fmt(w.real()), detail::fmt(w.imag())});
        }
        out << buf.str();
        return 0;
    });
}

inline int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        detail::check_order(opt.order);
        if (opt.at.empty()) throw Error(ErrorCode::InvalidArgument, "at least one --at point is required");
        const FuchsianEquation eq = io::build(io::parse_equation_file(io::read_json_file(opt.path)));
        std::vector<Complex> xs;
        for (const auto& s : opt.at) xs.push_back(detail::parse_point(s));
        const FrobeniusSolution sol = detail::solve_branch(eq, opt.point, opt.branch, opt.order, SolveMethod::closed);
        if (!opt.force) {
            for (const auto& x : xs)
                if (std::abs(x - sol.origin) >= sol.radius)
                    throw Error(ErrorCode::OutOfDisk, "point outside the convergence disk (use --force)");
        }

        struct Row {
            EvaluationResult result;
            double residual = 0.0;
            std::string error;
        };
        std::vector<Row> rows(xs.size());
        auto work = [&](std::size_t begin, std::size_t stride) {
            for (std::size_t idx = begin; idx < xs.size(); idx += stride) {
                try {
                    rows[idx].result = evaluate(sol, xs[idx]);
                    rows[idx].residual = residual(eq, sol, xs[idx]);
                } catch (const std::exception& e) {
                    rows[idx].error = e.what();
                }
            }
        };
        const std::size_t workers =
            std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(xs.size(), 1));
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work, t, workers);
        work(0, workers);
        pool.clear();

        for (const auto& r : rows)
            if (!r.error.empty()) throw Error(ErrorCode::BranchPointInput, r.error);

        std::ostringstream buf;
        detail::write_row(buf, {"xi_re", "xi_im", "f_re", "f_im", "tail_bound", "residual"});
        for (std::size_t idx = 0; idx < xs.size(); ++idx) {
            const auto& r = rows[idx];
            detail::write_row(buf, {detail::fmt(xs[idx].real()), detail::fmt(xs[idx].imag()),
                                    detail::fmt(r.result.value.real()), detail::fmt(r.result.value.imag()),
                                    detail::fmt(r.result.tail_bound), detail::fmt(r.residual)});
        }
        out << buf.str();
        return 0;
    });
}

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        detail::check_order(opt.order);
        if (opt.order < 1) throw Error(ErrorCode::InvalidArgument, "--order must be >= 1 for verify");
        const io::json j = io::read_json_file(opt.path);
        detail::CheckTable table;
        if (j.is_object() && j.contains("mu")) {
            detail::verify_rule(io::parse_rule_file(j), opt.order, table);
        } else {
            const io::EquationFile file = io::parse_equation_file(j);
            io::build(file);  // surface validation errors as exit 1 before running checks
            detail::verify_equation(file, opt.order, table);
        }
        table.print(out);
        if (!table.all_pass()) {
            err << "error: verification failed\n";
            return 1;
        }
        return 0;
    });
}

inline int cmd_recurrence(const RecurrenceOptions& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        detail::check_order(opt.order);
        const io::RuleFile file = io::parse_rule_file(io::read_json_file(opt.path));
        if (file.K() < opt.order)
            throw Error(ErrorCode::InvalidArgument, "rule table has K = " + std::to_string(file.K()) +
                                                        " < order " + std::to_string(opt.order));
        const io::TableRule rule = file.rule();
        const InhomogeneityRule phi = file.inhomogeneity();
        const long N = opt.order;
        std::vector<Complex> values;
        if (opt.method == "direct") {
            values = file.phi ? iterate_direct_inhomogeneous(rule, phi, file.start, N).values
                              : iterate_direct(rule, file.start, N).values;
        } else if (opt.method == "closed") {
            values = file.phi ? closed_form_table_inhomogeneous(rule, phi, file.start, N).values
                              : closed_form_table(rule, file.start, N).values;
        } else if (opt.method == "tensor") {
            if (N > kMaxContractionLength)
                throw Error(ErrorCode::SizeLimit, "tensor method supports --order <= " +
                                                      std::to_string(kMaxContractionLength));
            for (long n = 0; n <= N; ++n) {
                Complex v = contract_multilinear(rule, n) * file.start;
                if (file.phi)
                    for (long p = 1; p <= n; ++p) v += contract_multilinear(rule, n, p) * phi(p);
                values.push_back(v);
            }
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown method '" + opt.method + "'");
        }
        std::ostringstream buf;
        detail::write_row(buf, {"k", "w_re", "w_im"});
        for (std::size_t k = 0; k < values.size(); ++k)
            detail::write_row(buf, {std::to_string(k), detail::fmt(values[k].real()), detail::fmt(values[k].imag())});
        out << buf.str();
        return 0;
    });
}

}  // namespace frobenius::cli
