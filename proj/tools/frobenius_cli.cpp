#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "frobenius/commands.hpp"

int main(int argc, char** argv) {
    using namespace frobenius::cli;

    CLI::App app{"Frobenius series solutions of second-order Fuchsian equations"};
    app.require_subcommand(1);

    std::string analyze_path;
    auto* analyze = app.add_subcommand("analyze", "Exponents and classification at every singular point");
    analyze->add_option("file", analyze_path, "Equation file (JSON)")->required();

    CoeffsOptions coeffs;
    auto* c = app.add_subcommand("coeffs", "Frobenius coefficients at one singular point");
    c->add_option("file", coeffs.path, "Equation file (JSON)")->required();
    c->add_option("--point", coeffs.point, "Index of the finite singular point");
    c->add_option("--branch", coeffs.branch, "1 for the exponent with larger real part, 2 for the other");
    c->add_option("--order", coeffs.order, "Highest coefficient index N");
    c->add_option("--method", coeffs.method, "direct or closed");
    c->add_flag("--allow-log", coeffs.allow_log, "Permit the logarithmic second solution");

    EvalOptions eval;
    auto* e = app.add_subcommand("eval", "Evaluate a local solution");
    e->add_option("file", eval.path, "Equation file (JSON)")->required();
    e->add_option("--point", eval.point, "Index of the finite singular point");
    e->add_option("--branch", eval.branch, "1 or 2");
    e->add_option("--order", eval.order, "Truncation order N");
    e->add_option("--at", eval.at, "Evaluation point \"re,im\" (repeatable)")->required();
    e->add_flag("--force", eval.force, "Evaluate outside the convergence disk");

    VerifyOptions verify;
    auto* v = app.add_subcommand("verify", "Run the consistency checks for an equation or rule file");
    v->add_option("file", verify.path, "Equation or rule file (JSON)")->required();
    v->add_option("--order", verify.order, "Series order used by the checks");

    RecurrenceOptions rec;
    auto* r = app.add_subcommand("recurrence", "Solve a tabulated recurrence");
    r->add_option("file", rec.path, "Rule file (JSON)")->required();
    r->add_option("--order", rec.order, "Highest index N");
    r->add_option("--method", rec.method, "direct, closed or tensor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }

    if (*analyze) return cmd_analyze(analyze_path, std::cout, std::cerr);
    if (*c) return cmd_coeffs(coeffs, std::cout, std::cerr);
    if (*e) return cmd_eval(eval, std::cout, std::cerr);
    if (*v) return cmd_verify(verify, std::cout, std::cerr);
    return cmd_recurrence(rec, std::cout, std::cerr);
}
