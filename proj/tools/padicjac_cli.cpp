#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "padicjac/runner.hpp"

using namespace padicjac;

namespace {

std::string read_config(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw usage_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool usage_kind(const std::string& kind) {
    return kind == "SchemaError" || kind == "EvenPrime" || kind == "SingularGenerator";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic Schottky groups: trees, measures, theta periods, Abel-Jacobi"};
    app.require_subcommand(1);

    std::string config_path = "-";
    RunOptions opt;
    app.add_option("--config", config_path, "config JSON file ('-' for stdin)");
    app.add_option("--depth", opt.depth, "tree/quotient depth N");
    app.add_option("--trunc", opt.trunc, "theta truncation cap");
    app.add_option("--digits", opt.digits, "working precision digits");

    app.add_subcommand("info", "group analysis and ping-pong certificate");
    auto* graph = app.add_subcommand("graph", "quotient metric graph");
    graph->add_option("--dot", opt.dot_path, "write the quotient graph as a DOT file");
    graph->add_option("--tree-dot", opt.tree_dot_path, "write the finite tree T_K(L_N) as a DOT file");
    app.add_subcommand("periods", "period matrix Q and gram = v(Q)");
    auto* aj = app.add_subcommand("aj", "Abel-Jacobi map of a point");
    aj->add_option("--point", opt.point, "curve point lift z")->required();
    aj->add_option("--base", opt.base, "base point z0")->required();
    auto* theta = app.add_subcommand("theta", "theta quotient");
    theta->add_option("--divisor", opt.divisor, "pairs 'p:q;p:q;...'")->required();
    theta->add_option("--at", opt.at, "evaluation points 'z,w'")->required();
    auto* integ = app.add_subcommand("integrate", "multiplicative integral against mu_gamma_j");
    integ->add_option("--divisor", opt.divisor, "terms 'point:mult;...'")->required();
    integ->add_option("--measure", opt.measure, "generator index j (1-based)")->required();
    app.add_subcommand("selfcheck", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        JobConfig cfg = parse_config_text(read_config(config_path));
        std::string command = app.get_subcommands().front()->get_name();
        Json out = run_command(command, cfg, opt);
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const usage_error& e) {
        Json err{{"error", {{"kind", "Usage"}, {"detail", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const math_error& e) {
        Json err{{"error", {{"kind", e.kind()}, {"detail", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return usage_kind(e.kind()) ? 1 : 2;
    }
}
