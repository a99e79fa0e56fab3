#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <exode/cli.hpp>

namespace {

void add_common(CLI::App *cmd, exode::cli::RunConfig &cfg, bool &json) {
    const char *names[] = {"--f3", "--f2", "--f1", "--f0"};
    const char *help[] = {"coefficient of y'''", "coefficient of y''", "coefficient of y'", "free term"};
    for (std::size_t i = 0; i < 4; ++i) cmd->add_option(names[i], cfg.coefficients[i], help[i]);
    cmd->add_option("--input", cfg.input_file, "JSON file with f3, f2, f1, f0 (and optional base, xi, mu, seed, tol)");
    cmd->add_option("--base", cfg.base, "base point t0,y0,y1_0,y2_0 for the first integral (default 1,1,1,1)");
    cmd->add_option("--seed", cfg.seed, "sampler seed (default 0)");
    cmd->add_option("--tol", cfg.tol, "relative tolerance of numeric identity tests (default 1e-9)");
    cmd->add_flag("--json", json, "emit JSON instead of text");
}

} // namespace

int main(int argc, char **argv) {
    using exode::cli::Command;
    CLI::App app{"Exactness, integrating factors and first integrals of third-order ODEs\n"
                 "  F3*y''' + F2*y'' + F1*y' + F0 = 0"};
    app.require_subcommand(1);

    exode::cli::RunConfig cfg;
    bool json = false;

    auto *check = app.add_subcommand("check", "report the six exactness conditions");
    add_common(check, cfg, json);
    auto *reduce = app.add_subcommand("reduce", "search product-form integrating factors and build the first integral");
    add_common(reduce, cfg, json);
    reduce->add_option("--xi", cfg.xi, "extra xi candidate, a product of univariate factors");
    auto *verify = app.add_subcommand("verify", "multiply by a given mu and verify exactness and the first integral");
    add_common(verify, cfg, json);
    verify->add_option("--mu", cfg.mu, "integrating factor to test")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exode::cli::kInputError;
    }

    if (check->parsed()) cfg.command = Command::Check;
    else if (reduce->parsed()) cfg.command = Command::Reduce;
    else cfg.command = Command::Verify;
    cfg.output = json ? exode::cli::OutputMode::Json : exode::cli::OutputMode::Text;
    return exode::cli::run(cfg, std::cout, std::cerr);
}
