#include "okutsu/io/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_run_options(CLI::App* cmd, okutsu::io::RunOptions& opt)
{
    cmd->add_option("tree-file", opt.tree_file, "tree document (JSON)")->required();
    cmd->add_option("--ideal", opt.ideal, "fractional ideal as p:a,q:b,...");
    cmd->add_option("--order", opt.order, "comma-separated ordered subset of primes");
    cmd->add_option("--format", opt.format, "table or json")->check(CLI::IsMember({"table", "json"}));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Okutsu bases of fractional ideals via MaxMin"};
    app.require_subcommand(1);

    okutsu::io::RunOptions basis_opt;
    auto* basis = app.add_subcommand("basis", "print the reduced triangular basis");
    add_run_options(basis, basis_opt);

    okutsu::io::RunOptions trace_opt;
    auto* trace = app.add_subcommand("trace", "print every MaxMin step with its valuation vector");
    add_run_options(trace, trace_opt);

    okutsu::io::VerifyOptions verify_opt;
    auto* verify = app.add_subcommand("verify", "check MaxMin and its companions against independent oracles");
    verify->add_option("tree-file", verify_opt.tree_file, "tree document (JSON)");
    verify->add_option("--random", verify_opt.random, "SEED/COUNT[/CONFIG] generated instances");
    verify->add_option("--checks", verify_opt.checks, "subset of maximality,blocks,precomp,nu,canonical");
    verify->add_option("--ideal", verify_opt.ideal, "fractional ideal for a tree file");
    verify->add_option("--order", verify_opt.order, "ordered subset of primes for a tree file");
    verify->add_option("--format", verify_opt.format, "table or json")->check(CLI::IsMember({"table", "json"}));
    verify->add_option("--samples", verify_opt.canonical_samples, "random elements per instance for canonical")
        ->check(CLI::NonNegativeNumber);
    verify->add_flag("--corrupt-table", verify_opt.corrupt_table, "negative control: perturb the MaxMin table")
        ->group("");

    std::uint64_t gen_seed = 0;
    std::string gen_config;
    auto* gen = app.add_subcommand("gen", "write a random tree document");
    gen->add_option("--seed", gen_seed, "generator seed")->required();
    gen->add_option("--config", gen_config, "generator config (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : okutsu::io::kInputError;
    }

    if (*basis) return okutsu::io::cmd_basis(basis_opt, std::cout, std::cerr);
    if (*trace) return okutsu::io::cmd_trace(trace_opt, std::cout, std::cerr);
    if (*verify) return okutsu::io::cmd_verify(verify_opt, std::cout, std::cerr);
    return okutsu::io::cmd_gen(gen_seed, gen_config, std::cout, std::cerr);
}
