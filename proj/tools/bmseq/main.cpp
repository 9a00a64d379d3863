// Copyright 2026 The bmseq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bmseq: command-line front end of libbmseq.

#include <iostream>

#include <CLI11.hpp>

#include "capi.hpp"
#include "commands.hpp"

namespace {

void add_common(CLI::App* cmd, cli::Options& o)
{
    auto* p = cmd->add_option("--p", o.p, "local exponent p (accepts 3/2)");
    auto* q = cmd->add_option("--q", o.q, "scale exponent q (accepts inf)");
    auto* r = cmd->add_option("--r", o.r, "aggregation exponent r");
    cmd->callback([&o, p, q, r] {
        o.p_set = p->count() > 0;
        o.q_set = q->count() > 0;
        o.r_set = r->count() > 0;
    });
    cmd->add_option("--tol", o.tol, "tolerance");
    cmd->add_option("--max-level", o.max_level, "highest dyadic level for block solvers (default: automatic)");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_flag("--scalar", o.scalar, "print a single value; divergent norms exit with 2");
    cmd->add_flag("--include-singletons", o.include_singletons, "add the one-point sets to the dyadic-length norm");
    cmd->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--csv", o.csv_path, "also write the result table to this CSV file");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bourgain-Morrey sequence-space norms, block-space bounds and convolution solvers"};
    app.set_version_flag("--version", bm_version());
    app.require_subcommand(1);

    cli::Options opts;

    cli::NormConfig norm;
    auto* c_norm = app.add_subcommand("norm", "norms of a sequence file with embedding-chain slacks");
    add_common(c_norm, opts);
    c_norm->add_option("--input,-i", norm.input, "sequence file")->required();
    c_norm->add_option("--norm", norm.norm, "norm printed under --scalar")
        ->check(CLI::IsMember({"dyadic", "centered", "dyadic-length"}));

    cli::RenormConfig renorm;
    auto* c_renorm = app.add_subcommand("renorm-study", "dyadic/centered norm ratios across a random corpus");
    add_common(c_renorm, opts);
    c_renorm->add_option("--q-grid", renorm.q_grid, "q values")->delimiter(',');
    c_renorm->add_option("--corpus-size", renorm.corpus_size, "number of random sequences");
    c_renorm->add_option("--max-support", renorm.max_support, "largest support size");

    cli::CounterexampleConfig cex;
    auto* c_cex = app.add_subcommand("counterexamples", "harmonic and power-law truncation ladders");
    add_common(c_cex, opts);
    c_cex->add_option("--study", cex.study, "harmonic, power or both");
    c_cex->add_option("--harmonic-sizes", cex.harmonic_sizes, "truncation sizes M")->delimiter(',');
    c_cex->add_option("--power-sizes", cex.power_sizes, "truncation sizes M")->delimiter(',');
    c_cex->add_option("--s", cex.s, "decay exponent of the power study (default q)");
    c_cex->add_option("--bound", cex.bound, "bound the power-study norm must exceed");
    c_cex->add_option("--cauchy-tol", cex.cauchy_tol, "last-doubling increment threshold");

    cli::DualityConfig dual;
    auto* c_dual = app.add_subcommand("duality", "block-norm sandwich and certificate ladder");
    add_common(c_dual, opts);
    c_dual->add_option("--input,-i", dual.input, "sequence file")->required();
    c_dual->add_option("--side", dual.side, "block, functional or both");
    c_dual->add_option("--ladder-max", dual.ladder_max, "highest level of the certificate ladder");
    c_dual->add_option("--candidates", dual.candidates, "test vectors for the block lower bound");
    c_dual->add_option("--iterations", dual.iterations, "descent sweeps of the block upper bound");
    c_dual->add_option("--gap-bound", dual.gap_bound, "largest accepted relative sandwich gap");

    cli::SolveConfig solve;
    auto* c_solve = app.add_subcommand("solve", "solve x - k*x = f (optionally with a pointwise nonlinearity)");
    add_common(c_solve, opts);
    c_solve->add_option("--kernel,-k", solve.kernel, "kernel file");
    c_solve->add_option("--geometric", solve.geometric, "geometric kernel lambda,alpha,cutoff");
    c_solve->add_option("--rhs,-f", solve.rhs, "right-hand side file")->required();
    c_solve->add_option("--solver", solve.solver, "neumann, wiener, nonlinear or compare");
    c_solve->add_option("--nonlinearity", solve.nonlinearity, "zero, sin:eps, tanh:eps, linear:c");
    c_solve->add_option("--solution,-o", solve.solution_path, "write the solution sequence here");
    c_solve->add_option("--tail-tol", solve.tail_tol, "inverse-kernel truncation budget");
    c_solve->add_option("--resolution", solve.resolution, "Fourier grid size (0: automatic)");
    c_solve->add_option("--max-terms", solve.max_terms, "Neumann term limit");
    c_solve->add_option("--max-iterations", solve.max_iterations, "fixed-point iteration limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitBadInput;
    }

    try {
        if (c_norm->parsed()) return cli::run_norm(opts, norm, std::cout);
        if (c_renorm->parsed()) return cli::run_renorm_study(opts, renorm, std::cout);
        if (c_cex->parsed()) return cli::run_counterexamples(opts, cex, std::cout);
        if (c_dual->parsed()) return cli::run_duality(opts, dual, std::cout);
        if (c_solve->parsed()) return cli::run_solve(opts, solve, std::cout);
    } catch (const cli::Exit& e) {
        std::cerr << "bmseq: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "bmseq: " << e.what() << "\n";
        return cli::kExitBadInput;
    }
    return cli::kExitBadInput;
}
