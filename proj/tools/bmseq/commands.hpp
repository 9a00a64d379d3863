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

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "report.hpp"

namespace cli {

struct NormConfig {
    std::string input;
    std::string norm = "dyadic";  // value printed under --scalar
};

struct RenormConfig {
    std::vector<std::string> q_grid{"3", "4", "8"};
    int corpus_size = 100;
    int max_support = 32;
};

struct CounterexampleConfig {
    std::string study = "both";
    std::vector<std::int64_t> harmonic_sizes;  // empty: 2^4 .. 2^16
    std::vector<std::int64_t> power_sizes;     // empty: 2^4 .. 2^30
    std::string s;                             // empty: s = q
    double bound = 5.0;
    double cauchy_tol = 1e-3;
};

struct DualityConfig {
    std::string input;
    std::string side = "both";
    int ladder_max = 40;
    int candidates = 64;
    int iterations = 500;
    double gap_bound = 0.1;
};

struct SolveConfig {
    std::string kernel;
    std::string geometric;  // "lambda,alpha,cutoff"
    std::string rhs;
    std::string solver = "wiener";
    std::string nonlinearity = "zero";
    std::string solution_path;
    double tail_tol = 1e-12;
    std::size_t resolution = 0;
    int max_terms = 10000;
    int max_iterations = 1000;
};

int run_norm(const Options& o, const NormConfig& c, std::ostream& out);
int run_renorm_study(const Options& o, const RenormConfig& c, std::ostream& out);
int run_counterexamples(const Options& o, const CounterexampleConfig& c, std::ostream& out);
int run_duality(const Options& o, const DualityConfig& c, std::ostream& out);
int run_solve(const Options& o, const SolveConfig& c, std::ostream& out);

}  // namespace cli
