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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is 0 when the
// set of failing criteria equals the set named by --expect-fail (default
// empty), so a criterion known not to hold still prints FAIL but a change in
// either direction is caught.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmseq/block_space.hpp"
#include "bmseq/duality.hpp"
#include "bmseq/error.hpp"
#include "bmseq/norms.hpp"
#include "bmseq/operators.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace bmseq;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double b)
{
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

// 1
Outcome identity_r_equals_p(double& seconds_limit)
{
    seconds_limit = 5.0;
    gen::Rng rng(1);
    double worst = 0.0;
    for (int c = 0; c < 200; ++c) {
        const auto x = gen::sequence(rng, {64, -256, 255, 10.0});
        for (double q : {3.0, 4.0, 8.0}) {
            const auto P = Params::make(2, q, 2);
            worst = std::max(worst, std::fabs(dyadic_norm(x, P).value / (c_pq_constant(P) * lp_norm(x, 2)) - 1.0));
        }
    }
    return {worst <= 1e-12, fmt("max |ratio - 1| = %.3g over 600 cases", worst)};
}

// 2
Outcome unit_vector_closed_form(double&)
{
    double worst = 0.0;
    int n = 0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        for (double m : {1.1, 1.5, 2.0, 4.0, 10.0}) {
            for (double r : {1.0, 1.5, 2.0, 4.0, 9.0}) {
                const auto P = Params::make(p, p * m, r);
                const double expect = std::pow(1.0 - std::exp2(r * (1 / (p * m) - 1 / p)), -1 / r);
                worst = std::max(worst, rel(dyadic_norm(SparseSeq::unit(0), P).value, expect));
                ++n;
            }
        }
    }
    return {worst <= 1e-12, fmt("max relative error %.3g over %d grid points", worst, n)};
}

// 3
Outcome embedding_chain(double& seconds_limit)
{
    seconds_limit = 30.0;
    gen::Rng rng(3);
    double worst_lo = INFINITY, worst_hi = INFINITY, worst_inf = INFINITY;
    for (int c = 0; c < 10000; ++c) {
        const auto P = gen::params(rng);
        const auto x = gen::sequence(rng);
        const double d = dyadic_norm(x, P).value;
        worst_lo = std::min(worst_lo, d - lp_norm(x, P.r()));
        worst_hi = std::min(worst_hi, embedding_constant_K(P) * lp_norm(x, 1.0) - d);
    }
    for (int c = 0; c < 10000; ++c) {
        const auto P = gen::params(rng, {4.0, 8.0, 1.0});
        const auto x = gen::sequence(rng);
        const auto k = q_infty_constants(P);
        const double d = q_infty_norm(x, P).value;
        const double lr = lp_norm(x, P.r());
        worst_inf = std::min({worst_inf, d - k.lower * lr, k.upper * lr - d});
    }
    const double worst = std::min({worst_lo, worst_hi, worst_inf});
    return {worst >= -1e-10,
            fmt("min slacks: lr %.3g, K l1 %.3g, q=inf sandwich %.3g (10^4 draws each)", worst_lo, worst_hi,
                worst_inf)};
}

// 4
Outcome brute_force_oracle(double&)
{
    gen::Rng rng(4);
    double worst = 0.0;
    int nonzero = 0;
    for (int c = 0; c < 1000; ++c) {
        std::vector<Entry> e;
        for (Index i = -8; i < 8; ++i) {
            const auto v = rng.integer(-1, 1);
            if (v != 0) e.push_back({i, static_cast<double>(v)});
        }
        const auto x = SparseSeq::from_sorted(std::move(e));
        const auto P = gen::params(rng);
        const double got = dyadic_norm(x, P).value;
        const double want = oracle::dyadic_norm(x, P, 60);
        if (x.empty()) {
            worst = std::max(worst, std::fabs(got));
        } else {
            worst = std::max(worst, rel(got, want));
            ++nonzero;
        }
    }
    return {worst <= 1e-10, fmt("max relative error %.3g over 1000 samples (%d nonzero)", worst, nonzero)};
}

// 5
Outcome convolution_inequality(double&)
{
    gen::Rng rng(5);
    double worst = INFINITY;
    for (int c = 0; c < 10000; ++c) {
        const auto P = gen::params(rng);
        const auto x = gen::sequence(rng);
        const auto y = gen::sequence(rng, {8, -40, 40, 3.0});
        worst = std::min(worst, lp_norm(y, 1.0) * dyadic_norm(x, P).value + 1e-10 -
                                    dyadic_norm(convolve(x, y), P).value);
    }
    // The dyadic grid is not shift invariant: at p=1, q=2, r=2 a unit shift
    // takes e_{-1} + e_0 (norm 2) to e_0 + e_1 (norm sqrt 6).
    const auto P = Params::make(1, 2, 2);
    const auto x = SparseSeq::from_sorted({{-1, 1.0}, {0, 1.0}});
    const double before = dyadic_norm(x, P).value;
    const double after = dyadic_norm(convolve(x, SparseSeq::unit(1)), P).value;
    return {worst >= 0.0, fmt("min of ||y||_1 ||x|| + 1e-10 - ||x*y|| = %.3g over 10^4 pairs; "
                              "x = e_-1 + e_0, y = e_1: ||x|| = %.4f, ||x*y|| = %.4f",
                              worst, before, after)};
}

// 6
Outcome block_sandwich(double& seconds_limit)
{
    seconds_limit = 60.0;
    gen::Rng rng(6);
    const auto P = Params::make(2, 4, 2);
    const double C = c_pq_constant(P);
    double worst_gap = 0.0, worst_lower = 0.0;
    bool bracket = true;
    for (int c = 0; c < 50; ++c) {
        const auto y = gen::sequence(rng, {8, -16, 15, 10.0});
        const double exact = lp_norm(y, 2.0) / C;
        const double lo = block_norm_lower_certificate(y, P, default_block_candidates(y, P)).certified_value;
        const double hi = block_norm_upper(y, P, default_block_max_level(y)).value;
        bracket = bracket && lo <= exact * (1 + 1e-12) && exact <= hi * (1 + 1e-12);
        worst_gap = std::max(worst_gap, (hi - lo) / lo);
        worst_lower = std::max(worst_lower, (exact - lo) / exact);
    }
    return {bracket && worst_gap <= 0.10 && worst_lower <= 0.01,
            fmt("bracketed %s, max relative gap %.4f, max lower shortfall %.2e", bracket ? "yes" : "no", worst_gap,
                worst_lower)};
}

// 7
Outcome certificate_ladder(double&)
{
    // Levels above 40 carry 2^{41 beta} of the r-th power, so the 1e-6 target
    // needs beta well below 0; it is checked at the running parameters
    // (beta = -1/2). The tail-bound check runs on random parameters as well.
    const auto P0 = Params::make(2, 4, 2);
    gen::Rng rng(7);
    double worst_ratio = INFINITY, worst_excess = -INFINITY;
    for (int c = 0; c < 200; ++c) {
        const bool running = c < 100;
        const auto P = running ? P0 : gen::params(rng);
        const auto x = gen::sequence(rng);
        const double norm = dyadic_norm(x, P).value;
        const double np = std::pow(norm, P.r());
        for (int L = 0; L <= 40; ++L) {
            const double cert = bm_norm_lower_certificate(x, P, L).certified_value;
            const double gap = np - std::pow(cert, P.r());
            worst_excess = std::max(worst_excess, (gap - dyadic_tail_bound(x, P, L)) / np);
            if (running && L == 40) worst_ratio = std::min(worst_ratio, cert / norm);
        }
    }
    // 1e-12 relative: roundoff in the difference of two r-th powers
    return {worst_ratio >= 1 - 1e-6 && worst_excess <= 1e-12,
            fmt("min certificate/norm at level 40 = %.10f (100 x at p=2,q=4,r=2), max (gap - tail)/norm^r = %.3g "
                "(plus 100 random parameters)",
                worst_ratio, worst_excess)};
}

// 8
Outcome holder_chain(double&)
{
    gen::Rng rng(8);
    double worst = INFINITY;
    for (int c = 0; c < 10000; ++c) {
        const auto P = gen::params(rng);
        const auto x = gen::sequence(rng);
        BlockRepresentation rep(P);
        if (rng.coin(0.3)) {
            rep = canonical_representation(gen::sequence(rng), P);
        } else {
            const int terms = static_cast<int>(rng.integer(1, 8));
            for (int t = 0; t < terms; ++t) {
                const auto I = DyadicInterval::containing(rng.integer(-40, 40), static_cast<int>(rng.integer(0, 6)));
                std::vector<Entry> e;
                for (Index i = I.first(); i <= I.last(); ++i) {
                    if (rng.coin()) e.push_back({i, rng.uniform(-1, 1)});
                }
                auto v = SparseSeq::from_sorted(std::move(e));
                if (v.empty()) v = SparseSeq::unit(I.first());
                v = v.scaled(block_bound(I, P) * rng.uniform(0.0, 1.0) / lp_norm(v, P.p_conj()));
                rep.add(rng.uniform(-5, 5), Block::make(I, std::move(v), P));
            }
        }
        const auto h = holder_chain_check(x, rep, P);
        worst = std::min({worst, h.slacks[0], h.slacks[1], h.slacks[2]});
    }
    return {worst >= -1e-10, fmt("min slack %.3g over 10^4 pairs", worst)};
}

// 9
Outcome solvers(double&)
{
    const auto k = geometric_kernel(0.3, 0.5, 64);
    const auto P = Params::make(2, 4, 2);
    const double tol = 1e-8;
    gen::Rng rng(9);
    bool agree = true, residuals = true;
    double worst_ratio = 0.0, worst_res = 0.0;
    for (int c = 0; c < 20; ++c) {
        const auto f = gen::sequence(rng, {8, -32, 31, 10.0});
        const auto a = neumann_solve(k, f, P, tol);
        const auto b = wiener_solve(k, f, P, 0, 1e-12);
        const double diff = dyadic_norm(a.solution - b.solution, P).value;
        const double allowed = a.error_bound + b.error_bound;
        agree = agree && diff <= allowed;
        worst_ratio = std::max(worst_ratio, diff / allowed);
        residuals = residuals && a.residual <= 2 * tol && b.residual <= 2 * tol;
        worst_res = std::max({worst_res, a.residual, b.residual});
    }
    const auto g = neumann_solve(Kernel::make(SparseSeq::unit(1, 0.5)), SparseSeq::unit(0), P, tol);
    double worst_closed = 0.0;
    for (Index n = 0; n <= 20; ++n) {
        worst_closed = std::max(worst_closed, std::fabs(g.solution[n] - std::exp2(-static_cast<double>(n))));
    }
    return {agree && residuals && worst_closed <= 1e-8,
            fmt("max diff/allowed %.3g, max residual %.3g, closed-form error %.3g", worst_ratio, worst_res,
                worst_closed)};
}

// 10
Outcome counterexamples(double&)
{
    const std::string cmd = std::string(BMSEQ_CLI_PATH) + " counterexamples --study both 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {false, "could not start the CLI"};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    pclose(pipe);
    const auto doc = nlohmann::json::parse(out, nullptr, false);
    if (doc.is_discarded()) return {false, "CLI output is not JSON"};

    const auto& h = doc["harmonic"];
    const auto& hl = h["rows"].back();
    const double l1 = hl["l1"].get<double>();
    const double hinc = h["checks"]["last_increment"].get<double>();
    // cross-check the streamed report against a stored evaluation
    std::vector<Entry> e;
    for (Index k = 1; k <= 65536; ++k) e.push_back({k, 1.0 / static_cast<double>(k)});
    const double direct = dyadic_norm(SparseSeq::from_sorted(std::move(e)), Params::make(2, 4, 2)).value;
    const bool harmonic_ok = hl["M"] == 65536 && l1 > 10 && hinc < 1e-3 && rel(hl["dyadic"].get<double>(), direct) < 1e-12;

    const auto& p = doc["power"];
    const auto& pp = p["params"];
    const bool power_params = pp["p"] == 2.0 && pp["q"] == 3.0 && pp["r"] == 4.0 && p["s"] == 3.0;
    const double d = p["rows"].back()["dyadic"].get<double>();
    const double linc = p["checks"]["lr_last_increment"].get<double>();
    const bool power_ok = power_params && d > 5.0 && linc < 1e-3;
    return {harmonic_ok && power_ok,
            fmt("harmonic M=2^16: l1 %.3f, last increment %.2e; power at M=%lld: dyadic %.4f, lr increment %.2e",
                l1, hinc, static_cast<long long>(p["rows"].back()["M"].get<std::int64_t>()), d, linc)};
}

// 11
Outcome divergence_verdicts(double&)
{
    int n = 0, mismatches = 0, growth_mismatches = 0, divergent = 0;
    const auto e0 = SparseSeq::unit(0);
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0}) {
        for (double q : {7.0, 8.0, 10.0, 16.0, 32.0, 64.0}) {
            for (double r : {1.0, 2.0, 3.0, 5.0, 8.0, 13.0}) {
                const auto P = Params::make(p, q, r);
                const bool expect = r * (1 / p - 1 / q) <= 2.0;
                const bool got = centered_norm(e0, P, 1e-10).verdict == Verdict::divergent;
                // Decade increments of the partial sums stay positive and stop
                // shrinking exactly when the series diverges; a converged sum
                // has both increments below one ulp.
                const double s4 = centered_power_partial(e0, P, 10'000);
                const double s5 = centered_power_partial(e0, P, 100'000);
                const double s6 = centered_power_partial(e0, P, 1'000'000);
                const bool grows = s6 - s5 > 0.0 && s6 - s5 >= s5 - s4;
                mismatches += got != expect;
                growth_mismatches += grows != expect;
                divergent += expect;
                ++n;
            }
        }
    }
    const bool zero_ok = centered_norm(SparseSeq(), Params::make(2, 4, 2), 1e-10).verdict == Verdict::exact &&
                         centered_norm(SparseSeq(), Params::make(2, 4, 2), 1e-10).value == 0.0;
    return {mismatches == 0 && growth_mismatches == 0 && zero_ok,
            fmt("%d points (%d divergent): verdict mismatches %d, partial-sum growth mismatches %d, zero %s", n,
                divergent, mismatches, growth_mismatches, zero_ok ? "ok" : "wrong")};
}

}  // namespace

int main(int argc, char** argv)
{
    std::set<std::size_t> expected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--expect-fail" && i + 1 < argc) {
            std::stringstream list(argv[++i]);
            std::string item;
            while (std::getline(list, item, ',')) expected.insert(std::stoul(item));
        } else {
            std::fprintf(stderr, "usage: %s [--expect-fail N[,N...]]\n", argv[0]);
            return 2;
        }
    }
    const std::vector<std::pair<const char*, std::function<Outcome(double&)>>> criteria = {
        {"r=p exact identity", identity_r_equals_p},
        {"unit vector closed form", unit_vector_closed_form},
        {"embedding chain fuzz", embedding_chain},
        {"brute-force oracle equivalence", brute_force_oracle},
        {"convolution inequality fuzz", convolution_inequality},
        {"block-norm duality sandwich", block_sandwich},
        {"certificate ladder", certificate_ladder},
        {"Hoelder chain", holder_chain},
        {"Neumann/Wiener solvers", solvers},
        {"counterexample studies", counterexamples},
        {"centered divergence verdicts", divergence_verdicts},
    };
    int failed = 0;
    std::set<std::size_t> failing;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        double limit = INFINITY;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second(limit);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string timing = fmt("%.2f s", secs);
        if (std::isfinite(limit)) {
            timing += fmt(" (limit %.0f s)", limit);
            if (secs >= limit) o.pass = false;
        }
        failed += !o.pass;
        if (!o.pass) failing.insert(i + 1);
        std::printf("%s [%2zu] %s: %s; %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                    timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    if (!expected.empty()) {
        std::string names;
        for (auto n : expected) names += (names.empty() ? "" : ",") + std::to_string(n);
        std::printf("expected failures: %s (%s)\n", names.c_str(), failing == expected ? "matched" : "NOT matched");
    }
    return failing == expected ? 0 : 1;
}
