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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bmseq/error.hpp"
#include "bmseq/norms.hpp"
#include "bmseq/operators.hpp"
#include "gen.hpp"

using namespace bmseq;
using doctest::Approx;

namespace {

SparseSeq seq(std::vector<Entry> e)
{
    return SparseSeq::from_entries(std::move(e));
}

double dnorm(const SparseSeq& x, const Params& P)
{
    return dyadic_norm(x, P).value;
}

SparseSeq convolve_direct(const SparseSeq& x, const SparseSeq& y)
{
    std::vector<Entry> e;
    for (const auto& a : x.entries()) {
        for (const auto& b : y.entries()) e.push_back({a.index + b.index, a.value * b.value});
    }
    std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    std::vector<Entry> merged;
    for (const auto& t : e) {
        if (!merged.empty() && merged.back().index == t.index) {
            merged.back().value += t.value;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Entry& t) { return t.value == 0.0; });
    return SparseSeq::from_sorted(std::move(merged));
}

const Params P24 = Params::make(2, 4, 2);

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("translation, convolution, multipliers and projections")
{
    const auto x = seq({{0, 1}, {3, 2}});
    CHECK(translate(x, 5) == seq({{5, 1}, {8, 2}}));
    CHECK(convolve(x, seq({{1, 1}, {-1, 1}})) == seq({{-1, 1}, {1, 1}, {2, 2}, {4, 2}}));
    CHECK(convolve(x, SparseSeq()).empty());
    CHECK(convolve(SparseSeq::unit(0, 0.5), x) == x.scaled(0.5));
    CHECK(diag_multiply([](Index n) { return n == 0 ? 0.0 : 2.0; }, x) == SparseSeq::unit(3, 4.0));
    CHECK_THROWS_AS(diag_multiply([](Index) { return INFINITY; }, x), InvalidArgument);
    CHECK(project(seq({{-3, 1}, {-2, 1}, {2, 1}, {3, 1}}), 2) == seq({{-2, 1}, {2, 1}}));
    CHECK_THROWS_AS(project(x, -1), InvalidArgument);
}

TEST_CASE("property: norm is translation invariant under shifts by multiples of the top cell")
{
    gen::Rng rng(501);
    for (int c = 0; c < 200; ++c) {
        CAPTURE(c);
        const auto P = gen::params(rng);
        const auto x = gen::sequence(rng, {8, 0, 15, 5.0});
        const auto t = 16 * rng.integer(1, 1000);
        CHECK(dnorm(translate(x, t), P) == Approx(dnorm(x, P)).epsilon(1e-12));
    }
}

TEST_CASE("convolution with a unit shift can grow the dyadic norm")
{
    // Dyadic cells never straddle 0, so e_{-1} + e_0 is split at every level
    // while its shift e_0 + e_1 shares cells from level 1 on.
    const auto P = Params::make(1, 2, 2);
    const auto x = seq({{-1, 1}, {0, 1}});
    const auto y = SparseSeq::unit(1);
    CHECK(dnorm(x, P) == Approx(2.0).epsilon(1e-14));
    CHECK(dnorm(convolve(x, y), P) == Approx(std::sqrt(6.0)).epsilon(1e-14));
    CHECK(dnorm(convolve(x, y), P) > lp_norm(y, 1.0) * dnorm(x, P) + 0.4);
}

TEST_CASE("shift constant")
{
    CHECK(shift_constant(P24) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(shift_constant(Params::make(1, 2, 2)) == Approx(2.0).epsilon(1e-15));
    CHECK(shift_constant(Params::make(4, 8, 1)) == Approx(2.0).epsilon(1e-15));
    CHECK(shift_constant(Params::make(4, 8, 16)) == Approx(std::exp2(0.25)).epsilon(1e-15));
}

TEST_CASE("property: shifts grow the norm by at most the shift constant")
{
    gen::Rng rng(508);
    for (int c = 0; c < 500; ++c) {
        CAPTURE(c);
        const auto P = gen::params(rng);
        const auto x = gen::sequence(rng);
        const auto t = rng.integer(-100, 100);
        CHECK(dnorm(translate(x, t), P) <= shift_constant(P) * dnorm(x, P) * (1 + 1e-12));
    }
}

TEST_CASE("property: convolution is the direct sum and obeys the bound over translates")
{
    gen::Rng rng(502);
    for (int c = 0; c < 500; ++c) {
        CAPTURE(c);
        const auto P = gen::params(rng);
        const auto x = gen::sequence(rng);
        const auto y = gen::sequence(rng, {6, -20, 20, 2.0});
        const auto xy = convolve(x, y);
        const auto direct = convolve_direct(x, y);
        CHECK(lp_norm(xy - direct, 1.0) <= 1e-12 * lp_norm(x, 1.0) * lp_norm(y, 1.0));
        double bound = 0.0;
        for (const auto& t : y.entries()) bound += std::fabs(t.value) * dnorm(translate(x, t.index), P);
        CHECK(dnorm(xy, P) <= bound * (1 + 1e-12));
    }
}

TEST_CASE("property: convolution inequality for the centered norm")
{
    gen::Rng rng(507);
    for (int c = 0; c < 40; ++c) {
        CAPTURE(c);
        const double p = rng.uniform(1.0, 2.0);
        const auto P = Params::make(p, 8 * p, rng.uniform(3.0, 5.0) * p);
        const auto x = gen::sequence(rng, {5, -10, 10, 3.0});
        const auto y = gen::sequence(rng, {3, -4, 4, 1.0});
        const auto lhs = centered_norm(convolve(x, y), P, 1e-12);
        const auto rhs = centered_norm(x, P, 1e-12);
        REQUIRE(lhs.verdict != Verdict::divergent);
        CHECK(lhs.value <= lp_norm(y, 1.0) * (rhs.value + rhs.remainder_bound) + 1e-10);
    }
}

TEST_CASE("property: bounded multipliers and projections do not grow the norm")
{
    gen::Rng rng(503);
    for (int c = 0; c < 300; ++c) {
        CAPTURE(c);
        const auto P = gen::params(rng);
        const auto x = gen::sequence(rng);
        const double bound = rng.uniform(0.0, 3.0);
        const auto a = [bound](Index n) { return bound * std::sin(static_cast<double>(n)); };
        CHECK(dnorm(diag_multiply(a, x), P) <= bound * dnorm(x, P) * (1 + 1e-12));
        CHECK(dnorm(project(x, rng.integer(0, 40)), P) <= dnorm(x, P) * (1 + 1e-12));
    }
}

TEST_CASE("geometric kernel symbol")
{
    const auto k = geometric_kernel(0.3, 0.5, 64);
    CHECK(k.l1_norm + k.tail_l1_bound == Approx(0.45).epsilon(1e-12));
    const auto s = symbol(k, 1024);
    CHECK(s.values[0].real() == Approx(0.45).epsilon(1e-12));
    CHECK(s.values[512].real() == Approx(0.05).epsilon(1e-12));
    CHECK(s.min_gap == Approx(0.55).epsilon(1e-12));
    CHECK(s.max_abs <= k.l1_norm * (1 + 1e-12));
    CHECK_THROWS_AS(symbol(k, 256), InvalidArgument);
    CHECK_THROWS_AS(geometric_kernel(0.3, 1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(geometric_kernel(0.3, 0.5, -1), InvalidArgument);
}

TEST_CASE("Neumann series for a one-sided kernel")
{
    const auto k = Kernel::make(SparseSeq::unit(1, 0.5));
    const auto res = neumann_solve(k, SparseSeq::unit(0), P24, 1e-9);
    for (Index n = 0; n <= 20; ++n) CHECK(res.solution[n] == Approx(std::exp2(-static_cast<double>(n))).epsilon(1e-8));
    CHECK(res.residual <= 2e-9);
    CHECK(res.increments.size() == static_cast<std::size_t>(res.terms));
    for (std::size_t i = 1; i < res.increments.size(); ++i) CHECK(res.increments[i] < res.increments[i - 1]);
    CHECK_THROWS_AS(neumann_solve(Kernel::make(SparseSeq::unit(1, 1.0)), SparseSeq::unit(0), P24, 1e-9),
                    PreconditionFailed);
    CHECK_THROWS_AS(neumann_solve(k, SparseSeq::unit(0), P24, 1e-9, 3), ToleranceUnmet);
    CHECK_THROWS_AS(neumann_solve(k, SparseSeq::unit(0), P24, 0.0), InvalidArgument);
    CHECK(neumann_solve(k, SparseSeq(), P24, 1e-9).solution.empty());
}

TEST_CASE("property: Neumann increments decay geometrically")
{
    gen::Rng rng(509);
    for (int c = 0; c < 40; ++c) {
        CAPTURE(c);
        const auto P = gen::params(rng, {3.0, 5.0, 0.0});
        const auto k = gen::kernel(rng, 0.8, 6);
        const auto f = gen::sequence(rng, {6, -10, 10, 2.0});
        const auto res = neumann_solve(k, f, P, 1e-8);
        const double A = shift_constant(P), kappa = k.l1_norm;
        double bound = dnorm(f, P);
        for (std::size_t i = 0; i < res.increments.size(); ++i) {
            bound *= kappa;
            CHECK(res.increments[i] <= A * bound * (1 + 1e-9) + 1e-15);
        }
    }
}

TEST_CASE("Wiener inversion for a kernel with l1 norm above one")
{
    const auto k = Kernel::make(SparseSeq::unit(1, 1.2));
    const auto f = SparseSeq::unit(0);
    CHECK_THROWS_AS(neumann_solve(k, f, P24, 1e-8), PreconditionFailed);
    const auto res = wiener_solve(k, f, P24, 0, 1e-12);
    CHECK(res.residual <= 1e-8);
    CHECK(res.inverse.min_gap == Approx(0.2).epsilon(1e-9));
    CHECK_THROWS_AS(wiener_solve(Kernel::make(SparseSeq::unit(1, 1.0)), f, P24, 64, 1e-12), PreconditionFailed);
    CHECK_THROWS_AS(invert_kernel(k, 48, 1e-12), InvalidArgument);
}

TEST_CASE("property: Neumann and Wiener agree on contractive kernels")
{
    gen::Rng rng(504);
    for (int c = 0; c < 40; ++c) {
        CAPTURE(c);
        const auto P = gen::params(rng, {3.0, 5.0, 0.0});
        const auto k = gen::kernel(rng, 0.8, 6);
        const auto f = gen::sequence(rng, {6, -10, 10, 2.0});
        const double tol = 1e-8;
        const auto a = neumann_solve(k, f, P, tol);
        const auto b = wiener_solve(k, f, P, 0, 1e-12);
        CHECK(a.residual <= 2 * tol);
        CHECK(b.residual <= 2 * tol);
        CHECK(dnorm(a.solution - b.solution, P) <= a.error_bound + b.error_bound + 1e-12);
        const double kappa = k.total_l1();
        CHECK(dnorm(b.solution, P) <= dnorm(f, P) * (1 + shift_constant(P) * kappa / (1 - kappa)) * (1 + 1e-9));
    }
}

TEST_CASE("property: Wiener solves invertible kernels with l1 norm above one")
{
    gen::Rng rng(505);
    int solved = 0;
    for (int c = 0; c < 40; ++c) {
        CAPTURE(c);
        const auto k = gen::kernel(rng, 3.0, 5);
        const auto f = gen::sequence(rng, {5, -10, 10, 2.0});
        const auto grid = symbol(k, 1024);
        if (grid.min_gap < 0.05) continue;
        const auto res = wiener_solve(k, f, P24, 0, 1e-12);
        CHECK(res.residual <= 1e-8 * (1 + dnorm(f, P24)));
        CHECK(res.error_bound >= res.residual);
        ++solved;
    }
    CHECK(solved >= 10);
}

TEST_CASE("nonlinearities")
{
    CHECK(parse_nonlinearity("zero").lipschitz == 0.0);
    const auto s = parse_nonlinearity("sin:0.1");
    CHECK(s.lipschitz == Approx(0.1));
    CHECK(s.map(1.0) == Approx(0.1 * std::sin(1.0)));
    CHECK(parse_nonlinearity("tanh:-0.2").lipschitz == Approx(0.2));
    CHECK(parse_nonlinearity("linear:0.3").map(2.0) == Approx(0.6));
    CHECK_THROWS_AS(parse_nonlinearity("cos:0.1"), InvalidArgument);
    CHECK_THROWS_AS(parse_nonlinearity("sin:x"), InvalidArgument);
    CHECK_THROWS_AS(parse_nonlinearity("sin:0.1z"), InvalidArgument);
    CHECK_THROWS_AS(parse_nonlinearity("sin"), InvalidArgument);
}

TEST_CASE("nonlinear fixed point")
{
    const auto k = geometric_kernel(0.3, 0.5, 64);
    const auto f = seq({{0, 1}, {3, -0.5}});
    const auto res = nonlinear_solve(k, parse_nonlinearity("sin:0.1"), f, P24, 1e-10);
    CHECK(res.contraction < 1.0);
    CHECK(res.residual <= res.residual_bound);
    for (std::size_t i = 1; i < res.gaps.size(); ++i) CHECK(res.gaps[i] < res.gaps[i - 1]);
    // the zero nonlinearity reduces to the linear solve
    const auto lin = nonlinear_solve(k, parse_nonlinearity("zero"), f, P24, 1e-10);
    const auto w = wiener_solve(k, f, P24, 0, 1e-12);
    CHECK(dnorm(lin.solution - w.solution, P24) <= 1e-9);
    CHECK_THROWS_AS(nonlinear_solve(k, parse_nonlinearity("linear:2"), f, P24, 1e-10), PreconditionFailed);
    Nonlinearity shifted{"shift", [](double v) { return v + 1; }, 1.0};
    CHECK_THROWS_AS(nonlinear_solve(k, shifted, f, P24, 1e-10), InvalidArgument);
}

TEST_CASE("property: linear nonlinearity matches the rescaled linear problem")
{
    // x = k*x + c x + f  <=>  x = (k/(1-c))*x + f/(1-c)
    gen::Rng rng(506);
    for (int c = 0; c < 20; ++c) {
        CAPTURE(c);
        const auto k = gen::kernel(rng, 0.4, 4);
        const double a = rng.uniform(-0.3, 0.3);
        const auto f = gen::sequence(rng, {4, -6, 6, 2.0});
        const auto res = nonlinear_solve(k, parse_nonlinearity("linear:" + std::to_string(a)), f, P24, 1e-11);
        const double slope = std::stod(std::to_string(a));
        const auto scaled = Kernel::make(k.seq.scaled(1 / (1 - slope)));
        const auto ref = neumann_solve(scaled, f.scaled(1 / (1 - slope)), P24, 1e-11);
        CHECK(dnorm(res.solution - ref.solution, P24) <= 1e-8);
    }
}

}  // TEST_SUITE
