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
#include "bmseq/interval.hpp"
#include "bmseq/params.hpp"
#include "bmseq/sparse_seq.hpp"
#include "gen.hpp"

using namespace bmseq;

namespace {

SparseSeq seq(std::vector<Entry> e)
{
    return SparseSeq::from_entries(std::move(e));
}

}  // namespace

TEST_SUITE("params") {

TEST_CASE("conjugate exponents")
{
    CHECK(conjugate(2.0) == doctest::Approx(2.0));
    CHECK(std::isinf(conjugate(1.0)));
    CHECK(conjugate(kInf) == 1.0);
    CHECK(conjugate(1.5) == doctest::Approx(3.0));
    CHECK_THROWS_AS(conjugate(0.5), InvalidArgument);
}

TEST_CASE("exponent text accepts rationals and inf")
{
    CHECK(parse_exponent("3/2") == 1.5);
    CHECK(parse_exponent("2.5") == 2.5);
    CHECK(std::isinf(parse_exponent("inf")));
    CHECK_THROWS_AS(parse_exponent("x"), InvalidArgument);
    CHECK_THROWS_AS(parse_exponent("1/0"), InvalidArgument);
}

TEST_CASE("params validation and derived exponents")
{
    const auto P = Params::make(2, 4, 2);
    CHECK(P.beta() == doctest::Approx(-0.5));
    CHECK(P.q_conj() == doctest::Approx(4.0 / 3.0));
    CHECK(P.scale_exponent() == doctest::Approx(-0.25));
    const auto Q = Params::make(2, kInf, 3);
    CHECK(Q.beta() == doctest::Approx(-1.5));
    CHECK_FALSE(Q.q_finite());
    CHECK_THROWS_AS(Params::make(0.5, 4, 2), InvalidArgument);
    CHECK_THROWS_AS(Params::make(2, 2, 2), InvalidArgument);
    CHECK_THROWS_AS(Params::make(2, 1.5, 2), InvalidArgument);
    CHECK_THROWS_AS(Params::make(2, 4, 0.9), InvalidArgument);
    CHECK_THROWS_AS(Params::make(2, 4, kInf), InvalidArgument);
}

}  // TEST_SUITE

TEST_SUITE("sparse sequences") {

TEST_CASE("construction sorts, drops zeros and rejects duplicates")
{
    const auto x = seq({{3, 1.0}, {-1, 2.0}, {0, 0.0}});
    REQUIRE(x.size() == 2);
    CHECK(x.entries()[0].index == -1);
    CHECK(x[3] == 1.0);
    CHECK(x[0] == 0.0);
    CHECK_THROWS_AS(seq({{1, 1.0}, {1, 2.0}}), InvalidArgument);
    CHECK_THROWS_AS(seq({{1, NAN}}), InvalidArgument);
    CHECK_THROWS_AS(SparseSeq().support_min(), InvalidArgument);
}

TEST_CASE("arithmetic cancels exactly")
{
    const auto x = seq({{0, 1.5}, {2, -1.0}});
    CHECK((x - x).empty());
    CHECK((x + x) == x.scaled(2.0));
    CHECK(x.restricted(1, 5) == SparseSeq::unit(2, -1.0));
    CHECK(x.abs()[2] == 1.0);
}

TEST_CASE("lp norms")
{
    CHECK(lp_norm(SparseSeq::unit(0), 7) == 1.0);
    CHECK(lp_norm(seq({{0, 1}, {1, 1}}), 1) == 2.0);
    CHECK(lp_norm(seq({{0, 3}, {1, 4}}), 2) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(lp_norm(seq({{0, 3}, {1, -4}}), kInf) == 4.0);
    CHECK(lp_norm(SparseSeq(), 2) == 0.0);
}

}  // TEST_SUITE

TEST_SUITE("intervals") {

TEST_CASE("local lp sums")
{
    const auto e01 = seq({{0, 1}, {1, 1}});
    CHECK(local_lp(SparseSeq::unit(0), DyadicInterval::make(0, 0), 2) == 1.0);
    CHECK(local_lp(e01, DyadicInterval::make(1, 0), 2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(local_lp(SparseSeq::unit(0), DyadicInterval::make(0, 5), 2) == 0.0);
    CHECK(local_lp(e01, CenteredInterval::make(1, 1), 1) == 2.0);
}

TEST_CASE("intersecting dyadic intervals")
{
    const auto e01 = seq({{0, 1}, {1, 1}});
    const auto l0 = intersecting_dyadic(e01, 0);
    REQUIRE(l0.size() == 2);
    CHECK(l0[0] == DyadicInterval::make(0, 0));
    CHECK(l0[1] == DyadicInterval::make(0, 1));
    const auto l1 = intersecting_dyadic(e01, 1);
    REQUIRE(l1.size() == 1);
    CHECK(l1[0] == DyadicInterval::make(1, 0));
    const auto l3 = intersecting_dyadic(seq({{-1, 1}, {0, 1}}), 3);
    REQUIRE(l3.size() == 2);
    CHECK(l3[0] == DyadicInterval::make(3, -1));
    CHECK(l3[1] == DyadicInterval::make(3, 0));
    CHECK_THROWS_AS(intersecting_dyadic(SparseSeq(), 0), InvalidArgument);
    CHECK_THROWS_AS(intersecting_dyadic(e01, -1), InvalidArgument);
    CHECK_THROWS_AS(DyadicInterval::make(-1, 0), InvalidArgument);
}

TEST_CASE("dyadic interval geometry")
{
    const auto I = DyadicInterval::make(3, -1);
    CHECK(I.first() == -8);
    CHECK(I.last() == -1);
    CHECK(I.parent() == DyadicInterval::make(4, -1));
    CHECK(DyadicInterval::containing(-9, 3) == DyadicInterval::make(3, -2));
    const auto kids = DyadicInterval::make(2, 1).children();
    CHECK(kids[0] == DyadicInterval::make(1, 2));
    CHECK(kids[1] == DyadicInterval::make(1, 3));
}

TEST_CASE("centered interval translation covariance")
{
    const auto S = CenteredInterval::make(4, 3);
    CHECK(S.size() == 7);
    CHECK(S.translated(-10) == CenteredInterval::make(-6, 3));
    CHECK(S.translated(-10).first() == S.first() - 10);
    CHECK_THROWS_AS(CenteredInterval::make(0, -1), InvalidArgument);
}

TEST_CASE("property: children of each level cover the level below")
{
    gen::Rng rng(101);
    for (int c = 0; c < 300; ++c) {
        CAPTURE(c);
        const auto x = gen::sequence(rng, {12, -200, 200, 5.0});
        for (int j = 1; j <= 9; ++j) {
            std::vector<DyadicInterval> kids;
            for (const auto& I : intersecting_dyadic(x, j)) {
                for (const auto& K : I.children()) kids.push_back(K);
            }
            for (const auto& I : intersecting_dyadic(x, j - 1)) {
                CHECK(std::find(kids.begin(), kids.end(), I) != kids.end());
            }
            const auto n = static_cast<Index>(intersecting_dyadic(x, j).size());
            CHECK(n <= (x.support_max() - x.support_min()) / (Index{1} << j) + 2);
        }
    }
}

TEST_CASE("property: local p-sums over a level partition recover the lp norm")
{
    gen::Rng rng(102);
    for (int c = 0; c < 300; ++c) {
        CAPTURE(c);
        const auto x = gen::sequence(rng, {20, -500, 500, 10.0});
        const double p = rng.uniform(1.0, 5.0);
        const int j = static_cast<int>(rng.integer(0, 10));
        double sum = 0.0;
        for (const auto& I : intersecting_dyadic(x, j)) sum += std::pow(local_lp(x, I, p), p);
        CHECK(sum == doctest::Approx(std::pow(lp_norm(x, p), p)).epsilon(1e-13));
    }
}

}  // TEST_SUITE
