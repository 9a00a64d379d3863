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

#include <limits>
#include <string_view>

namespace bmseq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Conjugate exponent e' with 1/e + 1/e' = 1 (1' = inf, inf' = 1).
/// Throws InvalidArgument for e < 1 or NaN.
double conjugate(double e);

/// Parses an exponent written as a decimal ("1.5"), an exact ratio ("3/2")
/// or "inf"/"infinity". Throws InvalidArgument on anything else.
double parse_exponent(std::string_view text);

/// The exponent triple (p, q, r) of a Bourgain-Morrey space together with
/// its conjugates and the damping exponent beta = r (1/q - 1/p).
///
/// Invariants (checked by make): 1 <= p < q <= inf, 1 <= r < inf.
class Params {
public:
    static Params make(double p, double q, double r);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double r() const noexcept { return r_; }
    double p_conj() const noexcept { return p_conj_; }
    double q_conj() const noexcept { return q_conj_; }
    double r_conj() const noexcept { return r_conj_; }

    /// r (1/q - 1/p); equals -r/p when q = inf. Always negative.
    double beta() const noexcept { return beta_; }

    bool q_finite() const noexcept { return q_ < kInf; }

    /// 1/q - 1/p, the exponent of |I| in the interval weight.
    double scale_exponent() const noexcept { return beta_ / r_; }

    friend bool operator==(const Params&, const Params&) = default;

private:
    Params() = default;

    double p_ = 2, q_ = 4, r_ = 2;
    double p_conj_ = 2, q_conj_ = 4.0 / 3.0, r_conj_ = 2;
    double beta_ = -0.5;
};

}  // namespace bmseq
