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

#include "bmseq/params.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "bmseq/error.hpp"

namespace bmseq {

double conjugate(double e)
{
    if (std::isnan(e) || e < 1.0) {
        throw InvalidArgument("conjugate: exponent must be >= 1, got " + std::to_string(e));
    }
    if (e == 1.0) return kInf;
    if (e == kInf) return 1.0;
    return e / (e - 1.0);
}

namespace {

std::string lower_trimmed(std::string_view text)
{
    std::string out;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

double parse_real(const std::string& s, std::string_view original)
{
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || s.empty()) {
        throw InvalidArgument("cannot parse exponent '" + std::string(original) + "'");
    }
    return value;
}

}  // namespace

double parse_exponent(std::string_view text)
{
    const std::string s = lower_trimmed(text);
    if (s == "inf" || s == "infinity" || s == "+inf") return kInf;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const double num = parse_real(s.substr(0, slash), text);
        const double den = parse_real(s.substr(slash + 1), text);
        if (den == 0.0) throw InvalidArgument("zero denominator in exponent '" + std::string(text) + "'");
        return num / den;
    }
    return parse_real(s, text);
}

Params Params::make(double p, double q, double r)
{
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidArgument("p must be a finite exponent >= 1");
    }
    if (std::isnan(q) || !(q > p)) {
        throw InvalidArgument("q must satisfy p < q <= inf");
    }
    if (!(r >= 1.0) || !std::isfinite(r)) {
        throw InvalidArgument("r must be a finite exponent >= 1");
    }
    Params P;
    P.p_ = p;
    P.q_ = q;
    P.r_ = r;
    P.p_conj_ = conjugate(p);
    P.q_conj_ = conjugate(q);
    P.r_conj_ = conjugate(r);
    const double inv_q = (q == kInf) ? 0.0 : 1.0 / q;
    P.beta_ = r * (inv_q - 1.0 / p);
    return P;
}

}  // namespace bmseq
