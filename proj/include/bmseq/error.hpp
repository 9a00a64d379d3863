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

#include <stdexcept>
#include <string>

namespace bmseq {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad exponents, negative levels, zero sequences where a
/// support is needed, duplicate indices, non-finite values.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A mathematical precondition of a solver does not hold (kernel too large
/// for the Neumann series, symbol touching 1, non-contractive map).
class PreconditionFailed : public Error {
public:
    PreconditionFailed(const std::string& what, double quantity)
        : Error(what), quantity_(quantity) {}

    /// The violated quantity (e.g. the kernel l1 norm or the symbol gap).
    double quantity() const noexcept { return quantity_; }

private:
    double quantity_;
};

/// A requested accuracy could not be certified within the work budget.
class ToleranceUnmet : public Error {
public:
    using Error::Error;
};

}  // namespace bmseq
