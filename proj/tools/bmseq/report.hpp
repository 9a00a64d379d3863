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

#include <json.hpp>

#include "bmseq/bmseq.h"

namespace cli {

using ojson = nlohmann::ordered_json;

/// Settings shared by every command. Exponents stay strings until parsed
/// through the library so "inf" and "3/2" are accepted.
struct Options {
    std::string p = "2";
    std::string q = "4";
    std::string r = "2";
    bool p_set = false, q_set = false, r_set = false;
    double tol = 1e-10;
    int max_level = -1;
    std::uint64_t seed = 20260101;
    bool scalar = false;
    bool include_singletons = false;
    std::string format = "json";
    std::string csv_path;
};

/// Rows of a result table, printed as CSV or embedded in the JSON report.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<ojson>> rows;

    void add(std::vector<ojson> row) { rows.push_back(std::move(row)); }
    ojson to_json() const;
    void write_csv(std::ostream& out) const;
};

/// JSON number, with non-finite values as null.
ojson num(double v);

ojson params_json(const bm_params& P);
bm_params parse_params(const Options& o);
bm_params parse_params(const std::string& p, const std::string& q, const std::string& r);

/// {"command", "version", "params", "seed"} header of every report.
ojson report_header(const std::string& command, const bm_params& P, const Options& o);

/// Prints the report (or its table as CSV) and writes the optional CSV file.
void emit(const ojson& report, const Table* table, const Options& o, std::ostream& out);

}  // namespace cli
