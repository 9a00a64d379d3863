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

#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "capi.hpp"

namespace cli {

ojson num(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ojson Table::to_json() const
{
    ojson out = ojson::array();
    for (const auto& row : rows) {
        ojson obj = ojson::object();
        for (std::size_t c = 0; c < columns.size() && c < row.size(); ++c) obj[columns[c]] = row[c];
        out.push_back(std::move(obj));
    }
    return out;
}

namespace {

std::string csv_cell(const ojson& v)
{
    if (v.is_null()) return "";
    if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

void Table::write_csv(std::ostream& out) const
{
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
        out << "\n";
    }
}

ojson params_json(const bm_params& P)
{
    ojson out;
    out["p"] = P.p;
    out["q"] = std::isinf(P.q) ? ojson("inf") : ojson(P.q);
    out["r"] = P.r;
    return out;
}

bm_params parse_params(const std::string& p, const std::string& q, const std::string& r)
{
    bm_params P{};
    check(bm_parse_exponent(p.c_str(), &P.p));
    check(bm_parse_exponent(q.c_str(), &P.q));
    check(bm_parse_exponent(r.c_str(), &P.r));
    check(bm_params_validate(&P));
    return P;
}

bm_params parse_params(const Options& o)
{
    return parse_params(o.p, o.q, o.r);
}

ojson report_header(const std::string& command, const bm_params& P, const Options& o)
{
    ojson out;
    out["command"] = command;
    out["version"] = bm_version();
    out["params"] = params_json(P);
    out["seed"] = o.seed;
    return out;
}

void emit(const ojson& report, const Table* table, const Options& o, std::ostream& out)
{
    if (table && !o.csv_path.empty()) {
        std::ofstream f(o.csv_path);
        if (!f) throw Exit(kExitBadInput, "cannot write '" + o.csv_path + "'");
        table->write_csv(f);
    }
    if (o.format == "csv" && table) {
        table->write_csv(out);
    } else {
        out << report.dump(2) << "\n";
    }
}

}  // namespace cli
