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

#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bmseq/error.hpp"

namespace bmseq::json_io {

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json parse(const std::string& text)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

SparseSeq seq_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        throw InvalidArgument("sequence JSON needs an \"entries\" array");
    }
    std::vector<Entry> entries;
    for (const auto& item : doc["entries"]) {
        if (!item.is_array() || item.size() != 2) {
            throw InvalidArgument("each entry must be a pair [index, value]");
        }
        const auto& idx = item[0];
        const auto& val = item[1];
        if (!idx.is_number_integer()) throw InvalidArgument("entry index must be an integer");
        if (!val.is_number()) throw InvalidArgument("entry value must be a number");
        entries.push_back({idx.get<Index>(), val.get<double>()});
    }
    return SparseSeq::from_entries(std::move(entries));
}

SparseSeq seq_from_text(const std::string& text)
{
    return seq_from_json(parse(text));
}

SparseSeq load_seq(const std::string& path)
{
    return seq_from_text(read_file(path));
}

Kernel kernel_from_text(const std::string& text)
{
    const auto doc = parse(text);
    double tail = 0.0;
    if (doc.is_object() && doc.contains("tail_l1_bound")) {
        if (!doc["tail_l1_bound"].is_number()) throw InvalidArgument("tail_l1_bound must be a number");
        tail = doc["tail_l1_bound"].get<double>();
    }
    return Kernel::make(seq_from_json(doc), tail);
}

Kernel load_kernel(const std::string& path)
{
    return kernel_from_text(read_file(path));
}

ojson number(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ojson to_json(const SparseSeq& x)
{
    ojson entries = ojson::array();
    for (const auto& e : x.entries()) entries.push_back(ojson::array({e.index, e.value}));
    ojson out;
    out["entries"] = std::move(entries);
    return out;
}

ojson to_json(const NormResult& r)
{
    ojson out;
    out["value"] = number(r.value);
    out["remainder_bound"] = number(r.remainder_bound);
    out["verdict"] = std::string(to_string(r.verdict));
    return out;
}

ojson to_json(const BlockRepresentation& rep)
{
    ojson out = ojson::array();
    for (const auto& t : rep.terms()) {
        ojson term;
        term["j"] = t.block.interval().level;
        term["k"] = t.block.interval().position;
        term["lambda"] = t.coefficient;
        term["block_entries"] = to_json(t.block.values())["entries"];
        out.push_back(std::move(term));
    }
    return out;
}

ojson to_json(const DualCertificate& c)
{
    ojson out;
    out["direction"] = std::string(to_string(c.direction));
    out["certified_value"] = number(c.certified_value);
    out["test_vector"] = to_json(c.test_vector);
    if (c.representation) out["representation"] = to_json(*c.representation);
    return out;
}

void save_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << text;
    if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

}  // namespace bmseq::json_io
