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

// JSON encoding of library values. Internal to the shared library.

#pragma once

#include <string>

#include <json.hpp>

#include "bmseq/block_space.hpp"
#include "bmseq/duality.hpp"
#include "bmseq/norms.hpp"
#include "bmseq/operators.hpp"

namespace bmseq::json_io {

using ojson = nlohmann::ordered_json;

/// {"entries": [[index, value], ...]}: integer indices, finite values,
/// duplicates rejected, zeros dropped.
SparseSeq seq_from_json(const nlohmann::json& doc);
SparseSeq seq_from_text(const std::string& text);
SparseSeq load_seq(const std::string& path);

/// Sequence format plus an optional "tail_l1_bound".
Kernel kernel_from_text(const std::string& text);
Kernel load_kernel(const std::string& path);

ojson to_json(const SparseSeq& x);
ojson to_json(const NormResult& r);
ojson to_json(const BlockRepresentation& rep);
ojson to_json(const DualCertificate& c);

void save_text(const std::string& path, const std::string& text);

/// Doubles as JSON numbers, with +-inf and NaN as null.
ojson number(double v);

}  // namespace bmseq::json_io
