// Copyright 2026 The vidseek Authors
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

#include <filesystem>
#include <string>
#include <vector>

#include "vidseek/embedding_index.hpp"
#include "vidseek/metadata_store.hpp"

namespace vidseek {

/// Everything the server reads at serve time.
struct Catalog {
  IndexRegistry indexes;
  MetadataStore store;
  std::string default_index = "main";
  /// Directory keyframe references are resolved against.
  std::filesystem::path media_root;
};

/// Data directory layout:
///
///   catalog.json            {"version", "defaultIndex", "mediaRoot", "indexes"}
///   store.jsonl             MetadataStore::dump()
///   indexes/<name>.f32      little-endian float32 rows
///   indexes/<name>.rows.jsonl  {"segmentId", "videoId"} per row
///
/// Files are written to a temporary name and renamed into place.
void save_catalog(const Catalog& catalog, const std::filesystem::path& data_dir);

/// Fills an empty catalog. A missing directory or catalog.json leaves it
/// empty; corrupt files throw Error(ManifestInvalid).
void load_catalog(Catalog& catalog, const std::filesystem::path& data_dir);

/// Index names double as file names: [A-Za-z0-9_-]+.
bool valid_index_name(const std::string& name) noexcept;

}  // namespace vidseek
