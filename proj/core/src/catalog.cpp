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

#include "vidseek/catalog.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vidseek/catalog_ingest.hpp"
#include "vidseek/error.hpp"

namespace vidseek {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_atomically(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::InternalError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

bool valid_index_name(const std::string& name) noexcept {
  if (name.empty()) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void save_catalog(const Catalog& catalog, const fs::path& data_dir) {
  fs::create_directories(data_dir / "indexes");
  json indexes = json::array();
  for (const auto& name : catalog.indexes.names()) {
    if (!valid_index_name(name)) {
      throw Error(Errc::InvalidRequest, "invalid index name '" + name + "'");
    }
    const auto index = catalog.indexes.get(name);
    std::ostringstream vectors;
    std::string rows;
    std::size_t count = 0;
    index->for_each([&](const std::string& seg, const std::string& vid,
                        std::span<const float> values) {
      write_f32(vectors, values);
      rows += json{{"segmentId", seg}, {"videoId", vid}}.dump() + '\n';
      ++count;
    });
    write_atomically(data_dir / "indexes" / (name + ".f32"), vectors.str());
    write_atomically(data_dir / "indexes" / (name + ".rows.jsonl"), rows);
    indexes.push_back({{"name", name}, {"dim", index->dim()}, {"rows", count}});
  }
  write_atomically(data_dir / "store.jsonl", catalog.store.dump());
  const json meta{{"version", 1},
                  {"defaultIndex", catalog.default_index},
                  {"mediaRoot", catalog.media_root.string()},
                  {"indexes", std::move(indexes)}};
  write_atomically(data_dir / "catalog.json", meta.dump(2) + '\n');
}

void load_catalog(Catalog& catalog, const fs::path& data_dir) {
  const fs::path meta_path = data_dir / "catalog.json";
  if (!fs::exists(meta_path)) return;
  json meta;
  try {
    std::ifstream in(meta_path);
    meta = json::parse(in);
    catalog.default_index = meta.value("defaultIndex", std::string("main"));
    catalog.media_root = meta.value("mediaRoot", std::string());

    for (const auto& entry : meta.at("indexes")) {
      const auto name = entry.at("name").get<std::string>();
      const auto dim = entry.at("dim").get<std::size_t>();
      if (!valid_index_name(name)) {
        throw Error(Errc::ManifestInvalid, "invalid index name '" + name + "'");
      }
      const auto index = catalog.indexes.create(name, dim);
      const auto values =
          read_f32_file(data_dir / "indexes" / (name + ".f32"));
      std::ifstream rows_in(data_dir / "indexes" / (name + ".rows.jsonl"));
      std::vector<IndexEntry> entries;
      std::string line;
      std::size_t row = 0;
      while (std::getline(rows_in, line)) {
        if (line.empty()) continue;
        if ((row + 1) * dim > values.size()) {
          throw Error(Errc::VectorCountMismatch,
                      "index '" + name + "' has more rows than vectors");
        }
        const json r = json::parse(line);
        std::vector<float> v(values.begin() + static_cast<std::ptrdiff_t>(row * dim),
                             values.begin() + static_cast<std::ptrdiff_t>((row + 1) * dim));
        entries.push_back({r.at("segmentId").get<std::string>(),
                           r.at("videoId").get<std::string>(),
                           EmbeddingVector::from_unit(std::move(v))});
        ++row;
      }
      if (row * dim != values.size()) {
        throw Error(Errc::VectorCountMismatch,
                    "index '" + name + "' has more vectors than rows");
      }
      index->add_entries(std::move(entries));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::ManifestInvalid,
                "corrupt catalog in " + data_dir.string() + ": " + e.what());
  }

  std::ifstream store_in(data_dir / "store.jsonl");
  if (store_in) {
    try {
      catalog.store.load(store_in);
    } catch (const Error& e) {
      throw Error(Errc::ManifestInvalid,
                  "corrupt store in " + data_dir.string() + ": " + e.what());
    }
  }
}

}  // namespace vidseek
