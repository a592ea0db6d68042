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

#include "vidseek/modality.hpp"

#include <algorithm>

#include "vidseek/error.hpp"

namespace vidseek {

std::string_view to_string(Modality m) noexcept {
  switch (m) {
    case Modality::Concept: return "concept";
    case Modality::Object: return "object";
    case Modality::Event: return "event";
    case Modality::Text: return "text";
    case Modality::MedObject: return "medObject";
    case Modality::MedAction: return "medAction";
  }
  return "concept";
}

char prefix_letter(Modality m) noexcept {
  switch (m) {
    case Modality::Concept: return 'c';
    case Modality::Object: return 'o';
    case Modality::Event: return 'e';
    case Modality::Text: return 't';
    case Modality::MedObject: return 'm';
    case Modality::MedAction: return 'a';
  }
  return 'c';
}

std::optional<Modality> modality_from_name(std::string_view name) noexcept {
  for (Modality m : kAllModalities) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<Modality> modality_from_prefix(char letter) noexcept {
  for (Modality m : kAllModalities) {
    if (prefix_letter(m) == letter) return m;
  }
  return std::nullopt;
}

Modality parse_modality(std::string_view name) {
  if (auto m = modality_from_name(name)) return *m;
  throw Error(Errc::UnknownModality,
              "unknown modality '" + std::string(name) + "'");
}

std::string_view to_string(Dataset d) noexcept {
  switch (d) {
    case Dataset::V: return "V";
    case Dataset::M: return "M";
    case Dataset::S: return "S";
  }
  return "V";
}

std::optional<Dataset> dataset_from_name(std::string_view name) noexcept {
  if (name == "V") return Dataset::V;
  if (name == "M") return Dataset::M;
  if (name == "S") return Dataset::S;
  return std::nullopt;
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  });
  return out;
}

}  // namespace vidseek
