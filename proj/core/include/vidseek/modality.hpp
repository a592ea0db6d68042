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

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace vidseek {

/// Annotation channels produced by the offline analysis backend. Each one has
/// a single-letter prefix in the query syntax.
enum class Modality { Concept, Object, Event, Text, MedObject, MedAction };

inline constexpr std::array<Modality, 6> kAllModalities = {
    Modality::Concept,   Modality::Object,    Modality::Event,
    Modality::Text,      Modality::MedObject, Modality::MedAction};

std::string_view to_string(Modality m) noexcept;
char prefix_letter(Modality m) noexcept;

/// Accepts the wire names ("concept", "medObject", ...).
std::optional<Modality> modality_from_name(std::string_view name) noexcept;
std::optional<Modality> modality_from_prefix(char letter) noexcept;

/// Throws Error(UnknownModality) instead of returning nullopt.
Modality parse_modality(std::string_view name);

/// V3C-like shot-segmented, Marine-like uniform 1 s slices, Surgical.
enum class Dataset { V, M, S };

std::string_view to_string(Dataset d) noexcept;
std::optional<Dataset> dataset_from_name(std::string_view name) noexcept;

/// Shot-based datasets carry explicit boundaries; M uses uniform slicing.
constexpr bool is_uniform(Dataset d) noexcept { return d == Dataset::M; }

/// ASCII case folding used for annotation labels and query terms.
std::string fold_case(std::string_view s);

}  // namespace vidseek
