#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace cardio {

/// The eleven predictor attributes, in the order of the dataset description.
enum class Attribute : std::size_t {
  age,
  height,
  weight,
  gender,
  ap_hi,
  ap_lo,
  cholesterol,
  gluc,
  smoke,
  alco,
  active,
};

inline constexpr std::size_t kAttributeCount = 11;

/// Predictor values indexed by Attribute.
using FeatureVector = std::array<double, kAttributeCount>;

/// How a tree may test an attribute.
///  - numeric:     `x <= threshold`, threshold at the midpoint of adjacent values
///  - binary:      two-valued; `x <= low` vs `x > low` (the low domain value)
///  - categorical: one-vs-rest `x == v`
enum class AttributeKind { numeric, binary, categorical };

struct AttributeInfo {
  Attribute id;
  std::string_view name;
  AttributeKind kind;
  std::span<const double> domain;  // empty for numeric attributes
};

inline constexpr std::array<Attribute, kAttributeCount> kAllAttributes = {
    Attribute::age,         Attribute::height, Attribute::weight,
    Attribute::gender,      Attribute::ap_hi,  Attribute::ap_lo,
    Attribute::cholesterol, Attribute::gluc,   Attribute::smoke,
    Attribute::alco,        Attribute::active,
};

const AttributeInfo& info(Attribute a);
std::string_view name(Attribute a);
AttributeKind kind(Attribute a);

/// Lookup by data-property name ("ap_hi", "cholesterol", ...).
std::optional<Attribute> attribute_from_name(std::string_view name);

/// The target property. It is never an Attribute: inference must not see it.
inline constexpr std::string_view kTargetName = "cardio";

constexpr std::size_t index(Attribute a) { return static_cast<std::size_t>(a); }

}  // namespace cardio
