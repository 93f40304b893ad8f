#include "cardio/attributes.hpp"

#include <algorithm>

namespace cardio {
namespace {

constexpr std::array<double, 2> kGenderDomain = {1.0, 2.0};
constexpr std::array<double, 2> kFlagDomain = {0.0, 1.0};
constexpr std::array<double, 3> kLevelDomain = {1.0, 2.0, 3.0};

const std::array<AttributeInfo, kAttributeCount> kInfo = {{
    {Attribute::age, "age", AttributeKind::numeric, {}},
    {Attribute::height, "height", AttributeKind::numeric, {}},
    {Attribute::weight, "weight", AttributeKind::numeric, {}},
    {Attribute::gender, "gender", AttributeKind::binary, kGenderDomain},
    {Attribute::ap_hi, "ap_hi", AttributeKind::numeric, {}},
    {Attribute::ap_lo, "ap_lo", AttributeKind::numeric, {}},
    {Attribute::cholesterol, "cholesterol", AttributeKind::categorical, kLevelDomain},
    {Attribute::gluc, "gluc", AttributeKind::categorical, kLevelDomain},
    {Attribute::smoke, "smoke", AttributeKind::binary, kFlagDomain},
    {Attribute::alco, "alco", AttributeKind::binary, kFlagDomain},
    {Attribute::active, "active", AttributeKind::binary, kFlagDomain},
}};

}  // namespace

const AttributeInfo& info(Attribute a) { return kInfo[index(a)]; }
std::string_view name(Attribute a) { return kInfo[index(a)].name; }
AttributeKind kind(Attribute a) { return kInfo[index(a)].kind; }

std::optional<Attribute> attribute_from_name(std::string_view name) {
  auto it = std::find_if(kInfo.begin(), kInfo.end(),
                         [&](const AttributeInfo& i) { return i.name == name; });
  if (it == kInfo.end()) return std::nullopt;
  return it->id;
}

}  // namespace cardio
