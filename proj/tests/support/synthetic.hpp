#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cardio/data.hpp"
#include "cardio/random.hpp"

namespace cardio::testing {

inline double normal(Rng& rng) {
  // Box-Muller on our own uniform source, so fixtures are identical everywhere.
  double u1 = uniform_unit(rng), u2 = uniform_unit(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline int pick(Rng& rng, std::initializer_list<int> values) {
  return *(values.begin() + uniform_index(rng, values.size()));
}

/// Records with Kaggle-like marginals and a noisy logistic risk in blood
/// pressure, age, weight and cholesterol.
inline Dataset make_cohort(std::size_t n, std::uint64_t seed, double noise = 1.0) {
  Rng rng(seed);
  Dataset d;
  d.provenance.source = "synthetic";
  d.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PatientRecord r;
    r.age = 14000 + static_cast<int>(uniform_index(rng, 9700));
    r.gender = uniform_unit(rng) < 0.35 ? 2 : 1;
    r.height = static_cast<int>(std::lround(164 + 8 * normal(rng) + (r.gender == 2 ? 6 : 0)));
    r.weight = std::round((74 + 14 * normal(rng)) * 10) / 10;
    r.ap_hi = pick(rng, {100, 110, 120, 120, 120, 130, 140, 150, 160, 170});
    r.ap_lo = pick(rng, {60, 70, 80, 80, 80, 90, 100});
    r.cholesterol = pick(rng, {1, 1, 1, 1, 2, 3});
    r.gluc = pick(rng, {1, 1, 1, 1, 1, 2, 3});
    r.smoke = uniform_unit(rng) < 0.09 ? 1 : 0;
    r.alco = uniform_unit(rng) < 0.05 ? 1 : 0;
    r.active = uniform_unit(rng) < 0.8 ? 1 : 0;
    const double z = 0.07 * (r.ap_hi - 128) + 0.00025 * (r.age - 19500) +
                     0.025 * (r.weight - 74) + 0.6 * (r.cholesterol - 1) - 0.2 * r.active;
    r.cardio = z + noise * normal(rng) > 0 ? 1 : 0;
    d.records.push_back(r);
  }
  d.provenance.rows_loaded = n;
  return d;
}

/// A labelled dataset whose varying attributes take a small finite set of
/// values; the grid lists those values per attribute (a single value for
/// attributes held fixed).
struct GridFixture {
  std::string name;
  Dataset data;
  std::array<std::vector<double>, kAttributeCount> grid;

  std::size_t grid_size() const {
    std::size_t n = 1;
    for (const auto& g : grid) n *= g.size();
    return n;
  }

  /// The i-th grid point, last attribute varying fastest.
  PatientRecord point(std::size_t i) const {
    PatientRecord r;
    for (std::size_t a = kAttributeCount; a-- > 0;) {
      r.set(static_cast<Attribute>(a), grid[a][i % grid[a].size()]);
      i /= grid[a].size();
    }
    return r;
  }
};

namespace detail {

inline GridFixture grid_fixture(std::string name, std::array<std::vector<double>, kAttributeCount> grid,
                                std::uint64_t seed, std::size_t copies,
                                int (*label)(const PatientRecord&), double flip) {
  GridFixture f{std::move(name), {}, std::move(grid)};
  Rng rng(seed);
  for (std::size_t i = 0; i < f.grid_size(); ++i) {
    for (std::size_t c = 0; c < copies; ++c) {
      PatientRecord r = f.point(i);
      r.cardio = label(r);
      if (uniform_unit(rng) < flip) r.cardio = 1 - r.cardio;
      f.data.records.push_back(r);
    }
  }
  return f;
}

inline std::array<std::vector<double>, kAttributeCount> fixed_grid() {
  std::array<std::vector<double>, kAttributeCount> g;
  PatientRecord base;
  base.age = 18000;
  base.height = 165;
  base.weight = 70;
  base.ap_hi = 120;
  base.ap_lo = 80;
  for (Attribute a : kAllAttributes) g[index(a)] = {base.value(a)};
  return g;
}

}  // namespace detail

/// Three fixtures: numeric thresholds with a categorical, binary-only, and
/// a noisy mix of numeric, binary and categorical attributes.
inline std::vector<GridFixture> grid_fixtures() {
  std::vector<GridFixture> out;

  auto g1 = detail::fixed_grid();
  g1[index(Attribute::ap_hi)] = {100, 110, 120, 130, 140, 150, 160, 170};
  g1[index(Attribute::cholesterol)] = {1, 2, 3};
  g1[index(Attribute::weight)] = {55, 65, 75, 85, 95};
  out.push_back(detail::grid_fixture(
      "pressure-cholesterol", g1, 11, 3,
      [](const PatientRecord& r) {
        return (r.ap_hi > 135 || (r.cholesterol == 3 && r.weight > 70) ||
                (r.cholesterol == 2 && r.ap_hi > 115))
                   ? 1
                   : 0;
      },
      0.05));

  auto g2 = detail::fixed_grid();
  g2[index(Attribute::gender)] = {1, 2};
  g2[index(Attribute::smoke)] = {0, 1};
  g2[index(Attribute::alco)] = {0, 1};
  g2[index(Attribute::active)] = {0, 1};
  g2[index(Attribute::gluc)] = {1, 2, 3};
  g2[index(Attribute::cholesterol)] = {1, 2, 3};
  out.push_back(detail::grid_fixture(
      "lifestyle", g2, 12, 4,
      [](const PatientRecord& r) {
        return ((r.smoke ^ r.alco) == 1 || (r.active == 0 && r.gluc >= 2) || r.cholesterol == 3)
                   ? 1
                   : 0;
      },
      0.08));

  auto g3 = detail::fixed_grid();
  g3[index(Attribute::age)] = {12000, 15000, 18000, 21000, 24000};
  g3[index(Attribute::height)] = {150, 165, 180};
  g3[index(Attribute::ap_lo)] = {60, 70, 80, 90, 100};
  g3[index(Attribute::gender)] = {1, 2};
  g3[index(Attribute::gluc)] = {1, 2, 3};
  out.push_back(detail::grid_fixture(
      "mixed", g3, 13, 2,
      [](const PatientRecord& r) {
        return (r.age / 3000.0 + r.ap_lo / 20.0 + (r.gluc == 3 ? 1.5 : 0) - r.height / 60.0 >
                9.0)
                   ? 1
                   : 0;
      },
      0.15));
  return out;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cardio_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cardio::testing
