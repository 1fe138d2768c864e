#include "portsel/presets.hpp"

#include "portsel/format.hpp"

namespace portsel {

namespace {

RunnerConfig runner(Technique technique, Relation relation, double base, double spread) {
  RunnerConfig cfg;
  cfg.technique = technique;
  cfg.relation = relation;
  cfg.step = {base, spread};
  return cfg;
}

Preset single(std::string name, Technique technique, Relation relation, double base, bool random) {
  const double spread = random ? base : 0.0;
  std::string description = to_string(technique) + " " + to_string(relation) + (random ? " random step " : " fixed step ") +
                            format_short(base);
  return {std::move(name), std::move(description), single_runner(runner(technique, relation, base, spread))};
}

Preset ring(std::string name, const std::vector<std::pair<Relation, double>>& steps) {
  std::string description = "TS token ring:";
  for (const auto& [rel, q] : steps) description += " " + to_string(rel) + "/" + format_short(q);
  return {std::move(name), std::move(description), tabu_ring(steps)};
}

std::vector<Preset> build() {
  using enum Relation;
  using enum Technique;
  std::vector<Preset> all;
  all.push_back(single("table2-ts-idid-fixed", Tabu, IdId, 0.5, false));
  all.push_back(single("table2-ts-idid-random", Tabu, IdId, 0.4, true));
  all.push_back(single("table2-ts-tid-fixed", Tabu, Tid, 0.5, false));
  all.push_back(single("table2-ts-tid-random", Tabu, Tid, 0.3, true));
  all.push_back(single("table2-ts-idr-fixed", Tabu, IdR, 0.4, false));
  all.push_back(single("table2-ts-idr-random", Tabu, IdR, 0.4, true));
  all.push_back(single("table2-sa-tid-fixed", Annealing, Tid, 0.4, false));
  all.push_back(single("table2-sa-tid-random", Annealing, Tid, 0.4, true));
  all.push_back(single("table2-sa-idid-fixed", Annealing, IdId, 0.2, false));
  all.push_back(single("table2-sa-idid-random", Annealing, IdId, 0.5, true));
  all.push_back(single("table2-hc-tid-fixed", HillClimbing, Tid, 0.2, false));
  all.push_back(single("table2-hc-tid-random", HillClimbing, Tid, 0.2, true));
  all.push_back(single("table2-hc-idid-fixed", HillClimbing, IdId, 0.2, false));
  all.push_back(single("table2-hc-idid-random", HillClimbing, IdId, 0.1, true));

  all.push_back(ring("table3-tid-tid", {{Tid, 0.4}, {Tid, 0.05}}));
  all.push_back(ring("table3-tid-tid-tid", {{Tid, 0.4}, {Tid, 0.04}, {Tid, 0.004}}));
  all.push_back(ring("table3-tid-idr", {{Tid, 0.4}, {IdR, 0.05}}));
  all.push_back(ring("table3-tid-idr-tid", {{Tid, 0.4}, {IdR, 0.05}, {Tid, 0.01}}));
  all.push_back(ring("table3-idid-idid", {{IdId, 0.4}, {IdId, 0.04}}));
  all.push_back(ring("table3-idid-idid-idid", {{IdId, 0.3}, {IdId, 0.03}, {IdId, 0.003}}));
  all.push_back(ring("table3-idid-idr", {{IdId, 0.4}, {IdR, 0.05}}));
  all.push_back(ring("table3-idid-idr-idid", {{IdId, 0.4}, {IdR, 0.04}, {IdId, 0.004}}));
  return all;
}

}  // namespace

RunnerConfig tabu_runner(Relation relation, double base, double spread) {
  return runner(Technique::Tabu, relation, base, spread);
}

TokenRing tabu_ring(const std::vector<std::pair<Relation, double>>& steps) {
  TokenRing r;
  for (const auto& [rel, q] : steps) r.runners.push_back(tabu_runner(rel, q, q));
  return r;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

std::optional<Preset> find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  return std::nullopt;
}

std::vector<Preset> preset_group(std::string_view group) {
  std::vector<Preset> out;
  const std::string prefix = std::string(group) + "-";
  for (const auto& p : presets())
    if (p.name.starts_with(prefix)) out.push_back(p);
  return out;
}

}  // namespace portsel
