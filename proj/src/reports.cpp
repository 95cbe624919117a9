#include "ccusplan/reports.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "ccusplan/numfmt.hpp"
#include "json.hpp"

namespace ccusplan::reports {

namespace {

using engine::PlanMode;
using engine::PlanningSolution;
using engine::ScenarioSchedule;
using nlohmann::ordered_json;

std::size_t horizon_of(const ScenarioSchedule& s) {
  if (!s.bus_angle.empty()) return s.bus_angle[0].size();
  if (!s.source_out.empty()) return s.source_out[0].size();
  return 0;
}

// Scenario weights a report aggregates with: the single scenario for
// deterministic runs, probabilities for stochastic, the attained worst vertex
// for robust.
std::vector<double> profile_weights(const PlanningSolution& sol) {
  std::vector<double> w(sol.scenarios.size(), 0.0);
  if (sol.scenarios.empty()) return w;
  if (sol.mode == PlanMode::Robust && sol.scenarios.size() > 1) {
    for (std::size_t k = 0; k < sol.scenarios.size(); ++k)
      if (sol.scenarios[k].tax == sol.worst_tax && sol.scenarios[k].price == sol.worst_price) {
        w[k] = 1.0;
        return w;
      }
  }
  if (sol.scenarios.size() == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t k = 0; k < sol.scenarios.size(); ++k)
    w[k] = sol.scenarios[k].probability;
  return w;
}

double hour_sum(const std::vector<std::vector<double>>& per_entity, std::size_t t) {
  double acc = 0.0;
  for (const auto& row : per_entity)
    if (t < row.size()) acc += row[t];
  return acc;
}

ordered_json breakdown_json(const engine::CostBreakdown& b) {
  return ordered_json{{"invest_ccus", b.invest_ccus}, {"invest_siting", b.invest_siting},
                      {"ope_gs", b.ope_gs},           {"ope_gen", b.ope_gen},
                      {"ope_ptg", b.ope_ptg},         {"capture", b.capture},
                      {"storage", b.storage},         {"penalty", b.penalty},
                      {"revenue", b.revenue},         {"total", b.total}};
}

ordered_json carbon_json(const engine::CarbonVolumes& c) {
  return ordered_json{{"emission", c.emission},
                      {"capture", c.capture},
                      {"storage", c.storage},
                      {"utilization", c.utilization}};
}

ordered_json keyed_series(const std::vector<std::string>& ids,
                          const std::vector<std::vector<double>>& series) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < ids.size() && i < series.size(); ++i) out[ids[i]] = series[i];
  return out;
}

PlanMode parse_mode(const std::string& s) {
  if (s == "no-ccus") return PlanMode::NoCcus;
  if (s == "deterministic") return PlanMode::Deterministic;
  if (s == "stochastic") return PlanMode::Stochastic;
  if (s == "robust") return PlanMode::Robust;
  throw ValidationError("unknown mode in solution file: " + s);
}

} // namespace

std::string breakdown_csv(const std::vector<LabeledSolution>& cases) {
  using Getter = std::function<double(const PlanningSolution&)>;
  const std::vector<std::pair<std::string, Getter>> rows = {
      {"invest_ccus", [](const PlanningSolution& s) { return s.breakdown.invest_ccus; }},
      {"invest_siting", [](const PlanningSolution& s) { return s.breakdown.invest_siting; }},
      {"ope_gs", [](const PlanningSolution& s) { return s.breakdown.ope_gs; }},
      {"ope_gen", [](const PlanningSolution& s) { return s.breakdown.ope_gen; }},
      {"ope_ptg", [](const PlanningSolution& s) { return s.breakdown.ope_ptg; }},
      {"capture", [](const PlanningSolution& s) { return s.breakdown.capture; }},
      {"storage", [](const PlanningSolution& s) { return s.breakdown.storage; }},
      {"penalty", [](const PlanningSolution& s) { return s.breakdown.penalty; }},
      {"revenue", [](const PlanningSolution& s) { return s.breakdown.revenue; }},
      {"total", [](const PlanningSolution& s) { return s.breakdown.total; }},
      {"carbon_emission", [](const PlanningSolution& s) { return s.carbon.emission; }},
      {"carbon_capture", [](const PlanningSolution& s) { return s.carbon.capture; }},
      {"carbon_storage", [](const PlanningSolution& s) { return s.carbon.storage; }},
      {"carbon_utilization",
       [](const PlanningSolution& s) { return s.carbon.utilization; }}};

  std::string out = "item";
  for (const LabeledSolution& c : cases) out += "," + c.first;
  out += "\n";
  for (const auto& [name, get] : rows) {
    out += name;
    for (const LabeledSolution& c : cases) out += "," + format_number(get(*c.second));
    out += "\n";
  }
  return out;
}

std::string carbon_profile_csv(const std::vector<LabeledSolution>& cases) {
  std::string out = "hour,case,emission,capture,storage,utilization\n";
  for (const LabeledSolution& c : cases) {
    const PlanningSolution& sol = *c.second;
    std::vector<double> w = profile_weights(sol);
    if (sol.scenarios.empty()) continue;
    std::size_t T = horizon_of(sol.scenarios[0]);
    for (std::size_t t = 0; t < T; ++t) {
      double emi = 0.0, cap = 0.0, sto = 0.0, uti = 0.0;
      for (std::size_t k = 0; k < sol.scenarios.size(); ++k) {
        if (w[k] == 0.0) continue;
        const ScenarioSchedule& s = sol.scenarios[k];
        double qcc = hour_sum(s.captured, t);
        emi += w[k] * (hour_sum(s.emitted, t) - qcc);
        cap += w[k] * qcc;
        sto += w[k] * hour_sum(s.stored, t);
        uti += w[k] * hour_sum(s.utilized, t);
      }
      out += std::to_string(t + 1) + "," + c.first + "," + format_number(emi) + "," +
             format_number(cap) + "," + format_number(sto) + "," + format_number(uti) +
             "\n";
    }
  }
  return out;
}

std::string sweep_csv(const sweep::SweepResult& result) {
  std::string out = "tax,price,metric,value\n";
  for (const sweep::SweepCell& cell : result.cells) {
    std::string prefix = format_number(cell.tax) + "," + format_number(cell.price) + ",";
    out += prefix + "status," + milp::to_string(cell.status) + "\n";
    out += prefix + "total_cost," + format_number(cell.total_cost) + "\n";
    out += prefix + "invest_total," + format_number(cell.invest_total) + "\n";
    out += prefix + "y_sum," + std::to_string(cell.y_sum) + "\n";
    out += prefix + "carbon_emission," + format_number(cell.carbon_emission) + "\n";
    out += prefix + "carbon_capture," + format_number(cell.carbon_capture) + "\n";
    out += prefix + "carbon_storage," + format_number(cell.carbon_storage) + "\n";
    out += prefix + "carbon_utilization," + format_number(cell.carbon_utilization) + "\n";
    out += prefix + "gap," + format_number(cell.gap) + "\n";
  }
  return out;
}

std::string solution_to_json(const PlanningInstance& inst, const std::string& instance_ref,
                             const PlanningSolution& sol) {
  InstanceIndex ix = make_index(inst);
  std::vector<std::string> source_ids, pipe_ids, node_ids, bus_ids, line_ids, gen_ids,
      ccpp_ids, cand_ids;
  for (const GasSource& s : inst.gas_sources) source_ids.push_back(s.id);
  for (const GasPipeline& p : inst.gas_pipelines) pipe_ids.push_back(p.id);
  for (const GasNode& n : inst.gas_nodes) node_ids.push_back(n.id);
  for (const ElectricBus& b : inst.buses) bus_ids.push_back(b.id);
  for (const TransmissionLine& l : inst.lines) line_ids.push_back(l.id);
  for (const Generator& g : inst.generators) gen_ids.push_back(g.id);
  for (int gi : ix.ccpp) ccpp_ids.push_back(inst.generators[gi].id);
  for (const SitingCandidate& c : inst.siting_candidates)
    cand_ids.push_back(c.gas_node + ":" + c.plant);

  ordered_json j;
  j["schema"] = "ccusplan-solution-v1";
  j["instance"] = instance_ref;
  j["instance_name"] = inst.name;
  j["mode"] = engine::to_string(sol.mode);
  j["status"] = milp::to_string(sol.status);
  j["objective"] = sol.objective;
  j["gap"] = sol.gap;
  j["wall_time_s"] = sol.wall_time_s;
  j["solver"] = sol.solver_name;
  j["message"] = sol.message;

  ordered_json eng = ordered_json::object();
  auto it = sol.metadata.find("method");
  eng["robust_method"] = it == sol.metadata.end() ? ordered_json() : ordered_json(it->second);
  auto gt = sol.metadata.find("gap_tol");
  eng["gap_tol"] = gt == sol.metadata.end() ? 1e-6 : std::stod(gt->second);
  eng["day_weight"] = inst.economics.day_weight;
  j["engine"] = eng;

  if (sol.mode == PlanMode::Robust) {
    j["worst"] = ordered_json{{"tax", sol.worst_tax}, {"price", sol.worst_price}};
  }

  ordered_json fs = ordered_json::object();
  ordered_json mods = ordered_json::object();
  for (std::size_t i = 0; i < sol.first_stage.ptg_modules.size() && i < ccpp_ids.size(); ++i)
    mods[ccpp_ids[i]] = sol.first_stage.ptg_modules[i];
  ordered_json sits = ordered_json::object();
  for (std::size_t i = 0; i < sol.first_stage.siting.size() && i < cand_ids.size(); ++i)
    sits[cand_ids[i]] = sol.first_stage.siting[i];
  fs["ptg_modules"] = mods;
  fs["siting"] = sits;
  j["first_stage"] = fs;

  j["breakdown"] = breakdown_json(sol.breakdown);
  j["carbon"] = carbon_json(sol.carbon);

  ordered_json scens = ordered_json::array();
  for (const ScenarioSchedule& s : sol.scenarios) {
    ordered_json sj;
    sj["label"] = s.label;
    sj["tax"] = s.tax;
    sj["price"] = s.price;
    sj["probability"] = s.probability;
    sj["op_cost"] = breakdown_json(s.op_cost);
    sj["carbon"] = carbon_json(s.carbon);
    ordered_json sched = ordered_json::object();
    sched["source_out"] = keyed_series(source_ids, s.source_out);
    sched["pipe_flow"] = keyed_series(pipe_ids, s.pipe_flow);
    sched["node_pressure_sq"] = keyed_series(node_ids, s.node_pressure_sq);
    sched["bus_angle"] = keyed_series(bus_ids, s.bus_angle);
    sched["line_flow"] = keyed_series(line_ids, s.line_flow);
    sched["gen_out"] = keyed_series(gen_ids, s.gen_out);
    sched["gen_on"] = keyed_series(gen_ids, s.gen_on);
    sched["gen_start"] = keyed_series(gen_ids, s.gen_start);
    sched["gen_stop"] = keyed_series(gen_ids, s.gen_stop);
    sched["emitted"] = keyed_series(gen_ids, s.emitted);
    sched["grid_out"] = keyed_series(ccpp_ids, s.grid_out);
    sched["capture_power"] = keyed_series(ccpp_ids, s.capture_power);
    sched["ptg_power"] = keyed_series(ccpp_ids, s.ptg_power);
    sched["captured"] = keyed_series(ccpp_ids, s.captured);
    sched["stored"] = keyed_series(ccpp_ids, s.stored);
    sched["utilized"] = keyed_series(ccpp_ids, s.utilized);
    sched["methane"] = keyed_series(ccpp_ids, s.methane);
    sched["methane_injection"] = keyed_series(cand_ids, s.methane_injection);
    sj["schedules"] = sched;
    scens.push_back(sj);
  }
  j["scenarios"] = scens;
  return j.dump(2) + "\n";
}

SolutionSummary read_solution_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open solution file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError("solution file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object() || j.value("schema", "") != "ccusplan-solution-v1")
    throw ValidationError("solution file missing schema ccusplan-solution-v1");
  SolutionSummary s;
  try {
    s.instance_ref = j.at("instance").get<std::string>();
    s.mode = parse_mode(j.at("mode").get<std::string>());
    s.objective = j.at("objective").get<double>();
    const ordered_json& eng = j.at("engine");
    if (eng.contains("robust_method") && !eng.at("robust_method").is_null())
      s.robust_method = eng.at("robust_method").get<std::string>();
    if (eng.contains("gap_tol")) s.gap_tol = eng.at("gap_tol").get<double>();
    if (eng.contains("day_weight") && !eng.at("day_weight").is_null())
      s.day_weight = eng.at("day_weight").get<double>();
    for (const ordered_json& sj : j.at("scenarios")) {
      form::ScenarioDef d;
      d.label = sj.at("label").get<std::string>();
      d.tax = sj.at("tax").get<double>();
      d.price = sj.at("price").get<double>();
      d.probability = sj.at("probability").get<double>();
      s.scenarios.push_back(d);
    }
  } catch (const ordered_json::exception& e) {
    throw ValidationError("solution file is incomplete: " + std::string(e.what()));
  }
  if (s.scenarios.empty()) throw ValidationError("solution file has no scenarios");
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

void emit_reports(const std::string& out_dir, const PlanningInstance& inst,
                  const std::string& instance_ref,
                  const std::vector<LabeledSolution>& cases) {
  std::filesystem::create_directories(out_dir);
  std::filesystem::path dir(out_dir);
  write_text_file((dir / "breakdown.csv").string(), breakdown_csv(cases));
  write_text_file((dir / "carbon_profile.csv").string(), carbon_profile_csv(cases));
  for (const LabeledSolution& c : cases)
    write_text_file((dir / (c.first + ".json")).string(),
                    solution_to_json(inst, instance_ref, *c.second));
}

} // namespace ccusplan::reports
