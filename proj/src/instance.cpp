#include "ccusplan/instance.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ccusplan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& need(const json& o, const std::string& path, const char* key) {
  if (!o.is_object()) throw ParseError(path + ": expected an object");
  auto it = o.find(key);
  if (it == o.end()) throw ParseError(path + ": missing key '" + key + "'");
  return *it;
}

void reject_unknown(const json& o, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!o.is_object()) throw ParseError(path + ": expected an object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok |= (it.key() == k);
    if (!ok) throw ParseError(path + ": unknown key '" + it.key() + "'");
  }
}

double num_at(const json& o, const std::string& path, const char* key) {
  const json& v = need(o, path, key);
  if (!v.is_number()) throw ParseError(path + "." + key + ": expected a number");
  return v.get<double>();
}

int int_at(const json& o, const std::string& path, const char* key) {
  const json& v = need(o, path, key);
  if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

bool bool_at(const json& o, const std::string& path, const char* key) {
  const json& v = need(o, path, key);
  if (!v.is_boolean()) throw ParseError(path + "." + key + ": expected a boolean");
  return v.get<bool>();
}

std::string str_at(const json& o, const std::string& path, const char* key) {
  const json& v = need(o, path, key);
  if (!v.is_string()) throw ParseError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> series_at(const json& o, const std::string& path, const char* key) {
  const json& v = need(o, path, key);
  if (!v.is_array()) throw ParseError(path + "." + key + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ParseError(path + "." + key + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

const json& array_at(const json& o, const std::string& path, const char* key) {
  const json& v = need(o, path, key);
  if (!v.is_array()) throw ParseError(path + "." + key + ": expected an array");
  return v;
}

void check_finite(double v, const std::string& path) {
  if (!std::isfinite(v)) throw ValidationError(path + ": non-finite value");
}

void check_series(const std::vector<double>& s, int T, const std::string& path,
                  bool nonnegative) {
  if (static_cast<int>(s.size()) != T)
    throw ValidationError(path + ": length " + std::to_string(s.size()) +
                          " does not match horizon " + std::to_string(T));
  for (std::size_t t = 0; t < s.size(); ++t) {
    check_finite(s[t], idx(path, t));
    if (nonnegative && s[t] < 0.0)
      throw ValidationError(idx(path, t) + ": negative value");
  }
}

void check_nonneg(double v, const std::string& path) {
  check_finite(v, path);
  if (v < 0.0) throw ValidationError(path + ": negative value");
}

void check_positive(double v, const std::string& path) {
  check_finite(v, path);
  if (v <= 0.0) throw ValidationError(path + ": must be > 0");
}

} // namespace

PlanningInstance parse_instance(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed instance file: ") + e.what());
  }
  reject_unknown(root, "instance",
                 {"meta", "gas_nodes", "gas_pipelines", "gas_sources", "buses", "lines",
                  "generators", "ptg_technology", "siting_candidates", "economics",
                  "horizon", "pwl_segments"});

  PlanningInstance inst;
  const json& meta = need(root, "instance", "meta");
  reject_unknown(meta, "meta", {"name", "description"});
  if (meta.contains("name")) inst.name = str_at(meta, "meta", "name");
  if (meta.contains("description")) inst.description = str_at(meta, "meta", "description");

  inst.horizon = int_at(root, "instance", "horizon");
  inst.pwl_segments = int_at(root, "instance", "pwl_segments");

  const json& nodes = array_at(root, "instance", "gas_nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string p = idx("gas_nodes", i);
    reject_unknown(nodes[i], p, {"id", "pressure_min", "pressure_max", "load"});
    GasNode n;
    n.id = str_at(nodes[i], p, "id");
    n.pressure_min = num_at(nodes[i], p, "pressure_min");
    n.pressure_max = num_at(nodes[i], p, "pressure_max");
    n.load = series_at(nodes[i], p, "load");
    inst.gas_nodes.push_back(std::move(n));
  }

  const json& pipes = array_at(root, "instance", "gas_pipelines");
  for (std::size_t i = 0; i < pipes.size(); ++i) {
    std::string p = idx("gas_pipelines", i);
    reject_unknown(pipes[i], p,
                   {"id", "from_node", "to_node", "weymouth_coeff", "flow_min", "flow_max"});
    GasPipeline g;
    g.id = str_at(pipes[i], p, "id");
    g.from_node = str_at(pipes[i], p, "from_node");
    g.to_node = str_at(pipes[i], p, "to_node");
    g.weymouth_coeff = num_at(pipes[i], p, "weymouth_coeff");
    g.flow_min = num_at(pipes[i], p, "flow_min");
    g.flow_max = num_at(pipes[i], p, "flow_max");
    inst.gas_pipelines.push_back(std::move(g));
  }

  const json& sources = array_at(root, "instance", "gas_sources");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::string p = idx("gas_sources", i);
    reject_unknown(sources[i], p,
                   {"id", "node", "output_min", "output_max", "ramp_max", "unit_cost"});
    GasSource s;
    s.id = str_at(sources[i], p, "id");
    s.node = str_at(sources[i], p, "node");
    s.output_min = num_at(sources[i], p, "output_min");
    s.output_max = num_at(sources[i], p, "output_max");
    s.ramp_max = num_at(sources[i], p, "ramp_max");
    s.unit_cost = num_at(sources[i], p, "unit_cost");
    inst.gas_sources.push_back(std::move(s));
  }

  const json& buses = array_at(root, "instance", "buses");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    std::string p = idx("buses", i);
    reject_unknown(buses[i], p, {"id", "load", "is_reference"});
    ElectricBus b;
    b.id = str_at(buses[i], p, "id");
    b.load = series_at(buses[i], p, "load");
    b.is_reference = bool_at(buses[i], p, "is_reference");
    inst.buses.push_back(std::move(b));
  }

  const json& lines = array_at(root, "instance", "lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string p = idx("lines", i);
    reject_unknown(lines[i], p, {"id", "from_bus", "to_bus", "reactance", "capacity"});
    TransmissionLine l;
    l.id = str_at(lines[i], p, "id");
    l.from_bus = str_at(lines[i], p, "from_bus");
    l.to_bus = str_at(lines[i], p, "to_bus");
    l.reactance = num_at(lines[i], p, "reactance");
    l.capacity = num_at(lines[i], p, "capacity");
    inst.lines.push_back(std::move(l));
  }

  const json& gens = array_at(root, "instance", "generators");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string p = idx("generators", i);
    reject_unknown(gens[i], p,
                   {"id", "bus", "output_min", "output_max", "ramp_max", "min_up",
                    "min_down", "unit_cost", "emission_factor", "ccpp_eligible"});
    Generator g;
    g.id = str_at(gens[i], p, "id");
    g.bus = str_at(gens[i], p, "bus");
    g.output_min = num_at(gens[i], p, "output_min");
    g.output_max = num_at(gens[i], p, "output_max");
    g.ramp_max = num_at(gens[i], p, "ramp_max");
    g.min_up = int_at(gens[i], p, "min_up");
    g.min_down = int_at(gens[i], p, "min_down");
    g.unit_cost = num_at(gens[i], p, "unit_cost");
    g.emission_factor = num_at(gens[i], p, "emission_factor");
    g.ccpp_eligible = bool_at(gens[i], p, "ccpp_eligible");
    inst.generators.push_back(std::move(g));
  }

  const json& ptg = need(root, "instance", "ptg_technology");
  if (!ptg.is_null()) {
    std::string p = "ptg_technology";
    reject_unknown(ptg, p,
                   {"module_size", "per_module_output_min", "per_module_output_max",
                    "conversion_efficiency", "co2_per_mwh", "methane_calorific",
                    "unit_invest_cost", "unit_op_cost", "lifetime"});
    PtgTechnology t;
    t.module_size = num_at(ptg, p, "module_size");
    t.per_module_output_min = num_at(ptg, p, "per_module_output_min");
    t.per_module_output_max = num_at(ptg, p, "per_module_output_max");
    t.conversion_efficiency = num_at(ptg, p, "conversion_efficiency");
    t.co2_per_mwh = num_at(ptg, p, "co2_per_mwh");
    t.methane_calorific = num_at(ptg, p, "methane_calorific");
    t.unit_invest_cost = num_at(ptg, p, "unit_invest_cost");
    t.unit_op_cost = num_at(ptg, p, "unit_op_cost");
    t.lifetime = int_at(ptg, p, "lifetime");
    inst.ptg_technology = t;
  }

  const json& cands = array_at(root, "instance", "siting_candidates");
  for (std::size_t i = 0; i < cands.size(); ++i) {
    std::string p = idx("siting_candidates", i);
    reject_unknown(cands[i], p, {"gas_node", "plant", "invest_cost", "lifetime"});
    SitingCandidate c;
    c.gas_node = str_at(cands[i], p, "gas_node");
    c.plant = str_at(cands[i], p, "plant");
    c.invest_cost = num_at(cands[i], p, "invest_cost");
    c.lifetime = int_at(cands[i], p, "lifetime");
    inst.siting_candidates.push_back(std::move(c));
  }

  const json& econ = need(root, "instance", "economics");
  reject_unknown(econ, "economics",
                 {"discount_rate", "capture_cost", "storage_cost", "carbon_tax",
                  "carbon_price", "capture_energy", "day_weight"});
  inst.economics.discount_rate = num_at(econ, "economics", "discount_rate");
  inst.economics.capture_cost = num_at(econ, "economics", "capture_cost");
  inst.economics.storage_cost = num_at(econ, "economics", "storage_cost");
  inst.economics.carbon_tax = num_at(econ, "economics", "carbon_tax");
  inst.economics.carbon_price = num_at(econ, "economics", "carbon_price");
  inst.economics.capture_energy = num_at(econ, "economics", "capture_energy");
  inst.economics.day_weight = num_at(econ, "economics", "day_weight");

  validate_instance(inst);
  return inst;
}

PlanningInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void validate_instance(const PlanningInstance& inst) {
  const int T = inst.horizon;
  if (T < 1) throw ValidationError("horizon: must be >= 1");
  if (inst.pwl_segments < 1) throw ValidationError("pwl_segments: must be >= 1");
  if (T > 8784) throw ValidationError("horizon: more than a year of hours");

  std::set<std::string> node_ids;
  for (std::size_t i = 0; i < inst.gas_nodes.size(); ++i) {
    const GasNode& n = inst.gas_nodes[i];
    std::string p = idx("gas_nodes", i);
    if (n.id.empty()) throw ValidationError(p + ".id: empty");
    if (!node_ids.insert(n.id).second)
      throw ValidationError(p + ".id: duplicate id '" + n.id + "'");
    check_finite(n.pressure_min, p + ".pressure_min");
    check_finite(n.pressure_max, p + ".pressure_max");
    if (n.pressure_min < 0.0) throw ValidationError(p + ".pressure_min: negative");
    if (n.pressure_min > n.pressure_max)
      throw ValidationError(p + ".pressure_min: exceeds pressure_max");
    check_series(n.load, T, p + ".load", true);
  }

  std::set<std::string> pipe_ids;
  for (std::size_t i = 0; i < inst.gas_pipelines.size(); ++i) {
    const GasPipeline& g = inst.gas_pipelines[i];
    std::string p = idx("gas_pipelines", i);
    if (g.id.empty()) throw ValidationError(p + ".id: empty");
    if (!pipe_ids.insert(g.id).second)
      throw ValidationError(p + ".id: duplicate id '" + g.id + "'");
    if (!node_ids.count(g.from_node))
      throw ValidationError(p + ".from_node: unknown gas node '" + g.from_node + "'");
    if (!node_ids.count(g.to_node))
      throw ValidationError(p + ".to_node: unknown gas node '" + g.to_node + "'");
    if (g.from_node == g.to_node)
      throw ValidationError(p + ": from_node equals to_node");
    check_positive(g.weymouth_coeff, p + ".weymouth_coeff");
    check_finite(g.flow_min, p + ".flow_min");
    check_finite(g.flow_max, p + ".flow_max");
    if (g.flow_min >= g.flow_max)
      throw ValidationError(p + ".flow_min: must be < flow_max");
    if (g.flow_min < 0.0 && g.flow_max <= 0.0)
      throw ValidationError(p + ".flow_max: reversible pipeline needs flow_max > 0");
  }

  std::set<std::string> source_ids;
  for (std::size_t i = 0; i < inst.gas_sources.size(); ++i) {
    const GasSource& s = inst.gas_sources[i];
    std::string p = idx("gas_sources", i);
    if (s.id.empty()) throw ValidationError(p + ".id: empty");
    if (!source_ids.insert(s.id).second)
      throw ValidationError(p + ".id: duplicate id '" + s.id + "'");
    if (!node_ids.count(s.node))
      throw ValidationError(p + ".node: unknown gas node '" + s.node + "'");
    check_nonneg(s.output_min, p + ".output_min");
    check_finite(s.output_max, p + ".output_max");
    if (s.output_min > s.output_max)
      throw ValidationError(p + ".output_min: exceeds output_max");
    check_nonneg(s.ramp_max, p + ".ramp_max");
    check_nonneg(s.unit_cost, p + ".unit_cost");
  }

  std::set<std::string> bus_ids;
  int reference_count = 0;
  for (std::size_t i = 0; i < inst.buses.size(); ++i) {
    const ElectricBus& b = inst.buses[i];
    std::string p = idx("buses", i);
    if (b.id.empty()) throw ValidationError(p + ".id: empty");
    if (!bus_ids.insert(b.id).second)
      throw ValidationError(p + ".id: duplicate id '" + b.id + "'");
    check_series(b.load, T, p + ".load", false);
    reference_count += b.is_reference ? 1 : 0;
  }
  if (inst.buses.empty()) throw ValidationError("buses: at least one bus required");
  if (reference_count != 1)
    throw ValidationError("buses: exactly one bus must have is_reference = true, found " +
                          std::to_string(reference_count));

  std::set<std::string> line_ids;
  for (std::size_t i = 0; i < inst.lines.size(); ++i) {
    const TransmissionLine& l = inst.lines[i];
    std::string p = idx("lines", i);
    if (l.id.empty()) throw ValidationError(p + ".id: empty");
    if (!line_ids.insert(l.id).second)
      throw ValidationError(p + ".id: duplicate id '" + l.id + "'");
    if (!bus_ids.count(l.from_bus))
      throw ValidationError(p + ".from_bus: unknown bus '" + l.from_bus + "'");
    if (!bus_ids.count(l.to_bus))
      throw ValidationError(p + ".to_bus: unknown bus '" + l.to_bus + "'");
    if (l.from_bus == l.to_bus) throw ValidationError(p + ": from_bus equals to_bus");
    check_positive(l.reactance, p + ".reactance");
    check_positive(l.capacity, p + ".capacity");
  }

  std::set<std::string> gen_ids;
  std::unordered_map<std::string, const Generator*> gen_by_id;
  for (std::size_t i = 0; i < inst.generators.size(); ++i) {
    const Generator& g = inst.generators[i];
    std::string p = idx("generators", i);
    if (g.id.empty()) throw ValidationError(p + ".id: empty");
    if (!gen_ids.insert(g.id).second)
      throw ValidationError(p + ".id: duplicate id '" + g.id + "'");
    if (!bus_ids.count(g.bus))
      throw ValidationError(p + ".bus: unknown bus '" + g.bus + "' for generator '" +
                            g.id + "'");
    check_nonneg(g.output_min, p + ".output_min");
    check_finite(g.output_max, p + ".output_max");
    if (g.output_min > g.output_max)
      throw ValidationError(p + ".output_min: exceeds output_max");
    check_nonneg(g.ramp_max, p + ".ramp_max");
    if (g.min_up < 1) throw ValidationError(p + ".min_up: must be >= 1");
    if (g.min_down < 1) throw ValidationError(p + ".min_down: must be >= 1");
    check_nonneg(g.unit_cost, p + ".unit_cost");
    check_nonneg(g.emission_factor, p + ".emission_factor");
    gen_by_id[g.id] = &g;
  }

  if (inst.ptg_technology) {
    const PtgTechnology& t = *inst.ptg_technology;
    std::string p = "ptg_technology";
    check_positive(t.module_size, p + ".module_size");
    check_nonneg(t.per_module_output_min, p + ".per_module_output_min");
    check_finite(t.per_module_output_max, p + ".per_module_output_max");
    if (t.per_module_output_min > t.per_module_output_max)
      throw ValidationError(p + ".per_module_output_min: exceeds per_module_output_max");
    check_positive(t.conversion_efficiency, p + ".conversion_efficiency");
    if (t.conversion_efficiency > 1.0)
      throw ValidationError(p + ".conversion_efficiency: must be <= 1");
    check_nonneg(t.co2_per_mwh, p + ".co2_per_mwh");
    check_positive(t.methane_calorific, p + ".methane_calorific");
    check_nonneg(t.unit_invest_cost, p + ".unit_invest_cost");
    check_nonneg(t.unit_op_cost, p + ".unit_op_cost");
    if (t.lifetime < 1) throw ValidationError(p + ".lifetime: must be >= 1");
  }

  std::set<std::pair<std::string, std::string>> cand_pairs;
  for (std::size_t i = 0; i < inst.siting_candidates.size(); ++i) {
    const SitingCandidate& c = inst.siting_candidates[i];
    std::string p = idx("siting_candidates", i);
    if (!node_ids.count(c.gas_node))
      throw ValidationError(p + ".gas_node: unknown gas node '" + c.gas_node + "'");
    auto g = gen_by_id.find(c.plant);
    if (g == gen_by_id.end())
      throw ValidationError(p + ".plant: unknown generator '" + c.plant + "'");
    if (!g->second->ccpp_eligible)
      throw ValidationError(p + ".plant: generator '" + c.plant + "' is not ccpp_eligible");
    if (!cand_pairs.insert({c.gas_node, c.plant}).second)
      throw ValidationError(p + ": duplicate (gas_node, plant) pair");
    check_nonneg(c.invest_cost, p + ".invest_cost");
    if (c.lifetime < 1) throw ValidationError(p + ".lifetime: must be >= 1");
  }
  if (!inst.siting_candidates.empty() && !inst.ptg_technology)
    throw ValidationError("siting_candidates: present without ptg_technology");

  const EconomicParams& e = inst.economics;
  check_positive(e.discount_rate, "economics.discount_rate");
  check_nonneg(e.capture_cost, "economics.capture_cost");
  check_nonneg(e.storage_cost, "economics.storage_cost");
  check_nonneg(e.carbon_tax, "economics.carbon_tax");
  check_nonneg(e.carbon_price, "economics.carbon_price");
  check_positive(e.capture_energy, "economics.capture_energy");
  check_positive(e.day_weight, "economics.day_weight");
}

std::string serialize_instance(const PlanningInstance& inst) {
  ordered_json root;
  root["meta"] = {{"name", inst.name}, {"description", inst.description}};

  ordered_json nodes = ordered_json::array();
  for (const GasNode& n : inst.gas_nodes)
    nodes.push_back({{"id", n.id},
                     {"pressure_min", n.pressure_min},
                     {"pressure_max", n.pressure_max},
                     {"load", n.load}});
  root["gas_nodes"] = std::move(nodes);

  ordered_json pipes = ordered_json::array();
  for (const GasPipeline& g : inst.gas_pipelines)
    pipes.push_back({{"id", g.id},
                     {"from_node", g.from_node},
                     {"to_node", g.to_node},
                     {"weymouth_coeff", g.weymouth_coeff},
                     {"flow_min", g.flow_min},
                     {"flow_max", g.flow_max}});
  root["gas_pipelines"] = std::move(pipes);

  ordered_json sources = ordered_json::array();
  for (const GasSource& s : inst.gas_sources)
    sources.push_back({{"id", s.id},
                       {"node", s.node},
                       {"output_min", s.output_min},
                       {"output_max", s.output_max},
                       {"ramp_max", s.ramp_max},
                       {"unit_cost", s.unit_cost}});
  root["gas_sources"] = std::move(sources);

  ordered_json buses = ordered_json::array();
  for (const ElectricBus& b : inst.buses)
    buses.push_back({{"id", b.id}, {"load", b.load}, {"is_reference", b.is_reference}});
  root["buses"] = std::move(buses);

  ordered_json lines = ordered_json::array();
  for (const TransmissionLine& l : inst.lines)
    lines.push_back({{"id", l.id},
                     {"from_bus", l.from_bus},
                     {"to_bus", l.to_bus},
                     {"reactance", l.reactance},
                     {"capacity", l.capacity}});
  root["lines"] = std::move(lines);

  ordered_json gens = ordered_json::array();
  for (const Generator& g : inst.generators)
    gens.push_back({{"id", g.id},
                    {"bus", g.bus},
                    {"output_min", g.output_min},
                    {"output_max", g.output_max},
                    {"ramp_max", g.ramp_max},
                    {"min_up", g.min_up},
                    {"min_down", g.min_down},
                    {"unit_cost", g.unit_cost},
                    {"emission_factor", g.emission_factor},
                    {"ccpp_eligible", g.ccpp_eligible}});
  root["generators"] = std::move(gens);

  if (inst.ptg_technology) {
    const PtgTechnology& t = *inst.ptg_technology;
    root["ptg_technology"] = {{"module_size", t.module_size},
                              {"per_module_output_min", t.per_module_output_min},
                              {"per_module_output_max", t.per_module_output_max},
                              {"conversion_efficiency", t.conversion_efficiency},
                              {"co2_per_mwh", t.co2_per_mwh},
                              {"methane_calorific", t.methane_calorific},
                              {"unit_invest_cost", t.unit_invest_cost},
                              {"unit_op_cost", t.unit_op_cost},
                              {"lifetime", t.lifetime}};
  } else {
    root["ptg_technology"] = nullptr;
  }

  ordered_json cands = ordered_json::array();
  for (const SitingCandidate& c : inst.siting_candidates)
    cands.push_back({{"gas_node", c.gas_node},
                     {"plant", c.plant},
                     {"invest_cost", c.invest_cost},
                     {"lifetime", c.lifetime}});
  root["siting_candidates"] = std::move(cands);

  const EconomicParams& e = inst.economics;
  root["economics"] = {{"discount_rate", e.discount_rate},
                       {"capture_cost", e.capture_cost},
                       {"storage_cost", e.storage_cost},
                       {"carbon_tax", e.carbon_tax},
                       {"carbon_price", e.carbon_price},
                       {"capture_energy", e.capture_energy},
                       {"day_weight", e.day_weight}};
  root["horizon"] = inst.horizon;
  root["pwl_segments"] = inst.pwl_segments;
  return root.dump(2) + "\n";
}

double annualization_coefficient(double dr, int lifetime) {
  if (lifetime < 1) throw ValidationError("annualization: lifetime must be >= 1");
  if (dr < 0.0) throw ValidationError("annualization: discount rate must be >= 0");
  if (dr == 0.0) return 1.0 / lifetime;
  double growth = std::pow(1.0 + dr, lifetime);
  return dr * growth / (growth - 1.0);
}

InstanceIndex make_index(const PlanningInstance& inst) {
  InstanceIndex ix;
  for (std::size_t i = 0; i < inst.gas_nodes.size(); ++i)
    ix.node[inst.gas_nodes[i].id] = static_cast<int>(i);
  for (std::size_t i = 0; i < inst.buses.size(); ++i)
    ix.bus[inst.buses[i].id] = static_cast<int>(i);
  for (std::size_t i = 0; i < inst.generators.size(); ++i) {
    ix.generator[inst.generators[i].id] = static_cast<int>(i);
    if (inst.generators[i].ccpp_eligible) ix.ccpp.push_back(static_cast<int>(i));
  }
  return ix;
}

Incidence incidence(const PlanningInstance& inst) {
  InstanceIndex ix = make_index(inst);
  Incidence inc;
  inc.source_node.reserve(inst.gas_sources.size());
  for (const GasSource& s : inst.gas_sources) inc.source_node.push_back(ix.node.at(s.node));
  inc.pipeline_nodes.reserve(inst.gas_pipelines.size());
  for (const GasPipeline& p : inst.gas_pipelines)
    inc.pipeline_nodes.push_back({ix.node.at(p.from_node), ix.node.at(p.to_node)});
  inc.generator_bus.reserve(inst.generators.size());
  for (const Generator& g : inst.generators) inc.generator_bus.push_back(ix.bus.at(g.bus));
  inc.line_buses.reserve(inst.lines.size());
  for (const TransmissionLine& l : inst.lines)
    inc.line_buses.push_back({ix.bus.at(l.from_bus), ix.bus.at(l.to_bus)});
  return inc;
}

} // namespace ccusplan
