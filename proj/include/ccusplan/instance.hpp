#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ccusplan {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Carries the path of the offending field, e.g. "generators[2].min_up".
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time series run over hours t = 1..T stored at indices 0..T-1.

struct GasNode {
  std::string id;
  double pressure_min = 0.0; // bar
  double pressure_max = 0.0; // bar
  std::vector<double> load;  // Mm3/h
  bool operator==(const GasNode&) const = default;
};

struct GasPipeline {
  std::string id;
  std::string from_node;
  std::string to_node;
  double weymouth_coeff = 0.0; // Mm3/(h*bar)
  double flow_min = 0.0;       // Mm3/h, negative means reversible
  double flow_max = 0.0;
  bool operator==(const GasPipeline&) const = default;
};

struct GasSource {
  std::string id;
  std::string node;
  double output_min = 0.0; // Mm3/h
  double output_max = 0.0;
  double ramp_max = 0.0;  // Mm3/h per hour
  double unit_cost = 0.0; // $/Mm3
  bool operator==(const GasSource&) const = default;
};

struct ElectricBus {
  std::string id;
  std::vector<double> load; // MW
  bool is_reference = false;
  bool operator==(const ElectricBus&) const = default;
};

struct TransmissionLine {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double reactance = 0.0; // ohm
  double capacity = 0.0;  // MW
  bool operator==(const TransmissionLine&) const = default;
};

struct Generator {
  std::string id;
  std::string bus;
  double output_min = 0.0; // MW
  double output_max = 0.0;
  double ramp_max = 0.0; // MW/h
  int min_up = 1;        // hours
  int min_down = 1;
  double unit_cost = 0.0;       // $/MWh
  double emission_factor = 0.0; // ton CO2/MWh
  bool ccpp_eligible = false;
  bool operator==(const Generator&) const = default;
};

struct PtgTechnology {
  double module_size = 0.0; // MW per module
  double per_module_output_min = 0.0;
  double per_module_output_max = 0.0;
  double conversion_efficiency = 0.0; // eta
  double co2_per_mwh = 0.0;           // ton/MWh
  double methane_calorific = 0.0;     // MJ/m3
  double unit_invest_cost = 0.0;      // $/MW
  double unit_op_cost = 0.0;          // $/MWh
  int lifetime = 1;                   // years
  bool operator==(const PtgTechnology&) const = default;
};

struct SitingCandidate {
  std::string gas_node;
  std::string plant; // a ccpp_eligible generator id
  double invest_cost = 0.0;
  int lifetime = 1;
  bool operator==(const SitingCandidate&) const = default;
};

struct EconomicParams {
  double discount_rate = 0.0; // fraction/year
  double capture_cost = 0.0;  // $/ton
  double storage_cost = 0.0;  // $/ton
  double carbon_tax = 0.0;    // $/ton, default for solves
  double carbon_price = 0.0;  // $/ton
  double capture_energy = 0.0; // MWh/ton
  double day_weight = 365.0;   // days/year scaling one representative day
  bool operator==(const EconomicParams&) const = default;
};

struct PlanningInstance {
  std::string name;
  std::string description;
  std::vector<GasNode> gas_nodes;
  std::vector<GasPipeline> gas_pipelines;
  std::vector<GasSource> gas_sources;
  std::vector<ElectricBus> buses;
  std::vector<TransmissionLine> lines;
  std::vector<Generator> generators;
  std::optional<PtgTechnology> ptg_technology;
  std::vector<SitingCandidate> siting_candidates;
  EconomicParams economics;
  int horizon = 0;      // T
  int pwl_segments = 0; // per pipeline
  bool operator==(const PlanningInstance&) const = default;
};

// Sparse incidence in index space: entry k describes column k of the matrix.
struct Incidence {
  std::vector<int> source_node;                    // A: +1 at [source_node[i], i]
  std::vector<std::pair<int, int>> pipeline_nodes; // B: +1 at start, -1 at end
  std::vector<int> generator_bus;                  // C
  std::vector<std::pair<int, int>> line_buses;     // D
};

// Id -> position lookups, built once from a validated instance.
struct InstanceIndex {
  std::unordered_map<std::string, int> node;
  std::unordered_map<std::string, int> bus;
  std::unordered_map<std::string, int> generator;
  std::vector<int> ccpp; // generator indices with ccpp_eligible, instance order
};

PlanningInstance parse_instance(const std::string& json_text);
PlanningInstance load_instance(const std::string& path);
std::string serialize_instance(const PlanningInstance& inst);
void validate_instance(const PlanningInstance& inst);

std::vector<std::string> builtin_names();
PlanningInstance builtin_instance(const std::string& name);

// Resolves either a builtin name or a file path.
PlanningInstance resolve_instance(const std::string& name_or_path);

double annualization_coefficient(double dr, int lifetime);
Incidence incidence(const PlanningInstance& inst);
InstanceIndex make_index(const PlanningInstance& inst);

} // namespace ccusplan
