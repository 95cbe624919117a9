#include "ccusplan/formulation.hpp"

#include <algorithm>
#include <cmath>

namespace ccusplan::form {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string tname(int t) { return "t" + std::to_string(t + 1); }
std::string kname(int k) { return "k" + std::to_string(k + 1); }

std::string nm(const std::string& sym, std::initializer_list<std::string> idx,
               const std::string& label) {
  std::string out = sym;
  out += '[';
  bool first = true;
  for (const std::string& part : idx) {
    if (!first) out += ',';
    out += part;
    first = false;
  }
  out += ']';
  if (!label.empty()) {
    out += '@';
    out += label;
  }
  return out;
}

bool degenerate_uc(const Generator& g) {
  return g.output_min == 0.0 && g.min_up == 1 && g.min_down == 1;
}

std::vector<int> resolve_y_caps(const PlanningInstance& inst, const InstanceIndex& ix,
                                const BuildOptions& opts) {
  std::vector<int> caps;
  if (!inst.ptg_technology) return caps;
  for (int gi : ix.ccpp) {
    const Generator& g = inst.generators[gi];
    auto it = opts.y_cap_override.find(g.id);
    caps.push_back(it != opts.y_cap_override.end()
                       ? it->second
                       : default_y_cap(g, *inst.ptg_technology));
  }
  return caps;
}

// Candidate indices grouped by ccpp position.
std::vector<std::vector<int>> candidates_by_plant(const PlanningInstance& inst,
                                                  const InstanceIndex& ix) {
  std::vector<std::vector<int>> by_plant(ix.ccpp.size());
  for (std::size_t i = 0; i < inst.siting_candidates.size(); ++i) {
    int gi = ix.generator.at(inst.siting_candidates[i].plant);
    for (std::size_t c = 0; c < ix.ccpp.size(); ++c)
      if (ix.ccpp[c] == gi) by_plant[c].push_back(static_cast<int>(i));
  }
  return by_plant;
}

// MWh of electricity to Mm3 of methane through eta and calorific value H.
double methane_per_mwh(const PtgTechnology& t) {
  return t.conversion_efficiency * 3600.0 / (t.methane_calorific * 1e6);
}

double ptg_power_cap(const Generator& g, const PtgTechnology& t, int y_cap) {
  return std::min(g.output_max, t.per_module_output_max * y_cap);
}

} // namespace

double Pwl::max_width() const {
  double w = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    w = std::max(w, points[k + 1] - points[k]);
  return w;
}

int default_y_cap(const Generator& gen, const PtgTechnology& tech) {
  return static_cast<int>(std::floor(gen.output_max / tech.module_size + 1e-9));
}

Pwl compute_breakpoints(const GasPipeline& pipe, int seg) {
  if (seg < 1) throw milp::ModelError("pwl segment count must be >= 1");
  Pwl out;
  double lo = pipe.flow_min, hi = pipe.flow_max;
  double width = (hi - lo) / seg;
  out.points.reserve(seg + 2);
  for (int k = 0; k <= seg; ++k)
    out.points.push_back(k == seg ? hi : lo + width * k);
  if (lo < 0.0 && hi > 0.0) {
    // g(f) = f|f| must be exact at f = 0, so 0 is always a breakpoint.
    double snap = 1e-9 * (hi - lo);
    bool have_zero = false;
    for (double& p : out.points)
      if (std::fabs(p) <= snap) {
        p = 0.0;
        have_zero = true;
      }
    if (!have_zero) {
      auto pos = std::upper_bound(out.points.begin(), out.points.end(), 0.0);
      out.points.insert(pos, 0.0);
    }
  }
  out.images.reserve(out.points.size());
  for (double p : out.points) out.images.push_back(p * std::fabs(p));
  return out;
}

std::vector<Pwl> compute_breakpoints(const PlanningInstance& inst) {
  std::vector<Pwl> out;
  out.reserve(inst.gas_pipelines.size());
  for (const GasPipeline& p : inst.gas_pipelines)
    out.push_back(compute_breakpoints(p, inst.pwl_segments));
  return out;
}

void declare_first_stage(Model& m, const PlanningInstance& inst, const BuildOptions& opts,
                         VariableMap& map) {
  if (!opts.coupling || !inst.ptg_technology) return;
  InstanceIndex ix = make_index(inst);
  map.y_cap = resolve_y_caps(inst, ix, opts);
  for (std::size_t c = 0; c < ix.ccpp.size(); ++c) {
    const Generator& g = inst.generators[ix.ccpp[c]];
    map.y.push_back(m.add_variable(nm("y", {g.id}, ""), milp::VarKind::Integer, 0.0,
                                   static_cast<double>(map.y_cap[c])));
  }
  if (!opts.siting) return;
  for (const SitingCandidate& cand : inst.siting_candidates)
    map.s.push_back(m.add_variable(nm("s", {cand.gas_node, cand.plant}, ""),
                                   milp::VarKind::Binary, 0.0, 1.0));
}

OperationVars declare_operation_vars(Model& m, const PlanningInstance& inst,
                                     const std::vector<Pwl>& pwl, const BuildOptions& opts,
                                     const std::string& label) {
  const int T = inst.horizon;
  InstanceIndex ix = make_index(inst);
  OperationVars ov;

  ov.src_out.resize(inst.gas_sources.size());
  for (std::size_t i = 0; i < inst.gas_sources.size(); ++i) {
    const GasSource& s = inst.gas_sources[i];
    for (int t = 0; t < T; ++t)
      ov.src_out[i].push_back(m.add_variable(nm("Pi", {s.id, tname(t)}, label),
                                             milp::VarKind::Continuous, s.output_min,
                                             s.output_max));
  }

  ov.pipe_flow.resize(inst.gas_pipelines.size());
  ov.seg_fill.resize(inst.gas_pipelines.size());
  ov.seg_gate.resize(inst.gas_pipelines.size());
  for (std::size_t p = 0; p < inst.gas_pipelines.size(); ++p) {
    const GasPipeline& g = inst.gas_pipelines[p];
    int K = pwl[p].segments();
    ov.seg_fill[p].resize(T);
    ov.seg_gate[p].resize(T);
    for (int t = 0; t < T; ++t) {
      ov.pipe_flow[p].push_back(m.add_variable(nm("fgas", {g.id, tname(t)}, label),
                                               milp::VarKind::Continuous, g.flow_min,
                                               g.flow_max));
      for (int k = 0; k < K; ++k)
        ov.seg_fill[p][t].push_back(m.add_variable(nm("delta", {g.id, tname(t), kname(k)}, label),
                                                   milp::VarKind::Continuous, 0.0, 1.0));
      for (int k = 0; k + 1 < K; ++k)
        ov.seg_gate[p][t].push_back(m.add_variable(nm("phi", {g.id, tname(t), kname(k)}, label),
                                                   milp::VarKind::Binary, 0.0, 1.0));
    }
  }

  ov.node_isq.resize(inst.gas_nodes.size());
  for (std::size_t n = 0; n < inst.gas_nodes.size(); ++n) {
    const GasNode& node = inst.gas_nodes[n];
    for (int t = 0; t < T; ++t)
      ov.node_isq[n].push_back(m.add_variable(nm("I", {node.id, tname(t)}, label),
                                              milp::VarKind::Continuous,
                                              node.pressure_min * node.pressure_min,
                                              node.pressure_max * node.pressure_max));
  }

  ov.bus_ang.resize(inst.buses.size());
  for (std::size_t b = 0; b < inst.buses.size(); ++b) {
    const ElectricBus& bus = inst.buses[b];
    double lo = bus.is_reference ? 0.0 : -kPi;
    double hi = bus.is_reference ? 0.0 : kPi;
    for (int t = 0; t < T; ++t)
      ov.bus_ang[b].push_back(m.add_variable(nm("theta", {bus.id, tname(t)}, label),
                                             milp::VarKind::Continuous, lo, hi));
  }

  ov.line_flow.resize(inst.lines.size());
  for (std::size_t l = 0; l < inst.lines.size(); ++l) {
    const TransmissionLine& line = inst.lines[l];
    for (int t = 0; t < T; ++t)
      ov.line_flow[l].push_back(m.add_variable(nm("fele", {line.id, tname(t)}, label),
                                               milp::VarKind::Continuous, -line.capacity,
                                               line.capacity));
  }

  ov.gen_out.resize(inst.generators.size());
  ov.gen_on.resize(inst.generators.size());
  ov.gen_start.resize(inst.generators.size());
  ov.gen_stop.resize(inst.generators.size());
  ov.q_emi.resize(inst.generators.size());
  for (std::size_t j = 0; j < inst.generators.size(); ++j) {
    const Generator& g = inst.generators[j];
    // A zero-minimum unit with 1-hour up/down times can stay committed with no
    // loss of optimality (no startup cost in the model), so its commitment
    // binaries are pinned. This collapses the oracle's enumeration space.
    bool pinned = degenerate_uc(g);
    for (int t = 0; t < T; ++t) {
      ov.gen_out[j].push_back(m.add_variable(nm("P", {g.id, tname(t)}, label),
                                             milp::VarKind::Continuous, 0.0, g.output_max));
      ov.gen_on[j].push_back(m.add_variable(nm("u", {g.id, tname(t)}, label),
                                            milp::VarKind::Binary, pinned ? 1.0 : 0.0, 1.0));
      ov.gen_start[j].push_back(m.add_variable(nm("v", {g.id, tname(t)}, label),
                                               milp::VarKind::Binary, 0.0, pinned ? 0.0 : 1.0));
      ov.gen_stop[j].push_back(m.add_variable(nm("w", {g.id, tname(t)}, label),
                                              milp::VarKind::Binary, 0.0, pinned ? 0.0 : 1.0));
      ov.q_emi[j].push_back(m.add_variable(nm("Qemi", {g.id, tname(t)}, label),
                                           milp::VarKind::Continuous, 0.0,
                                           g.emission_factor * g.output_max));
    }
  }

  if (opts.coupling && inst.ptg_technology) {
    const PtgTechnology& tech = *inst.ptg_technology;
    std::vector<int> caps = resolve_y_caps(inst, ix, opts);
    std::size_t C = ix.ccpp.size();
    ov.grid_out.resize(C);
    ov.cc_power.resize(C);
    ov.ptg_power.resize(C);
    ov.q_cc.resize(C);
    ov.q_cs.resize(C);
    ov.q_cu.resize(C);
    ov.ch4_total.resize(C);
    for (std::size_t c = 0; c < C; ++c) {
      const Generator& g = inst.generators[ix.ccpp[c]];
      double emi_cap = g.emission_factor * g.output_max;
      double ptg_cap = ptg_power_cap(g, tech, caps[c]);
      for (int t = 0; t < T; ++t) {
        ov.grid_out[c].push_back(m.add_variable(nm("Pccpp", {g.id, tname(t)}, label),
                                                milp::VarKind::Continuous, 0.0, g.output_max));
        ov.cc_power[c].push_back(m.add_variable(nm("Pcc", {g.id, tname(t)}, label),
                                                milp::VarKind::Continuous, 0.0, g.output_max));
        ov.ptg_power[c].push_back(m.add_variable(nm("Pptg", {g.id, tname(t)}, label),
                                                 milp::VarKind::Continuous, 0.0, ptg_cap));
        ov.q_cc[c].push_back(m.add_variable(nm("Qcc", {g.id, tname(t)}, label),
                                            milp::VarKind::Continuous, 0.0, emi_cap));
        ov.q_cs[c].push_back(m.add_variable(nm("Qcs", {g.id, tname(t)}, label),
                                            milp::VarKind::Continuous, 0.0, emi_cap));
        ov.q_cu[c].push_back(m.add_variable(nm("Qcu", {g.id, tname(t)}, label),
                                            milp::VarKind::Continuous, 0.0,
                                            tech.co2_per_mwh * tech.conversion_efficiency *
                                                ptg_cap));
        ov.ch4_total[c].push_back(m.add_variable(nm("Vch4", {g.id, tname(t)}, label),
                                                 milp::VarKind::Continuous, 0.0,
                                                 methane_per_mwh(tech) * ptg_cap));
      }
    }
    if (opts.siting) {
      ov.ch4_site.resize(inst.siting_candidates.size());
      for (std::size_t i = 0; i < inst.siting_candidates.size(); ++i) {
        const SitingCandidate& cand = inst.siting_candidates[i];
        int gi = ix.generator.at(cand.plant);
        int c = 0;
        for (std::size_t cc = 0; cc < ix.ccpp.size(); ++cc)
          if (ix.ccpp[cc] == gi) c = static_cast<int>(cc);
        const Generator& g = inst.generators[gi];
        double vmax = methane_per_mwh(tech) * ptg_power_cap(g, tech, caps[c]);
        for (int t = 0; t < T; ++t)
          ov.ch4_site[i].push_back(
              m.add_variable(nm("Vch4", {cand.gas_node, cand.plant, tname(t)}, label),
                             milp::VarKind::Continuous, 0.0, vmax));
      }
    }
  }
  return ov;
}

void build_gas_block(Model& m, const PlanningInstance& inst, const std::vector<Pwl>& pwl,
                     const OperationVars& ov, bool with_injection, const std::string& label) {
  const int T = inst.horizon;
  InstanceIndex ix = make_index(inst);

  for (std::size_t p = 0; p < inst.gas_pipelines.size(); ++p) {
    const GasPipeline& g = inst.gas_pipelines[p];
    const Pwl& bp = pwl[p];
    int K = bp.segments();
    double wsq = g.weymouth_coeff * g.weymouth_coeff;
    int a = ix.node.at(g.from_node);
    int b = ix.node.at(g.to_node);
    for (int t = 0; t < T; ++t) {
      std::vector<Term> flow{{ov.pipe_flow[p][t], 1.0}};
      for (int k = 0; k < K; ++k)
        flow.push_back({ov.seg_fill[p][t][k], -(bp.points[k + 1] - bp.points[k])});
      m.add_constraint(nm("flow", {g.id, tname(t)}, label), std::move(flow),
                       milp::Sense::Equal, bp.points.front());

      std::vector<Term> wey{{ov.node_isq[a][t], wsq}, {ov.node_isq[b][t], -wsq}};
      for (int k = 0; k < K; ++k)
        wey.push_back({ov.seg_fill[p][t][k], -(bp.images[k + 1] - bp.images[k])});
      m.add_constraint(nm("wey", {g.id, tname(t)}, label), std::move(wey),
                       milp::Sense::Equal, bp.images.front());

      for (int k = 0; k + 1 < K; ++k) {
        m.add_constraint(nm("fillA", {g.id, tname(t), kname(k)}, label),
                         {{ov.seg_gate[p][t][k], 1.0}, {ov.seg_fill[p][t][k], -1.0}},
                         milp::Sense::LessEqual, 0.0);
        m.add_constraint(nm("fillB", {g.id, tname(t), kname(k)}, label),
                         {{ov.seg_fill[p][t][k + 1], 1.0}, {ov.seg_gate[p][t][k], -1.0}},
                         milp::Sense::LessEqual, 0.0);
      }
    }
  }

  for (std::size_t i = 0; i < inst.gas_sources.size(); ++i) {
    const GasSource& s = inst.gas_sources[i];
    for (int t = 1; t < T; ++t) {
      m.add_constraint(nm("gsrampU", {s.id, tname(t)}, label),
                       {{ov.src_out[i][t], 1.0}, {ov.src_out[i][t - 1], -1.0}},
                       milp::Sense::LessEqual, s.ramp_max);
      m.add_constraint(nm("gsrampD", {s.id, tname(t)}, label),
                       {{ov.src_out[i][t - 1], 1.0}, {ov.src_out[i][t], -1.0}},
                       milp::Sense::LessEqual, s.ramp_max);
    }
  }

  // Nodal balance: supply minus what leaves on pipelines (a pipeline's flow
  // leaves its start node) plus methane injection equals load.
  for (std::size_t n = 0; n < inst.gas_nodes.size(); ++n) {
    const GasNode& node = inst.gas_nodes[n];
    for (int t = 0; t < T; ++t) {
      std::vector<Term> bal;
      for (std::size_t i = 0; i < inst.gas_sources.size(); ++i)
        if (ix.node.at(inst.gas_sources[i].node) == static_cast<int>(n))
          bal.push_back({ov.src_out[i][t], 1.0});
      for (std::size_t p = 0; p < inst.gas_pipelines.size(); ++p) {
        const GasPipeline& g = inst.gas_pipelines[p];
        if (ix.node.at(g.from_node) == static_cast<int>(n))
          bal.push_back({ov.pipe_flow[p][t], -1.0});
        if (ix.node.at(g.to_node) == static_cast<int>(n))
          bal.push_back({ov.pipe_flow[p][t], 1.0});
      }
      if (with_injection)
        for (std::size_t i = 0; i < inst.siting_candidates.size(); ++i)
          if (ix.node.at(inst.siting_candidates[i].gas_node) == static_cast<int>(n))
            bal.push_back({ov.ch4_site[i][t], 1.0});
      m.add_constraint(nm("gbal", {node.id, tname(t)}, label), std::move(bal),
                       milp::Sense::Equal, node.load[t]);
    }
  }
}

void build_electric_block(Model& m, const PlanningInstance& inst, const OperationVars& ov,
                          bool coupling, const std::string& label) {
  const int T = inst.horizon;
  InstanceIndex ix = make_index(inst);

  for (std::size_t l = 0; l < inst.lines.size(); ++l) {
    const TransmissionLine& line = inst.lines[l];
    int a = ix.bus.at(line.from_bus);
    int b = ix.bus.at(line.to_bus);
    double inv_x = 1.0 / line.reactance;
    for (int t = 0; t < T; ++t)
      m.add_constraint(nm("eflow", {line.id, tname(t)}, label),
                       {{ov.line_flow[l][t], 1.0},
                        {ov.bus_ang[a][t], -inv_x},
                        {ov.bus_ang[b][t], inv_x}},
                       milp::Sense::Equal, 0.0);
  }

  for (std::size_t j = 0; j < inst.generators.size(); ++j) {
    const Generator& g = inst.generators[j];
    for (int t = 0; t < T; ++t) {
      m.add_constraint(nm("pub", {g.id, tname(t)}, label),
                       {{ov.gen_out[j][t], 1.0}, {ov.gen_on[j][t], -g.output_max}},
                       milp::Sense::LessEqual, 0.0);
      m.add_constraint(nm("plb", {g.id, tname(t)}, label),
                       {{ov.gen_on[j][t], g.output_min}, {ov.gen_out[j][t], -1.0}},
                       milp::Sense::LessEqual, 0.0);
      m.add_constraint(nm("uexcl", {g.id, tname(t)}, label),
                       {{ov.gen_start[j][t], 1.0}, {ov.gen_stop[j][t], 1.0}},
                       milp::Sense::LessEqual, 1.0);
    }
    for (int t = 1; t < T; ++t) {
      m.add_constraint(nm("erampU", {g.id, tname(t)}, label),
                       {{ov.gen_out[j][t], 1.0}, {ov.gen_out[j][t - 1], -1.0}},
                       milp::Sense::LessEqual, g.ramp_max);
      m.add_constraint(nm("erampD", {g.id, tname(t)}, label),
                       {{ov.gen_out[j][t - 1], 1.0}, {ov.gen_out[j][t], -1.0}},
                       milp::Sense::LessEqual, g.ramp_max);
      m.add_constraint(nm("uclogic", {g.id, tname(t)}, label),
                       {{ov.gen_on[j][t], 1.0},
                        {ov.gen_on[j][t - 1], -1.0},
                        {ov.gen_start[j][t], -1.0},
                        {ov.gen_stop[j][t], 1.0}},
                       milp::Sense::Equal, 0.0);
    }
    for (int t = g.min_up - 1; t < T; ++t) {
      std::vector<Term> up{{ov.gen_on[j][t], -1.0}};
      for (int tau = t - g.min_up + 1; tau <= t; ++tau)
        up.push_back({ov.gen_start[j][tau], 1.0});
      m.add_constraint(nm("minup", {g.id, tname(t)}, label), std::move(up),
                       milp::Sense::LessEqual, 0.0);
    }
    for (int t = g.min_down - 1; t < T; ++t) {
      std::vector<Term> dn{{ov.gen_on[j][t], 1.0}};
      for (int tau = t - g.min_down + 1; tau <= t; ++tau)
        dn.push_back({ov.gen_stop[j][tau], 1.0});
      m.add_constraint(nm("mindn", {g.id, tname(t)}, label), std::move(dn),
                       milp::Sense::LessEqual, 1.0);
    }
  }

  bool has_coupling = coupling && !ov.grid_out.empty();
  for (std::size_t b = 0; b < inst.buses.size(); ++b) {
    const ElectricBus& bus = inst.buses[b];
    for (int t = 0; t < T; ++t) {
      std::vector<Term> bal;
      for (std::size_t j = 0; j < inst.generators.size(); ++j) {
        if (ix.bus.at(inst.generators[j].bus) != static_cast<int>(b)) continue;
        VarHandle supply = ov.gen_out[j][t];
        if (has_coupling) {
          for (std::size_t c = 0; c < ix.ccpp.size(); ++c)
            if (ix.ccpp[c] == static_cast<int>(j)) supply = ov.grid_out[c][t];
        }
        bal.push_back({supply, 1.0});
      }
      for (std::size_t l = 0; l < inst.lines.size(); ++l) {
        const TransmissionLine& line = inst.lines[l];
        if (ix.bus.at(line.from_bus) == static_cast<int>(b))
          bal.push_back({ov.line_flow[l][t], -1.0});
        if (ix.bus.at(line.to_bus) == static_cast<int>(b))
          bal.push_back({ov.line_flow[l][t], 1.0});
      }
      m.add_constraint(nm("ebal", {bus.id, tname(t)}, label), std::move(bal),
                       milp::Sense::Equal, bus.load[t]);
    }
  }
}

void build_emission_block(Model& m, const PlanningInstance& inst, const OperationVars& ov,
                          const std::string& label) {
  for (std::size_t j = 0; j < inst.generators.size(); ++j) {
    const Generator& g = inst.generators[j];
    for (int t = 0; t < inst.horizon; ++t)
      m.add_constraint(nm("emi", {g.id, tname(t)}, label),
                       {{ov.q_emi[j][t], 1.0}, {ov.gen_out[j][t], -g.emission_factor}},
                       milp::Sense::Equal, 0.0);
  }
}

void build_coupling_block(Model& m, const PlanningInstance& inst, const OperationVars& ov,
                          const std::vector<VarHandle>& y, const std::string& label) {
  if (!inst.ptg_technology) throw milp::ModelError("coupling block needs ptg_technology");
  const PtgTechnology& tech = *inst.ptg_technology;
  InstanceIndex ix = make_index(inst);
  const int T = inst.horizon;
  double conv = methane_per_mwh(tech);

  for (std::size_t c = 0; c < ix.ccpp.size(); ++c) {
    const Generator& g = inst.generators[ix.ccpp[c]];
    int j = ix.ccpp[c];
    for (int t = 0; t < T; ++t) {
      m.add_constraint(nm("split", {g.id, tname(t)}, label),
                       {{ov.gen_out[j][t], 1.0},
                        {ov.grid_out[c][t], -1.0},
                        {ov.ptg_power[c][t], -1.0},
                        {ov.cc_power[c][t], -1.0}},
                       milp::Sense::Equal, 0.0);
      m.add_constraint(nm("ccp", {g.id, tname(t)}, label),
                       {{ov.cc_power[c][t], 1.0},
                        {ov.q_cc[c][t], -inst.economics.capture_energy}},
                       milp::Sense::Equal, 0.0);
      m.add_constraint(nm("cmb", {g.id, tname(t)}, label),
                       {{ov.q_cc[c][t], 1.0}, {ov.q_cs[c][t], -1.0}, {ov.q_cu[c][t], -1.0}},
                       milp::Sense::Equal, 0.0);
      m.add_constraint(nm("cuse", {g.id, tname(t)}, label),
                       {{ov.q_cu[c][t], 1.0},
                        {ov.ptg_power[c][t],
                         -tech.co2_per_mwh * tech.conversion_efficiency}},
                       milp::Sense::Equal, 0.0);
      m.add_constraint(nm("meth", {g.id, tname(t)}, label),
                       {{ov.ch4_total[c][t], 1.0}, {ov.ptg_power[c][t], -conv}},
                       milp::Sense::Equal, 0.0);
      m.add_constraint(nm("ptgub", {g.id, tname(t)}, label),
                       {{ov.ptg_power[c][t], 1.0}, {y[c], -tech.per_module_output_max}},
                       milp::Sense::LessEqual, 0.0);
      m.add_constraint(nm("ptglb", {g.id, tname(t)}, label),
                       {{y[c], tech.per_module_output_min}, {ov.ptg_power[c][t], -1.0}},
                       milp::Sense::LessEqual, 0.0);
      // Physical capture cannot exceed the plant's flue-gas CO2. Also keeps
      // the tax coefficient Q_EMI - Q_CC nonnegative, which the robust corner
      // argument relies on.
      m.add_constraint(nm("ccap", {g.id, tname(t)}, label),
                       {{ov.q_cc[c][t], 1.0}, {ov.q_emi[j][t], -1.0}},
                       milp::Sense::LessEqual, 0.0);
    }
  }
}

void build_siting_block(Model& m, const PlanningInstance& inst, const OperationVars& ov,
                        const std::vector<VarHandle>& s, const std::vector<int>& y_cap,
                        const std::string& label) {
  if (!inst.ptg_technology) throw milp::ModelError("siting block needs ptg_technology");
  const PtgTechnology& tech = *inst.ptg_technology;
  InstanceIndex ix = make_index(inst);
  const int T = inst.horizon;
  auto by_plant = candidates_by_plant(inst, ix);

  for (std::size_t i = 0; i < inst.siting_candidates.size(); ++i) {
    const SitingCandidate& cand = inst.siting_candidates[i];
    int gi = ix.generator.at(cand.plant);
    std::size_t c = 0;
    for (std::size_t cc = 0; cc < ix.ccpp.size(); ++cc)
      if (ix.ccpp[cc] == gi) c = cc;
    double big_m = methane_per_mwh(tech) *
                   ptg_power_cap(inst.generators[gi], tech, y_cap[c]);
    for (int t = 0; t < T; ++t)
      m.add_constraint(nm("inj", {cand.gas_node, cand.plant, tname(t)}, label),
                       {{ov.ch4_site[i][t], 1.0}, {s[i], -big_m}},
                       milp::Sense::LessEqual, 0.0);
  }

  for (std::size_t c = 0; c < ix.ccpp.size(); ++c) {
    const Generator& g = inst.generators[ix.ccpp[c]];
    for (int t = 0; t < T; ++t) {
      std::vector<Term> sum{{ov.ch4_total[c][t], 1.0}};
      for (int i : by_plant[c]) sum.push_back({ov.ch4_site[i][t], -1.0});
      m.add_constraint(nm("vsum", {g.id, tname(t)}, label), std::move(sum),
                       milp::Sense::Equal, 0.0);
    }
  }
}

void build_first_stage_links(Model& m, const PlanningInstance& inst,
                             const std::vector<VarHandle>& y,
                             const std::vector<VarHandle>& s) {
  InstanceIndex ix = make_index(inst);
  auto by_plant = candidates_by_plant(inst, ix);
  double m1 = static_cast<double>(inst.gas_nodes.size());
  for (std::size_t c = 0; c < ix.ccpp.size(); ++c) {
    const Generator& g = inst.generators[ix.ccpp[c]];
    std::vector<Term> link{{y[c], -m1}};
    for (int i : by_plant[c]) link.push_back({s[i], 1.0});
    m.add_constraint(nm("site", {g.id}, ""), std::move(link), milp::Sense::LessEqual, 0.0);
  }
}

OpCostTerms build_cost_terms(const PlanningInstance& inst, const OperationVars& ov,
                             double tax, double price) {
  OpCostTerms out;
  double w = inst.economics.day_weight;

  for (std::size_t i = 0; i < inst.gas_sources.size(); ++i)
    for (VarHandle h : ov.src_out[i])
      out.ope_gs.push_back({h, w * inst.gas_sources[i].unit_cost});
  for (std::size_t j = 0; j < inst.generators.size(); ++j)
    for (VarHandle h : ov.gen_out[j])
      out.ope_gen.push_back({h, w * inst.generators[j].unit_cost});
  for (std::size_t j = 0; j < inst.generators.size(); ++j)
    for (VarHandle h : ov.q_emi[j]) out.penalty.push_back({h, w * tax});

  if (!ov.ptg_power.empty() && inst.ptg_technology) {
    double rq = inst.ptg_technology->unit_op_cost;
    for (const auto& plant : ov.ptg_power)
      for (VarHandle h : plant) out.ope_ptg.push_back({h, w * rq});
    for (const auto& plant : ov.q_cc)
      for (VarHandle h : plant) {
        out.capture.push_back({h, w * inst.economics.capture_cost});
        out.penalty.push_back({h, -w * tax});
      }
    for (const auto& plant : ov.q_cs)
      for (VarHandle h : plant) {
        out.storage.push_back({h, w * inst.economics.storage_cost});
        out.revenue.push_back({h, -w * price});
      }
  }
  return out;
}

InvestTerms build_invest_terms(const PlanningInstance& inst, const VariableMap& map) {
  InvestTerms out;
  if (map.y.empty()) return out;
  const PtgTechnology& tech = *inst.ptg_technology;
  double kappa = annualization_coefficient(inst.economics.discount_rate, tech.lifetime);
  for (VarHandle h : map.y)
    out.invest_ptg.push_back({h, kappa * tech.unit_invest_cost * tech.module_size});
  for (std::size_t i = 0; i < map.s.size(); ++i) {
    const SitingCandidate& cand = inst.siting_candidates[i];
    double k = annualization_coefficient(inst.economics.discount_rate, cand.lifetime);
    out.invest_siting.push_back({map.s[i], k * cand.invest_cost});
  }
  return out;
}

std::vector<Term> OpCostTerms::all() const {
  std::vector<Term> out;
  for (const auto* group : {&ope_gs, &ope_gen, &ope_ptg, &capture, &storage, &penalty, &revenue})
    out.insert(out.end(), group->begin(), group->end());
  return out;
}

std::vector<Term> InvestTerms::all() const {
  std::vector<Term> out = invest_ptg;
  out.insert(out.end(), invest_siting.begin(), invest_siting.end());
  return out;
}

double evaluate_terms(const std::vector<Term>& terms, const std::vector<double>& values) {
  double sum = 0.0;
  for (const Term& t : terms) sum += t.coeff * values.at(t.var.index);
  return sum;
}

BuiltModel build_planning_model(const PlanningInstance& inst,
                                const std::vector<ScenarioDef>& scenarios,
                                const BuildOptions& opts) {
  if (scenarios.empty()) throw milp::ModelError("at least one scenario required");
  if (opts.siting && !opts.coupling)
    throw milp::ModelError("siting requires the coupling block");
  if (opts.coupling && !inst.ptg_technology)
    throw milp::ModelError("coupling requested but instance has no ptg_technology");

  BuiltModel built;
  built.options = opts;
  built.scenarios = scenarios;
  built.map.pwl = compute_breakpoints(inst);

  declare_first_stage(built.model, inst, opts, built.map);
  if (opts.objective == ObjectiveMode::Epigraph)
    built.map.epigraph = built.model.add_variable("z[worst]", milp::VarKind::Continuous,
                                                  -milp::kInf, milp::kInf);

  bool with_injection = opts.siting && !inst.siting_candidates.empty();
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    std::string label = scenarios[k].label;
    if (label.empty() && scenarios.size() > 1) label = "w" + std::to_string(k + 1);
    built.scenarios[k].label = label;
    OperationVars ov = declare_operation_vars(built.model, inst, built.map.pwl, opts, label);
    build_gas_block(built.model, inst, built.map.pwl, ov, with_injection, label);
    build_electric_block(built.model, inst, ov, opts.coupling, label);
    build_emission_block(built.model, inst, ov, label);
    if (opts.coupling) {
      build_coupling_block(built.model, inst, ov, built.map.y, label);
      if (opts.siting && !inst.siting_candidates.empty())
        build_siting_block(built.model, inst, ov, built.map.s, built.map.y_cap, label);
    }
    built.op.push_back(build_cost_terms(inst, ov, scenarios[k].tax, scenarios[k].price));
    built.map.scen.push_back(std::move(ov));
  }
  if (opts.coupling && !built.map.s.empty())
    build_first_stage_links(built.model, inst, built.map.y, built.map.s);

  built.invest = build_invest_terms(inst, built.map);
  std::vector<Term> obj = built.invest.all();
  if (opts.objective == ObjectiveMode::WeightedSum) {
    for (std::size_t k = 0; k < scenarios.size(); ++k)
      for (Term t : built.op[k].all()) {
        t.coeff *= built.scenarios[k].probability;
        obj.push_back(t);
      }
  } else {
    obj.push_back({built.map.epigraph, 1.0});
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
      std::vector<Term> epi = built.op[k].all();
      epi.push_back({built.map.epigraph, -1.0});
      built.model.add_constraint(nm("epi", {built.scenarios[k].label}, ""), std::move(epi),
                                 milp::Sense::LessEqual, 0.0);
    }
  }
  built.model.set_objective(std::move(obj), 0.0);
  return built;
}

} // namespace ccusplan::form
