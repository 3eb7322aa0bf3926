#include "invsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace invsim {

int FeederModel::bus_index(int id) const {
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  throw std::out_of_range("feeder: unknown bus id " + std::to_string(id));
}

double FeederModel::total_load_p_kw() const {
  double p = 0.0;
  for (const auto& l : loads) p += l.p_kw;
  return p;
}

double FeederModel::total_load_q_kvar() const {
  double q = 0.0;
  for (const auto& l : loads) q += l.q_kvar;
  return q;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

FeederModel parse_feeder_text(const std::string& text) {
  FeederModel model;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section != "buses" && section != "lines" && section != "loads" &&
          section != "generators" && section != "system")
        errors.push_back("line " + std::to_string(line_no) +
                         ": unknown section [" + section + "]");
      continue;
    }
    std::istringstream row(line);
    if (section == "buses") {
      Bus b;
      if (row >> b.id >> b.kv)
        model.buses.push_back(b);
      else
        errors.push_back("line " + std::to_string(line_no) + ": bad bus row");
    } else if (section == "lines") {
      Line l;
      if (row >> l.from >> l.to >> l.r_ohm >> l.x_ohm)
        model.lines.push_back(l);
      else
        errors.push_back("line " + std::to_string(line_no) + ": bad line row");
    } else if (section == "loads") {
      Load l;
      std::string type;
      if (row >> l.bus >> l.p_kw >> l.q_kvar >> type &&
          (type == "P" || type == "Z")) {
        l.type = type == "P" ? LoadType::ConstantPower
                             : LoadType::ConstantImpedance;
        model.loads.push_back(l);
      } else {
        errors.push_back("line " + std::to_string(line_no) +
                         ": bad load row (want: bus p_kw q_kvar P|Z)");
      }
    } else if (section == "generators") {
      Generator g;
      std::string type;
      if (row >> g.bus >> type >> g.p_kw >> g.q_kvar &&
          (type == "slack" || type == "distributed")) {
        g.type = type == "slack" ? GenType::SlackMain : GenType::Distributed;
        model.generators.push_back(g);
      } else {
        errors.push_back("line " + std::to_string(line_no) +
                         ": bad generator row (want: bus slack|distributed p_kw q_kvar)");
      }
    } else if (section == "system") {
      std::string key;
      double value;
      if (row >> key >> value) {
        if (key == "scc_utility_mva")
          model.scc_utility_mva = value;
        else if (key == "s_base_mva")
          model.s_base_mva = value;
        else if (key == "slack_bus")
          model.slack_bus = static_cast<int>(value);
        else
          errors.push_back("line " + std::to_string(line_no) +
                           ": unknown system key " + key);
      } else {
        errors.push_back("line " + std::to_string(line_no) + ": bad system row");
      }
    } else {
      errors.push_back("line " + std::to_string(line_no) +
                       ": data outside any section");
    }
  }
  if (model.buses.empty()) errors.push_back("no buses defined");
  if (!errors.empty()) {
    std::string msg = "feeder parse failed:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
  return model;
}

FeederModel load_feeder_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open feeder file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_feeder_text(buf.str());
}

namespace {

struct Tree {
  std::vector<int> order;        // bus indices, root first
  std::vector<int> parent;       // parent bus index (-1 for root)
  std::vector<int> parent_line;  // line index to parent (-1 for root)
};

Tree build_tree(const FeederModel& model) {
  const int n = static_cast<int>(model.buses.size());
  const int root = model.bus_index(model.slack_bus);
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, line)
  for (std::size_t li = 0; li < model.lines.size(); ++li) {
    const int a = model.bus_index(model.lines[li].from);
    const int b = model.bus_index(model.lines[li].to);
    adj[a].push_back({b, static_cast<int>(li)});
    adj[b].push_back({a, static_cast<int>(li)});
  }
  Tree tree;
  tree.parent.assign(n, -2);
  tree.parent_line.assign(n, -1);
  tree.parent[root] = -1;
  tree.order.push_back(root);
  for (std::size_t head = 0; head < tree.order.size(); ++head) {
    const int u = tree.order[head];
    for (auto [v, li] : adj[u]) {
      if (tree.parent[v] != -2) continue;
      tree.parent[v] = u;
      tree.parent_line[v] = li;
      tree.order.push_back(v);
    }
  }
  if (tree.order.size() != static_cast<std::size_t>(n))
    throw std::runtime_error("feeder: network is not connected");
  if (model.lines.size() != static_cast<std::size_t>(n) - 1)
    throw std::runtime_error("feeder: network is not radial");
  return tree;
}

}  // namespace

PowerFlowResult power_flow(const FeederModel& model, const PfInput& input) {
  const int n = static_cast<int>(model.buses.size());
  const Tree tree = build_tree(model);
  const int root = model.bus_index(model.slack_bus);
  const double s_base = model.s_base_mva;

  // Per-bus constant-power (pu) and constant-impedance admittance (pu).
  Eigen::VectorXcd s_p = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd y_z = Eigen::VectorXcd::Zero(n);
  for (const auto& l : model.loads) {
    const int i = model.bus_index(l.bus);
    const std::complex<double> s(l.p_kw / 1000.0 / s_base,
                                 l.q_kvar / 1000.0 / s_base);
    if (l.type == LoadType::ConstantPower)
      s_p[i] += input.load_scale * s;
    else
      y_z[i] += input.load_scale * std::conj(s);  // at 1 pu voltage
  }
  for (const auto& [bus, s_mva] : input.extra_injections_mva) {
    s_p[model.bus_index(bus)] -= s_mva / s_base;
  }

  // Line impedances in pu on the bus voltage base.
  std::vector<std::complex<double>> z_pu(model.lines.size());
  for (std::size_t li = 0; li < model.lines.size(); ++li) {
    const int a = model.bus_index(model.lines[li].from);
    const double v_kv = model.buses[a].kv;
    const double z_base = v_kv * v_kv / s_base;
    z_pu[li] = std::complex<double>(model.lines[li].r_ohm / z_base,
                                    model.lines[li].x_ohm / z_base);
  }

  PowerFlowResult result;
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(n, input.slack_v_pu);
  Eigen::VectorXcd i_branch(n);  // current flowing into bus from its parent
  // Convergence is declared at 1e-6 within 50 sweeps; once converged the
  // solution is polished further so downstream comparisons are not limited
  // by the stopping tolerance.
  const int max_iter = 120;
  for (int iter = 1; iter <= max_iter; ++iter) {
    // Backward: accumulate branch currents from the leaves up.
    i_branch.setZero();
    for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
      const int u = *it;
      std::complex<double> inj = std::conj(s_p[u] / v[u]) + y_z[u] * v[u];
      if (u != root) i_branch[u] += inj;
      if (tree.parent[u] >= 0) i_branch[tree.parent[u]] += i_branch[u];
    }
    // Forward: propagate voltage drops from the root down.
    double max_dv = 0.0;
    for (int u : tree.order) {
      std::complex<double> v_new;
      if (u == root) {
        v_new = std::complex<double>(input.slack_v_pu, 0.0);
      } else {
        v_new = v[tree.parent[u]] - z_pu[tree.parent_line[u]] * i_branch[u];
      }
      max_dv = std::max(max_dv, std::abs(v_new - v[u]));
      v[u] = v_new;
    }
    result.iterations = iter;
    result.max_mismatch_pu = max_dv;
    if (iter <= 50 && max_dv < 1e-6) result.converged = true;
    if (max_dv < 1e-13) break;
    if (!v.allFinite()) {
      result.converged = false;
      break;
    }
  }

  result.v_bus = v;
  if (result.converged) {
    const std::complex<double> s_slack =
        v[root] * std::conj(i_branch[root]) * s_base;
    result.slack_p_mw = s_slack.real();
    result.slack_q_mvar = s_slack.imag();
  }
  return result;
}

double frequency_step(const FrequencyModel& fm, double f_now,
                      double p_deficit_mw, double dt) {
  const double unabsorbed = std::max(0.0, p_deficit_mw - fm.headroom_mw);
  if (unabsorbed > 0.0) {
    return f_now - unabsorbed * fm.f0 / (2.0 * fm.h_agg * fm.s_base_mva) * dt;
  }
  const double tau = fm.h_agg / 2.0;
  return f_now + (fm.f0 - f_now) * dt / tau;
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::InstantTrip: return "instant_trip";
    case ScenarioKind::VoltageDegradation: return "voltage_degradation";
    case ScenarioKind::LossOfExcitation: return "loss_of_excitation";
  }
  return "unknown";
}

std::optional<ScenarioKind> scenario_kind_from_string(const std::string& name) {
  if (name == "instant_trip") return ScenarioKind::InstantTrip;
  if (name == "voltage_degradation") return ScenarioKind::VoltageDegradation;
  if (name == "loss_of_excitation") return ScenarioKind::LossOfExcitation;
  return std::nullopt;
}

std::vector<GridEvent> protection_scan(const ProtectionSettings& settings,
                                       double t, double f,
                                       const Eigen::VectorXcd& v_bus,
                                       const std::vector<Bus>& buses,
                                       ProtectionState& state) {
  std::vector<GridEvent> events;
  if (state.uv_since.size() != buses.size())
    state.uv_since.assign(buses.size(), -1.0);

  if (!state.uf_tripped && f < settings.uf_trip_hz) {
    state.uf_tripped = true;
    state.halted = true;
    events.push_back({t, "grid shutdown"});
    return events;
  }
  for (std::size_t b = 0; b < buses.size(); ++b) {
    const double vm = std::abs(v_bus[static_cast<Eigen::Index>(b)]);
    if (vm < settings.uv_trip_pu) {
      if (state.uv_since[b] < 0.0) state.uv_since[b] = t;
      if (state.uv_since[b] < 1e8 &&
          t - state.uv_since[b] >= settings.trip_delay_s) {
        events.push_back(
            {t, "undervoltage bus " + std::to_string(buses[b].id)});
        state.uv_since[b] = 1e9;  // report once per excursion
      }
    } else {
      state.uv_since[b] = -1.0;
    }
  }
  return events;
}

GridScenarioResult run_scenario(const FeederModel& model, ScenarioKind kind,
                                double t_attack,
                                const GridScenarioSettings& settings) {
  GridScenarioResult out;
  const int idx_632 = model.bus_index(632);
  const int idx_692 = model.bus_index(692);

  double f = settings.freq.f0;
  double slack_v = 1.0;
  bool dg_online = true;
  double dg_q = settings.dg_q_mvar;
  double load_scale = 1.0;
  ProtectionState prot;

  const int n_steps =
      static_cast<int>(std::llround(settings.t_end / settings.dt));
  for (int k = 0; k <= n_steps; ++k) {
    const double t = k * settings.dt;
    const bool attacked = t >= t_attack;

    double dg_p = dg_online ? settings.dg_p_mw : 0.0;
    if (attacked && dg_online) {
      const double since = t - t_attack;
      switch (kind) {
        case ScenarioKind::InstantTrip:
          if (dg_online) {
            dg_online = false;
            dg_p = 0.0;
            out.events.push_back({t, "dg_trip bus 692"});
          }
          break;
        case ScenarioKind::VoltageDegradation:
          dg_q = settings.dg_q_mvar - settings.b_q_decline_mvar_per_s * since;
          if (since >= settings.b_horizon_s) {
            load_scale =
                1.0 + settings.b_restoration_per_s * (since - settings.b_horizon_s);
          }
          break;
        case ScenarioKind::LossOfExcitation:
          dg_q = settings.dg_q_mvar - settings.c_q_absorb_mvar_per_s * since;
          dg_p = settings.dg_p_mw *
                 (1.0 + settings.c_p_osc_frac *
                            std::sin(2.0 * std::numbers::pi *
                                     settings.c_p_osc_hz * since));
          break;
      }
    }

    PfInput pf;
    pf.slack_v_pu = slack_v;
    pf.load_scale = load_scale;
    if (dg_online)
      pf.extra_injections_mva.push_back({692, {dg_p, dg_q}});
    const PowerFlowResult sol = power_flow(model, pf);

    if (!sol.converged) {
      out.events.push_back({t, "voltage collapse"});
      if (!out.t_instability) out.t_instability = t;
      break;
    }

    // Utility reactive capability: past the limit the slack setpoint
    // droops, and constant-power loads then draw more current — the
    // self-reinforcing Q-V cycle.
    const double q_excess = sol.slack_q_mvar - settings.q_slack_max_mvar;
    if (q_excess > 0.0) {
      slack_v -= settings.slack_droop_pu_per_mvar_s * q_excess * settings.dt;
      if (out.events.empty() || out.events.back().label != "reactive limit") {
        out.events.push_back({t, "reactive limit"});
      }
      if (slack_v < 0.70) {
        out.events.push_back({t, "voltage collapse"});
        if (!out.t_instability) out.t_instability = t;
        out.t.push_back(t);
        out.f_hz.push_back(f);
        out.v_632_pu.push_back(std::abs(sol.v_bus[idx_632]));
        out.v_692_pu.push_back(std::abs(sol.v_bus[idx_692]));
        break;
      }
    }

    // Frequency responds to the lost DG active power.
    const double deficit = dg_online ? 0.0 : settings.dg_p_mw;
    f = frequency_step(settings.freq, f, deficit, settings.dt);

    out.t.push_back(t);
    out.f_hz.push_back(f);
    out.v_632_pu.push_back(std::abs(sol.v_bus[idx_632]));
    out.v_692_pu.push_back(std::abs(sol.v_bus[idx_692]));

    const auto events = protection_scan(settings.protection, t, f, sol.v_bus,
                                        model.buses, prot);
    for (const auto& ev : events) {
      out.events.push_back(ev);
      if (ev.label == "grid shutdown" && !out.t_instability)
        out.t_instability = t;
    }
    if (prot.halted) break;
  }
  return out;
}

}  // namespace invsim
