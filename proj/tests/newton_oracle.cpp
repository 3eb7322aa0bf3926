#include "newton_oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace invsim::testing {

NewtonResult newton_power_flow(const FeederModel& model, const PfInput& input) {
  const int n = static_cast<int>(model.buses.size());
  const int slack = model.bus_index(model.slack_bus);
  const double s_base = model.s_base_mva;

  // Y-bus from lines; constant-impedance loads enter as shunt admittances.
  Eigen::MatrixXcd ybus = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& line : model.lines) {
    const int a = model.bus_index(line.from);
    const int b = model.bus_index(line.to);
    const double v_kv = model.buses[a].kv;
    const double z_base = v_kv * v_kv / s_base;
    const std::complex<double> z(line.r_ohm / z_base, line.x_ohm / z_base);
    const std::complex<double> y = 1.0 / z;
    ybus(a, a) += y;
    ybus(b, b) += y;
    ybus(a, b) -= y;
    ybus(b, a) -= y;
  }

  // Scheduled injections (generation positive) for constant-power parts.
  Eigen::VectorXcd s_sched = Eigen::VectorXcd::Zero(n);
  for (const auto& load : model.loads) {
    const int i = model.bus_index(load.bus);
    const std::complex<double> s(load.p_kw / 1000.0 / s_base,
                                 load.q_kvar / 1000.0 / s_base);
    if (load.type == LoadType::ConstantPower)
      s_sched[i] -= input.load_scale * s;
    else
      ybus(i, i) += input.load_scale * std::conj(s);  // y at 1 pu voltage
  }
  for (const auto& [bus, s_mva] : input.extra_injections_mva)
    s_sched[model.bus_index(bus)] += s_mva / s_base;

  std::vector<double> vm(n, input.slack_v_pu), va(n, 0.0);
  vm[slack] = input.slack_v_pu;

  std::vector<int> pq;  // all non-slack buses
  for (int i = 0; i < n; ++i)
    if (i != slack) pq.push_back(i);
  const int m = static_cast<int>(pq.size());

  NewtonResult result;
  for (int iter = 1; iter <= 60; ++iter) {
    // Computed injections.
    std::vector<double> p_calc(n, 0.0), q_calc(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const double g = ybus(i, k).real(), b = ybus(i, k).imag();
        const double th = va[i] - va[k];
        p_calc[i] += vm[i] * vm[k] * (g * std::cos(th) + b * std::sin(th));
        q_calc[i] += vm[i] * vm[k] * (g * std::sin(th) - b * std::cos(th));
      }
    }

    Eigen::VectorXd mismatch(2 * m);
    double max_mis = 0.0;
    for (int r = 0; r < m; ++r) {
      const int i = pq[r];
      mismatch[r] = s_sched[i].real() - p_calc[i];
      mismatch[m + r] = s_sched[i].imag() - q_calc[i];
      max_mis = std::max({max_mis, std::abs(mismatch[r]),
                          std::abs(mismatch[m + r])});
    }
    result.iterations = iter;
    if (max_mis < 1e-10) {
      result.converged = true;
      break;
    }

    Eigen::MatrixXd jac(2 * m, 2 * m);
    for (int r = 0; r < m; ++r) {
      const int i = pq[r];
      for (int c = 0; c < m; ++c) {
        const int k = pq[c];
        const double g = ybus(i, k).real(), b = ybus(i, k).imag();
        const double th = va[i] - va[k];
        double dp_dth, dp_dv, dq_dth, dq_dv;
        if (i == k) {
          dp_dth = -q_calc[i] - b * vm[i] * vm[i];
          dp_dv = p_calc[i] / vm[i] + g * vm[i];
          dq_dth = p_calc[i] - g * vm[i] * vm[i];
          dq_dv = q_calc[i] / vm[i] - b * vm[i];
        } else {
          const double vv = vm[i] * vm[k];
          dp_dth = vv * (g * std::sin(th) - b * std::cos(th));
          dp_dv = vm[i] * (g * std::cos(th) + b * std::sin(th));
          dq_dth = -vv * (g * std::cos(th) + b * std::sin(th));
          dq_dv = vm[i] * (g * std::sin(th) - b * std::cos(th));
        }
        jac(r, c) = dp_dth;
        jac(r, m + c) = dp_dv;
        jac(m + r, c) = dq_dth;
        jac(m + r, m + c) = dq_dv;
      }
    }

    const Eigen::VectorXd dx = jac.partialPivLu().solve(mismatch);
    if (!dx.allFinite()) break;
    for (int r = 0; r < m; ++r) {
      va[pq[r]] += dx[r];
      vm[pq[r]] += dx[m + r];
    }
  }

  result.v_bus.resize(n);
  for (int i = 0; i < n; ++i)
    result.v_bus[i] = std::polar(vm[i], va[i]);
  return result;
}

}  // namespace invsim::testing
