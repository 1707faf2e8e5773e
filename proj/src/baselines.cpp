#include "ora/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace ora {

OmdState omd_init(const InstanceParams& params, double lambda_1, double eta) {
  if (lambda_1 < 0.0) throw std::invalid_argument("lambda_1 must be >= 0");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  OmdState s;
  s.params = params;
  s.eta = eta;
  s.lambda = std::min(lambda_1, params.lambda_max);
  s.ledger.total = params.budget;
  return s;
}

OmdStep omd_step(const OmdState& state, const Request& request) {
  OmdStep out{best_response(request, state.lambda, state.ledger.budget()),
              state};
  out.next.ledger.record(out.action);
  out.next.t = state.t + 1;
  const double g = state.params.rho() - out.action.consumption;
  out.next.lambda =
      std::clamp(state.lambda - state.eta * g, 0.0, state.params.lambda_max);
  return out;
}

RoaState roa_init(const InstanceParams& params, double lambda_1, int window) {
  if (lambda_1 < 0.0) throw std::invalid_argument("lambda_1 must be >= 0");
  if (window < 0) throw std::invalid_argument("window must be >= 0");
  RoaState s;
  s.params = params;
  // A window covering the whole horizon is the full-history average, which
  // needs no ring buffer.
  s.window = window >= params.horizon ? 0 : window;
  s.lambda = lambda_1;
  s.ledger.total = params.budget;
  return s;
}

RoaStep roa_step(const RoaState& state, const Request& request) {
  RoaStep out{best_response(request, state.lambda, state.ledger.budget()),
              state};
  RoaState& n = out.next;
  n.ledger.record(out.action);
  n.t = state.t + 1;
  // Null rounds have zero consumption and are left out of the average.
  if (!out.action.is_null()) {
    const double ratio = out.action.reward / out.action.consumption;
    if (n.window == 0) {
      n.ratio_sum += ratio;
      ++n.ratio_count;
      n.lambda = n.ratio_sum / static_cast<double>(n.ratio_count);
    } else {
      n.ratios.push_back(ratio);
      if (static_cast<int>(n.ratios.size()) > n.window) n.ratios.pop_front();
      n.lambda = average_of_ratios(n.ratios, n.window);
    }
  }
  return out;
}

double average_of_ratios(const std::deque<double>& ratios, int window) {
  if (ratios.empty()) return 0.0;
  const std::size_t n = window > 0
                            ? std::min<std::size_t>(ratios.size(), window)
                            : ratios.size();
  double sum = 0.0;
  for (std::size_t i = ratios.size() - n; i < ratios.size(); ++i)
    sum += ratios[i];
  return sum / static_cast<double>(n);
}

Action static_policy_step(double lambda_fixed, const Request& request,
                          const Budget& budget) {
  return best_response(request, lambda_fixed, budget);
}

}  // namespace ora
