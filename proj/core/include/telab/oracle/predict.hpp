#pragma once

#include <span>

#include "telab/net/traffic.hpp"

namespace telab::oracle {

// Weighted moving average of a history given oldest first. The most recent
// matrix has weight 1, the one before it `decay`, then decay^2, ...
// decay must lie in (0, 1].
net::TrafficMatrix predict_wma(std::span<const net::TrafficMatrix> history, double decay);

}  // namespace telab::oracle
