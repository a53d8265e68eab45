#include "qsync/errors.hpp"

#include <fmt/format.h>

namespace qsync {

IntegrationBlowup::IntegrationBlowup(std::string component, double t)
    : Error(fmt::format("integration blowup: non-finite {} at t={}", component, t)),
      component_(std::move(component)),
      time_(t) {}

}  // namespace qsync
