#pragma once

#include <complex>

namespace qsync {

using Complex = std::complex<double>;

}  // namespace qsync
