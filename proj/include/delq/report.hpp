#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "delq/curvature.hpp"

namespace delq {

// All numeric report output uses 17 significant digits so that reruns with
// identical inputs are byte-identical.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

inline void write_curvature_csv(const std::string& path, const std::vector<CurvatureRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "s_re,s_im,curv_del,curv_rr,curv_fd,abs_del_rr,abs_del_fd\n";
  for (const auto& r : rows) {
    out << fmt17(r.s.real()) << ',' << fmt17(r.s.imag()) << ',' << fmt17(r.del) << ','
        << fmt17(r.rr) << ',' << fmt17(r.fd) << ',' << fmt17(std::abs(r.del - r.rr)) << ','
        << fmt17(std::abs(r.del - r.fd)) << '\n';
  }
}

}  // namespace delq
