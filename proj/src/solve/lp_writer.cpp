#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <string>

#include "maas/solve/engine.hpp"

namespace maas::solve {

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string var_name(const LinearProgram& lp, int j) {
  const auto& n = lp.variable(j).name;
  if (n.empty()) return "x" + std::to_string(j);
  std::string out;
  for (char c : n) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  return out + "_" + std::to_string(j);
}

void write_terms(std::ostream& os, const LinearProgram& lp, const std::vector<int>& idx,
                 const std::vector<double>& val) {
  bool first = true;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double v = val[k];
    if (v == 0.0) continue;
    os << (v < 0 ? " - " : (first ? " " : " + ")) << fixed(std::abs(v)) << " "
       << var_name(lp, idx[k]);
    first = false;
  }
  if (first) os << " 0 " << (lp.num_variables() > 0 ? var_name(lp, 0) : "x0");
}

}  // namespace

void write_lp_file(std::ostream& os, const LinearProgram& lp, const std::vector<int>& binaries) {
  os << (lp.sense() == ObjectiveSense::kMaximize ? "Maximize\n" : "Minimize\n") << " obj:";
  std::vector<int> idx;
  std::vector<double> val;
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    idx.push_back(static_cast<int>(j));
    val.push_back(lp.variable(j).cost);
  }
  write_terms(os, lp, idx, val);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.row(i);
    os << " r" << i << ":";
    write_terms(os, lp, r.index, r.value);
    const char* op = r.sense == RowSense::kLessEqual ? " <= "
                     : r.sense == RowSense::kEqual   ? " = "
                                                     : " >= ";
    os << op << fixed(r.rhs) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variable(j);
    const std::string name = var_name(lp, static_cast<int>(j));
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      os << " " << name << " free\n";
      continue;
    }
    os << " " << (std::isinf(v.lower) ? std::string("-inf") : fixed(v.lower)) << " <= " << name
       << " <= " << (std::isinf(v.upper) ? std::string("+inf") : fixed(v.upper)) << "\n";
  }
  if (!binaries.empty()) {
    os << "Binaries\n";
    for (int b : std::set<int>(binaries.begin(), binaries.end())) os << " " << var_name(lp, b) << "\n";
  }
  os << "End\n";
}

}  // namespace maas::solve
