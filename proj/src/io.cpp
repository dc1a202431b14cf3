#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "maas/error.hpp"
#include "maas/network.hpp"

namespace maas {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Table {
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

Table read_table(std::istream& in, const std::vector<std::string>& header, const char* what) {
  Table t;
  std::string line;
  bool have_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto fields = split(s);
    if (!have_header) {
      bool ok = fields.size() == header.size();
      for (std::size_t k = 0; ok && k < header.size(); ++k) ok = fields[k] == header[k];
      if (!ok) {
        std::string expect;
        for (const auto& h : header) expect += (expect.empty() ? "" : ",") + h;
        throw InputError(std::string(what) + ": expected header '" + expect + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw InputError(std::string(what) + " line " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields");
    }
    t.rows.emplace_back(fields.begin(), fields.end());
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) throw InputError(std::string(what) + ": missing header");
  return t;
}

double parse_double(const std::string& s, const char* what, int lineno) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last || !std::isfinite(v)) {
    throw InputError(std::string(what) + " line " + std::to_string(lineno) + ": bad number '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const char* what, int lineno) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw InputError(std::string(what) + " line " + std::to_string(lineno) + ": bad integer '" + s + "'");
  }
  return v;
}

const std::vector<std::string> kLinkHeader{"tail",          "head",     "travel_cost",
                                           "operating_cost", "capacity", "owner"};
const std::vector<std::string> kDemandHeader{"origin", "destination", "demand", "utility"};

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

Network load_network(std::istream& in) {
  const Table t = read_table(in, kLinkHeader, "link table");
  std::vector<Link> links;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    const int ln = t.line_numbers[r];
    Link l;
    l.tail = static_cast<NodeId>(parse_int(f[0], "link table", ln));
    l.head = static_cast<NodeId>(parse_int(f[1], "link table", ln));
    l.travel_cost = parse_double(f[2], "link table", ln);
    l.operating_cost = parse_double(f[3], "link table", ln);
    l.capacity = parse_double(f[4], "link table", ln);
    const long long owner = parse_int(f[5], "link table", ln);
    if (owner < 0 || owner > 0xffffffffLL) {
      throw InputError("link table line " + std::to_string(ln) + ": bad owner id");
    }
    l.owner = OperatorId{static_cast<std::uint32_t>(owner)};
    links.push_back(l);
  }
  return Network({}, std::move(links));
}

Network load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open link table '" + path + "'");
  return load_network(in);
}

void write_network(std::ostream& out, const Network& net) {
  for (std::size_t k = 0; k < kLinkHeader.size(); ++k) out << (k ? "," : "") << kLinkHeader[k];
  out << "\n";
  for (const Link& l : net.links()) {
    out << l.tail << "," << l.head << "," << format_number(l.travel_cost) << ","
        << format_number(l.operating_cost) << "," << format_number(l.capacity) << ","
        << l.owner.value << "\n";
  }
}

DemandTable load_demand(std::istream& in, const Network& net) {
  const Table t = read_table(in, kDemandHeader, "demand table");
  std::vector<DemandEntry> entries;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    const int ln = t.line_numbers[r];
    DemandEntry e;
    e.origin = static_cast<NodeId>(parse_int(f[0], "demand table", ln));
    e.destination = static_cast<NodeId>(parse_int(f[1], "demand table", ln));
    e.demand = parse_double(f[2], "demand table", ln);
    e.utility = parse_double(f[3], "demand table", ln);
    entries.push_back(e);
  }
  DemandTable table(std::move(entries));
  table.check_against(net);
  return table;
}

DemandTable load_demand_file(const std::string& path, const Network& net) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open demand table '" + path + "'");
  return load_demand(in, net);
}

void write_demand(std::ostream& out, const DemandTable& demand) {
  for (std::size_t k = 0; k < kDemandHeader.size(); ++k) out << (k ? "," : "") << kDemandHeader[k];
  out << "\n";
  for (const auto& e : demand.entries()) {
    out << e.origin << "," << e.destination << "," << format_number(e.demand) << ","
        << format_number(e.utility) << "\n";
  }
}

}  // namespace maas
