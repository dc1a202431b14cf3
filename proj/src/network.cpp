#include "maas/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "maas/error.hpp"

namespace maas {

std::string to_string(const LinkKey& k) {
  return "(" + std::to_string(k.tail) + "," + std::to_string(k.head) + ")";
}

namespace {

void check_link(const Link& l) {
  const std::string where = "link " + to_string(l.key());
  if (l.tail == l.head) throw InputError(where + ": tail equals head");
  if (l.tail < 0 || l.head < 0) throw InputError(where + ": negative node id");
  if (!std::isfinite(l.travel_cost) || l.travel_cost < 0) {
    throw InputError(where + ": travel cost must be finite and non-negative");
  }
  if (!std::isfinite(l.operating_cost) || l.operating_cost < 0) {
    throw InputError(where + ": operating cost must be finite and non-negative");
  }
  if (!std::isfinite(l.capacity) || !(l.capacity > 0)) {
    throw InputError(where + ": capacity must be finite and positive");
  }
}

}  // namespace

Network::Network(std::vector<NodeId> nodes, std::vector<Link> links) : links_(std::move(links)) {
  for (const Link& l : links_) check_link(l);
  std::sort(links_.begin(), links_.end(),
            [](const Link& a, const Link& b) { return a.key() < b.key(); });
  for (std::size_t i = 1; i < links_.size(); ++i) {
    if (links_[i].key() == links_[i - 1].key()) {
      throw InputError("duplicate link " + to_string(links_[i].key()));
    }
  }

  std::set<NodeId> declared(nodes.begin(), nodes.end());
  if (nodes.empty()) {
    for (const Link& l : links_) {
      declared.insert(l.tail);
      declared.insert(l.head);
    }
  } else {
    for (const Link& l : links_) {
      if (!declared.count(l.tail) || !declared.count(l.head)) {
        throw InputError("link " + to_string(l.key()) + " has an undeclared endpoint");
      }
    }
  }
  for (NodeId n : declared) {
    if (n < 0) throw InputError("negative node id " + std::to_string(n));
  }
  nodes_.assign(declared.begin(), declared.end());

  std::set<OperatorId> ops{kPlatformOperator};
  for (const Link& l : links_) ops.insert(l.owner);
  operators_.assign(ops.begin(), ops.end());

  out_.assign(nodes_.size(), {});
  in_.assign(nodes_.size(), {});
  tail_pos_.resize(links_.size());
  head_pos_.resize(links_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    index_[links_[i].key()] = i;
    tail_pos_[i] = node_index(links_[i].tail);
    head_pos_[i] = node_index(links_[i].head);
    out_[tail_pos_[i]].push_back(i);
    in_[head_pos_[i]].push_back(i);
  }
  for (auto& v : in_) {
    std::sort(v.begin(), v.end(),
              [this](std::size_t a, std::size_t b) { return links_[a].tail < links_[b].tail; });
  }
}

std::vector<std::size_t> Network::links_of(OperatorId op) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (links_[i].owner == op) out.push_back(i);
  }
  return out;
}

bool Network::has_node(NodeId n) const { return std::binary_search(nodes_.begin(), nodes_.end(), n); }

std::size_t Network::node_index(NodeId n) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
  if (it == nodes_.end() || *it != n) throw InputError("unknown node " + std::to_string(n));
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::optional<std::size_t> Network::find_link(NodeId tail, NodeId head) const {
  auto it = index_.find(LinkKey{tail, head});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Network::link_index(NodeId tail, NodeId head) const {
  auto i = find_link(tail, head);
  if (!i) throw InputError("unknown link " + to_string(LinkKey{tail, head}));
  return *i;
}

DemandTable::DemandTable(std::vector<DemandEntry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    const std::string where = "OD " + od_label(e);
    if (e.origin == e.destination) throw InputError(where + ": origin equals destination");
    if (!std::isfinite(e.demand) || !(e.demand > 0)) throw InputError(where + ": demand must be positive");
    if (!std::isfinite(e.utility) || e.utility < 0) {
      throw InputError(where + ": utility must be finite and non-negative");
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const DemandEntry& a, const DemandEntry& b) {
    return std::pair(a.origin, a.destination) < std::pair(b.origin, b.destination);
  });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].origin == entries_[i - 1].origin &&
        entries_[i].destination == entries_[i - 1].destination) {
      throw InputError("duplicate OD " + od_label(entries_[i]));
    }
  }
}

std::optional<std::size_t> DemandTable::find(NodeId origin, NodeId destination) const {
  for (std::size_t s = 0; s < entries_.size(); ++s) {
    if (entries_[s].origin == origin && entries_[s].destination == destination) return s;
  }
  return std::nullopt;
}

double DemandTable::total_demand() const {
  double t = 0.0;
  for (const auto& e : entries_) t += e.demand;
  return t;
}

void DemandTable::check_against(const Network& net) const {
  for (const auto& e : entries_) {
    if (!net.has_node(e.origin) || !net.has_node(e.destination)) {
      throw InputError("OD " + od_label(e) + " references an unknown node");
    }
  }
}

std::string od_label(const DemandEntry& e) {
  return "(" + std::to_string(e.origin) + "," + std::to_string(e.destination) + ")";
}

}  // namespace maas
