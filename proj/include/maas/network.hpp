#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maas {

using NodeId = int;

struct OperatorId {
  std::uint32_t value = 0;
  auto operator<=>(const OperatorId&) const = default;
};

// Owns transfer and outside-option links; never priced.
inline constexpr OperatorId kPlatformOperator{0};

struct LinkKey {
  NodeId tail = 0;
  NodeId head = 0;
  auto operator<=>(const LinkKey&) const = default;
};

std::string to_string(const LinkKey& k);

struct Link {
  NodeId tail = 0;
  NodeId head = 0;
  double travel_cost = 0.0;
  double operating_cost = 0.0;
  double capacity = 0.0;
  OperatorId owner{};

  LinkKey key() const { return {tail, head}; }
};

// Directed multi-operator network. Links are stored sorted by (tail, head);
// link indices refer to that order.
class Network {
 public:
  Network() = default;
  // Validates every invariant; nodes not listed but used by links are an error
  // unless `nodes` is empty, in which case nodes are taken from link endpoints.
  Network(std::vector<NodeId> nodes, std::vector<Link> links);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_links() const { return links_.size(); }
  const Link& link(std::size_t i) const { return links_[i]; }

  // Sorted operator ids; always contains operator 0.
  const std::vector<OperatorId>& operators() const { return operators_; }
  std::vector<std::size_t> links_of(OperatorId op) const;

  bool has_node(NodeId n) const;
  std::size_t node_index(NodeId n) const;
  std::optional<std::size_t> find_link(NodeId tail, NodeId head) const;
  std::size_t link_index(NodeId tail, NodeId head) const;

  // Link indices by node position, ordered by the opposite endpoint.
  const std::vector<std::size_t>& out_links(std::size_t node_pos) const { return out_[node_pos]; }
  const std::vector<std::size_t>& in_links(std::size_t node_pos) const { return in_[node_pos]; }
  std::size_t tail_pos(std::size_t link) const { return tail_pos_[link]; }
  std::size_t head_pos(std::size_t link) const { return head_pos_[link]; }

 private:
  std::vector<NodeId> nodes_;
  std::vector<Link> links_;
  std::vector<OperatorId> operators_;
  std::map<LinkKey, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::size_t> tail_pos_;
  std::vector<std::size_t> head_pos_;
};

struct DemandEntry {
  NodeId origin = 0;
  NodeId destination = 0;
  double demand = 0.0;
  double utility = 0.0;
};

// OD user groups sorted by (origin, destination).
class DemandTable {
 public:
  DemandTable() = default;
  explicit DemandTable(std::vector<DemandEntry> entries);

  const std::vector<DemandEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const DemandEntry& operator[](std::size_t s) const { return entries_[s]; }
  std::optional<std::size_t> find(NodeId origin, NodeId destination) const;
  double total_demand() const;

  // Throws InputError if an origin or destination is not a node of `net`.
  void check_against(const Network& net) const;

 private:
  std::vector<DemandEntry> entries_;
};

std::string od_label(const DemandEntry& e);

// Loading from and writing to delimited text.
Network load_network(std::istream& in);
Network load_network_file(const std::string& path);
void write_network(std::ostream& out, const Network& net);

DemandTable load_demand(std::istream& in, const Network& net);
DemandTable load_demand_file(const std::string& path, const Network& net);
void write_demand(std::ostream& out, const DemandTable& demand);

// Shortest round-trip decimal text.
std::string format_number(double v);

}  // namespace maas
