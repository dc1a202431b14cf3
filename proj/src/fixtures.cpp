#include "maas/fixtures.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace maas {

namespace {

struct SiouxFallsRow {
  int tail;
  int head;
  int capacity;
  int cost;
};

constexpr SiouxFallsRow kTable3[] = {
    {1, 2, 25901, 6}, {8, 7, 7842, 3}, {13, 24, 5092, 4}, {119, 117, 4824, 2},
    {101, 103, 23404, 4}, {8, 9, 5051, 10}, {14, 11, 4877, 4}, {119, 120, 5003, 4},
    {2, 1, 25901, 6}, {108, 116, 5046, 5}, {14, 15, 5128, 5}, {20, 18, 23404, 4},
    {102, 106, 4959, 5}, {9, 5, 10000, 5}, {14, 23, 4925, 4}, {120, 119, 5003, 4},
    {103, 101, 23404, 4}, {9, 8, 5051, 10}, {15, 10, 13513, 6}, {20, 21, 5060, 6},
    {3, 4, 17111, 4}, {9, 10, 13916, 3}, {15, 14, 5128, 5}, {20, 22, 5076, 5},
    {103, 112, 23404, 4}, {10, 9, 13916, 3}, {15, 19, 14565, 3}, {21, 20, 5060, 6},
    {4, 3, 17111, 4}, {10, 11, 10000, 5}, {15, 22, 9600, 3}, {21, 22, 5230, 2},
    {4, 5, 17783, 2}, {10, 15, 13513, 6}, {116, 108, 5046, 5}, {21, 24, 4886, 3},
    {4, 11, 4909, 6}, {10, 16, 4855, 4}, {16, 10, 4855, 4}, {22, 15, 9600, 3},
    {5, 4, 17783, 2}, {10, 17, 4994, 8}, {116, 117, 5230, 2}, {22, 20, 5076, 5},
    {5, 6, 4948, 4}, {11, 4, 4909, 6}, {16, 18, 19680, 3}, {22, 21, 5230, 2},
    {5, 9, 10000, 5}, {11, 10, 10000, 5}, {17, 10, 4994, 8}, {22, 23, 5000, 4},
    {106, 102, 4959, 5}, {11, 12, 4909, 6}, {117, 116, 5230, 2}, {23, 14, 4925, 4},
    {6, 5, 4948, 4}, {11, 14, 4877, 4}, {117, 119, 4824, 2}, {23, 22, 5000, 4},
    {106, 108, 4899, 2}, {112, 103, 23404, 4}, {18, 7, 23404, 2}, {23, 24, 5079, 2},
    {7, 8, 7842, 3}, {12, 11, 4909, 6}, {18, 16, 19680, 3}, {24, 13, 5092, 4},
    {7, 18, 23404, 2}, {112, 113, 25901, 3}, {18, 20, 23404, 4}, {24, 21, 4886, 3},
    {108, 106, 4899, 2}, {113, 112, 25901, 3}, {19, 15, 14565, 3}, {24, 23, 5079, 2},
};

constexpr int kDemandHundreds[24][24] = {
    {0, 1, 1, 5, 2, 3, 5, 8, 5, 13, 5, 2, 5, 3, 5, 5, 4, 1, 3, 3, 1, 4, 3, 1},
    {1, 0, 1, 2, 1, 4, 2, 4, 2, 6, 2, 1, 3, 1, 1, 4, 2, 0, 1, 1, 0, 1, 0, 0},
    {1, 1, 0, 2, 1, 3, 1, 2, 1, 3, 3, 2, 1, 1, 1, 2, 1, 0, 0, 0, 0, 1, 1, 0},
    {5, 2, 2, 0, 5, 4, 4, 7, 7, 12, 14, 6, 6, 5, 5, 8, 5, 1, 2, 3, 2, 4, 5, 2},
    {2, 1, 1, 5, 0, 2, 2, 5, 8, 10, 5, 2, 2, 1, 2, 5, 2, 0, 1, 1, 1, 2, 1, 0},
    {3, 4, 3, 4, 2, 0, 4, 8, 4, 8, 4, 2, 2, 1, 2, 9, 5, 1, 2, 3, 1, 2, 1, 1},
    {5, 2, 1, 4, 2, 4, 0, 10, 6, 19, 5, 7, 4, 2, 5, 14, 10, 2, 4, 5, 2, 5, 2, 1},
    {8, 4, 2, 7, 5, 8, 10, 0, 8, 16, 8, 6, 6, 4, 6, 22, 14, 3, 7, 9, 4, 5, 3, 2},
    {5, 2, 1, 7, 8, 4, 6, 8, 0, 28, 14, 6, 6, 6, 9, 14, 9, 2, 4, 6, 3, 7, 5, 2},
    {13, 6, 3, 12, 10, 8, 19, 16, 28, 0, 40, 20, 19, 21, 40, 44, 39, 7, 18, 25, 12, 26, 18, 8},
    {5, 2, 3, 15, 5, 4, 5, 8, 14, 39, 0, 14, 10, 16, 14, 14, 10, 1, 4, 6, 4, 11, 13, 6},
    {2, 1, 2, 6, 2, 2, 7, 6, 6, 20, 14, 0, 13, 7, 7, 7, 6, 2, 3, 4, 3, 7, 7, 5},
    {5, 3, 1, 6, 2, 2, 4, 6, 6, 19, 10, 13, 0, 6, 7, 6, 5, 1, 3, 6, 6, 13, 8, 8},
    {3, 1, 1, 5, 1, 1, 2, 4, 6, 21, 16, 7, 6, 0, 13, 7, 7, 1, 3, 5, 4, 12, 11, 4},
    {5, 1, 1, 5, 2, 2, 5, 6, 10, 40, 14, 7, 7, 13, 0, 12, 15, 2, 8, 11, 8, 26, 10, 4},
    {5, 4, 2, 8, 5, 9, 14, 22, 14, 44, 14, 7, 6, 7, 12, 0, 28, 5, 13, 16, 6, 12, 5, 3},
    {4, 2, 1, 5, 2, 5, 10, 14, 9, 39, 10, 6, 5, 7, 15, 28, 0, 6, 17, 17, 6, 17, 6, 3},
    {1, 0, 0, 1, 0, 1, 2, 3, 2, 7, 2, 2, 1, 1, 2, 5, 6, 0, 3, 4, 1, 3, 1, 0},
    {3, 1, 0, 2, 1, 2, 4, 7, 4, 18, 4, 3, 3, 3, 8, 13, 17, 3, 0, 12, 4, 12, 3, 1},
    {3, 1, 0, 3, 1, 3, 5, 9, 6, 25, 6, 5, 6, 5, 11, 16, 17, 4, 12, 0, 12, 24, 7, 4},
    {1, 0, 0, 2, 1, 1, 2, 4, 3, 12, 4, 3, 6, 4, 8, 6, 6, 1, 4, 12, 0, 18, 7, 5},
    {4, 1, 1, 4, 2, 2, 5, 5, 7, 26, 11, 7, 13, 12, 26, 12, 17, 3, 12, 24, 18, 0, 21, 11},
    {3, 0, 1, 5, 1, 1, 2, 3, 5, 18, 13, 7, 8, 11, 10, 5, 6, 1, 3, 7, 7, 21, 0, 7},
    {1, 0, 0, 2, 0, 1, 1, 2, 2, 8, 6, 5, 7, 4, 4, 3, 3, 0, 1, 4, 5, 11, 7, 0},
};

constexpr std::pair<int, int> kTransferPairs[] = {
    {1, 101},  {2, 102},  {3, 103},  {6, 106},  {8, 108}, {12, 112},
    {13, 113}, {16, 116}, {17, 117}, {19, 119}, {20, 120},
};

bool rail_node(int n) { return n >= 100; }

}  // namespace

Instance build_sioux_falls(double transfer_cost) {
  SiouxFallsOptions o;
  o.transfer_cost = transfer_cost;
  return build_sioux_falls(o);
}

Instance build_sioux_falls(const SiouxFallsOptions& options) {
  std::vector<DemandEntry> demand;
  double total = 0.0;
  for (int o = 0; o < 24; ++o) {
    for (int d = 0; d < 24; ++d) {
      if (o == d || kDemandHundreds[o][d] == 0) continue;
      const double q = 100.0 * kDemandHundreds[o][d];
      demand.push_back(DemandEntry{o + 1, d + 1, q, options.utility});
      total += q;
    }
  }

  std::vector<Link> links;
  for (const auto& r : kTable3) {
    Link l;
    l.tail = r.tail;
    l.head = r.head;
    l.travel_cost = r.cost;
    l.operating_cost = r.cost;
    l.capacity = r.capacity * options.capacity_scale;
    if (rail_node(r.tail) && rail_node(r.head)) l.owner = kRailOperator;
    else if (!rail_node(r.tail) && !rail_node(r.head)) l.owner = kBusOperator;
    else l.owner = kPlatformOperator;
    links.push_back(l);
  }
  const double uncapped = std::max(1.0, 2.0 * total);
  for (const auto& [a, b] : kTransferPairs) {
    for (const auto& [t, h] : {std::pair(a, b), std::pair(b, a)}) {
      links.push_back(Link{t, h, options.transfer_cost, 0.0, uncapped, kPlatformOperator});
    }
  }
  Network net({}, std::move(links));
  return Instance{std::move(net), DemandTable(std::move(demand))};
}

Instance build_illustrative_instance() {
  constexpr OperatorId kA{1}, kB{2}, kC{3}, kD{4}, kE{5}, kF{6};
  std::vector<Link> links{
      {1, 3, 7, 200, 10000, kA},  {1, 21, 2, 200, 200, kA},   {21, 22, 1, 0, 10000, kPlatformOperator},
      {21, 23, 1, 0, 10000, kPlatformOperator}, {22, 3, 5, 200, 10000, kB}, {23, 4, 3, 200, 10000, kC},
      {1, 4, 10, 200, 10000, kD}, {1, 5, 7, 200, 10000, kE},  {5, 4, 3, 200, 10000, kE},
      {1, 6, 8, 200, 10000, kF},  {6, 4, 4, 200, 10000, kF},
  };
  std::vector<DemandEntry> demand{{1, 3, 1000, 20}, {1, 4, 500, 20}};
  return Instance{Network({}, std::move(links)), DemandTable(std::move(demand))};
}

}  // namespace maas
