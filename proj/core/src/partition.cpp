#include "gnet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "gnet/text_io.hpp"

namespace gnet {

namespace {

PointCloud gather(const ProbabilityAtomMeasure& m,
                  const std::vector<std::size_t>& idx) {
  PointCloud pts(m.points().rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    pts.col(static_cast<Eigen::Index>(k)) = m.point(idx[k]);
  return pts;
}

constexpr double kMassSlack = 1e-12;

}  // namespace

std::vector<Block> greedy_cover(const ProbabilityAtomMeasure& measure,
                                double eps) {
  if (!(eps > 0.0)) throw DomainError("greedy_cover: eps must be positive");
  const std::vector<std::size_t> support = measure.support();
  if (support.empty()) throw DomainError("greedy_cover: empty support");
  const Space& space = measure.space();
  const PointCloud pts = gather(measure, support);
  const auto centers = epsilon_net_indices(space, pts, eps);

  std::vector<Block> blocks(centers.size());
  for (std::size_t b = 0; b < centers.size(); ++b) {
    blocks[b].center_atom = support[centers[b]];
    blocks[b].center = pts.col(static_cast<Eigen::Index>(centers[b]));
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto p = pts.col(static_cast<Eigen::Index>(i));
    std::size_t b = 0;
    while (b < blocks.size() && space.distance(p, blocks[b].center) > eps) ++b;
    if (b == blocks.size())
      throw FidelityError("greedy_cover: atom left uncovered");
    blocks[b].atoms.push_back(support[i]);
  }
  std::erase_if(blocks, [](const Block& b) { return b.atoms.empty(); });
  return blocks;
}

std::vector<std::vector<std::size_t>> split_block(
    const ProbabilityAtomMeasure& measure,
    const std::vector<std::size_t>& atoms, double xi) {
  if (!(xi > 0.0)) throw DomainError("split_block: xi must be positive");
  if (atoms.empty()) return {};
  double mass = 0.0;
  double heaviest = 0.0;
  for (std::size_t i : atoms) {
    mass += measure.weight(i);
    heaviest = std::max(heaviest, measure.weight(i));
  }
  if (mass <= xi * (1.0 + kMassSlack)) return {atoms};
  if (heaviest > xi) {
    std::ostringstream os;
    os << "atom of mass " << heaviest << " exceeds the cell mass cap " << xi
       << "; the surrogate is too coarse";
    throw FidelityError(os.str());
  }

  // Order atoms piece by piece: a finer net over the block, with pieces
  // chained by nearest unvisited piece center.
  const Space& space = measure.space();
  const PointCloud pts = gather(measure, atoms);
  double spread = 0.0;
  for (Eigen::Index i = 1; i < pts.cols(); ++i)
    spread = std::max(spread, space.distance(pts.col(0), pts.col(i)));
  const double pieces_wanted = std::max(4.0, 4.0 * mass / xi);
  const double delta = std::max(
      spread * std::pow(pieces_wanted, -1.0 / space.dim()), 1e-9);
  const auto net = epsilon_net_indices(space, pts, delta);

  std::vector<std::vector<std::size_t>> pieces(net.size());
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < net.size(); ++c) {
      const double d =
          space.distance(pts.col(i), pts.col(static_cast<Eigen::Index>(net[c])));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    pieces[best].push_back(static_cast<std::size_t>(i));
  }
  std::vector<std::size_t> chain;
  std::vector<bool> used(net.size(), false);
  std::size_t cur = 0;
  for (std::size_t step = 0; step < net.size(); ++step) {
    used[cur] = true;
    chain.push_back(cur);
    double best_d = std::numeric_limits<double>::infinity();
    std::size_t best = cur;
    for (std::size_t c = 0; c < net.size(); ++c) {
      if (used[c]) continue;
      const double d = space.distance(pts.col(static_cast<Eigen::Index>(net[cur])),
                                       pts.col(static_cast<Eigen::Index>(net[c])));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    cur = best;
  }

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> open;
  double acc = 0.0;
  for (std::size_t c : chain) {
    for (std::size_t local : pieces[c]) {
      const std::size_t atom = atoms[local];
      const double w = measure.weight(atom);
      if (!open.empty() && acc + w > xi) {
        groups.push_back(std::move(open));
        open.clear();
        acc = 0.0;
      }
      open.push_back(atom);
      acc += w;
      if (acc >= 0.5 * xi) {
        groups.push_back(std::move(open));
        open.clear();
        acc = 0.0;
      }
    }
  }
  if (!open.empty()) groups.push_back(std::move(open));
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

Partition build_partition(const ProbabilityAtomMeasure& measure, double eps,
                          double c_T) {
  if (!(eps > 0.0)) throw DomainError("build_partition: eps must be positive");
  if (!(c_T >= 1.0)) throw DomainError("build_partition: c_T must be >= 1");
  const int q = measure.space().dim();
  Partition p;
  p.eps = eps;
  p.xi = std::pow(eps, q) / c_T;
  for (const Block& block : greedy_cover(measure, eps)) {
    for (auto& group : split_block(measure, block.atoms, p.xi)) {
      Cell cell;
      cell.center = block.center;
      cell.radius = eps;
      for (std::size_t i : group) cell.mass += measure.weight(i);
      cell.atoms = std::move(group);
      p.cells.push_back(std::move(cell));
    }
  }
  check_partition(p, measure, c_T);
  return p;
}

void check_partition(const Partition& p, const ProbabilityAtomMeasure& measure,
                     double c_T) {
  const Space& space = measure.space();
  std::vector<char> seen(measure.size(), 0);
  std::size_t covered = 0;
  for (std::size_t k = 0; k < p.cells.size(); ++k) {
    const Cell& c = p.cells[k];
    if (c.atoms.empty()) throw FidelityError("partition has an empty cell");
    if (c.mass > p.xi * (1.0 + kMassSlack)) {
      std::ostringstream os;
      os << "cell " << k << " mass " << c.mass << " exceeds xi " << p.xi;
      throw FidelityError(os.str());
    }
    for (std::size_t i : c.atoms) {
      if (i >= measure.size() || seen[i])
        throw FidelityError("partition cells overlap");
      seen[i] = 1;
      ++covered;
      if (space.distance(measure.point(i), c.center) > c.radius)
        throw FidelityError("cell atom lies outside its ball");
    }
  }
  if (covered != measure.support().size())
    throw FidelityError("partition does not cover the support");
  const double cap = 3.0 * c_T * std::pow(p.eps, -space.dim());
  if (static_cast<double>(p.cells.size()) > cap) {
    std::ostringstream os;
    os << "partition has " << p.cells.size() << " cells, above 3 c_T eps^-q = "
       << cap << "; raise kappa";
    throw FidelityError(os.str());
  }
}

std::pair<PointCloud, Eigen::VectorXd> cell_cloud(
    const Cell& cell, const ProbabilityAtomMeasure& measure) {
  PointCloud pts = gather(measure, cell.atoms);
  Eigen::VectorXd w(static_cast<Eigen::Index>(cell.atoms.size()));
  for (std::size_t k = 0; k < cell.atoms.size(); ++k)
    w[static_cast<Eigen::Index>(k)] = measure.weight(cell.atoms[k]);
  const double total = w.sum();
  if (!(total > 0.0)) throw DomainError("cell has zero mass");
  w /= total;
  return {std::move(pts), std::move(w)};
}

void write_partition(std::ostream& os, const Partition& p) {
  for (std::size_t k = 0; k < p.cells.size(); ++k) {
    const Cell& c = p.cells[k];
    os << k;
    for (Eigen::Index j = 0; j < c.center.size(); ++j)
      os << ' ' << format_double(c.center[j]);
    os << ' ' << format_double(c.radius) << ' ' << format_double(c.mass) << ' '
       << c.atoms.size() << '\n';
  }
}

}  // namespace gnet
