#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "gnet/measures.hpp"

namespace gnet {

struct Cell {
  std::vector<std::size_t> atoms;  ///< indices into the measure, ascending
  Point center;
  double radius = 0.0;
  double mass = 0.0;
};

struct Partition {
  std::vector<Cell> cells;
  double eps = 0.0;
  double xi = 0.0;

  std::size_t size() const { return cells.size(); }
};

/// A ball of the first-cover scheme and the atoms it received.
struct Block {
  std::size_t center_atom = 0;
  Point center;
  std::vector<std::size_t> atoms;
};

/// Farthest-point centers among the support atoms; each atom goes to the
/// first center (in selection order) within `eps`.
std::vector<Block> greedy_cover(const ProbabilityAtomMeasure& measure,
                                double eps);

/// Splits a block into groups of mass at most `xi` by accumulating atoms in
/// a spatially coherent order and closing a group once it reaches xi/2.
/// Produces at most 1 + 2 * mass / xi groups. Throws FidelityError if an
/// atom is heavier than xi.
std::vector<std::vector<std::size_t>> split_block(
    const ProbabilityAtomMeasure& measure,
    const std::vector<std::size_t>& atoms, double xi);

/// Cells inside eps-balls with mass at most xi = eps^q / c_T and count at
/// most 3 c_T eps^{-q}. Radii above 1 are accepted up to the diameter.
Partition build_partition(const ProbabilityAtomMeasure& measure, double eps,
                          double c_T);

/// Throws FidelityError describing the first violated invariant.
void check_partition(const Partition& p, const ProbabilityAtomMeasure& measure,
                     double c_T);

/// Points and normalized weights of the atoms of a cell.
std::pair<PointCloud, Eigen::VectorXd> cell_cloud(
    const Cell& cell, const ProbabilityAtomMeasure& measure);

/// One line per cell: `k center_coords radius mass n_atoms`.
void write_partition(std::ostream& os, const Partition& p);

}  // namespace gnet
