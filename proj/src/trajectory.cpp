#include "fracdyn/trajectory.hpp"

#include "fracdyn/errors.hpp"

namespace fracdyn {

void Trajectory::check() const {
    const std::size_t n = grid.size();
    if (n == 0) throw InvalidArgument("trajectory is empty");
    if (x.size() != n || xdot.size() != n) throw InvalidArgument("trajectory channel lengths differ from grid");
    if (p && p->size() != n) throw InvalidArgument("trajectory momentum channel length differs from grid");
    if (H && H->size() != n) throw InvalidArgument("trajectory Hamiltonian channel length differs from grid");
    for (std::size_t i = 1; i < n; ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidArgument("trajectory grid is not strictly increasing");
}

}  // namespace fracdyn
