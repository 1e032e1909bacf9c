#ifndef SGPC_CSV_IO_HPP
#define SGPC_CSV_IO_HPP

#include <iosfwd>
#include <string>

#include "sgpc/optimizer.hpp"

namespace sgpc {

/// Locale-independent formatting with 17 significant digits (round-trip safe).
std::string format_double(double x);

inline constexpr const char* kTrajectoryHeader =
    "iter,t_n,j_saa,grad_norm_sq,min_grad_norm_sq,cum_step_sum,u_norm,sample_index,wall_ms";

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

/// CSV body (header + rows) as one string; with_wall=false drops the wall_ms
/// column, giving the reproducible portion of the file.
std::string trajectory_csv_body(const Trajectory& trajectory, bool with_wall = true);

/// Reads a trajectory written by write_trajectory_csv. Rows at the given
/// cadence are marked as full-gradient records.
Trajectory read_trajectory_csv(std::istream& is, long cadence = 1);

/// Node-order dump of final control and state: header "x,y,u,y_state".
void write_fields_csv(std::ostream& os, const MeshTopology& mesh, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& y);

}  // namespace sgpc

#endif
