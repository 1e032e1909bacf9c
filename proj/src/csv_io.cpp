#include "sgpc/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sgpc {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string row_string(const IterationRecord& rec, bool with_wall) {
  std::string row = std::to_string(rec.iter);
  row += ',';
  row += format_double(rec.t_n);
  row += ',';
  row += format_double(rec.j_saa);
  row += ',';
  row += format_double(rec.grad_norm_sq);
  row += ',';
  row += format_double(rec.min_grad_norm_sq);
  row += ',';
  row += format_double(rec.cum_step_sum);
  row += ',';
  row += format_double(rec.u_norm);
  row += ',';
  row += std::to_string(rec.sample_index);
  if (with_wall) {
    row += ',';
    row += format_double(rec.wall_ms);
  }
  return row;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& s) {
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{})
    throw std::runtime_error("read_trajectory_csv: malformed number '" + s + "'");
  return value;
}

}  // namespace

std::string trajectory_csv_body(const Trajectory& trajectory, bool with_wall) {
  std::string body = kTrajectoryHeader;
  if (!with_wall) {
    body = body.substr(0, body.rfind(",wall_ms"));
  }
  body += '\n';
  for (const IterationRecord& rec : trajectory.records) {
    body += row_string(rec, with_wall);
    body += '\n';
  }
  return body;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  os << trajectory_csv_body(trajectory, true);
}

Trajectory read_trajectory_csv(std::istream& is, long cadence) {
  if (cadence < 1) throw std::invalid_argument("read_trajectory_csv: cadence must be >= 1");
  std::string line;
  if (!std::getline(is, line) || line.rfind("iter,t_n,j_saa", 0) != 0)
    throw std::runtime_error("read_trajectory_csv: missing or unexpected header");

  Trajectory traj;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 9)
      throw std::runtime_error("read_trajectory_csv: expected 9 columns, got " +
                               std::to_string(f.size()));
    IterationRecord rec;
    rec.iter = std::stol(f[0]);
    rec.t_n = parse_double(f[1]);
    rec.j_saa = parse_double(f[2]);
    rec.grad_norm_sq = parse_double(f[3]);
    rec.min_grad_norm_sq = parse_double(f[4]);
    rec.cum_step_sum = parse_double(f[5]);
    rec.u_norm = parse_double(f[6]);
    rec.sample_index = std::stol(f[7]);
    rec.wall_ms = parse_double(f[8]);
    rec.fresh_full_gradient = ((rec.iter - 1) % cadence) == 0;
    traj.records.push_back(rec);
  }
  return traj;
}

void write_fields_csv(std::ostream& os, const MeshTopology& mesh, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& y) {
  if (u.size() != mesh.n_nodes() || y.size() != mesh.n_nodes())
    throw std::invalid_argument("write_fields_csv: field does not match the mesh");
  os << "x,y,u,y_state\n";
  for (int a = 0; a < mesh.n_nodes(); ++a) {
    os << format_double(mesh.nodes(a, 0)) << ',' << format_double(mesh.nodes(a, 1)) << ','
       << format_double(u[a]) << ',' << format_double(y[a]) << '\n';
  }
}

}  // namespace sgpc
