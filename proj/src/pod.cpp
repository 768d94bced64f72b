#include "pmorkit/pod.hpp"

#include <sstream>

#include "pmorkit/errors.hpp"
#include "pmorkit/io.hpp"

namespace pmk {

ProjectionBasis pod_basis(const SnapshotMatrix& snapshots, int q) {
  const Matrix& data = snapshots.data;
  const Eigen::Index rmax = std::min(data.rows(), data.cols());
  if (q < 1 || q > rmax) {
    std::ostringstream msg;
    msg << "pod_basis: order " << q << " outside [1, " << rmax << "]";
    fail(ErrorCode::invalid_order, msg.str());
  }
  const ThinSvd svd = thin_svd(data);
  ProjectionBasis basis;
  basis.basis = svd.left.leftCols(q);
  basis.singular_values = svd.singular_values;
  basis.q = q;
  basis.param_names = snapshots.param_names;
  basis.param_values = snapshots.param_values;
  basis.param_initial = snapshots.param_initial;
  return basis;
}

double ric(const Vector& singular_values, int q) {
  if (q < 0 || q > singular_values.size())
    fail(ErrorCode::invalid_order, "ric: order out of range");
  const double total = singular_values.squaredNorm();
  if (!(total > 0.0))
    fail(ErrorCode::undefined_ric, "ric: all singular values are zero");
  return singular_values.head(q).squaredNorm() / total;
}

double truncation_error(const Vector& singular_values, int q) {
  if (q < 0 || q > singular_values.size())
    fail(ErrorCode::invalid_order, "truncation_error: order out of range");
  return singular_values.tail(singular_values.size() - q).squaredNorm();
}

int select_order(const Vector& singular_values, double eps_pod) {
  if (!(eps_pod > 0.0 && eps_pod < 1.0))
    fail(ErrorCode::invalid_input, "select_order: eps_pod must be in (0,1)");
  const int m = static_cast<int>(singular_values.size());
  for (int q = 1; q <= m; ++q)
    if (ric(singular_values, q) >= 1.0 - eps_pod) return q;
  return m;
}

int numerical_rank(const Vector& singular_values, double rel_tol) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = rel_tol * singular_values(0);
  int r = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i)
    if (singular_values(i) > cutoff) ++r;
  return r;
}

namespace {

void write_params(KeyValues& kv, const std::vector<std::string>& names,
                  const std::vector<double>& values,
                  const std::vector<double>& initial) {
  std::ostringstream ns;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) ns << ' ';
    ns << names[i];
  }
  kv["param_names"] = ns.str();
  kv["param_values"] = format_double_list(values);
  kv["param_initial"] = format_double_list(initial);
}

void read_params(const KeyValues& kv, std::vector<std::string>& names,
                 std::vector<double>& values, std::vector<double>& initial) {
  names.clear();
  if (auto it = kv.find("param_names"); it != kv.end()) {
    std::istringstream in(it->second);
    std::string name;
    while (in >> name) names.push_back(name);
  }
  if (auto it = kv.find("param_values"); it != kv.end())
    values = parse_double_list(it->second);
  if (auto it = kv.find("param_initial"); it != kv.end())
    initial = parse_double_list(it->second);
}

}  // namespace

void save_snapshots(const std::string& prefix, const SnapshotMatrix& snaps) {
  write_matrix(prefix + ".dat", snaps.data);
  KeyValues kv;
  kv["kind"] = "snapshots";
  kv["dt"] = format_double(snaps.dt);
  write_params(kv, snaps.param_names, snaps.param_values, snaps.param_initial);
  write_key_values(prefix + ".meta", kv);
}

SnapshotMatrix load_snapshots(const std::string& prefix) {
  SnapshotMatrix snaps;
  snaps.data = read_matrix(prefix + ".dat");
  const KeyValues kv = read_key_values(prefix + ".meta");
  if (auto it = kv.find("dt"); it != kv.end()) snaps.dt = std::stod(it->second);
  read_params(kv, snaps.param_names, snaps.param_values, snaps.param_initial);
  return snaps;
}

void save_basis(const std::string& prefix, const ProjectionBasis& basis) {
  write_matrix(prefix + ".dat", basis.basis);
  KeyValues kv;
  kv["kind"] = "basis";
  kv["q"] = std::to_string(basis.q);
  kv["interpolated"] = basis.interpolated ? "1" : "0";
  std::vector<double> sv(basis.singular_values.data(),
                         basis.singular_values.data() +
                             basis.singular_values.size());
  kv["singular_values"] = format_double_list(sv);
  write_params(kv, basis.param_names, basis.param_values, basis.param_initial);
  if (!basis.notes.empty()) {
    std::ostringstream out;
    for (size_t i = 0; i < basis.notes.size(); ++i) {
      if (i) out << "; ";
      out << basis.notes[i];
    }
    kv["notes"] = out.str();
  }
  write_key_values(prefix + ".meta", kv);
}

ProjectionBasis load_basis(const std::string& prefix) {
  ProjectionBasis basis;
  basis.basis = read_matrix(prefix + ".dat");
  const KeyValues kv = read_key_values(prefix + ".meta");
  if (auto it = kv.find("q"); it != kv.end()) basis.q = std::stoi(it->second);
  if (basis.q == 0) basis.q = static_cast<int>(basis.basis.cols());
  if (auto it = kv.find("interpolated"); it != kv.end())
    basis.interpolated = it->second == "1";
  if (auto it = kv.find("singular_values"); it != kv.end()) {
    const auto sv = parse_double_list(it->second);
    basis.singular_values =
        Eigen::Map<const Vector>(sv.data(), static_cast<Eigen::Index>(sv.size()));
  }
  read_params(kv, basis.param_names, basis.param_values, basis.param_initial);
  return basis;
}

}  // namespace pmk
