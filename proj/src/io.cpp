#include "iss/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace iss {

namespace {

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

nlohmann::json operator_to_json(const LinearOperator& K) {
  nlohmann::json j;
  switch (K.provenance()) {
    case Provenance::identity:
      j["type"] = "identity";
      j["n"] = K.cols();
      break;
    case Provenance::convolution:
      j["type"] = "convolution";
      j["kernel"] = to_std(K.kernel());
      j["offsets"] = K.offsets();
      j["n"] = K.cols();
      break;
    default: {
      j["type"] = "dense";
      const Matrix& M = K.matrix();
      std::vector<std::vector<double>> rows(static_cast<std::size_t>(M.rows()));
      for (Index i = 0; i < M.rows(); ++i)
        rows[static_cast<std::size_t>(i)] =
            std::vector<double>(M.row(i).begin(), M.row(i).end());
      j["matrix"] = rows;
      break;
    }
  }
  return j;
}

LinearOperator operator_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "identity") return LinearOperator::identity(j.at("n").get<Index>());
  if (type == "convolution")
    return convolution_operator(from_std(j.at("kernel").get<std::vector<double>>()),
                                j.at("offsets").get<std::vector<int>>(),
                                j.at("n").get<Index>());
  if (type == "dense") {
    const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw std::invalid_argument("operator matrix must be nonempty");
    const std::size_t ncols = rows.front().size();
    if (ncols == 0) throw std::invalid_argument("operator matrix must have columns");
    Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(ncols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != ncols)
        throw std::invalid_argument("operator matrix rows differ in length");
      M.row(static_cast<Index>(i)) = from_std(rows[i]).transpose();
    }
    return LinearOperator::dense(M);
  }
  throw std::invalid_argument("unknown operator type: " + type);
}

Tolerances tolerances_from_json(const nlohmann::json& j) {
  Tolerances tol;
  if (j.contains("active")) tol.active = j.at("active").get<double>();
  if (j.contains("check")) tol.check = j.at("check").get<double>();
  if (j.contains("lsq")) tol.lsq = j.at("lsq").get<double>();
  tol.validate();
  return tol;
}

nlohmann::json tolerances_to_json(const Tolerances& tol) {
  return {{"active", tol.active}, {"check", tol.check}, {"lsq", tol.lsq}};
}

}  // namespace

const char* tool_version() { return "0.1.0"; }

std::string format_shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::json problem_to_json(const ProblemSpec& prob) {
  nlohmann::json j;
  j["operator"] = operator_to_json(prob.K);
  j["data"] = to_std(prob.f);
  if (std::isfinite(prob.t_max))
    j["t_max"] = prob.t_max;
  else
    j["t_max"] = nullptr;
  j["tolerances"] = tolerances_to_json(prob.tol);
  return j;
}

ProblemSpec problem_from_json(const nlohmann::json& j) {
  ProblemSpec prob{operator_from_json(j.at("operator")),
                   from_std(j.at("data").get<std::vector<double>>())};
  if (j.contains("t_max") && !j.at("t_max").is_null())
    prob.t_max = j.at("t_max").get<double>();
  if (j.contains("tolerances")) prob.tol = tolerances_from_json(j.at("tolerances"));
  prob.validate();
  return prob;
}

ProblemSpec read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file: " + path);
  return problem_from_json(nlohmann::json::parse(in));
}

std::string problem_digest(const ProblemSpec& prob) {
  const std::string canon = problem_to_json(prob).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

nlohmann::json trajectory_to_json(const FlowTrajectory& traj, const ProblemSpec& prob) {
  nlohmann::json bps = nlohmann::json::array();
  for (const Breakpoint& bp : traj.breakpoints)
    bps.push_back({{"t", bp.t}, {"u", to_std(bp.u)}, {"p", to_std(bp.p)}, {"r", to_std(bp.r)}});
  nlohmann::json meta;
  meta["tool_version"] = tool_version();
  meta["tolerances"] = tolerances_to_json(prob.tol);
  meta["problem_digest"] = problem_digest(prob);
  meta["signal_dim"] = prob.K.cols();
  if (std::isfinite(prob.t_max))
    meta["t_max"] = prob.t_max;
  else
    meta["t_max"] = nullptr;
  return {{"breakpoints", bps},
          {"terminated", to_string(traj.terminated)},
          {"metadata", meta}};
}

TrajectoryFileData trajectory_from_json(const nlohmann::json& j) {
  TrajectoryFileData data;
  const std::string term = j.at("terminated").get<std::string>();
  if (term == "residual_zero")
    data.trajectory.terminated = Termination::residual_zero;
  else if (term == "t_max_reached")
    data.trajectory.terminated = Termination::t_max_reached;
  else
    throw std::invalid_argument("unknown termination tag: " + term);
  for (const nlohmann::json& b : j.at("breakpoints")) {
    Breakpoint bp;
    bp.t = b.at("t").get<double>();
    bp.u = from_std(b.at("u").get<std::vector<double>>());
    bp.p = from_std(b.at("p").get<std::vector<double>>());
    bp.r = from_std(b.at("r").get<std::vector<double>>());
    if (bp.u.size() != bp.p.size() || bp.u.size() != bp.r.size())
      throw std::invalid_argument("breakpoint vectors differ in length");
    data.trajectory.breakpoints.push_back(std::move(bp));
  }
  const nlohmann::json& meta = j.at("metadata");
  data.version = meta.at("tool_version").get<std::string>();
  data.tol = tolerances_from_json(meta.at("tolerances"));
  data.digest = meta.at("problem_digest").get<std::string>();
  data.signal_dim = meta.at("signal_dim").get<Index>();
  if (!meta.at("t_max").is_null()) data.t_max = meta.at("t_max").get<double>();
  for (const Breakpoint& bp : data.trajectory.breakpoints)
    if (bp.u.size() != data.signal_dim)
      throw std::invalid_argument("breakpoint dimension does not match signal_dim");
  return data;
}

void write_trajectory_file(const std::string& path, const FlowTrajectory& traj,
                           const ProblemSpec& prob) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << trajectory_to_json(traj, prob).dump(2) << '\n';
}

TrajectoryFileData read_trajectory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open trajectory file: " + path);
  return trajectory_from_json(nlohmann::json::parse(in));
}

void export_trajectory_csv(const TrajectoryFileData& data, int samples_per_interval,
                           std::ostream& out) {
  if (samples_per_interval < 2)
    throw std::invalid_argument("samples per interval must be at least 2");
  const Index n = data.signal_dim;
  out << "t";
  for (Index i = 1; i <= n; ++i) out << ",coord_" << i;
  for (Index i = 1; i <= n; ++i) out << ",p_" << i;
  out << '\n';

  const auto row = [&](double t, const Vector& u, const Vector& p) {
    out << format_shortest(t);
    for (Index i = 0; i < n; ++i) out << ',' << format_shortest(u(i));
    for (Index i = 0; i < n; ++i) out << ',' << format_shortest(p(i));
    out << '\n';
  };

  const auto& bps = data.trajectory.breakpoints;
  const Vector zero = Vector::Zero(n);
  if (bps.empty()) {
    // No stored slope exists, so the dual column is zero by convention.
    row(0.0, zero, zero);
    if (std::isfinite(data.t_max) && data.t_max > 0.0) row(data.t_max, zero, zero);
    return;
  }

  const int N = samples_per_interval;
  for (std::size_t k = 0; k < bps.size(); ++k) {
    const double a = (k == 0) ? 0.0 : bps[k - 1].t;
    const double b = bps[k].t;
    const Vector& u = (k == 0) ? zero : bps[k - 1].u;
    for (int i = 0; i < N; ++i) {
      if (i == N - 1) {
        row(b, u, bps[k].p);
        continue;
      }
      const double t = a + (b - a) * i / (N - 1);
      Vector p;
      if (k == 0)
        p = (t / b) * bps[0].p;
      else
        p = bps[k - 1].p + (t - a) * bps[k - 1].r;
      row(t, u, p);
    }
  }
  row(bps.back().t, bps.back().u, bps.back().p);
}

}  // namespace iss
