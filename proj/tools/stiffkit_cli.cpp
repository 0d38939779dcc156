#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stiffkit/model_io.hpp"
#include "stiffkit/random_chain.hpp"
#include "stiffkit/stewart_gough.hpp"

using json = nlohmann::ordered_json;
using namespace stiffkit;

namespace {

// Exit codes are a stable contract: 0 success, 2 input error, 3 numerical
// failure, 4 analytic mismatch.
constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitMismatch = 4;

enum class Format { text, json_fmt, csv };

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json_fmt;
  if (name == "csv") return Format::csv;
  return Format::text;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("STIFFKIT_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

long long time_ns(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                              start)
      .count();
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_matrix_text(const Eigen::MatrixXd& m, const std::string& label) {
  std::printf("%s:\n", label.c_str());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::printf("  % .11e", m(i, j));
    }
    std::printf("\n");
  }
}

void print_matrix_csv(const Eigen::MatrixXd& m, const std::string& name) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::printf("matrix,%s,%lld,%lld,%.17g\n", name.c_str(), static_cast<long long>(i),
                  static_cast<long long>(j), m(i, j));
    }
  }
}

json stiffness_json(const StiffnessMatrix& K) {
  json out;
  out["K"] = matrix_json(K.K);
  out["rank"] = K.rank;
  json evs = json::array();
  for (Eigen::Index i = 0; i < K.eigenvalues.size(); ++i) evs.push_back(K.eigenvalues(i));
  out["eigenvalues"] = std::move(evs);
  out["kernel"] = matrix_json(K.null_space);
  return out;
}

void print_stiffness_text(const StiffnessMatrix& K, const std::string& label) {
  print_matrix_text(K.K, label);
  std::printf("rank: %d\n", K.rank);
  std::printf("eigenvalues:");
  for (Eigen::Index i = 0; i < K.eigenvalues.size(); ++i) {
    std::printf(" %.11e", K.eigenvalues(i));
  }
  std::printf("\n");
  if (K.null_space.cols() > 0) {
    print_matrix_text(K.null_space, "kernel basis (columns)");
  }
}

const char* class_name(PassiveJointClass c) {
  switch (c) {
    case PassiveJointClass::trivial_translational: return "trivial-translational";
    case PassiveJointClass::trivial_rotational: return "trivial-rotational";
    case PassiveJointClass::quasi_trivial: return "quasi-trivial";
    case PassiveJointClass::general: return "general";
  }
  return "general";
}

StiffnessMatrix run_method(const std::string& method, const JacobianPair& jp,
                           const Eigen::MatrixXd& K_theta) {
  if (method == "dense") return dense_kkt_stiffness(jp, K_theta);
  if (method == "closed") return closed_form_stiffness(jp, K_theta).first;
  const StiffnessMatrix K0 = base_stiffness(jp, K_theta);
  std::vector<std::vector<int>> parts;
  for (int i = 0; i < jp.J_q.cols(); ++i) parts.push_back({i});
  return recursive_reduce(K0, jp.J_q, parts).first;
}

std::string resolve_method(const std::string& requested, const JacobianPair& jp) {
  if (requested != "auto") return requested;
  const bool full_springs =
      jp.J_theta.cols() >= 6 &&
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(jp.J_theta).rank() == 6;
  return full_springs ? "closed" : "dense";
}

std::string describe_columns(const std::vector<int>& columns, const JacobianPair& jp,
                             const std::string& chain_name) {
  std::string out;
  for (int c : columns) {
    if (!out.empty()) out += ", ";
    out += "J_q column " + std::to_string(c);
    if (c >= 0 && c < static_cast<int>(jp.q_column_elements.size())) {
      out += " (chain '" + chain_name + "' element " +
             std::to_string(jp.q_column_elements[static_cast<size_t>(c)]) + ")";
    }
  }
  return out;
}

// ---------------------------------------------------------------- compute --

int cmd_compute(const std::string& model_path, const std::string& chain_name,
                const std::string& method, Format format) {
  const ModelDocument doc = load_model(model_path, &std::cerr);

  json chains_json = json::array();
  std::vector<StiffnessMatrix> leg_results;
  std::string resolved_method;
  long long total_ns = 0;

  for (const LegAttachment& leg : doc.assembly.legs) {
    if (!chain_name.empty() && leg.chain.name != chain_name) continue;
    const JacobianPair jp = jacobians(leg.chain);
    const Eigen::MatrixXd K_theta = spring_stiffness_matrix(leg.chain);
    resolved_method = resolve_method(method, jp);

    StiffnessMatrix K;
    try {
      total_ns += time_ns([&] { K = run_method(resolved_method, jp, K_theta); });
    } catch (const RedundantPassiveJoints& e) {
      std::cerr << "error: chain '" << leg.chain.name << "': " << e.what();
      if (!e.columns().empty()) {
        std::cerr << " [" << describe_columns(e.columns(), jp, leg.chain.name) << "]";
      }
      std::cerr << "\n";
      return kExitNumerical;
    } catch (const StiffnessError& e) {
      std::cerr << "error: chain '" << leg.chain.name << "': " << e.what() << "\n";
      return kExitNumerical;
    }

    json jc;
    jc["chain"] = leg.chain.name;
    jc["method"] = resolved_method;
    jc["stiffness"] = stiffness_json(K);
    json classes = json::array();
    for (int q = 0; q < leg.chain.num_passive(); ++q) {
      const PassiveJointClassification cls = classify_passive_joint(leg.chain, q);
      json jcls;
      jcls["joint"] = q;
      jcls["element"] = jp.q_column_elements[static_cast<size_t>(q)];
      jcls["class"] = class_name(cls.kind);
      if (cls.axis_index >= 0) jcls["axis_index"] = cls.axis_index;
      classes.push_back(std::move(jcls));
    }
    jc["passive_joints"] = std::move(classes);
    chains_json.push_back(std::move(jc));
    leg_results.push_back(K);
  }

  if (leg_results.empty()) {
    std::cerr << "error: chain '" << chain_name << "' not found in model\n";
    return kExitInput;
  }

  json report;
  report["model"] = doc.name;
  report["chains"] = std::move(chains_json);
  report["timing_ns"] = total_ns;

  StiffnessMatrix result;
  std::string result_label;
  if (chain_name.empty()) {
    result = aggregate(doc.assembly, leg_results);
    result_label = "assembly stiffness at reference point";
    report["assembly"] = stiffness_json(result);
  } else {
    result = leg_results.front();
    result_label = "chain stiffness at chain end point";
  }

  switch (format) {
    case Format::text:
      std::printf("model: %s\n", doc.name.c_str());
      std::printf("method: %s\n", resolved_method.c_str());
      print_stiffness_text(result, result_label);
      break;
    case Format::json_fmt:
      std::printf("%s\n", report.dump(2).c_str());
      break;
    case Format::csv:
      std::printf("section,name,row,col,value\n");
      print_matrix_csv(result.K, "stiffness");
      std::printf("scalar,rank,,,%d\n", result.rank);
      break;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- verify --

struct CheckLine {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

void print_checks(const std::vector<CheckLine>& checks) {
  for (const CheckLine& c : checks) {
    std::printf("%-56s measured %10.3e  tolerance %10.3e  %s%s\n", c.name.c_str(), c.measured,
                c.tolerance, c.pass ? "PASS" : "FAIL",
                c.note.empty() ? "" : ("  [" + c.note + "]").c_str());
  }
}

void verify_chain(const ChainModel& chain, std::uint64_t seed, std::vector<CheckLine>& checks) {
  const JacobianPair jp = jacobians(chain);
  const Eigen::MatrixXd K_theta = spring_stiffness_matrix(chain);
  const int nq = static_cast<int>(jp.J_q.cols());
  const std::string prefix = "chain '" + chain.name + "': ";

  const bool full_springs =
      jp.J_theta.cols() >= 6 &&
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(jp.J_theta).rank() == 6;

  const StiffnessMatrix dense = dense_kkt_stiffness(jp, K_theta);

  if (!full_springs) {
    const double asym = relative_asymmetry(dense.K);
    checks.push_back({prefix + "method equivalence", 0.0, 1e-9, true,
                      "rank(J_theta) < 6: saddle-point route only"});
    checks.push_back({prefix + "symmetry", asym, 1e-9, asym <= 1e-9, ""});
    const double psd = dense.min_eigenvalue() / std::max(dense.max_eigenvalue(), 1e-300);
    checks.push_back({prefix + "positive semidefinite", psd, -1e-9, psd >= -1e-9, ""});
    return;
  }

  const auto [closed, trace] = closed_form_stiffness(jp, K_theta);
  const StiffnessMatrix K0 = base_stiffness(jp, K_theta);
  std::vector<std::vector<int>> parts;
  for (int i = 0; i < nq; ++i) parts.push_back({i});
  const auto [recursive, rtrace] = recursive_reduce(K0, jp.J_q, parts);

  // n_q = 6 frees every direction: all routes produce a numerically zero
  // matrix and relative metrics degenerate, so compare at the chain's scale.
  const double zero_scale = 1e-12 * K0.K.norm();
  const bool all_zero =
      std::max({dense.K.norm(), closed.K.norm(), recursive.K.norm()}) <= zero_scale;
  const double equiv = all_zero
                           ? std::max((dense.K - closed.K).norm(),
                                      (dense.K - recursive.K).norm()) /
                                 K0.K.norm()
                           : std::max(relative_frobenius_diff(dense.K, closed.K),
                                      relative_frobenius_diff(dense.K, recursive.K));
  checks.push_back({prefix + "method equivalence (dense/closed/recursive)", equiv, 1e-9,
                    equiv <= 1e-9, all_zero ? "rank-0 result, scaled by ||K0||" : ""});

  checks.push_back({prefix + "rank law rank(K) = 6 - n_q", static_cast<double>(closed.rank),
                    static_cast<double>(6 - nq), closed.rank == 6 - nq, "measured vs expected"});

  const double kernel_denominator = closed.K.norm() * jp.J_q.norm();
  const double kernel =
      kernel_denominator > 0.0 ? (closed.K * jp.J_q).norm() / kernel_denominator : 0.0;
  checks.push_back({prefix + "kernel law ||K J_q|| (scaled)", kernel, 1e-9, kernel <= 1e-9, ""});

  const double asym = relative_asymmetry(closed.K);
  checks.push_back({prefix + "symmetry", asym, 1e-9, asym <= 1e-9, ""});
  const double psd = closed.min_eigenvalue() / std::max(closed.max_eigenvalue(), 1e-300);
  checks.push_back({prefix + "positive semidefinite (min/max eig)", psd, -1e-9, psd >= -1e-9, ""});

  if (nq >= 2) {
    // Permutation invariance over seeded singleton orders and 2-group splits.
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int variant = 0; variant < 4; ++variant) {
      std::vector<int> order(static_cast<size_t>(nq));
      std::iota(order.begin(), order.end(), 0);
      for (int i = nq - 1; i > 0; --i) {
        std::swap(order[static_cast<size_t>(i)],
                  order[static_cast<size_t>(rng() % static_cast<std::uint64_t>(i + 1))]);
      }
      std::vector<std::vector<int>> shuffled;
      for (int c : order) shuffled.push_back({c});
      const auto [K_perm, t1] = recursive_reduce(K0, jp.J_q, shuffled);
      worst = std::max(worst, relative_frobenius_diff(K_perm.K, closed.K));

      const int split = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(nq - 1));
      std::vector<std::vector<int>> grouped(2);
      for (int i = 0; i < nq; ++i) {
        grouped[i < split ? 0 : 1].push_back(order[static_cast<size_t>(i)]);
      }
      const auto [K_group, t2] = recursive_reduce(K0, jp.J_q, grouped);
      worst = std::max(worst, relative_frobenius_diff(K_group.K, closed.K));
    }
    // Method-equivalence bound: any partition order agrees within 1e-9.
    checks.push_back({prefix + "permutation invariance", worst, 1e-9, worst <= 1e-9, ""});
  }

  // Soft-spring convergence at {1e-2, 1e-4, 1e-6} * trace(K_theta).
  const double scale = K_theta.trace();
  const std::array<double, 3> eps = {1e-2 * scale, 1e-4 * scale, 1e-6 * scale};
  const SoftSpringReport report = soft_spring_check(jp, K_theta, eps);
  if (nq == 0) {
    double max_err = 0.0;
    for (const auto& s : report.samples) max_err = std::max(max_err, s.error);
    checks.push_back({prefix + "soft-spring limit (n_q = 0)", max_err, 0.0, max_err == 0.0, ""});
  } else {
    const bool monotone = report.errors_monotone_decreasing();
    double worst_log = 0.0;
    for (double ratio : report.error_ratios()) {
      worst_log = std::max(worst_log, std::abs(std::log10(ratio) - 2.0));
    }
    checks.push_back({prefix + "soft-spring monotone decrease", monotone ? 0.0 : 1.0, 0.0,
                      monotone, ""});
    checks.push_back({prefix + "soft-spring first-order |log10(ratio) - 2|", worst_log, 1.0,
                      worst_log <= 1.0, ""});
  }
}

int cmd_verify(const std::string& model_path, bool random_chain, std::uint64_t seed,
               int n_springs6, int n_act, int n_passive) {
  ModelDocument doc;
  if (random_chain) {
    RandomChainSpec spec;
    spec.n_springs6 = n_springs6;
    spec.n_actuated = n_act;
    spec.n_passive = n_passive;
    ChainModel chain = make_random_chain(spec, seed);
    doc.name = chain.name;
    doc.reference_point = forward_kinematics(chain).translation;
    doc.assembly.name = doc.name;
    doc.assembly.reference_pose = RigidTransform::translate(doc.reference_point);
    doc.assembly.legs.push_back(LegAttachment{std::move(chain), Vec3::Zero()});
  } else {
    doc = load_model(model_path, &std::cerr);
  }

  std::vector<CheckLine> checks;
  std::vector<StiffnessMatrix> leg_stiffnesses;
  for (const LegAttachment& leg : doc.assembly.legs) {
    verify_chain(leg.chain, seed, checks);
    const JacobianPair jp = jacobians(leg.chain);
    const Eigen::MatrixXd K_theta = spring_stiffness_matrix(leg.chain);
    leg_stiffnesses.push_back(run_method(resolve_method("auto", jp), jp, K_theta));
  }

  const StiffnessMatrix total = aggregate(doc.assembly, leg_stiffnesses);
  const double asym = relative_asymmetry(total.K);
  checks.push_back({"assembly: symmetry", asym, 1e-9, asym <= 1e-9, ""});
  const double psd = total.min_eigenvalue() / std::max(total.max_eigenvalue(), 1e-300);
  checks.push_back({"assembly: positive semidefinite", psd, -1e-9, psd >= -1e-9, ""});

  std::printf("model: %s\n", doc.name.c_str());
  print_checks(checks);
  std::printf("assembly rank: %d\n", total.rank);

  const bool all_pass =
      std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
  std::printf("verify: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- stewart --

int cmd_stewart(StewartCase which, double R, double r, double h, double k11, double k_link,
                Format format) {
  const StewartParams params = StewartParams::make(which, R, r, h, k11, k_link);
  const Assembly assembly = build_case(params);

  std::vector<StiffnessMatrix> legs;
  const long long pipeline_ns = time_ns([&] {
    for (const LegAttachment& leg : assembly.legs) {
      const JacobianPair jp = jacobians(leg.chain);
      legs.push_back(closed_form_stiffness(jp, spring_stiffness_matrix(leg.chain)).first);
    }
  });
  const StiffnessMatrix numeric = aggregate(assembly, legs);

  const double k_eff = effective_axial_stiffness(params);
  StewartParams effective = params;
  effective.K11 = k_eff;
  const StiffnessMatrix analytic = analytic_case_matrix(effective);
  const StiffnessMatrix rank1_sum = analytic_rank1_sum(case_leg_geometry(params), params.K11);

  const double deviation =
      (numeric.K - analytic.K).cwiseAbs().maxCoeff() / analytic.K.cwiseAbs().maxCoeff();

  switch (format) {
    case Format::text:
      std::printf("stewart case %s: R=%g r=%g h=%g K11=%g k_link=%g\n",
                  which == StewartCase::A ? "A" : "B", R, r, h, k11, params.k_link);
      std::printf("leg length L = %.11e, series stiffness K_eff = %.11e\n",
                  std::sqrt(params.leg_length_sq()), k_eff);
      print_stiffness_text(numeric, "numerical pipeline stiffness");
      print_matrix_text(analytic.K, "analytic case matrix (K11 -> K_eff)");
      print_matrix_text(rank1_sum.K, "analytic rank-1 superposition (actuators only)");
      std::printf("entrywise deviation (vs analytic with K_eff): %.3e\n", deviation);
      std::printf("pipeline time: %lld ns\n", pipeline_ns);
      break;
    case Format::json_fmt: {
      json report;
      report["case"] = which == StewartCase::A ? "A" : "B";
      report["params"] = {{"R", R}, {"r", r}, {"h", h}, {"K11", k11}, {"k_link", params.k_link}};
      report["L"] = std::sqrt(params.leg_length_sq());
      report["K_eff"] = k_eff;
      report["numeric"] = stiffness_json(numeric);
      report["analytic_keff"] = stiffness_json(analytic);
      report["analytic_rank1_sum"] = stiffness_json(rank1_sum);
      report["deviation"] = deviation;
      report["timing_ns"] = pipeline_ns;
      std::printf("%s\n", report.dump(2).c_str());
      break;
    }
    case Format::csv:
      std::printf("section,name,row,col,value\n");
      print_matrix_csv(numeric.K, "numeric");
      print_matrix_csv(analytic.K, "analytic_keff");
      print_matrix_csv(rank1_sum.K, "analytic_rank1_sum");
      std::printf("scalar,deviation,,,%.17g\n", deviation);
      std::printf("scalar,rank,,,%d\n", numeric.rank);
      break;
  }

  if (deviation > 1e-8) {
    std::cerr << "error: numerical/analytic deviation " << deviation
              << " exceeds 1e-8: geometry or pairing inconsistency\n";
    return kExitMismatch;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ bench --

int cmd_bench(int n_springs, int n_passive, int trials, std::uint64_t seed) {
  RandomChainSpec spec;
  spec.n_springs6 = 0;
  spec.n_actuated = n_springs;
  spec.n_passive = n_passive;

  struct MethodStats {
    std::vector<long long> times;
    double max_deviation = 0.0;
  };
  std::map<std::string, MethodStats> stats;

  for (int trial = 0; trial < trials; ++trial) {
    const ChainModel chain = make_random_chain(spec, seed + static_cast<std::uint64_t>(trial));
    const JacobianPair jp = jacobians(chain);
    const Eigen::MatrixXd K_theta = spring_stiffness_matrix(chain);

    StiffnessMatrix dense, closed, recursive;
    stats["dense"].times.push_back(time_ns([&] { dense = dense_kkt_stiffness(jp, K_theta); }));
    stats["closed"].times.push_back(
        time_ns([&] { closed = closed_form_stiffness(jp, K_theta).first; }));
    stats["recursive"].times.push_back(time_ns([&] {
      const StiffnessMatrix K0 = base_stiffness(jp, K_theta);
      std::vector<std::vector<int>> parts;
      for (int i = 0; i < jp.J_q.cols(); ++i) parts.push_back({i});
      recursive = recursive_reduce(K0, jp.J_q, parts).first;
    }));

    stats["closed"].max_deviation =
        std::max(stats["closed"].max_deviation, relative_frobenius_diff(closed.K, dense.K));
    stats["recursive"].max_deviation =
        std::max(stats["recursive"].max_deviation, relative_frobenius_diff(recursive.K, dense.K));
  }

  std::printf("method,median_ns,max_rel_deviation_vs_dense,valid\n");
  for (const char* m : {"dense", "closed", "recursive"}) {
    MethodStats& s = stats[m];
    std::sort(s.times.begin(), s.times.end());
    const long long median = s.times[s.times.size() / 2];
    const bool valid = s.max_deviation <= 1e-9;
    std::printf("%s,%lld,%.17g,%s\n", m, median, s.max_deviation, valid ? "true" : "false");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Cartesian stiffness of serial chains and parallel manipulators with passive joints"};
  app.require_subcommand(1);

  // compute
  std::string compute_model, compute_chain, compute_method = "auto", compute_format = "text";
  CLI::App* compute = app.add_subcommand("compute", "Stiffness of a model file");
  compute->add_option("model", compute_model, "model JSON file")->required();
  compute->add_option("--chain", compute_chain, "compute a single chain by name");
  compute->add_option("--method", compute_method, "dense|closed|recursive|auto")
      ->check(CLI::IsMember({"dense", "closed", "recursive", "auto"}));
  compute->add_option("--format", compute_format, "text|json|csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  // verify
  std::string verify_model;
  bool verify_random = false;
  std::optional<std::uint64_t> verify_seed;
  int verify_springs6 = 2, verify_act = 2, verify_passive = 3;
  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suites on a model");
  verify->add_option("model", verify_model, "model JSON file");
  verify->add_flag("--random", verify_random, "verify a generated random chain instead of a file");
  verify->add_option("--seed", verify_seed, "seed for randomized checks (default STIFFKIT_SEED)");
  verify->add_option("--n-springs6", verify_springs6, "random chain: number of 6-dof springs");
  verify->add_option("--n-act", verify_act, "random chain: number of 1-dof actuator springs");
  verify->add_option("--n-passive", verify_passive, "random chain: number of passive joints");

  // stewart
  std::string stewart_case, stewart_format = "text";
  double stewart_R = 0, stewart_r = 0, stewart_h = 0, stewart_k11 = 0, stewart_klink = 0;
  CLI::App* stewart = app.add_subcommand("stewart", "Hexapod case studies with analytic oracle");
  stewart->set_help_flag("--help", "print help");  // frees -h for the height flag
  stewart->add_option("--case", stewart_case, "A|B")->required()->check(CLI::IsMember({"A", "B"}));
  stewart->add_option("--R", stewart_R, "base attachment radius, m (angles in the layout are "
                                        "fixed per case: 60 or 120 degree spacing)")
      ->required();
  stewart->add_option("--r", stewart_r, "platform attachment radius, m")->required();
  stewart->add_option("--h", stewart_h, "base-to-platform height, m")->required();
  stewart->add_option("--k11", stewart_k11, "actuator axial stiffness, N/m")->required();
  stewart->add_option("--klink", stewart_klink, "link spring scale (default 1e6 * k11)");
  stewart->add_option("--format", stewart_format, "text|json|csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  // bench
  int bench_springs = 12, bench_passive = 3, bench_trials = 5;
  std::optional<std::uint64_t> bench_seed;
  CLI::App* bench = app.add_subcommand("bench", "Timing comparison of the three routes (CSV)");
  bench->add_option("--n-springs", bench_springs, "1-dof springs per chain (>= 6)");
  bench->add_option("--n-passive", bench_passive, "passive joints per chain (<= 5)");
  bench->add_option("--trials", bench_trials, "number of random chains");
  bench->add_option("--seed", bench_seed, "seed (default STIFFKIT_SEED or 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (compute->parsed()) {
      return cmd_compute(compute_model, compute_chain, compute_method,
                         parse_format(compute_format));
    }
    if (verify->parsed()) {
      if (!verify_random && verify_model.empty()) {
        std::cerr << "error: verify needs a model path or --random\n";
        return kExitInput;
      }
      if (verify_random && !verify_model.empty()) {
        std::cerr << "error: --random and a model path are mutually exclusive\n";
        return kExitInput;
      }
      return cmd_verify(verify_model, verify_random, resolve_seed(verify_seed), verify_springs6,
                        verify_act, verify_passive);
    }
    if (stewart->parsed()) {
      if (!(stewart_R > 0) || !(stewart_r > 0) || !(stewart_h > 0) || !(stewart_k11 > 0) ||
          (stewart->count("--klink") && !(stewart_klink > 0))) {
        std::cerr << "error: stewart parameters must be positive\n";
        return kExitInput;
      }
      return cmd_stewart(stewart_case == "A" ? StewartCase::A : StewartCase::B, stewart_R,
                         stewart_r, stewart_h, stewart_k11, stewart_klink,
                         parse_format(stewart_format));
    }
    if (bench->parsed()) {
      if (bench_passive > 5 || bench_springs < 6 || bench_trials < 1) {
        std::cerr << "error: bench requires n-springs >= 6, n-passive <= 5, trials >= 1\n";
        return kExitInput;
      }
      return cmd_bench(bench_springs, bench_passive, bench_trials, resolve_seed(bench_seed));
    }
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const StiffnessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
