#pragma once

// Batch jobs: a JSON document {"command", "params", "seed", "p",
// "precision"} in, a JSON report out. Exit code 0 when every check passes,
// 1 when a check fails, 2 when the input is malformed.

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "gieseker/invariance.hpp"
#include "gieseker/json_io.hpp"
#include "gieseker/version.hpp"

namespace gieseker {

using nlohmann::json;

/// Values given on the command line; they override the job document.
struct JobOverrides {
  std::optional<std::int64_t> prime;
  std::optional<std::int64_t> precision;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
};

struct JobOutcome {
  json report;
  int exit_code = 0;
};

struct JobContext {
  std::string command;
  Residue p = kDefaultPrime;
  int precision = kDefaultPrecision;
  std::uint64_t seed = 0;
  int trials = 10;
};

namespace jobs {

using io::Node;

/// flag, then job field, then GT_DEFAULT_PRIME, then the built-in default.
inline Residue resolve_prime(const Node& job, const JobOverrides& ov) {
  std::int64_t p = kDefaultPrime;
  std::string where = "/p";
  if (ov.prime) {
    p = *ov.prime;
    where = "--prime";
  } else if (job.has("p")) {
    p = job["p"].integer();
  } else if (const char* env = std::getenv("GT_DEFAULT_PRIME"); env && *env) {
    where = "GT_DEFAULT_PRIME";
    try {
      std::size_t used = 0;
      p = std::stoll(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw InputError(where, "not an integer: " + std::string(env));
    }
  }
  if (p < 2 || p > (std::int64_t{1} << 31) || !is_prime(static_cast<std::uint64_t>(p)))
    throw InputError(where, std::to_string(p) + " is not a prime below 2^31");
  return static_cast<Residue>(p);
}

inline JobContext resolve_context(const Node& job, const JobOverrides& ov) {
  JobContext ctx;
  ctx.command = job["command"].string();
  ctx.p = resolve_prime(job, ov);
  if (ov.precision) {
    if (*ov.precision < 1 || *ov.precision > 512) throw InputError("--precision", "must lie in [1, 512]");
    ctx.precision = static_cast<int>(*ov.precision);
  } else if (job.has("precision")) {
    ctx.precision = job["precision"].small_int(1, 512);
  }
  if (ov.seed) {
    ctx.seed = *ov.seed;
  } else if (job.has("seed")) {
    ctx.seed = static_cast<std::uint64_t>(job["seed"].small_int(0, io::kIntLimit));
  }
  if (ov.trials) {
    if (*ov.trials < 1 || *ov.trials > 100000) throw InputError("--trials", "must lie in [1, 100000]");
    ctx.trials = *ov.trials;
  } else if (job.has("params") && job["params"].has("trials")) {
    ctx.trials = job["params"]["trials"].small_int(1, 100000);
  }
  return ctx;
}

inline json checks_json(const std::vector<CheckResult>& checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back({{"check", c.name}, {"passed", c.passed}});
  return out;
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

/// Germ from {"e", "zeta"?, "alpha"?, "F": {"u", "v"}, "raw_action"?}.
inline LocalChartGerm germ_from(const Node& n, const JobContext& ctx) {
  LocalChartGerm g;
  g.p = ctx.p;
  g.e = n["e"].small_int(1, 1 << 20);
  if ((ctx.p - 1) % static_cast<Residue>(g.e) != 0)
    n["e"].fail("e = " + std::to_string(g.e) + " does not divide p - 1 = " + std::to_string(ctx.p - 1));
  g.zeta = n.has("zeta") ? io::element_from(n["zeta"], ctx.p) : primitive_eth_root(ctx.p, g.e);
  try {
    g.action().validate();
  } catch (const DomainError& err) {
    n["zeta"].fail(err.what());
  }
  const Node f = n["F"];
  g.F.u = io::laurent_matrix_from(f["u"], ctx.p, ctx.precision);
  const int r = g.F.u.rows();
  if (r == 0) f["u"].fail("empty matrix");
  if (g.F.u.cols() != r) f["u"].fail("matrix must be square");
  g.F.v = io::laurent_matrix_from(f["v"], ctx.p, ctx.precision, r);
  if (n.has("raw_action")) {
    const Node a = n["raw_action"];
    PowerMatrix au = io::power_matrix_from(a["u"], ctx.p, ctx.precision, r);
    PowerMatrix av = io::power_matrix_from(a["v"], ctx.p, ctx.precision, r);
    if (constant_term(au) != constant_term(av)) a.fail("branches of the action cocycle have different constant terms");
    g.raw_action = NodalMatrix(au, av);
  } else {
    g.alpha = n["alpha"].int_list(-io::kIntLimit, io::kIntLimit);
    if (static_cast<int>(g.alpha.size()) != r) n["alpha"].fail("need one exponent per column of F");
  }
  try {
    g.validate();
  } catch (const DomainError& err) {
    n.fail(err.what());
  }
  return g;
}

inline KGLPoint point_param(const Node& params, const JobContext& ctx) {
  if (params.has("point")) return io::point_from(params["point"], ctx.p);
  return kgl_point_from_partition(io::partition_from(params), ctx.p);
}

inline std::optional<int> e_param(const Node& params) {
  if (!params.has("e")) return std::nullopt;
  return params["e"].small_int(1, 1 << 20);
}

inline JobOutcome run_forward(const Node& params, const JobContext& ctx) {
  const LocalChartGerm germ = germ_from(params, ctx);
  json result;
  std::vector<CheckResult> checks;
  LocalChartGerm diagonal = germ;
  if (germ.raw_action) {
    const NormalizedChart nc = normalize_chart(germ);
    diagonal = nc.germ;
    result["normalized"] = {{"alpha", nc.germ.alpha}, {"change", io::to_json(nc.change)}};
    const NodalMatrix z = NodalMatrix::constant(root_diagonal(nc.germ.alpha, germ.action()),
                                                std::min(precision_of(nc.change.u), precision_of(nc.change.v)));
    checks.push_back({"a gamma(b) = b z", *germ.raw_action * apply_gamma(nc.change, germ.action()) == nc.change * z});
  }
  const GiesekerGermDatum d = forward(diagonal);
  checks.push_back({"glue matrix equivariant", is_equivariant(diagonal.F, diagonal.alpha, diagonal.action())});
  checks.push_back({"H invertible", is_invertible(d.H.h1) && is_invertible(d.H.h2)});
  if (const auto chain = d.chain.projective_part())
    checks.push_back({"chain admissible", check_admissible(*chain, ctx.p)});
  result["datum"] = io::to_json(d);
  result["checks"] = checks_json(checks);
  return {result, all_passed(checks) ? 0 : 1};
}

inline JobOutcome run_inverse(const Node& params, const JobContext& ctx) {
  const KGLPoint pt = point_param(params, ctx);
  const auto e = e_param(params);
  const LocalChartGerm g = inverse(pt, ctx.p, e, ctx.precision);
  json result = {{"germ", io::to_json(g)}};
  std::vector<CheckResult> checks{{"glue matrix equivariant", is_equivariant(g.F, g.alpha, g.action())}};
  result["checks"] = checks_json(checks);
  return {result, all_passed(checks) ? 0 : 1};
}

inline JobOutcome run_roundtrip(const Node& params, const JobContext& ctx) {
  const KGLPoint pt = point_param(params, ctx);
  const RoundtripResult rt = roundtrip_check(pt, ctx.p, e_param(params), ctx.precision);
  json result = {{"partition", io::to_json(rt.datum.partition)},
                 {"e", rt.datum.exps.e},
                 {"partition_matches", rt.partition_matches},
                 {"point_matches", rt.point_matches},
                 {"passed", rt.passed()}};
  return {result, rt.passed() ? 0 : 1};
}

inline JobOutcome run_strata(const Node& params, const JobContext&) {
  const int r = params["r"].small_int(1, 12);
  json list = json::array();
  for (const auto& s : enumerate_strata(r)) list.push_back(io::to_json(s));
  return {{{"r", r}, {"count", list.size()}, {"strata", list}}, 0};
}

inline JobOutcome run_admissible(const Node& params, const JobContext& ctx) {
  ProjectiveChain chain;
  json result;
  if (params.has("chain")) {
    chain = io::chain_from(params["chain"], ctx.p);
  } else {
    const Partition part = io::partition_from(params.has("partition") ? params["partition"] : params);
    const auto proj = canonical_chain(part, ctx.p).projective_part();
    if (!proj) params.fail("a partition with one block has no chain of projective lines");
    chain = *proj;
    result["partition"] = io::to_json(part);
  }
  json degs = json::array();
  for (int c = 0; c < chain.length(); ++c) degs.push_back(chain.degree(c));
  result["component_degrees"] = degs;
  result["admissible"] = check_admissible(chain, ctx.p);
  return {result, 0};
}

inline const std::vector<std::string>& transform_names() {
  static const std::vector<std::string> names{"reparam", "branch_swap", "xi_change", "eta_change"};
  return names;
}

/// Group orders used when a job does not fix e: divisors of p - 1 in [2, 6].
inline std::vector<int> default_group_orders(Residue p) {
  std::vector<int> out;
  for (int e = 2; e <= 6; ++e)
    if ((p - 1) % static_cast<Residue>(e) == 0) out.push_back(e);
  if (out.empty()) out.push_back(1);
  return out;
}

struct TrialSetup {
  int r_max = 3;
  std::vector<int> orders;
  std::vector<std::string> transforms;
};

/// One seeded trial: a random forward-constructed datum pushed through the
/// given transformations, each with freshly sampled parameters.
inline json run_invariance_trial(std::uint64_t seed, const TrialSetup& setup, const JobContext& ctx, bool& ok) {
  Sampler rng(seed, ctx.p);
  const int r = rng.uniform_int(1, setup.r_max);
  const int e = setup.orders[rng.uniform_int(0, static_cast<int>(setup.orders.size()) - 1)];
  // every step can cost a coefficient of relative precision in H, so the
  // germ is built with enough room for the whole chain
  const int chain = static_cast<int>(setup.transforms.size());
  const int hp = std::max(invariant_precision(ctx.precision, e), 4 + 2 * chain);
  const int precision = std::max(ctx.precision, e * (hp + 1));
  const GiesekerGermDatum start = forward(random_germ(rng, r, e, precision));
  GiesekerGermDatum d = start;
  json steps = json::array();
  int swaps = 0;
  for (const auto& name : setup.transforms) {
    std::vector<CheckResult> checks;
    if (name == "reparam") {
      ReparamResult res = reparam_transform(d, {rng.unit_series(hp), rng.unit_series(hp)});
      checks = res.checks;
      d = std::move(res.datum);
    } else if (name == "branch_swap") {
      TransformResult res = branch_swap_transform(d);
      checks = res.checks;
      d = std::move(res.datum);
      ++swaps;
    } else if (name == "xi_change") {
      TransformResult res = xi_triv_transform(d, {rng.invertible_laurent(r, hp), rng.invertible_laurent(r, hp)});
      checks = res.checks;
      d = std::move(res.datum);
    } else {
      TransformResult res = eta_triv_transform(d, sample_eta_change(d.exps, d.partition, rng, hp));
      checks = res.checks;
      d = std::move(res.datum);
    }
    ok = ok && all_passed(checks);
    steps.push_back({{"transform", name}, {"checks", checks_json(checks)}});
  }
  // an even number of swaps must come back to the starting point
  const GiesekerGermDatum reference = swaps % 2 == 0 ? start : swapped_datum(start, swap_branches(start));
  const bool composite = d.partition == reference.partition && same_point(d.point, reference.point);
  ok = ok && composite;
  return {{"seed", seed},
          {"r", r},
          {"e", e},
          {"precision", precision},
          {"exponents", start.exps.a},
          {"steps", steps},
          {"composite_point_preserved", composite}};
}

inline JobOutcome run_invariance(const Node& params, const JobContext& ctx) {
  TrialSetup setup;
  if (params.has("r")) setup.r_max = params["r"].small_int(1, 8);
  if (params.has("e")) {
    const int e = params["e"].small_int(1, 1 << 20);
    if ((ctx.p - 1) % static_cast<Residue>(e) != 0) params["e"].fail("e must divide p - 1");
    setup.orders = {e};
  } else {
    setup.orders = default_group_orders(ctx.p);
  }
  if (params.has("transforms")) {
    const Node list = params["transforms"];
    // trial precision grows with the chain length
    if (list.size() > 32) list.fail("at most 32 transforms per trial");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string name = list[i].string();
      if (std::find(transform_names().begin(), transform_names().end(), name) == transform_names().end())
        list[i].fail("unknown transform '" + name + "'; expected reparam, branch_swap, xi_change or eta_change");
      setup.transforms.push_back(name);
    }
  } else {
    setup.transforms = transform_names();
  }
  json trials = json::array();
  bool ok = true;
  for (int t = 0; t < ctx.trials; ++t) trials.push_back(run_invariance_trial(ctx.seed + t, setup, ctx, ok));
  return {{{"trials", trials}, {"transforms", setup.transforms}, {"passed", ok}}, ok ? 0 : 1};
}

}  // namespace jobs

inline json job_report_header(const JobContext& ctx) {
  return {{"version", kVersion},
          {"command", ctx.command},
          {"defaults", {{"p", ctx.p}, {"precision", ctx.precision}, {"seed", ctx.seed}, {"trials", ctx.trials}}}};
}

inline json error_json(const std::string& path, const std::string& message) {
  return {{"path", path}, {"message", message}};
}

/// Runs one job document. Never throws.
inline JobOutcome run_job(const json& job, const JobOverrides& ov = {}) {
  const jobs::Node root(job, "");
  JobContext ctx;
  json report = {{"version", kVersion}};
  try {
    if (!job.is_object()) root.fail("job must be a JSON object");
    ctx = jobs::resolve_context(root, ov);
    report = job_report_header(ctx);
    static const json empty = json::object();
    const jobs::Node p = job.contains("params") ? root["params"] : jobs::Node(empty, "/params");
    JobOutcome out;
    if (ctx.command == "forward")
      out = jobs::run_forward(p, ctx);
    else if (ctx.command == "inverse")
      out = jobs::run_inverse(p, ctx);
    else if (ctx.command == "roundtrip")
      out = jobs::run_roundtrip(p, ctx);
    else if (ctx.command == "invariance")
      out = jobs::run_invariance(p, ctx);
    else if (ctx.command == "strata")
      out = jobs::run_strata(p, ctx);
    else if (ctx.command == "admissible")
      out = jobs::run_admissible(p, ctx);
    else
      root["command"].fail("unknown command '" + ctx.command +
                           "'; expected forward, inverse, roundtrip, invariance, strata or admissible");
    report["result"] = out.report;
    report["status"] = out.exit_code == 0 ? "ok" : "failed";
    return {report, out.exit_code};
  } catch (const InputError& err) {
    report["status"] = "error";
    report["error"] = error_json(err.path(), err.message());
    return {report, 2};
  } catch (const DomainError& err) {
    report["status"] = "error";
    report["error"] = error_json("/params", err.what());
    return {report, 2};
  } catch (const json::exception& err) {
    report["status"] = "error";
    report["error"] = error_json("", err.what());
    return {report, 2};
  } catch (const CheckFailure& err) {
    report["status"] = "failed";
    report["error"] = error_json("", err.what());
    return {report, 1};
  }
}

}  // namespace gieseker
