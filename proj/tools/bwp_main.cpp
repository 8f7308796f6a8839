#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bwp/matrix_market.hpp"
#include "bwp/pipeline.hpp"

namespace {

using namespace bwp;

int g_spec_failures = 0;

PartitionSpec parse_spec_arg(const std::string& text) {
  // r:m1,m2,... with k implied by the list length
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw InvalidParameter("spec must look like r:m1,m2,... : " + text);
  PartitionSpec spec;
  spec.r = std::stoi(text.substr(0, colon));
  std::istringstream rest(text.substr(colon + 1));
  std::string tok;
  while (std::getline(rest, tok, ',')) spec.m.push_back(std::stoi(tok));
  spec.k = static_cast<int>(spec.m.size());
  spec.validate();
  return spec;
}

PartitionSpec parse_scheme_arg(const std::string& text, int n) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ':')) parts.push_back(tok);
  if (parts.empty()) throw InvalidParameter("empty scheme");
  if (parts[0] == "equal" && parts.size() == 3)
    return scheme_equal_blocks(n, std::stoi(parts[1]), std::stoi(parts[2]));
  if (parts[0] == "literature" && (parts.size() == 2 || parts.size() == 3))
    return scheme_literature(n, std::stoi(parts[1]),
                             parts.size() == 3 ? std::stoi(parts[2]) : 0);
  if (parts[0] == "alternating" && parts.size() == 4)
    return scheme_alternating(n, std::stoi(parts[1]), std::stoi(parts[2]),
                              std::stoi(parts[3]));
  throw InvalidParameter("unknown scheme: " + text +
                         " (use equal:k:inner, literature:k[:inner], alternating:k:m2:m3)");
}

struct CommonOpts {
  std::string output = "json";
  std::string model = "slater";
  std::string nonneg = "all";
  bool prop1 = false;
  bool fast = false;
  bool timings = false;
  std::uint64_t seed = 1;
  int seeds = 3;
  double tol = 1e-5;
  int max_iter = 100000;
  double sigma = 1.0;
  double safety = 1e-4;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opt) {
  cmd->add_option("--output", opt.output, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--model", opt.model, "full|reduced|slater")
      ->check(CLI::IsMember({"full", "reduced", "slater"}));
  cmd->add_option("--nonneg", opt.nonneg, "all|band|none")
      ->check(CLI::IsMember({"all", "band", "none"}));
  cmd->add_flag("--prop1", opt.prop1,
                "reduced model: add the eliminated-block nonnegativity inequalities");
  cmd->add_flag("--fast", opt.fast, "reduced solver and annealing budget");
  cmd->add_flag("--timings", opt.timings, "include wall-clock times (not byte-stable)");
  cmd->add_option("--seed", opt.seed, "base random seed");
  cmd->add_option("--seeds", opt.seeds, "annealing restarts per spec");
  cmd->add_option("--tol", opt.tol, "solver residual tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "solver iteration cap");
  cmd->add_option("--sigma", opt.sigma, "initial penalty parameter");
  cmd->add_option("--safety", opt.safety, "margin a certified bound must clear");
  cmd->add_option("--workers", opt.workers, "parallel specs");
}

BoundOptions to_bound_options(const CommonOpts& c, int n) {
  BoundOptions opt;
  opt.model = c.model == "full"      ? ModelKind::Full
              : c.model == "reduced" ? ModelKind::Reduced
                                     : ModelKind::Slater;
  opt.nonneg = c.nonneg == "all"    ? NonnegMode::All
               : c.nonneg == "band" ? NonnegMode::Band
                                    : NonnegMode::None;
  opt.elim_nonneg = c.prop1;
  opt.solver.tol_primal = opt.solver.tol_dual = c.tol;
  opt.solver.max_iterations = c.max_iter;
  opt.solver.sigma = c.sigma;
  opt.anneal.seed = c.seed;
  opt.anneal_seeds = c.seeds;
  opt.safety = c.safety;
  if (c.fast) apply_fast_profile(opt, n);
  return opt;
}

void emit_outcomes(const std::string& instance, const std::vector<SpecOutcome>& outcomes,
                   const CommonOpts& opt, std::ostream& out) {
  if (opt.output == "csv") {
    out << outcome_csv_header(opt.timings) << "\n";
    for (const auto& o : outcomes) out << outcome_to_csv(instance, o, opt.timings) << "\n";
  } else {
    out << "[";
    for (size_t i = 0; i < outcomes.size(); ++i)
      out << (i ? "," : "") << outcome_to_json(outcomes[i], opt.timings);
    out << "]\n";
  }
  for (const auto& o : outcomes)
    if (!o.error.empty()) ++g_spec_failures;
}

int cmd_gen(const std::string& family, const std::vector<int>& args,
            const std::string& out_path) {
  Graph g;
  if (family == "torus" && args.size() == 1)
    g = make_torus(args[0]);
  else if (family == "torus-ham" && args.size() == 1)
    g = make_torus_ham(args[0]);
  else if (family == "hypercube" && args.size() == 1)
    g = make_hamming(args[0], 2);
  else if (family == "hamming" && args.size() == 2)
    g = make_hamming(args[0], args[1]);
  else
    throw InvalidParameter("unknown family/arity: " + family +
                           " (use torus k | torus-ham k | hypercube d | hamming d q)");
  if (out_path.empty() || out_path == "-")
    save_matrix_market(g, std::cout);
  else
    save_matrix_market(g, out_path);
  std::cerr << g.name() << ": n=" << g.order() << " edges=" << g.edge_count() << "\n";
  return 0;
}

int cmd_bound(const std::string& instance, const std::vector<std::string>& spec_args,
              const std::vector<std::string>& scheme_args, const CommonOpts& copt,
              const std::string& dump_path, const std::string& log_path) {
  Graph g = instance_from_string(instance);
  std::vector<PartitionSpec> specs;
  for (const auto& s : spec_args) specs.push_back(parse_spec_arg(s));
  for (const auto& s : scheme_args) specs.push_back(parse_scheme_arg(s, g.order()));
  if (specs.empty()) throw InvalidParameter("no --spec or --scheme given");

  BoundOptions opt = to_bound_options(copt, g.order());

  if (!dump_path.empty()) {
    SdpProblem p = (opt.model == ModelKind::Full)
                       ? build_full_model(g, specs.front(), opt.nonneg)
                       : (opt.model == ModelKind::Reduced)
                             ? build_reduced_model(g, specs.front(), opt.nonneg, opt.elim_nonneg)
                             : build_slater_model(g, specs.front(), opt.nonneg);
    std::ofstream dump(dump_path);
    if (!dump) throw InvalidParameter("cannot open dump path: " + dump_path);
    p.dump(dump);
  }
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) throw InvalidParameter("cannot open log path: " + log_path);
    opt.solver.log_every = 100;
    opt.solver.log_stream = &log;
  }

  auto outcomes = (opt.solver.log_stream || copt.workers <= 1)
                      ? [&] {
                          std::vector<SpecOutcome> res;
                          for (const auto& s : specs) res.push_back(compute_bounds(g, s, opt));
                          return res;
                        }()
                      : compute_bounds_many(g, specs, opt, copt.workers);
  emit_outcomes(g.name(), outcomes, copt, std::cout);
  return 0;
}

int cmd_heuristic(const std::string& instance, const std::string& algo,
                  const std::vector<std::string>& spec_args, const CommonOpts& copt) {
  Graph g = instance_from_string(instance);
  nlohmann::json j;
  j["instance"] = g.name();
  AnnealParams anneal;
  anneal.seed = copt.seed;
  if (copt.fast) anneal.steps_per_temp = std::max(1, 5 * g.order());
  if (algo == "rcm") {
    Labeling phi = rcm_labeling(g);
    j["algo"] = "rcm";
    j["bandwidth"] = bandwidth_of_labeling(g, phi);
    j["labeling"] = phi.label;
  } else if (algo == "sa-label") {
    auto [phi, bw] = anneal_labeling_best(g, anneal, copt.seeds);
    j["algo"] = "sa-label";
    j["bandwidth"] = bw;
    j["labeling"] = phi.label;
  } else if (algo == "sa-minpart") {
    if (spec_args.empty()) throw InvalidParameter("sa-minpart needs a --spec");
    PartitionSpec spec = parse_spec_arg(spec_args.front());
    auto [part, value] = anneal_partition_best(g, spec, anneal, copt.seeds);
    j["algo"] = "sa-minpart";
    j["spec"] = {{"k", spec.k}, {"r", spec.r}, {"m", spec.m}};
    j["value"] = value;
    j["partition"] = part.block;
  } else {
    throw InvalidParameter("unknown algo: " + algo + " (rcm|sa-label|sa-minpart)");
  }
  std::cout << j.dump() << "\n";
  return 0;
}

int run_instance_table(const std::string& table_id, const CommonOpts& copt,
                       const std::string& only, std::ostream& out) {
  auto rows = table_rows(table_id);
  out << outcome_csv_header(copt.timings) << "\n";
  std::string current;
  Graph g;
  std::vector<TableRow> selected;
  for (const auto& row : rows)
    if (only.empty() || row.instance.find(only) != std::string::npos) selected.push_back(row);

  for (size_t i = 0; i < selected.size();) {
    size_t j = i;
    while (j < selected.size() && selected[j].instance == selected[i].instance) ++j;
    Graph graph = instance_from_string(selected[i].instance);
    BoundOptions opt = to_bound_options(copt, graph.order());
    std::vector<PartitionSpec> specs;
    for (size_t t = i; t < j; ++t) specs.push_back(selected[t].spec);
    auto outcomes = compute_bounds_many(graph, specs, opt, copt.workers);
    for (const auto& o : outcomes) {
      out << outcome_to_csv(selected[i].instance, o, copt.timings) << "\n";
      if (!o.error.empty()) ++g_spec_failures;
    }
    i = j;
  }
  return 0;
}

int run_summary_table(const CommonOpts& copt, const std::string& only, std::ostream& out) {
  out << "k,n,torus_lb,torus_ham_lb,bdw_leq\n";
  for (int k = 7; k <= 10; ++k) {
    if (!only.empty() && only != std::to_string(k)) continue;
    const int n = k * k;
    auto best_lower = [&](const std::string& instance, const std::string& table) {
      Graph g = instance_from_string(instance);
      BoundOptions opt = to_bound_options(copt, n);
      int best = 0;
      for (const auto& row : table_rows(table)) {
        if (row.instance != instance) continue;
        auto o = compute_bounds(g, row.spec, opt);
        if (!o.error.empty()) {
          ++g_spec_failures;
          continue;
        }
        if (o.lower) best = std::max(best, o.lower->value);
      }
      return best;
    };
    const int torus_lb = best_lower("torus:" + std::to_string(k), k == 7 ? "T7" : "T8910");
    const int th_lb = best_lower("torus-ham:" + std::to_string(k), "TH");
    Graph torus = make_torus(k);
    AnnealParams anneal;
    anneal.seed = copt.seed;
    if (copt.fast) anneal.steps_per_temp = std::max(1, 5 * torus.order());
    auto [phi, ub] = anneal_labeling_best(torus, anneal, copt.seeds);
    out << k << "," << n << "," << torus_lb << "," << th_lb << "," << ub << "\n";
  }
  return 0;
}

int run_literature_table(const CommonOpts& copt, const std::string& dir,
                         const std::vector<std::string>& files, int k_lo, int k_hi,
                         int max_tries, std::ostream& out) {
  std::vector<std::string> paths = files;
  if (!dir.empty()) {
    for (const auto& name : literature_names()) {
      const auto path = std::filesystem::path(dir) / (name + ".mtx");
      if (std::filesystem::exists(path))
        paths.push_back(path.string());
      else
        std::cerr << "warning: missing " << path.string() << ", skipped\n";
    }
  }
  if (paths.empty()) throw InvalidParameter("no literature files found (use --dir or --file)");

  out << "name,n,edges,bdw_leq,density";
  for (int k = k_lo; k <= k_hi; ++k) out << ",lb_k" << k;
  out << "\n";
  for (const auto& path : paths) {
    Graph g = load_matrix_market(path);
    AnnealParams anneal;
    anneal.seed = copt.seed;
    if (copt.fast) anneal.steps_per_temp = std::max(1, 5 * g.order());
    auto [phi, ub] = anneal_labeling_best(g, anneal, copt.seeds);
    char dens[32];
    std::snprintf(dens, sizeof dens, "%.3f", bandwidth_density(g, ub));
    out << g.name() << "," << g.order() << "," << g.edge_count() << "," << ub << "," << dens;
    BoundOptions opt = to_bound_options(copt, g.order());
    for (int k = k_lo; k <= k_hi; ++k) {
      // Descend on the inner size; the first certified spec gives the best
      // bound this sweep can prove.
      int bound = 0;
      int inner_hi = std::min(ub - 1, (g.order() - 2) / std::max(1, k - 2));
      for (int inner = inner_hi, tries = 0; inner >= 2 && tries < max_tries; --inner, ++tries) {
        PartitionSpec spec;
        try {
          spec = scheme_literature(g.order(), k, inner);
        } catch (const InvalidParameter&) {
          continue;
        }
        auto o = compute_bounds(g, spec, opt);
        if (!o.error.empty()) {
          ++g_spec_failures;
          continue;
        }
        if (o.lower) {
          bound = o.lower->value;
          break;
        }
      }
      out << "," << bound;
    }
    out << "\n";
  }
  return 0;
}

int cmd_certify(const std::string& instance, const std::string& report_path, bool resolve,
                const CommonOpts& copt) {
  Graph g = instance_from_string(instance);
  std::ifstream in(report_path);
  if (!in) throw InvalidParameter("cannot open report: " + report_path);
  nlohmann::json reports = nlohmann::json::parse(in);
  if (!reports.is_array()) reports = nlohmann::json::array({reports});

  int failures = 0;
  for (const auto& item : reports) {
    PartitionSpec spec;
    spec.k = item.at("spec").at("k").get<int>();
    spec.r = item.at("spec").at("r").get<int>();
    spec.m = item.at("spec").at("m").get<std::vector<int>>();
    spec.validate();

    if (item.contains("ub") && item.contains("ub_partition")) {
      PartitionMatrix part;
      part.k = spec.k;
      part.block = item.at("ub_partition").get<std::vector<int>>();
      part.validate(spec);
      const long long actual = far_edge_count(g, part, spec.r);
      const long long claimed = item.at("ub").get<long long>();
      const bool ok = actual == claimed;
      std::cout << (ok ? "OK   " : "FAIL ") << spec.to_string()
                << " ub witness: claimed " << claimed << " recomputed " << actual << "\n";
      if (!ok) ++failures;
    }
    for (const auto& b : item.value("bounds", nlohmann::json::array())) {
      const std::string kind = b.at("kind").get<std::string>();
      const bool safe = b.value("safe", false);
      if (kind == "lower" && safe) {
        if (!resolve) {
          std::cout << "SKIP " << spec.to_string()
                    << " certified lower bound (pass --resolve to re-derive)\n";
          continue;
        }
        BoundOptions opt = to_bound_options(copt, g.order());
        auto o = compute_bounds(g, spec, opt);
        const bool ok = !o.error.empty() ? false
                                         : (o.lower && o.lower->value >= b.at("value").get<int>());
        std::cout << (ok ? "OK   " : "FAIL ") << spec.to_string() << " lower bound "
                  << b.at("value").get<int>() << (ok ? " re-certified" : " not re-certified")
                  << "\n";
        if (!ok) ++failures;
      }
    }
  }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bandwidth bounds from vertex partitions"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a test instance as Matrix Market");
  std::string gen_family, gen_out;
  std::vector<int> gen_args;
  gen->add_option("family", gen_family, "torus|torus-ham|hypercube|hamming")->required();
  gen->add_option("args", gen_args, "family parameters")->required();
  gen->add_option("-o,--out", gen_out, "output path (default stdout)");

  // bound
  auto* bound = app.add_subcommand("bound", "heuristic ub + certified SDP lb per spec");
  std::string bound_instance, bound_dump, bound_log;
  std::vector<std::string> bound_specs, bound_schemes;
  CommonOpts bound_opt;
  bound->add_option("graph", bound_instance, "mtx path or generator (torus:7)")->required();
  bound->add_option("--spec", bound_specs, "partition spec r:m1,m2,...");
  bound->add_option("--scheme", bound_schemes,
                    "equal:k:inner | literature:k[:inner] | alternating:k:m2:m3");
  bound->add_option("--dump-problem", bound_dump, "write the first spec's SDP as text");
  bound->add_option("--log", bound_log, "solver CSV log path");
  add_common(bound, bound_opt);

  // heuristic
  auto* heur = app.add_subcommand("heuristic", "labelings and partition heuristics");
  std::string heur_instance, heur_algo;
  std::vector<std::string> heur_specs;
  CommonOpts heur_opt;
  heur->add_option("graph", heur_instance)->required();
  heur->add_option("--algo", heur_algo, "rcm|sa-label|sa-minpart")->required();
  heur->add_option("--spec", heur_specs, "partition spec for sa-minpart");
  add_common(heur, heur_opt);

  // table
  auto* table = app.add_subcommand("table", "reproduce a benchmark table as CSV");
  std::string table_id, table_only, table_dir, table_out;
  std::vector<std::string> table_files;
  std::string table_k = "3..6";
  int table_tries = 6;
  CommonOpts table_opt;
  table->add_option("id", table_id, "T7|T8910|TH|summary|hamming|literature")->required();
  table->add_option("--only", table_only, "restrict to matching instances");
  table->add_option("--dir", table_dir, "directory with literature .mtx files");
  table->add_option("--file", table_files, "explicit literature files");
  table->add_option("--k", table_k, "literature block range, e.g. 3..6");
  table->add_option("--max-tries", table_tries, "inner sizes tried per k");
  table->add_option("-o,--out", table_out, "output path (default stdout)");
  add_common(table, table_opt);

  // certify
  auto* cert = app.add_subcommand("certify", "revalidate a bound report");
  std::string cert_instance, cert_report;
  bool cert_resolve = false;
  CommonOpts cert_opt;
  cert->add_option("graph", cert_instance)->required();
  cert->add_option("--report", cert_report, "JSON emitted by `bound`")->required();
  cert->add_flag("--resolve", cert_resolve, "re-run the solver for certified lower bounds");
  add_common(cert, cert_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    int rc = 0;
    if (*gen) rc = cmd_gen(gen_family, gen_args, gen_out);
    if (*bound) rc = cmd_bound(bound_instance, bound_specs, bound_schemes, bound_opt,
                               bound_dump, bound_log);
    if (*heur) rc = cmd_heuristic(heur_instance, heur_algo, heur_specs, heur_opt);
    if (*table) {
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!table_out.empty()) {
        file.open(table_out);
        if (!file) throw InvalidParameter("cannot open output: " + table_out);
        out = &file;
      }
      if (table_id == "summary") {
        rc = run_summary_table(table_opt, table_only, *out);
      } else if (table_id == "literature") {
        int k_lo = 3, k_hi = 6;
        const auto dots = table_k.find("..");
        if (dots != std::string::npos) {
          k_lo = std::stoi(table_k.substr(0, dots));
          k_hi = std::stoi(table_k.substr(dots + 2));
        } else {
          k_lo = k_hi = std::stoi(table_k);
        }
        rc = run_literature_table(table_opt, table_dir, table_files, k_lo, k_hi,
                                  table_tries, *out);
      } else {
        rc = run_instance_table(table_id, table_opt, table_only, *out);
      }
    }
    if (*cert) rc = cmd_certify(cert_instance, cert_report, cert_resolve, cert_opt);
    if (rc != 0) return rc;
    return g_spec_failures > 0 ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
