// Copyright 2026 The bvnc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "bvnc/bvnc.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Exit codes: 0 success, 1 usage, 2 domain/precondition, 3 verification
// failure, 4 non-convergence.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerifyFail = 3;
constexpr int kExitNoConvergence = 4;

struct CommonOpts {
  std::string input;
  std::string output_dir = ".";
  bool quiet = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bvnc::Error("cannot write file: " + path.string());
  out << text;
}

void write_json_file(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

fs::path out_path(const CommonOpts& o, const std::string& suffix) {
  fs::create_directories(o.output_dir);
  return fs::path(o.output_dir) / (fs::path(o.input).stem().string() + suffix);
}

void note_wrote(const CommonOpts& o, const fs::path& p) {
  if (!o.quiet) std::cout << "wrote: " << p.string() << "\n";
}

struct RouteResult {
  bvnc::DenseMatrix scaled;
  json meta;
};

double max_sum_deviation(const bvnc::DenseMatrix& m) {
  double dev = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    dev = std::max(dev, std::abs(m.row_sum(r) - 1.0));
  for (std::size_t c = 0; c < m.cols(); ++c)
    dev = std::max(dev, std::abs(m.col_sum(c) - 1.0));
  return dev;
}

RouteResult route_sinkhorn(const bvnc::DenseMatrix& a, double tol,
                           std::size_t max_iters) {
  bvnc::ScalingResult r = bvnc::sinkhorn_scale(a, tol, max_iters);
  json meta{{"route", "sinkhorn"},
            {"d_left", r.d_left},
            {"d_right", r.d_right},
            {"iterations", r.iterations},
            {"final_deviation", r.final_deviation}};
  return {std::move(r.scaled), std::move(meta)};
}

RouteResult route_embed(const bvnc::DenseMatrix& a) {
  bvnc::DenseMatrix s = bvnc::embed_row_stochastic(a);
  double alpha = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c)
    alpha = std::max(alpha, a.col_sum(c));
  std::vector<double> comp(a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c)
    comp[c] = 1.0 - a.col_sum(c) / alpha;
  json meta{{"route", "embed"}, {"alpha", alpha}, {"s", comp}};
  return {std::move(s), std::move(meta)};
}

RouteResult route_circulant(const bvnc::DenseMatrix& a) {
  auto [s, c] = bvnc::circulant_scale(a);
  return {std::move(s), json{{"route", "circulant"}, {"c", c}}};
}

// Route selection for mode "auto": passthrough if already doubly
// stochastic, else circulant, row-stochastic embedding, and Sinkhorn for
// strictly positive input, in that order. ds_tol gates the passthrough
// test; sinkhorn_tol is the convergence target for the iterative route.
RouteResult route_auto(const bvnc::DenseMatrix& a, double ds_tol,
                       double sinkhorn_tol, std::size_t max_iters) {
  if (!a.is_square())
    throw bvnc::DimensionError("input matrix must be square");
  if (bvnc::is_doubly_stochastic(a, ds_tol))
    return {a, json{{"route", "passthrough"},
                    {"note", "already doubly stochastic"}}};
  if (bvnc::is_circulant(a) && a.min_entry() >= 0.0 && a.row_sum(0) > 0.0)
    return route_circulant(a);
  if (bvnc::is_row_stochastic(a)) return route_embed(a);
  if (a.min_entry() > 0.0) return route_sinkhorn(a, sinkhorn_tol, max_iters);
  throw bvnc::DomainError(
      "no applicable route: input is not doubly stochastic, circulant, "
      "row stochastic, or strictly positive");
}

RouteResult run_route(const bvnc::DenseMatrix& a, const std::string& mode,
                      double tol, std::size_t max_iters) {
  if (mode == "auto") return route_auto(a, tol, tol, max_iters);
  if (mode == "sinkhorn") return route_sinkhorn(a, tol, max_iters);
  if (mode == "embed") return route_embed(a);
  return route_circulant(a);
}

int run_scale(const CommonOpts& o, const std::string& mode, double tol,
              std::size_t max_iters) {
  const bvnc::DenseMatrix a = bvnc::read_matrix(o.input);
  RouteResult r = run_route(a, mode, tol, max_iters);

  if (!o.quiet) {
    std::cout << "route: " << r.meta.at("route").get<std::string>() << "\n";
    if (r.meta.contains("note"))
      std::cout << "note: " << r.meta.at("note").get<std::string>() << "\n";
    if (r.meta.contains("iterations"))
      std::cout << "iterations: " << r.meta.at("iterations").get<std::size_t>()
                << "\n";
  }

  const fs::path mat_path = out_path(o, ".scaled.csv");
  std::ofstream mat_out(mat_path, std::ios::binary);
  if (!mat_out) throw bvnc::Error("cannot write file: " + mat_path.string());
  bvnc::write_matrix_csv(mat_out, r.scaled);
  mat_out.close();
  note_wrote(o, mat_path);

  const fs::path meta_path = out_path(o, ".scaling.json");
  write_json_file(meta_path, r.meta);
  note_wrote(o, meta_path);
  return kExitOk;
}

// Past this flattened gate count the canonical reorder buys well under a
// percent of extra reduction while its bubble schedule goes quadratic, so
// the default "auto" pass list drops it and keeps the linear passes.
constexpr std::size_t kAutoReorderGateLimit = 16384;

bool parse_passes(const std::string& spec, bvnc::OptimizeOptions& opts,
                  bool& auto_reorder) {
  opts.reorder = opts.reduce = opts.group = false;
  auto_reorder = false;
  if (spec == "none") return true;
  if (spec == "auto") {
    opts.reorder = opts.reduce = opts.group = true;
    auto_reorder = true;
    return true;
  }
  if (spec == "all") {
    opts.reorder = opts.reduce = opts.group = true;
    return true;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string name =
        spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (name == "reorder") {
      opts.reorder = true;
    } else if (name == "reduce") {
      opts.reduce = true;
    } else if (name == "group") {
      opts.group = true;
    } else {
      return false;
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return true;
}

int run_compile(const CommonOpts& o, double tol, std::size_t max_iters,
                std::size_t kmax, const std::string& scheme_name,
                const std::string& passes, const std::string& emit) {
  bvnc::OptimizeOptions opt_opts;
  bool auto_reorder = false;
  if (!parse_passes(passes, opt_opts, auto_reorder)) {
    std::cerr << "error: unknown pass list '" << passes
              << "' (expected auto, all, none, or a comma list of "
                 "reorder,reduce,group)\n";
    return kExitUsage;
  }
  const bvnc::TranspositionScheme scheme =
      scheme_name == "chain" ? bvnc::TranspositionScheme::Chain
                             : bvnc::TranspositionScheme::Star;

  const bvnc::DenseMatrix a = bvnc::read_matrix(o.input);
  // The decomposition residual and the verified block error both inherit
  // the stochasticity error of the scaled matrix (roughly n times it), so
  // the iterative route must converge well past the verification
  // tolerance, and the passthrough test must be correspondingly strict.
  const double scale_tol = std::max(1e-13, tol * 1e-3);
  const double pass_tol =
      std::max(tol / (8.0 * double(a.rows())),
               4.0 * std::numeric_limits<double>::epsilon());
  RouteResult r = route_auto(a, pass_tol, scale_tol, max_iters);
  const bvnc::DenseMatrix& s = r.scaled;
  if (!std::has_single_bit(s.rows()))
    throw bvnc::DimensionError(
        "circuit synthesis needs a power-of-two matrix size, got " +
        std::to_string(s.rows()));

  const double ds_dev = max_sum_deviation(s);
  const double decomp_tol = std::max(bvnc::kDefaultDecompositionTol,
                                     8.0 * double(s.rows()) * ds_dev);
  bvnc::BirkhoffDecomposition d = bvnc::birkhoff_decompose(s, kmax, decomp_tol);

  bvnc::BlockEncoding enc = bvnc::lcu_block_encoding(d, scheme);
  const std::size_t gates_before = bvnc::gate_count(enc.circuit);
  if (auto_reorder && gates_before > kAutoReorderGateLimit)
    opt_opts.reorder = false;
  bvnc::OptimizeResult opt = bvnc::optimize(enc.circuit, opt_opts);

  std::string effective_passes;
  const std::pair<bool, const char*> pass_names[] = {
      {opt_opts.reorder, "reorder"},
      {opt_opts.reduce, "reduce"},
      {opt_opts.group, "group"}};
  for (const auto& [on, name] : pass_names) {
    if (!on) continue;
    if (!effective_passes.empty()) effective_passes += ',';
    effective_passes += name;
  }
  if (effective_passes.empty()) effective_passes = "none";

  json stats{{"route", r.meta.at("route")},
             {"passes", effective_passes},
             {"n", d.n},
             {"n_qubits", enc.circuit.n_qubits},
             {"ancillas", enc.n_ancilla},
             {"k", d.terms.size()},
             {"residual", d.residual_norm},
             {"ds_deviation", ds_dev},
             {"decomposition_tol", decomp_tol},
             {"scale", enc.scale},
             {"gate_count_before", gates_before},
             {"gate_count_after", bvnc::gate_count(opt.circuit)}};
  json weights = json::array();
  for (const auto& term : d.terms) weights.push_back(term.weight);
  stats["weights"] = std::move(weights);

  bool verify_failed = false;
  if (opt.circuit.n_qubits <= bvnc::kMaxSimQubits) {
    const bvnc::VerificationReport rep = bvnc::verify_block_encoding(
        opt.circuit, enc.n_ancilla, s.scaled(1.0 / enc.scale), tol);
    stats["verification"] = json{{"skipped", false},
                                 {"passed", rep.ok},
                                 {"max_abs_error", rep.max_abs_error},
                                 {"unitarity_defect", rep.unitarity_defect},
                                 {"tol", tol}};
    verify_failed = !rep.ok;
    if (!o.quiet)
      std::cout << "verification: " << (rep.ok ? "PASS" : "FAIL")
                << " (max deviation " << bvnc::format_double(rep.max_abs_error)
                << ", tol " << bvnc::format_double(tol) << ")\n";
  } else {
    stats["verification"] = json{{"skipped", true}, {"tol", tol}};
    if (!o.quiet)
      std::cout << "verification: skipped (" << opt.circuit.n_qubits
                << " qubits exceeds the simulation cap)\n";
  }

  if (!o.quiet) {
    std::cout << "route: " << r.meta.at("route").get<std::string>() << "\n"
              << "terms: " << d.terms.size()
              << ", residual: " << bvnc::format_double(d.residual_norm) << "\n"
              << "qubits: " << opt.circuit.n_qubits << " (" << enc.n_ancilla
              << " ancillas), gates: " << gates_before << " -> "
              << bvnc::gate_count(opt.circuit) << "\n";
  }

  const fs::path scaled_path = out_path(o, ".scaled.csv");
  {
    std::ofstream mat_out(scaled_path, std::ios::binary);
    if (!mat_out)
      throw bvnc::Error("cannot write file: " + scaled_path.string());
    bvnc::write_matrix_csv(mat_out, s);
  }
  note_wrote(o, scaled_path);

  const fs::path dec_path = out_path(o, ".decomposition.json");
  write_json_file(dec_path, bvnc::to_json(d));
  note_wrote(o, dec_path);

  if (emit == "json" || emit == "both") {
    const fs::path cj = out_path(o, ".circuit.json");
    write_json_file(cj, bvnc::to_json(opt.circuit));
    note_wrote(o, cj);
  }
  if (emit == "qasm" || emit == "both") {
    const fs::path qp = out_path(o, ".qasm");
    write_text(qp, bvnc::qasm_string(opt.circuit));
    note_wrote(o, qp);
  }

  const fs::path stats_path = out_path(o, ".stats.json");
  write_json_file(stats_path, stats);
  note_wrote(o, stats_path);

  return verify_failed ? kExitVerifyFail : kExitOk;
}

int run_decompose(const CommonOpts& o, std::size_t kmax, double tol,
                  std::optional<std::size_t> trunc_keep,
                  std::optional<double> trunc_min_weight) {
  const bvnc::DenseMatrix s = bvnc::read_matrix(o.input);
  bvnc::BirkhoffDecomposition d = bvnc::birkhoff_decompose(s, kmax, tol);

  if (!o.quiet)
    std::cout << "terms: " << d.terms.size()
              << ", residual: " << bvnc::format_double(d.residual_norm) << "\n";

  const fs::path dec_path = out_path(o, ".decomposition.json");
  write_json_file(dec_path, bvnc::to_json(d));
  note_wrote(o, dec_path);

  if (trunc_keep || trunc_min_weight) {
    const bvnc::TruncationResult t =
        trunc_keep ? bvnc::truncate_keep(d, *trunc_keep)
                   : bvnc::truncate_min_weight(d, *trunc_min_weight);
    json tj = bvnc::to_json(t.decomposition);
    tj["error_bound"] = t.error_bound;
    const fs::path t_path = out_path(o, ".truncated.json");
    write_json_file(t_path, tj);
    note_wrote(o, t_path);
    if (!o.quiet)
      std::cout << "truncation: kept " << t.decomposition.terms.size()
                << " of " << d.terms.size() << " terms, error bound "
                << bvnc::format_double(t.error_bound) << "\n";
  }
  return kExitOk;
}

int run_verify(const std::string& circuit_path, const std::string& matrix_path,
               double tol, bool quiet) {
  const bvnc::Circuit c = bvnc::read_circuit(circuit_path);
  const bvnc::DenseMatrix m = bvnc::read_matrix(matrix_path);
  if (!m.is_square())
    throw bvnc::DimensionError("expected matrix must be square");
  if (!std::has_single_bit(m.rows()))
    throw bvnc::DimensionError("expected matrix size must be a power of two");
  const std::size_t n_sys =
      static_cast<std::size_t>(std::countr_zero(m.rows()));
  if (n_sys > c.n_qubits)
    throw bvnc::DimensionError(
        "expected matrix is larger than the circuit's state space");
  const std::size_t n_anc = c.n_qubits - n_sys;

  const bvnc::VerificationReport rep =
      bvnc::verify_block_encoding(c, n_anc, m, tol);
  if (!quiet) {
    std::cout << "circuit: " << c.n_qubits << " qubits, "
              << bvnc::gate_count(c) << " gates (" << n_anc << " ancillas)\n"
              << "max deviation: " << bvnc::format_double(rep.max_abs_error)
              << " (tol " << bvnc::format_double(tol) << ")\n"
              << "unitarity defect: "
              << bvnc::format_double(rep.unitarity_defect) << "\n"
              << "verification: " << (rep.ok ? "PASS" : "FAIL") << "\n";
  }
  return rep.ok ? kExitOk : kExitVerifyFail;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const bvnc::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const bvnc::DecompositionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const bvnc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compiles real matrices into verified block-encoding circuits "
               "via Birkhoff-von Neumann decomposition"};
  app.require_subcommand(1);

  CommonOpts scale_o, compile_o, dec_o;
  std::string mode = "auto";
  double scale_tol = bvnc::kDefaultScalingTol;
  std::size_t max_iters = bvnc::kDefaultScalingMaxIters;

  CLI::App* scale = app.add_subcommand(
      "scale", "convert a matrix to doubly stochastic form");
  scale->add_option("--input", scale_o.input, "matrix file (.csv or .mtx)")
      ->required();
  scale->add_option("--output-dir", scale_o.output_dir, "output directory");
  scale->add_option("--mode", mode, "conversion route")
      ->check(CLI::IsMember({"auto", "sinkhorn", "embed", "circulant"}));
  scale->add_option("--tol", scale_tol, "stochasticity tolerance");
  scale->add_option("--max-iters", max_iters, "sinkhorn sweep limit");
  scale->add_flag("--quiet", scale_o.quiet, "suppress the report");

  double compile_tol = 1e-10;
  std::size_t compile_iters = bvnc::kDefaultScalingMaxIters;
  std::size_t kmax = 0;
  std::string scheme = "star";
  std::string passes = "auto";
  std::string emit = "both";

  CLI::App* compile = app.add_subcommand(
      "compile", "full pipeline: scale, decompose, synthesize, verify");
  compile->add_option("--input", compile_o.input, "matrix file (.csv or .mtx)")
      ->required();
  compile->add_option("--output-dir", compile_o.output_dir, "output directory");
  compile->add_option("--tol", compile_tol, "verification tolerance");
  compile->add_option("--max-iters", compile_iters, "sinkhorn sweep limit");
  compile->add_option("--kmax", kmax,
                      "term limit (0 = the (N-1)^2+1 guarantee)");
  compile->add_option("--scheme", scheme, "cycle-to-transposition scheme")
      ->check(CLI::IsMember({"star", "chain"}));
  compile->add_option("--passes", passes,
                      "optimization passes: auto (all, reorder skipped for "
                      "very large circuits), all, none, or a comma list of "
                      "reorder,reduce,group");
  compile->add_option("--emit", emit, "circuit output format")
      ->check(CLI::IsMember({"qasm", "json", "both"}));
  compile->add_flag("--quiet", compile_o.quiet, "suppress the report");

  std::size_t dec_kmax = 0;
  double dec_tol = bvnc::kDefaultDecompositionTol;
  std::optional<std::size_t> trunc_keep;
  std::optional<double> trunc_min_weight;

  CLI::App* decompose = app.add_subcommand(
      "decompose", "Birkhoff-von Neumann decomposition of a doubly "
                   "stochastic matrix");
  decompose->add_option("--input", dec_o.input, "matrix file (.csv or .mtx)")
      ->required();
  decompose->add_option("--output-dir", dec_o.output_dir, "output directory");
  decompose->add_option("--kmax", dec_kmax,
                        "term limit (0 = the (N-1)^2+1 guarantee)");
  decompose->add_option("--tol", dec_tol, "residual tolerance");
  auto* keep_opt = decompose->add_option("--truncate-keep", trunc_keep,
                                         "keep the K largest-weight terms");
  decompose
      ->add_option("--truncate-min-weight", trunc_min_weight,
                   "keep terms with weight >= W")
      ->excludes(keep_opt);
  decompose->add_flag("--quiet", dec_o.quiet, "suppress the report");

  std::string verify_circuit, verify_matrix;
  double verify_tol = 1e-10;
  bool verify_quiet = false;

  CLI::App* verify = app.add_subcommand(
      "verify", "simulate a circuit and compare its encoded block against a "
                "matrix");
  verify->add_option("circuit", verify_circuit, "circuit file (.json or .qasm)")
      ->required();
  verify->add_option("matrix", verify_matrix, "expected matrix (.csv or .mtx)")
      ->required();
  verify->add_option("--tol", verify_tol, "comparison tolerance");
  verify->add_flag("--quiet", verify_quiet, "suppress the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*scale)
    return guarded([&] { return run_scale(scale_o, mode, scale_tol, max_iters); });
  if (*compile)
    return guarded([&] {
      return run_compile(compile_o, compile_tol, compile_iters, kmax, scheme,
                         passes, emit);
    });
  if (*decompose)
    return guarded([&] {
      return run_decompose(dec_o, dec_kmax, dec_tol, trunc_keep,
                           trunc_min_weight);
    });
  return guarded([&] {
    return run_verify(verify_circuit, verify_matrix, verify_tol, verify_quiet);
  });
}
