#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include <dkscale/dkscale.hpp>
#include <dkscale/json_io.hpp>

namespace fs = std::filesystem;

namespace dkscale::cli {

using json::Json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw CliError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  s.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[digest[i] >> 4];
    s += hex[digest[i] & 0xF];
  }
  return s;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError("cannot write '" + path + "'");
  f << content;
  if (!f) throw CliError("write failed for '" + path + "'");
}

// Output paths are checked up front so nothing is computed for nothing.
void require_writable_parent(const std::string& path) {
  if (path.empty()) return;
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw CliError("output directory '" + parent.string() + "' does not exist");
}

struct LoadedGraph {
  std::string bytes;
  DirectedGraph graph;
};

LoadedGraph load_graph(const std::string& path) {
  LoadedGraph g;
  g.bytes = read_file(path);
  try {
    g.graph = parse_edge_list(std::string_view(g.bytes)).graph;
  } catch (const ParseError& e) {
    throw CliError(path + ": " + e.what());
  }
  return g;
}

/// Writes to --out when given, else to the command's stdout.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty())
    out << text;
  else
    write_file(cfg.out, text);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

template <class T>
std::string matrix_tsv(const DegreeMatrix<T>& m) {
  std::ostringstream ss;
  write_matrix_tsv(m, ss);
  return ss.str();
}

std::string fixed(double v, int decimals) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(decimals) << v;
  return ss.str();
}

// Entries whose value differs between two matrices, over the union of
// supports.
template <class T>
std::size_t mismatches(const DegreeMatrix<T>& x, const DegreeMatrix<T>& y) {
  std::size_t n = 0;
  for (const auto& [key, v] : x.entries()) n += y.at(key.row, key.col) != v;
  for (const auto& [key, v] : y.entries()) n += x.at(key.row, key.col) == 0;
  return n;
}

}  // namespace

int cmd_stats(const RunConfig& cfg, std::ostream& out) {
  require_writable_parent(cfg.out);
  auto g = load_graph(cfg.input);
  SparsityReport r;
  try {
    r = sparsity_report(g.graph);
  } catch (const std::domain_error& e) {
    throw CliError(e.what());
  }
  if (cfg.format == Format::Json) {
    emit(cfg, out, dump(json::sparsity(r)));
    return kExitOk;
  }
  const std::vector<std::string> head{"N", "E", "#DCM", "#JDM", "%DCM", "%JDM"};
  const std::vector<std::string> row{std::to_string(r.n), std::to_string(r.e),
                                     std::to_string(r.nnz_dcm), std::to_string(r.nnz_jdm),
                                     fixed(json::percent(r.pct_dcm), 2) + "%",
                                     fixed(json::percent(r.pct_jdm), 2) + "%"};
  std::ostringstream ss;
  if (cfg.format == Format::Tsv) {
    for (std::size_t c = 0; c < head.size(); ++c) ss << head[c] << (c + 1 < head.size() ? '\t' : '\n');
    for (std::size_t c = 0; c < row.size(); ++c) ss << row[c] << (c + 1 < row.size() ? '\t' : '\n');
  } else {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
        int w = static_cast<int>(std::max(head[c].size(), row[c].size())) + 2;
        ss << std::left << std::setw(w) << cells[c];
      }
      ss << cells.back() << '\n';
    };
    line(head);
    line(row);
  }
  emit(cfg, out, ss.str());
  return kExitOk;
}

int cmd_matrices(const RunConfig& cfg, std::ostream& out) {
  require_writable_parent(cfg.out);
  auto g = load_graph(cfg.input);
  auto jdm = extract_jdm(g.graph);
  auto dcm = extract_dcm(g.graph);
  if (cfg.format == Format::Json) {
    Json j = json::document("matrices");
    j["jdm"] = json::matrix(jdm);
    j["dcm"] = json::matrix(dcm);
    emit(cfg, out, dump(j));
    return kExitOk;
  }
  std::ostringstream ss;
  ss << "% jdm\n";
  write_matrix_tsv(jdm, ss);
  ss << "% dcm\n";
  write_matrix_tsv(dcm, ss);
  emit(cfg, out, ss.str());
  return kExitOk;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  if (cfg.k <= 0) throw CliError("--k must be positive");
  require_writable_parent(cfg.out);
  std::string record_path = cfg.record_path;
  if (record_path.empty() && !cfg.out.empty()) record_path = cfg.out + ".record.json";
  require_writable_parent(record_path);
  if (cfg.dump_dir) {
    std::error_code ec;
    fs::create_directories(*cfg.dump_dir, ec);
    if (!fs::is_directory(*cfg.dump_dir)) throw CliError("cannot create '" + *cfg.dump_dir + "'");
  }

  auto g = load_graph(cfg.input);
  if (g.graph.empty()) throw CliError(cfg.input + ": graph is empty");

  SampleRun run = sample_graph_input(g.graph, cfg.k, cfg.seed, {cfg.rounding, cfg.refined_bounds});

  Json record = json::run_record(run);
  record["inputs"] = {{"original", {{"sha256", sha256_hex(g.bytes)},
                                    {"nodes", g.graph.node_count()},
                                    {"edges", g.graph.edge_count()}}}};

  if (cfg.dump_dir) {
    fs::path dir(*cfg.dump_dir);
    write_file((dir / "jdm.tsv").string(), matrix_tsv(run.a));
    write_file((dir / "dcm.tsv").string(), matrix_tsv(run.b));
    write_file((dir / "jdm_scaled.tsv").string(), matrix_tsv(run.rescaled.a_ring));
    write_file((dir / "dcm_scaled.tsv").string(), matrix_tsv(run.rescaled.b_ring));
    write_file((dir / "jdm_rounded.tsv").string(), matrix_tsv(run.rescaled.a_prime));
    write_file((dir / "dcm_rounded.tsv").string(), matrix_tsv(run.rescaled.b_prime));
    if (run.adjustment) {
      std::ostringstream ss;
      ss << "axis\tdegree\tdelta\n";
      for (const auto& [d, v] : run.adjustment->r_delta) ss << "row\t" << d << '\t' << v << '\n';
      for (const auto& [d, v] : run.adjustment->c_delta) ss << "col\t" << d << '\t' << v << '\n';
      write_file((dir / "deltas.tsv").string(), ss.str());
    }
    if (run.success) {
      write_file((dir / "adjustment.tsv").string(), matrix_tsv(run.success->adjustment));
      write_file((dir / "jdm_target.tsv").string(), matrix_tsv(run.success->a_target));
      write_file((dir / "dcm_target.tsv").string(), matrix_tsv(run.success->b_target));
    }
  }

  if (!run.ok()) {
    if (!record_path.empty()) write_file(record_path, dump(record));
    Json d = json::document("diagnosis");
    d["diagnosis"] = json::diagnosis(*run.infeasibility);
    out << dump(d);
    return kExitInfeasible;
  }

  std::string edges = write_edge_list(run.success->graph);
  record["sample"]["sha256"] = sha256_hex(edges);
  emit(cfg, out, edges);
  if (!record_path.empty()) write_file(record_path, dump(record));
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  require_writable_parent(cfg.out);
  auto original = load_graph(cfg.input);
  auto sampled = load_graph(cfg.sample_path);
  Json record;
  try {
    record = Json::parse(read_file(cfg.record_path));
  } catch (const Json::parse_error& e) {
    throw CliError(cfg.record_path + ": " + e.what());
  }

  Json report = json::document("verify");
  bool hashes_ok = true;
  bool matrices_ok = true;
  try {
    if (record.at("schema_version").get<int>() != json::kSchemaVersion)
      throw CliError("unsupported record schema_version");
    if (record.at("outcome").get<std::string>() != "success")
      throw CliError("record describes an infeasible run; there is no sample to verify");

    const std::string h_orig = sha256_hex(original.bytes);
    const std::string h_samp = sha256_hex(sampled.bytes);
    const bool orig_match = record.at("inputs").at("original").at("sha256").get<std::string>() == h_orig;
    const bool samp_match = record.at("sample").at("sha256").get<std::string>() == h_samp;
    hashes_ok = orig_match && samp_match;
    report["hashes"] = {{"original", orig_match ? "match" : "mismatch"},
                        {"sample", samp_match ? "match" : "mismatch"}};

    const Json& m = record.at("matrices");
    auto jdm = json::count_matrix(m.at("jdm"), MatrixKind::JDM);
    auto dcm = json::count_matrix(m.at("dcm"), MatrixKind::DCM);
    auto jdm_target = json::count_matrix(m.at("jdm_target"), MatrixKind::JDM);
    auto dcm_target = json::count_matrix(m.at("dcm_target"), MatrixKind::DCM);
    auto a_ring = json::rational_matrix(m.at("jdm_scaled"), MatrixKind::JDM);
    auto b_ring = json::rational_matrix(m.at("dcm_scaled"), MatrixKind::DCM);
    const Count p = record.at("adjustment").at("p").get<Count>();
    const bool refined = record.at("refined_bounds").get<bool>();

    Json mm;
    mm["jdm_original"] = mismatches(extract_jdm(original.graph), jdm);
    mm["dcm_original"] = mismatches(extract_dcm(original.graph), dcm);
    mm["jdm_sample"] = mismatches(extract_jdm(sampled.graph), jdm_target);
    mm["dcm_sample"] = mismatches(extract_dcm(sampled.graph), dcm_target);
    for (const auto& [_, v] : mm.items()) matrices_ok = matrices_ok && v.get<std::size_t>() == 0;
    report["mismatches"] = mm;

    if (original.graph.empty() || sampled.graph.empty()) throw CliError("cannot verify an empty graph");
    DistributionSet d_orig = distributions(original.graph);
    DistributionSet d_samp = distributions(sampled.graph);

    // The sample's marginals must be those of the recorded DCM target.
    DistributionSet d_target = distributions(jdm_target, dcm_target);
    report["marginals_match"] =
        d_samp.in_degree == d_target.in_degree && d_samp.out_degree == d_target.out_degree;

    DistributionDistance dist = distribution_distance(d_orig, d_samp);
    auto pair = [](const Rational& l1) {
      return Json{{"l1", json::number(l1)}, {"tv", json::number(DistributionDistance::tv(l1))}};
    };
    report["distances"] = {{"in_degree", pair(dist.in_degree)},
                           {"out_degree", pair(dist.out_degree)},
                           {"correlation", pair(dist.degree_correlation)},
                           {"joint", pair(dist.joint_degree)}};

    DeviationReport dev = verify_bounds(d_samp, deviation_bounds(a_ring, b_ring, p, refined));
    dev.params.k = parse_rational(record.at("k").get<std::string>());
    report["deviation"] = json::deviation(dev);
  } catch (const Json::exception& e) {
    throw CliError(cfg.record_path + ": malformed record (" + e.what() + ")");
  }

  if (cfg.format == Format::Json) {
    emit(cfg, out, dump(report));
  } else {
    std::ostringstream ss;
    ss << "hashes: original " << report["hashes"]["original"].get<std::string>() << ", sample "
       << report["hashes"]["sample"].get<std::string>() << '\n';
    for (const auto& [k, v] : report["mismatches"].items()) ss << "mismatch " << k << ": " << v << '\n';
    ss << "marginals: " << (report["marginals_match"].get<bool>() ? "match" : "differ") << '\n';
    for (const auto& [k, v] : report["distances"].items())
      ss << "distance " << k << ": l1 " << v["l1"].dump() << ", tv " << v["tv"].dump() << '\n';
    for (const auto& [k, v] : report["deviation"]["summary"].items()) ss << "bounds " << k << ": " << v << '\n';
    emit(cfg, out, ss.str());
  }
  if (!hashes_ok) throw CliError("record does not match inputs");
  if (!matrices_ok) throw CliError("sample does not realize the recorded matrices");
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degree-preserving down-scaling of directed graphs", "dkscale"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "text";
  std::string rounding = "paper";
  std::string refined = "on";
  std::string dump_dir;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "tsv", "text"}));
    sub->add_option("--out", cfg.out, "Output path (default stdout)");
  };

  auto* stats = app.add_subcommand("stats", "Node, edge and matrix sparsity counts");
  stats->add_option("input", cfg.input, "Edge list")->required();
  add_format(stats);

  auto* matrices = app.add_subcommand("matrices", "Joint degree and degree correlation matrices");
  matrices->add_option("input", cfg.input, "Edge list")->required();
  add_format(matrices);

  auto* samp = app.add_subcommand("sample", "Build a scaled-down graph");
  samp->add_option("input", cfg.input, "Edge list")->required();
  samp->add_option("--k", cfg.k_text, "Sample coefficient, decimal or p/q")->required();
  samp->add_option("--seed", cfg.seed, "Tie-break seed");
  samp->add_option("--rounding", rounding, "Integerization")
      ->check(CLI::IsMember({"paper", "floor-floor", "ceil-ceil", "round-round"}));
  samp->add_option("--refined-bounds", refined, "Sparsity-refined bounds")->check(CLI::IsMember({"on", "off"}));
  samp->add_option("--dump-intermediates", dump_dir, "Directory for intermediate matrices");
  samp->add_option("--record", cfg.record_path, "Run record path (default <out>.record.json)");
  add_format(samp);

  auto* ver = app.add_subcommand("verify", "Check a sample against its run record");
  ver->add_option("original", cfg.input, "Original edge list")->required();
  ver->add_option("sample", cfg.sample_path, "Sample edge list")->required();
  ver->add_option("record", cfg.record_path, "Run record")->required();
  add_format(ver);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    cfg.format = format == "json" ? Format::Json : format == "tsv" ? Format::Tsv : Format::Text;
    cfg.rounding = parse_rounding_mode(rounding);
    cfg.refined_bounds = refined == "on";
    if (!dump_dir.empty()) cfg.dump_dir = dump_dir;
    if (*samp) {
      try {
        cfg.k = parse_rational(cfg.k_text);
      } catch (const std::invalid_argument& e) {
        throw CliError(std::string("--k: ") + e.what());
      }
      return cmd_sample(cfg, out);
    }
    if (*stats) return cmd_stats(cfg, out);
    if (*matrices) return cmd_matrices(cfg, out);
    return cmd_verify(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace dkscale::cli
