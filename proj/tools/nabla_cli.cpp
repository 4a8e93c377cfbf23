// nabla: compute torsion/curvature tensors, exact ranks, and run the verification suite.
//
//   nabla compute {torsion|curvature|normal0|normal1|generators|dtor|dR} --connection FILE [--out PATH]
//   nabla rank FILE... [--kernel] [--format json|text]
//   nabla verify [TARGET] [--connection FILE] [--seed N] [--count N] [--format json|text] [--out PATH]
//
// Exit status: 0 on success (for verify: every verdict passed), 1 when a verdict
// fails, 2 on usage or input errors.

#include "nabla/nabla.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace nabla;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct LoadedConnection {
  Connection connection;
  std::string origin;
  std::string digest;
};

LoadedConnection load_connection(const std::string& path) {
  if (path.empty()) {
    Connection c = reference_connection();
    return {c, "built-in test connection", sha256_hex(connection_to_json(c).dump())};
  }
  std::string text = slurp(path);
  return {connection_from_string(text), path, sha256_hex(text)};
}

void log_run(const std::string& command, const std::string& digest, const std::string& extra = "") {
  std::cerr << "nabla " << kVersion << " " << command << " input-sha256=" << digest;
  if (!extra.empty()) std::cerr << " " << extra;
  std::cerr << "\n";
}

// Writes to a sibling temp file and renames, so readers never see a partial report.
void write_atomically(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, target);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_atomically(out_path, content);
}

// --- compute ---------------------------------------------------------------

int cmd_compute(const std::string& what, const std::string& connection_path, const std::string& out) {
  auto loaded = load_connection(connection_path);
  log_run("compute " + what, loaded.digest);
  const Connection& c = loaded.connection;

  if (what == "generators") {
    if (out.empty()) throw CLI::ValidationError("--out", "compute generators needs --out <dir>");
    fs::create_directories(out);
    auto fam = build_T_list(c);
    nlohmann::json manifest = {{"connection_sha256", loaded.digest},
                               {"variants", {{"T16", to_string(fam.variants.t16)}, {"T19", to_string(fam.variants.t19)}}},
                               {"generators", nlohmann::json::array()}};
    auto diffs = generator_differentials(c, fam);
    for (std::size_t k = 0; k < fam.size(); ++k) {
      const auto& g = fam.entries[k];
      std::string file = g.label + ".json", dfile = "d" + g.label + ".json";
      write_atomically((fs::path(out) / file).string(), tensor_to_json(g.field).dump(2) + "\n");
      write_atomically((fs::path(out) / dfile).string(), tensor_to_json(diffs[k]).dump(2) + "\n");
      manifest["generators"].push_back({{"label", g.label},
                                        {"source", g.source},
                                        {"expression", g.expression},
                                        {"file", file},
                                        {"differential_file", dfile}});
    }
    write_atomically((fs::path(out) / "manifest.json").string(), manifest.dump(2) + "\n");
    std::cerr << "wrote " << fam.size() << " generators and their differentials to " << out << "\n";
    return 0;
  }

  TensorField result;
  if (what == "torsion")
    result = torsion(c).field();
  else if (what == "curvature")
    result = curvature(c).field();
  else if (what == "normal0")
    result = normal0(c);
  else if (what == "normal1")
    result = normal1(c);
  else if (what == "dtor")
    result = ext_cov_deriv_vector(c, torsion(c)).field();
  else if (what == "dR")
    result = ext_cov_deriv_endo(c, curvature(c)).field();
  else
    throw CLI::ValidationError("compute", "unknown quantity '" + what + "'");
  emit(out, tensor_to_json(result).dump(2) + "\n");
  return 0;
}

// --- rank ------------------------------------------------------------------

int cmd_rank(const std::vector<std::string>& paths, bool kernel, const std::string& format) {
  std::vector<TensorField> fields;
  std::string digests;
  for (const auto& p : paths) {
    std::string text = slurp(p);
    digests += sha256_hex(text);
    try {
      fields.push_back(tensor_from_json(nlohmann::json::parse(text)));
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("'" + p + "': " + e.what());
    }
  }
  log_run("rank", sha256_hex(digests), "files=" + std::to_string(paths.size()));
  auto f = flatten(fields);
  std::size_t r = rank(f.matrix);
  std::vector<RationalVector> basis;
  if (kernel) basis = kernel_basis(f.matrix);

  if (format == "json") {
    nlohmann::json j = {{"rank", r}, {"columns", fields.size()}, {"rows", f.matrix.rows()}};
    if (kernel) j["kernel"] = detail::vectors_json(basis);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "rank " << r << " (" << fields.size() << " tensors, " << f.matrix.rows() << " coordinates)\n";
    if (kernel) {
      std::cout << "kernel dimension " << basis.size() << "\n";
      for (const auto& v : basis) {
        std::cout << "  [";
        for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? ", " : "") << v[i].get_str();
        std::cout << "]\n";
      }
    }
  }
  return 0;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(const std::string& target, const std::string& connection_path, std::uint64_t seed, std::size_t count,
               const std::string& format, const std::string& out) {
  auto loaded = load_connection(connection_path);
  log_run("verify " + target, loaded.digest, "seed=" + std::to_string(seed) + " count=" + std::to_string(count) +
                                                 " connection=" + loaded.origin);
  RandomConnectionSpec spec;
  spec.seed = seed;
  auto verdicts = run_verify_target(target, loaded.connection, spec, count);
  std::string report = format == "json" ? report_json(verdicts).dump(2) + "\n" : report_text(verdicts);
  emit(out, report);
  return all_pass(verdicts) ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact torsion/curvature tensor calculus for polynomial affine connections"};
  app.set_version_flag("--version", std::string("nabla ") + kVersion);
  app.require_subcommand(1);

  std::string what, connection, out, format = "text", target = "all";
  std::vector<std::string> tensor_paths;
  bool kernel = false;
  std::uint64_t seed = 1;
  std::size_t count = 20;

  auto* compute = app.add_subcommand("compute", "compute a tensor of a connection");
  compute->add_option("what", what, "quantity to compute")
      ->required()
      ->check(CLI::IsMember({"torsion", "curvature", "normal0", "normal1", "generators", "dtor", "dR"}));
  compute->add_option("--connection", connection, "connection JSON file")->required();
  compute->add_option("--out", out, "output file (directory for generators); stdout if omitted");

  auto* rank_cmd = app.add_subcommand("rank", "exact rank of flattened tensor files");
  rank_cmd->add_option("tensors,--tensors", tensor_paths, "tensor JSON files of a common shape")->required();
  rank_cmd->add_flag("--kernel", kernel, "also print an exact kernel basis");
  rank_cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

  auto* verify = app.add_subcommand("verify", "run verification verdicts");
  verify->add_option("target", target, "verdict group")->check(CLI::IsMember(verify_targets()));
  verify->add_option("--connection", connection, "connection JSON file (default: the built-in test connection)");
  verify->add_option("--seed", seed, "seed for random connections");
  verify->add_option("--count", count, "number of random connections")->check(CLI::PositiveNumber);
  verify->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--out", out, "report file; stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(what, connection, out);
    if (*rank_cmd) return cmd_rank(tensor_paths, kernel, format);
    if (*verify) return cmd_verify(target, connection, seed, count, format, out);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
