// Command-line driver: analyze | synth | check | bench.
//
// Exit codes:
//   0  success (synth: an invariant with a term of exactly the requested
//      degree exists; check: every invariant verified)
//   1  no invariant of exactly the requested degree (synth), or nothing
//      to check (check)
//   2  input error (unreadable file, parse/validation failure, empty
//      benchmark directory)
//   3  unsupported (non-rational) closure spectrum
//   4  no defective variables: the recurrence operator is solvable
//   5  oracle mismatch

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "loopinvar/cfinite.hpp"
#include "loopinvar/dependency.hpp"
#include "loopinvar/errors.hpp"
#include "loopinvar/frontend.hpp"
#include "loopinvar/moments.hpp"
#include "loopinvar/oracle.hpp"
#include "loopinvar/serialize.hpp"
#include "loopinvar/synthesis.hpp"

namespace {

using namespace loopinvar;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

MomentContext load_context(const std::string& path) {
  return MomentContext(desugar(parse_program(read_file(path))));
}

CandMode parse_cand_mode(const std::string& mode) {
  if (mode == "pure") return CandMode::Pure;
  if (mode == "full") return CandMode::Full;
  throw Error("unknown candidate mode '" + mode + "' (expected pure or full)");
}

std::vector<Exp> parse_degrees(const std::string& spec) {
  std::vector<Exp> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stoul(tok));
    } else {
      unsigned long lo = std::stoul(tok.substr(0, dots));
      unsigned long hi = std::stoul(tok.substr(dots + 2));
      for (unsigned long d = lo; d <= hi; ++d) out.push_back(d);
    }
  }
  if (out.empty()) throw Error("empty degree list '" + spec + "'");
  for (Exp d : out) {
    if (d == 0) throw Error("degrees must be at least 1");
  }
  return out;
}

int cmd_analyze(const std::string& file, const std::string& format,
                const std::string& dot_file) {
  const MomentContext ctx = load_context(file);
  const DependencyGraph g = build_graph(ctx);
  const Partition part = partition_variables(g);
  if (!dot_file.empty()) {
    std::ofstream out(dot_file);
    if (!out) throw Error("cannot write " + dot_file);
    out << graph_dot(g);
  }
  if (format == "json") {
    Json j = partition_json(part, ctx.program().vars);
    Json edges = Json::array();
    for (const auto& [edge, label] : g.edges) {
      Json e;
      e["from"] = g.names[edge.first];
      e["to"] = g.names[edge.second];
      e["label"] = label == EdgeLabel::N ? "N" : "L";
      edges.push_back(std::move(e));
    }
    j["edges"] = std::move(edges);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << partition_text(part, ctx.program().vars);
  }
  return 0;
}

int cmd_synth(const std::string& file, Exp degree, const std::string& mode,
              const std::string& format) {
  const MomentContext ctx = load_context(file);
  const SynthesisResult res = synthesize(ctx, degree, parse_cand_mode(mode));
  const std::string name = std::filesystem::path(file).stem().string();
  if (format == "json") {
    std::cout << synthesis_json(res, ctx.program().vars, name).dump(2) << '\n';
  } else {
    std::cout << synthesis_text(res, ctx.program().vars);
  }
  return res.has_exact_degree ? 0 : 1;
}

int cmd_check(const std::string& file, Exp degree, const std::string& mode,
              unsigned long iterations, const std::string& format) {
  const MomentContext ctx = load_context(file);
  const SynthesisResult res = synthesize(ctx, degree, parse_cand_mode(mode));
  const std::string name = std::filesystem::path(file).stem().string();
  if (res.invariants.empty()) {
    std::cerr << "nothing to check: no invariant of degree up to " << degree
              << '\n';
    return 1;
  }
  bool all_pass = true;
  Json arr = Json::array();
  for (const Invariant& inv : res.invariants) {
    const CheckReport report = check_invariant(ctx, inv, iterations);
    if (!report.pass) all_pass = false;
    if (format == "json") {
      Json j;
      j["invariant"] = invariant_json(inv, res.candidate, ctx.program().vars, name);
      j["check"] = check_json(report);
      arr.push_back(std::move(j));
    } else {
      std::cout << invariant_text(inv, ctx.program().vars);
      std::cout << check_text(report);
    }
  }
  if (format == "json") std::cout << arr.dump(2) << '\n';
  return all_pass ? 0 : 5;
}

struct BenchRow {
  std::string name;
  Exp degree = 1;
  std::string outcome;
  long elapsed_ms = 0;
  std::size_t candidates = 0;
  std::size_t equations = 0;
};

int cmd_bench(const std::string& dir, const std::string& degrees_spec,
              double timeout_secs, unsigned jobs, const std::string& mode) {
  const std::vector<Exp> degrees = parse_degrees(degrees_spec);
  const CandMode cand_mode = parse_cand_mode(mode);

  std::vector<std::string> files;
  if (!std::filesystem::is_directory(dir)) {
    std::cerr << "not a directory: " << dir << '\n';
    return 2;
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".loop") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no .loop files in " << dir << '\n';
    return 2;
  }

  struct Job {
    std::size_t file_idx;
    Exp degree;
  };
  std::vector<Job> queue;
  for (std::size_t f = 0; f < files.size(); ++f) {
    for (Exp d : degrees) queue.push_back({f, d});
  }
  std::vector<BenchRow> rows(queue.size());

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= queue.size()) return;
      const Job& job = queue[i];
      BenchRow row;
      row.name = std::filesystem::path(files[job.file_idx]).stem().string();
      row.degree = job.degree;
      const auto start = std::chrono::steady_clock::now();
      try {
        const MomentContext ctx = load_context(files[job.file_idx]);
        const Deadline dl = Deadline::after_seconds(timeout_secs);
        const SynthesisResult res = synthesize(ctx, job.degree, cand_mode, dl);
        row.candidates = res.candidate.size();
        row.equations = res.equation_count;
        if (res.has_exact_degree) {
          row.outcome = "found-at-this-degree";
        } else if (!res.invariants.empty()) {
          row.outcome = "found-lower-degree-only";
        } else {
          row.outcome = "none";
        }
      } catch (const TimeoutError&) {
        row.outcome = "timeout";
      } catch (const UnsupportedSpectrumError&) {
        row.outcome = "unsupported-spectrum";
      } catch (const Error& e) {
        std::scoped_lock lock(err_mu);
        row.outcome = "none";
        std::cerr << row.name << " d=" << row.degree << ": " << e.what() << '\n';
      }
      row.elapsed_ms = static_cast<long>(
          std::chrono::duration_cast<std::chrono::milliseconds>(
              std::chrono::steady_clock::now() - start)
              .count());
      rows[i] = std::move(row);
    }
  };

  const unsigned nthreads = std::max(1u, jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Star grid on stdout.
  std::size_t name_w = 9;
  for (const auto& f : files) {
    name_w = std::max(name_w, std::filesystem::path(f).stem().string().size());
  }
  std::cout << "benchmark";
  for (std::size_t i = 9; i < name_w; ++i) std::cout << ' ';
  for (Exp d : degrees) std::cout << "  d=" << d;
  std::cout << '\n';
  for (std::size_t f = 0; f < files.size(); ++f) {
    const std::string name = std::filesystem::path(files[f]).stem().string();
    std::cout << name;
    for (std::size_t i = name.size(); i < name_w; ++i) std::cout << ' ';
    for (std::size_t d = 0; d < degrees.size(); ++d) {
      const BenchRow& row = rows[f * degrees.size() + d];
      char cell = '-';
      if (row.outcome == "found-at-this-degree") cell = '*';
      if (row.outcome == "timeout") cell = 't';
      if (row.outcome == "unsupported-spectrum") cell = 'x';
      std::cout << "  " << cell;
      for (std::size_t i = 1; i < 2 + std::to_string(degrees[d]).size(); ++i) {
        std::cout << ' ';
      }
    }
    std::cout << '\n';
  }

  std::ofstream csv("bench_results.csv");
  csv << "benchmark,degree,outcome,elapsed_ms,candidate_count,equation_count\n";
  for (const BenchRow& row : rows) {
    csv << row.name << ',' << row.degree << ',' << row.outcome << ','
        << row.elapsed_ms << ',' << row.candidates << ',' << row.equations
        << '\n';
  }

  Json arr = Json::array();
  for (const BenchRow& row : rows) {
    Json j;
    j["benchmark"] = row.name;
    j["degree"] = static_cast<std::uint64_t>(row.degree);
    j["outcome"] = row.outcome;
    j["elapsed_ms"] = row.elapsed_ms;
    j["candidate_count"] = row.candidates;
    j["equation_count"] = row.equations;
    arr.push_back(std::move(j));
  }
  std::ofstream json_out("bench_results.json");
  json_out << arr.dump(2) << '\n';

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact polynomial invariants for probabilistic loops"};
  app.require_subcommand(1);

  std::string file;
  std::string format = "text";
  std::string dot_file;
  std::string mode = "pure";
  Exp degree = 1;
  unsigned long iterations = 8;
  std::string dir;
  std::string degrees_spec = "1..3";
  double timeout_secs = 60.0;
  unsigned jobs = 1;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "variable dependency analysis and solvability");
  analyze->add_option("file", file, "loop program")->required();
  analyze->add_option("--format", format, "text or json");
  analyze->add_option("--dot", dot_file, "write the dependency graph here");

  CLI::App* synth =
      app.add_subcommand("synth", "synthesize invariants at one degree");
  synth->add_option("file", file, "loop program")->required();
  synth->add_option("-d,--degree", degree, "candidate degree bound");
  synth->add_option("--mode", mode, "candidate monomials: pure or full");
  synth->add_option("--format", format, "text or json");

  CLI::App* check = app.add_subcommand(
      "check", "synthesize and verify against the exact oracle");
  check->add_option("file", file, "loop program")->required();
  check->add_option("-d,--degree", degree, "candidate degree bound");
  check->add_option("--mode", mode, "candidate monomials: pure or full");
  check->add_option("-n,--iterations", iterations, "verify up to this n");
  check->add_option("--format", format, "text or json");

  CLI::App* bench = app.add_subcommand(
      "bench", "run a directory of .loop programs at several degrees");
  bench->add_option("dir", dir, "benchmark directory")->required();
  bench->add_option("--degrees", degrees_spec, "degrees, e.g. 2 or 1..3");
  bench->add_option("--timeout-secs", timeout_secs, "per-job time limit");
  bench->add_option("-j,--jobs", jobs, "worker threads");
  bench->add_option("--mode", mode, "candidate monomials: pure or full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (analyze->parsed()) return cmd_analyze(file, format, dot_file);
    if (synth->parsed()) return cmd_synth(file, degree, mode, format);
    if (check->parsed()) {
      return cmd_check(file, degree, mode, iterations, format);
    }
    if (bench->parsed()) {
      return cmd_bench(dir, degrees_spec, timeout_secs, jobs, mode);
    }
  } catch (const UnsupportedSpectrumError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NoDefectiveVariablesError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
