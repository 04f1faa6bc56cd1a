// homlab: run verification suites and emit quivers and tables.
//
//   homlab verify <id>|all [--prime P] [--seed S] [--window LO HI] [--cap C] [--jobs J] [--out FILE]
//   homlab emit <ar-quiver|stable-ar-quiver|ext-table|tilting-report> --algebra A --out FILE --format dot|json
//
// Exit status: 0 all checks pass, 1 some check fails, 2 usage error, 3 runtime or I/O error.

#include "homlab/derived.hpp"
#include "homlab/exercises.hpp"
#include "homlab/frobenius.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>

using namespace homlab;

namespace {

constexpr int kFail = 1, kUsage = 2, kRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

int verify(const std::string& id, const ExerciseOptions& opts, int jobs, const std::string& out) {
  std::vector<std::string> ids{id};
  if (id == "all") {
    ids = exercise_ids();
  } else {
    const auto known = exercise_ids();
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      try {
        run_exercise(id, opts);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }

  std::vector<Report> reports(ids.size());
  for (std::size_t start = 0; start < ids.size(); start += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<Report>> batch;
    const std::size_t end = std::min(ids.size(), start + static_cast<std::size_t>(jobs));
    for (std::size_t i = start; i < end; ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run_exercise, ids[i], opts));
    for (std::size_t i = start; i < end; ++i) reports[i] = batch[i - start].get();
  }

  bool pass = true;
  Json doc;
  if (id == "all") {
    doc["reports"] = Json::array();
    for (const auto& r : reports) {
      doc["reports"].push_back(report_to_json(r));
      pass = pass && r.pass();
    }
    doc["pass"] = pass;
  } else {
    doc = report_to_json(reports.front());
    pass = reports.front().pass();
  }
  write_output(out, doc.dump(2) + "\n");

  for (const auto& r : reports) {
    std::cerr << (r.pass() ? "PASS " : "FAIL ") << r.id << "\n";
    for (const auto& c : r.checks)
      if (!c.pass()) std::cerr << "  " << c.name << ": expected " << c.expected << ", got " << c.got << "\n";
  }
  return pass ? 0 : kFail;
}

Json tilting_json(const std::string& target, std::uint32_t p, int cap) {
  const TiltingReport r = tilting_check(tilting_module_for(target, p), preset(target, p), -2, 2, cap);
  Json j;
  j["module_algebra"] = "lambda1";
  j["target"] = target;
  j["prime"] = p;
  j["end_dim"] = r.end_dim;
  j["iso_found"] = r.iso_found;
  j["side"] = r.side;
  j["shift_window"] = {r.shift_lo, r.shift_hi};
  j["injective"] = r.injective;
  j["rows"] = Json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"src", row.src}, {"dst", row.dst}, {"degree", row.degree}, {"dim", row.dim}});
  return j;
}

int emit(const std::string& what, const std::string& algebra, const std::string& out, const std::string& format,
         std::uint32_t prime, int cap) {
  const bool quiver = what == "ar-quiver" || what == "stable-ar-quiver";
  if (!quiver && format == "dot") throw UsageError(what + " is a table; only --format json is available");
  const std::uint32_t p = classification_prime(prime);
  const AlgPtr alg = load_algebra(algebra, p);

  std::string text;
  if (quiver) {
    const Quiver q = what == "ar-quiver" ? ar_quiver(alg) : stable_indecomposables(alg).quiver;
    text = format == "dot" ? quiver_to_dot(q, algebra) : quiver_to_json(q, algebra, p).dump(2) + "\n";
  } else if (what == "ext-table") {
    text = table_to_json(algebra, p, ext_table(alg, 4, cap)).dump(2) + "\n";
  } else {
    text = tilting_json(algebra, p, cap).dump(2) + "\n";
  }
  write_output(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact homological algebra over F_p: verification suites and quiver/table emission"};
  app.require_subcommand(1);

  ExerciseOptions opts;
  std::string id, out;
  std::pair<int, int> window{opts.window_lo, opts.window_hi};
  int jobs = 1;
  auto* v = app.add_subcommand("verify", "Run the checks for one exercise id, or all of them");
  v->add_option("id", id, "Exercise id or 'all'")->required();
  v->add_option("--prime", opts.prime, "Field characteristic")->capture_default_str()->check(CLI::PositiveNumber);
  v->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
  v->add_option("--window", window, "Complete-resolution window LO HI")->capture_default_str();
  v->add_option("--cap", opts.cap, "Resolution length cap")->capture_default_str()->check(CLI::PositiveNumber);
  v->add_option("--jobs", jobs, "Exercises run concurrently")->capture_default_str()->check(CLI::PositiveNumber);
  v->add_option("--out", out, "Report path (default stdout)");

  std::string what, algebra, eout, format = "json";
  std::uint32_t eprime = 2;
  int ecap = 12;
  auto* e = app.add_subcommand("emit", "Write an AR quiver, stable AR quiver, Ext table or tilting report");
  e->add_option("what", what, "Artifact")
      ->required()
      ->check(CLI::IsMember({"ar-quiver", "stable-ar-quiver", "ext-table", "tilting-report"}));
  e->add_option("--algebra", algebra, "Preset name or algebra JSON path")->required();
  e->add_option("--out", eout, "Output path ('-' for stdout)")->required();
  e->add_option("--format", format, "dot or json")->capture_default_str()->check(CLI::IsMember({"dot", "json"}));
  e->add_option("--prime", eprime, "Field characteristic (3 selects p = 3, otherwise 2)")->capture_default_str();
  e->add_option("--cap", ecap, "Resolution length cap")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*v) {
      opts.window_lo = window.first;
      opts.window_hi = window.second;
      if (opts.window_lo > -2 || opts.window_hi < 2) throw UsageError("--window must contain [-2, 2]");
      return verify(id, opts, jobs, out);
    }
    return emit(what, algebra, eout, format, eprime, ecap);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kRuntime;
  }
}
