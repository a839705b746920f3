// Copyright 2026 The sophgrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sophgrade command-line entry point.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sophgrade/analysis.hpp"
#include "sophgrade/calibration.hpp"
#include "sophgrade/error.hpp"
#include "sophgrade/grading_http.hpp"
#include "sophgrade/grading_service.hpp"
#include "sophgrade/taxonomy.hpp"

namespace fs = std::filesystem;
using namespace sophgrade;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::string catalog;
  std::uint64_t seed = 0;
  bool quiet = false;
};

void log(const Globals& g, const std::string& message) {
  if (!g.quiet) std::cerr << "sophgrade: " << message << "\n";
}

// Relative paths resolve against SOPHGRADE_DATA_DIR when it is set.
fs::path resolve(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("SOPHGRADE_DATA_DIR"); dir && *dir) return fs::path(dir) / p;
  }
  return p;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, path.string() + ": write failed");
}

std::shared_ptr<const ConstructCatalog> catalog_for(const Globals& g) {
  if (g.catalog.empty()) return std::make_shared<ConstructCatalog>(default_catalog());
  return std::make_shared<ConstructCatalog>(load_catalog(read_text(resolve(g.catalog))));
}

std::shared_ptr<const CorpusIndex> corpus_for(const std::string& path) {
  return std::make_shared<CorpusIndex>(ingest_manifest(read_text(resolve(path))));
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

HttpFrontend* g_frontend = nullptr;

extern "C" void on_signal(int) {
  if (g_frontend) g_frontend->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Psychological sophistication grading and analysis toolkit"};
  app.set_config("--config", "", "TOML/INI file supplying option defaults");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--catalog", g.catalog, "Construct catalog JSON (default: built-in)");
  app.add_option("--seed", g.seed, "Seed for every randomized step");
  app.add_flag("-q,--quiet", g.quiet, "Suppress log lines on stderr");

  // ingest
  std::string manifest, out, grades, images, family, state_path;
  std::optional<int> max_year;
  auto* ingest = app.add_subcommand("ingest", "Validate a manifest and store the corpus");
  ingest->add_option("--manifest", manifest, "Manifest (CSV or JSON)")->required();
  ingest->add_option("--out", out, "Corpus store to write")->required();
  ingest->add_option("--max-year", max_year, "Latest allowed email year");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a corpus and optional grade file");
  validate->add_option("--manifest", manifest, "Manifest or corpus store")->required();
  validate->add_option("--images", images, "Screenshot root directory");
  validate->add_option("--grades", grades, "Grade file to cross-check");

  // outliers
  std::string mask_out, report_out;
  auto* outliers = app.add_subcommand("outliers", "Apply the outlier rule to a grade file");
  outliers->add_option("--grades", grades, "Grade file")->required();
  outliers->add_option("--mask-out", mask_out, "Write the exclusion mask CSV here");
  outliers->add_option("--report-out", report_out, "Write the JSON report here");

  // alpha
  bool apply_outliers = false, as_json = false;
  auto* alpha = app.add_subcommand("alpha", "Krippendorff's alpha for one construct family");
  alpha->add_option("--family", family, "ptech or ptac")
      ->required()
      ->check(CLI::IsMember({"ptech", "ptac"}));
  alpha->add_option("--grades", grades, "Grade file")->required();
  alpha->add_flag("--apply-outliers", apply_outliers, "Drop outlier grades first");
  alpha->add_flag("--json", as_json, "Print the full result as JSON");

  // score
  auto* score = app.add_subcommand("score", "Per-email sophistication scores");
  score->add_option("--grades", grades, "Grade file")->required();
  score->add_option("--manifest", manifest, "Manifest or corpus store")->required();
  score->add_option("--out", out, "Write CSV here instead of stdout");

  // analyze
  double high_sigma = 2.0;
  auto* analyze = app.add_subcommand("analyze", "Full analysis report");
  analyze->add_option("--grades", grades, "Grade file")->required();
  analyze->add_option("--manifest", manifest, "Manifest or corpus store")->required();
  analyze->add_option("--out", out, "Output directory")->required();
  analyze->add_option("--high-sigma", high_sigma, "Disagreement threshold on sigma")
      ->check(CLI::PositiveNumber);

  // calibrate-eval
  double alpha_before = 0.0;
  std::optional<double> alpha_after;
  CalibrationConfig cal;
  std::string mid_band = "by-alpha-after";
  auto* calibrate = app.add_subcommand("calibrate-eval", "Resolution decision for a round");
  calibrate->add_option("--alpha-before", alpha_before, "Alpha of the testing round")
      ->required();
  calibrate->add_option("--alpha-after", alpha_after, "Alpha after outlier elimination");
  calibrate->add_option("--significant-gain", cal.significant_gain,
                        "Minimum alpha gain from outlier elimination");
  calibrate->add_option("--mid-band", mid_band, "by-alpha-after, proceed or revise")
      ->check(CLI::IsMember({"by-alpha-after", "proceed", "revise"}));
  calibrate->add_option("--state", state_path, "Calibration state file to update");

  // serve
  std::string host = "127.0.0.1", data_dir, batches_path;
  int port = 8080;
  double lifetime_hours = 24.0;
  bool no_deadline = false;
  auto* serve = app.add_subcommand("serve", "Run the grading HTTP service");
  serve->add_option("--manifest", manifest, "Manifest or corpus store")->required();
  serve->add_option("--data-dir", data_dir, "Grade log and session store")->required();
  serve->add_option("--images", images, "Screenshot root directory");
  serve->add_option("--batches", batches_path, "JSON object of batch id -> email ids");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Bind port")->check(CLI::Range(0, 65535));
  serve->add_option("--session-hours", lifetime_hours, "Session lifetime")
      ->check(CLI::PositiveNumber);
  serve->add_flag("--no-deadline", no_deadline, "Never expire sessions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest) {
      const auto corpus = ingest_manifest(read_text(resolve(manifest)), max_year);
      write_text(resolve(out), serialize_corpus(corpus));
      std::cout << "ingested " << corpus.size() << " emails (";
      for (std::size_t i = 0; i < kEmailTypes.size(); ++i) {
        if (i) std::cout << ", ";
        std::cout << email_type_name(kEmailTypes[i]) << " "
                  << fixed(corpus.percentage(kEmailTypes[i]), 2) << "%";
      }
      std::cout << ")\n";
    } else if (*validate) {
      const auto corpus = corpus_for(manifest);
      std::optional<fs::path> root;
      if (!images.empty()) root = resolve(images);
      const auto report = validate_corpus(*corpus, root);
      std::cout << validation_report_json(report);
      if (!grades.empty()) {
        const auto m = load_grades(read_text(resolve(grades)), catalog_for(g), corpus.get());
        log(g, "grade file ok: " + std::to_string(m.grade_count()) + " grades over " +
                   std::to_string(m.email_count()) + " emails");
      }
      if (!report.clean()) {
        log(g, "corpus has " + std::to_string(report.missing_screenshots.size()) +
                   " missing screenshots and " +
                   std::to_string(report.reconstructed_unsanitized.size()) +
                   " unsanitized reconstructions");
        return kExitDomain;
      }
    } else if (*outliers) {
      const auto m = load_grades(read_text(resolve(grades)), catalog_for(g));
      const auto result = apply_outlier_rule(m);
      const auto& r = result.report;
      if (!mask_out.empty()) write_text(resolve(mask_out), export_mask(m, result.mask));
      if (!report_out.empty()) write_text(resolve(report_out), outlier_report_json(r));
      std::cout << r.eliminated() << " eliminated, " << r.splits << " split, "
                << r.sequences << " sequence\n";
    } else if (*alpha) {
      const auto m = load_grades(read_text(resolve(grades)), catalog_for(g));
      ValidityMask mask;
      if (apply_outliers) mask = apply_outlier_rule(m).mask;
      const auto result = compute_alpha(m, mask, *parse_family(family));
      if (as_json) {
        std::cout << alpha_result_json(result);
      } else {
        std::cout << "alpha(" << family << ") = " << fixed(result.alpha, 6) << " "
                  << alpha_band_name(result.band) << "\n";
      }
    } else if (*score) {
      const auto corpus = corpus_for(manifest);
      const auto m = load_grades(read_text(resolve(grades)), catalog_for(g), corpus.get());
      const auto analysis = apply_outlier_rule(m);
      const auto csv_text = cohort_csv(cohort_scores(m, analysis.mask, *corpus));
      if (out.empty()) std::cout << csv_text;
      else write_text(resolve(out), csv_text);
    } else if (*analyze) {
      const auto corpus = corpus_for(manifest);
      const auto m = load_grades(read_text(resolve(grades)), catalog_for(g), corpus.get());
      AnalysisOptions options;
      options.high_sigma_threshold = high_sigma;
      const auto results = run_analyses(m, *corpus, options);
      const fs::path dir = resolve(out);
      write_report(emit_report(results), dir);
      log(g, "report written to " + dir.string());
      std::cout << results.outliers.report.eliminated() << " eliminated, "
                << results.outliers.report.splits << " split, "
                << results.outliers.report.sequences << " sequence\n";
    } else if (*calibrate) {
      if (mid_band == "proceed") cal.mid_band = MidBandPolicy::kProceed;
      if (mid_band == "revise") cal.mid_band = MidBandPolicy::kReviseRules;
      const auto decision = evaluate_round(alpha_before, alpha_after, cal);
      std::cout << action_name(decision.action) << "\n";
      log(g, decision.rationale);
      if (!state_path.empty()) {
        const fs::path p = resolve(state_path);
        CalibrationState state;
        if (fs::exists(p)) {
          state = load_state(read_text(p));
        } else {
          while (state.phase != Phase::kResolution) state = advance(state);
        }
        state = advance(state, RoundRecord{state.round, alpha_before, alpha_after, decision});
        write_text(p, serialize_state(state));
        log(g, "calibration now in " + std::string(phase_name(state.phase)) + ", round " +
                   std::to_string(state.round));
      }
    } else if (*serve) {
      std::map<std::string, std::vector<std::string>> batches;
      if (!batches_path.empty()) {
        try {
          batches = nlohmann::json::parse(read_text(resolve(batches_path)))
                        .get<std::map<std::string, std::vector<std::string>>>();
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::kSchema, batches_path + ": " + e.what());
        }
      }
      ServiceConfig config;
      config.data_dir = resolve(data_dir);
      config.session_lifetime =
          std::chrono::seconds(static_cast<long long>(lifetime_hours * 3600.0));
      config.enforce_deadline = !no_deadline;
      config.default_seed = g.seed;
      GradingService service(catalog_for(g), corpus_for(manifest), std::move(batches),
                             config);
      HttpFrontend frontend(service, images.empty() ? config.data_dir : resolve(images));
      g_frontend = &frontend;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      log(g, "listening on " + host + ":" + std::to_string(port));
      if (!frontend.listen(host, port)) {
        throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
      }
      g_frontend = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << "sophgrade: error [" << error_code_name(e.code()) << "]: " << e.what()
              << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "sophgrade: error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}
