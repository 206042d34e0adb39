// Copyright 2026 The smart Authors.
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

#include "smart/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smart/cli_config.hpp"
#include "smart/matrix_io.hpp"
#include "smart/task_io.hpp"
#include "smart/verify.hpp"

namespace smart::cli {
namespace {

using ordered = nlohmann::ordered_json;

const std::vector<double> kDefaultBetaGrid{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
const std::vector<double> kDefaultGammaGrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

// Raised for bad flag combinations detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config_file;
  double beta = 0.0;
  double gamma = 0.0;
  std::size_t k = 0;
  std::size_t m = 0;
  double tol_psd = 0.0;
  std::string input = "-";
  std::string output = "-";
  std::size_t parallel = 1;
  std::string persist_dir;
  std::string scores;
  std::vector<double> betas;
  std::vector<double> gammas;
  std::string order;
  bool skip_conflict = false;
  bool timings = false;
  bool print_config = false;
  std::string suite = "all";
  std::uint64_t seed = verify::VerifyOptions{}.seed;
  int verbosity = 0;
};

struct Options {
  CLI::Option* beta = nullptr;
  CLI::Option* gamma = nullptr;
  CLI::Option* k = nullptr;
  CLI::Option* m = nullptr;
  CLI::Option* tol_psd = nullptr;
  CLI::Option* order = nullptr;
  CLI::Option* skip_conflict = nullptr;
};

bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kProviderUnavailable:
    case ErrorCode::kProtocolViolation:
      return kExitProvider;
    default:
      return kExitUsage;
  }
}

void report_error(std::ostream& err, const std::string& code, const std::string& message,
                  const std::string& path = {}) {
  ordered e{{"code", code}, {"message", message}};
  if (!path.empty()) e["path"] = path;
  err << ordered{{"error", e}}.dump() << '\n';
}

int report_exception(std::ostream& err, const std::exception& e) {
  if (const auto* input = dynamic_cast<const InputError*>(&e)) {
    report_error(err, std::string(error_code_name(input->code())), input->what(),
                 input->path());
    return kExitUsage;
  }
  if (const auto* lib = dynamic_cast<const Error*>(&e)) {
    report_error(err, std::string(error_code_name(lib->code())), lib->what());
    return exit_code_for(lib->code());
  }
  if (dynamic_cast<const UsageError*>(&e) != nullptr) {
    report_error(err, "UsageError", e.what());
    return kExitUsage;
  }
  report_error(err, "InternalError", e.what());
  return kExitUsage;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::string read_all(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream text;
  text << file.rdbuf();
  return text.str();
}

struct InputLine {
  std::size_t number = 0;  // 1-based
  std::string text;
};

std::vector<InputLine> non_blank_lines(const std::string& text) {
  std::vector<InputLine> lines;
  std::istringstream stream(text);
  std::string line;
  for (std::size_t n = 1; std::getline(stream, line); ++n) {
    if (!trim_copy(line).empty()) lines.push_back({n, line});
  }
  return lines;
}

// Sink for the declared artifact: the --output file, or stdout.
class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw Error(ErrorCode::kIo, "cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorCode::kIo, "failed writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

class Logger {
 public:
  Logger(std::ostream& err, int verbosity) : err_(err), verbosity_(verbosity) {}
  void info(const std::string& message) const {
    if (verbosity_ >= 1) err_ << "smart: " << message << '\n';
  }

 private:
  std::ostream& err_;
  int verbosity_;
};

CliConfig effective_config(const Flags& f, const Options& o) {
  CliConfig config;
  if (!f.config_file.empty()) apply_config_file(config, f.config_file);
  if (given(o.beta)) config.selection.beta = f.beta;
  if (given(o.gamma)) config.selection.gamma = f.gamma;
  if (given(o.k)) config.selection.k = f.k;
  if (given(o.m)) config.selection.m = f.m;
  if (given(o.tol_psd)) config.selection.tol_psd = f.tol_psd;
  if (given(o.order)) {
    config.order = f.order == "relevance" ? OutputOrder::kRelevance : OutputOrder::kSelection;
  }
  if (given(o.skip_conflict)) config.skip_conflict = f.skip_conflict;
  apply_env_overrides(config.providers);
  return config;
}

struct Runtime {
  CliConfig config;
  ProviderSet providers;
  std::unique_ptr<Abbreviations> abbreviations;
  PipelineOptions options;
};

Runtime make_runtime(const Flags& f, CliConfig config) {
  Runtime rt;
  rt.config = std::move(config);
  rt.config.selection.validate();
  resolve_tokens(rt.config, [](const char* name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name)) return std::string(v);
    return std::nullopt;
  });
  rt.providers = make_providers(rt.config.providers);
  if (!rt.config.abbreviations_path.empty()) {
    rt.abbreviations =
        std::make_unique<Abbreviations>(Abbreviations::load(rt.config.abbreviations_path));
    rt.options.abbreviations = rt.abbreviations.get();
  }
  rt.options.order = rt.config.order;
  rt.options.skip_conflict = rt.config.skip_conflict;
  rt.options.include_timings = f.timings;
  if (!f.persist_dir.empty()) rt.options.persist_dir = f.persist_dir;
  return rt;
}

// Best-effort query id of a line that failed to parse.
std::string query_id_of(const std::string& line) {
  try {
    const auto doc = nlohmann::json::parse(line);
    if (doc.is_object() && doc.contains("query_id") && doc["query_id"].is_string()) {
      return doc["query_id"].get<std::string>();
    }
  } catch (const std::exception&) {
  }
  return "";
}

int cmd_select(const Flags& f, CliConfig config, std::istream& in, std::ostream& out,
               std::ostream& err) {
  const auto lines = non_blank_lines(read_all(f.input, in));
  if (lines.size() != 1) {
    throw UsageError("select expects exactly one task, got " + std::to_string(lines.size()) +
                     "; use batch for several");
  }
  const QueryTask task = parse_task(lines.front().text);
  Runtime rt = make_runtime(f, std::move(config));
  Logger(err, f.verbosity).info("select " + task.query_id);
  const PipelineOutput result = run_task(task, rt.config.selection, rt.providers, rt.options);
  OutputSink sink(f.output, out);
  sink.stream() << output_to_json(result, f.timings) << '\n';
  sink.finish();
  return kExitOk;
}

int cmd_batch(const Flags& f, CliConfig config, std::istream& in, std::ostream& out,
              std::ostream& err) {
  if (f.parallel < 1) throw UsageError("--parallel must be >= 1");
  const auto lines = non_blank_lines(read_all(f.input, in));
  Runtime rt = make_runtime(f, std::move(config));
  const Logger log(err, f.verbosity);

  // Parse everything first; bad lines keep their slot as an error record.
  std::vector<std::optional<std::string>> records(lines.size());
  std::vector<QueryTask> tasks;
  std::vector<std::size_t> slots;
  int worst = kExitOk;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      tasks.push_back(parse_task(lines[i].text));
      slots.push_back(i);
    } catch (const InputError& e) {
      ordered rec{{"query_id", query_id_of(lines[i].text)},
                  {"error", ordered{{"code", std::string(error_code_name(e.code()))},
                                    {"message", "line " + std::to_string(lines[i].number) +
                                                    ": " + e.what()},
                                    {"path", e.path()}}}};
      records[i] = rec.dump();
      worst = std::max(worst, static_cast<int>(kExitUsage));
    }
  }

  const BatchResult batch =
      run_batch(tasks, rt.config.selection, rt.providers, rt.options, f.parallel);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& outcome = batch.outcomes[t];
    records[slots[t]] = outcome_to_json(outcome, f.timings);
    if (const auto* e = std::get_if<TaskError>(&outcome)) {
      worst = std::max(worst, exit_code_for(e->code));
    }
  }

  OutputSink sink(f.output, out);
  for (const auto& r : records) sink.stream() << *r << '\n';
  sink.finish();

  std::ostringstream summary;
  summary << "batch: " << lines.size() << " tasks, "
          << batch.summary.failures + (lines.size() - tasks.size()) << " failed, "
          << format_double(batch.summary.wall_millis) << " ms wall";
  for (const auto& s : batch.summary.stage_totals) {
    summary << "; " << s.stage << " " << format_double(s.millis) << " ms";
  }
  log.info(summary.str());
  return worst;
}

struct ScoreKey {
  std::string query_id;
  double beta;
  double gamma;
};

std::vector<std::pair<ScoreKey, double>> load_scores(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot read scores file " + path);
  std::string line;
  if (!std::getline(file, line)) throw InputError(path, "scores file is empty");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[trim_copy(header[i])] = i;
  for (const char* need : {"query_id", "beta", "gamma", "score"}) {
    if (!col.count(need)) {
      throw InputError(path, std::string("scores header lacks column ") + need);
    }
  }
  std::vector<std::pair<ScoreKey, double>> scores;
  for (std::size_t n = 2; std::getline(file, line); ++n) {
    if (trim_copy(line).empty()) continue;
    const auto fields = split_csv_line(line);
    auto number = [&](const char* name) {
      const std::size_t c = col[name];
      const std::string field = c < fields.size() ? trim_copy(fields[c]) : "";
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw InputError(path + ":" + std::to_string(n), std::string("bad ") + name + " value");
      }
      return v;
    };
    const std::size_t q = col["query_id"];
    scores.push_back({{q < fields.size() ? fields[q] : "", number("beta"), number("gamma")},
                      number("score")});
  }
  return scores;
}

std::optional<double> find_score(const std::vector<std::pair<ScoreKey, double>>& scores,
                                 const std::string& query_id, double beta, double gamma) {
  for (const auto& [key, value] : scores) {
    if (key.query_id == query_id && std::abs(key.beta - beta) <= 1e-9 &&
        std::abs(key.gamma - gamma) <= 1e-9) {
      return value;
    }
  }
  return std::nullopt;
}

struct SweepRow {
  std::string query_id;
  double beta;
  double gamma;
  double objective;
  std::string selected_ids;
  std::optional<double> score;
  std::size_t score_rank = 0;  // 1 = best score within the query; 0 = unscored
};

int cmd_sweep(const Flags& f, CliConfig config, const Options& o, std::istream& in,
              std::ostream& out, std::ostream& err) {
  std::vector<double> betas = f.betas;
  std::vector<double> gammas = f.gammas;
  if (betas.empty()) betas = given(o.beta) ? std::vector{config.selection.beta} : kDefaultBetaGrid;
  if (gammas.empty()) {
    gammas = given(o.gamma) ? std::vector{config.selection.gamma} : kDefaultGammaGrid;
  }
  for (double b : betas) {
    SelectionConfig c = config.selection;
    c.beta = b;
    c.validate();
  }
  for (double g : gammas) {
    SelectionConfig c = config.selection;
    c.gamma = g;
    c.validate();
  }
  const auto scores = f.scores.empty() ? decltype(load_scores("")){} : load_scores(f.scores);
  const auto lines = non_blank_lines(read_all(f.input, in));
  Runtime rt = make_runtime(f, std::move(config));
  PipelineOptions cell_options = rt.options;
  cell_options.persist_dir.reset();
  const Logger log(err, f.verbosity);

  std::vector<SweepRow> rows;
  int worst = kExitOk;
  for (const auto& line : lines) {
    std::string query_id = query_id_of(line.text);
    try {
      const QueryTask task = parse_task(line.text);
      // Relations do not depend on beta or gamma, so they are built once.
      const PreparedTask prepared =
          prepare_task(task, rt.config.selection, rt.providers, rt.options);
      if (rt.options.persist_dir) {
        write_matrix_dump(*rt.options.persist_dir, prepared.query_id, prepared.relations);
      }
      log.info("sweep " + task.query_id + ": pool " + std::to_string(prepared.pool.size()));
      const std::size_t first = rows.size();
      for (double b : betas) {
        for (double g : gammas) {
          SelectionConfig cell = rt.config.selection;
          cell.beta = b;
          cell.gamma = g;
          const PipelineOutput result = select_prepared(prepared, cell, cell_options);
          std::vector<std::pair<std::size_t, std::string>> ranked;
          for (const auto& s : result.selected) {
            ranked.emplace_back(s.selection_rank, s.sentence.sent_id);
          }
          std::sort(ranked.begin(), ranked.end());
          std::string ids;
          for (const auto& [rank, id] : ranked) ids += (ids.empty() ? "" : ";") + id;
          rows.push_back({task.query_id, b, g, result.objective, ids,
                          find_score(scores, task.query_id, b, g)});
        }
      }
      // Rank scored cells of this query, best first; ties share grid order.
      std::vector<std::size_t> scored;
      for (std::size_t i = first; i < rows.size(); ++i) {
        if (rows[i].score) scored.push_back(i);
      }
      std::stable_sort(scored.begin(), scored.end(), [&](std::size_t a, std::size_t b) {
        return *rows[a].score > *rows[b].score;
      });
      for (std::size_t r = 0; r < scored.size(); ++r) rows[scored[r]].score_rank = r + 1;
    } catch (const InputError& e) {
      report_error(err, std::string(error_code_name(e.code())),
                   "line " + std::to_string(line.number) + ": " + e.what(), e.path());
      worst = std::max(worst, static_cast<int>(kExitUsage));
    } catch (const Error& e) {
      report_error(err, std::string(error_code_name(e.code())),
                   (query_id.empty() ? "" : query_id + ": ") + e.what());
      worst = std::max(worst, exit_code_for(e.code()));
    }
  }

  OutputSink sink(f.output, out);
  auto& os = sink.stream();
  os << "query_id,beta,gamma,objective,selected_ids";
  if (!f.scores.empty()) os << ",score,score_rank";
  os << '\n';
  for (const auto& r : rows) {
    os << csv_field(r.query_id) << ',' << format_double(r.beta) << ','
       << format_double(r.gamma) << ',' << format_double(r.objective) << ','
       << csv_field(r.selected_ids);
    if (!f.scores.empty()) {
      os << ',' << (r.score ? format_double(*r.score) : "") << ','
         << (r.score_rank ? std::to_string(r.score_rank) : "");
    }
    os << '\n';
  }
  sink.finish();
  return worst;
}

ordered spectral_json(const SpectralReport& r) {
  return ordered{{"min_eigenvalue", r.min_eigenvalue}, {"is_psd", r.is_psd}};
}

int cmd_inspect(const Flags& f, CliConfig config, std::ostream& out, std::ostream& err) {
  if (f.input == "-") throw UsageError("inspect needs a matrix dump header (--input PATH)");
  const MatrixDump dump = read_matrix_dump(f.input);
  const RelationMatrices& rel = dump.relations;
  const std::size_t n = rel.size();
  SelectionConfig sel = config.selection;
  sel.m = std::max(sel.m, sel.k);
  sel.validate();
  Logger(err, f.verbosity).info("inspect " + dump.query_id + ": n = " + std::to_string(n));

  ordered doc;
  doc["query_id"] = dump.query_id;
  doc["n"] = n;
  doc["relevance"] = std::vector<double>(rel.relevance.data(), rel.relevance.data() + n);
  doc["max_asymmetry"] = ordered{{"k_sim", max_asymmetry(rel.k_sim)},
                                 {"conflict", max_asymmetry(rel.conflict.matrix())}};
  ordered spectra;
  spectra["k_sim"] = spectral_json(spectral_check(rel.k_sim, sel.tol_psd));
  spectra["conflict"] = spectral_json(spectral_check_any(rel.conflict.matrix(), sel.tol_psd));
  ordered selection{{"beta", sel.beta}, {"gamma", sel.gamma}, {"k", sel.k}};
  if (n == 0) {
    selection["selected"] = ordered::array();
    selection["gains"] = ordered::array();
    selection["objective"] = 0.0;
    selection["stopped_early"] = true;
    selection["stop_reason"] = "empty_pool";
    doc["spectra"] = std::move(spectra);
  } else {
    const DppKernel kernel = build_kernel(rel, sel.gamma);
    spectra["k_weighted"] = spectral_json(spectral_check(kernel.k_weighted(), sel.tol_psd));
    spectra["l"] = spectral_json(spectral_check(kernel.l(), sel.tol_psd));
    doc["spectra"] = std::move(spectra);
    doc["jitter"] = kernel.jitter() ? ordered(*kernel.jitter()) : ordered(nullptr);
    const double norm = kernel.log_det_l_plus_identity();
    doc["log_det_l_plus_identity"] = std::isfinite(norm) ? ordered(norm) : ordered(nullptr);
    const SelectionResult result = greedy_select(kernel, sel);
    selection["selected"] = result.selected;
    selection["gains"] = result.gains;
    selection["objective"] = result.objective;
    selection["stopped_early"] = result.stopped_early;
    selection["stop_reason"] = std::string(stop_reason_name(result.stop_reason));
  }
  doc["selection"] = std::move(selection);

  OutputSink sink(f.output, out);
  sink.stream() << doc.dump() << '\n';
  sink.finish();
  return kExitOk;
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err) {
  verify::VerifyOptions options;
  options.seed = f.seed;
  const auto results = verify::run_suites(f.suite, options);
  const Logger log(err, f.verbosity);
  bool all = true;
  for (const auto& r : results) {
    log.info(r.name + ": " + (r.passed ? "pass" : "FAIL") + " (" + r.detail + ")");
    if (!r.passed) {
      all = false;
      err << "smart: property failed: " << r.name << " (" << r.failures << "/" << r.trials
          << " trials; " << r.detail << ")\n";
    }
  }
  OutputSink sink(f.output, out);
  sink.stream() << verify::summary_json(results) << '\n';
  sink.finish();
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Conflict-aware context selection for retrieval-augmented generation", "smart"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "smart 0.1.0");

  Flags f;
  std::map<const CLI::App*, Options> opts;

  auto add_selection = [&](CLI::App* sub) {
    Options& o = opts[sub];
    sub->add_option("--config", f.config_file, "JSON config file")->check(CLI::ExistingFile);
    o.beta = sub->add_option("--beta", f.beta, "relevance weight beta in [0, 1]");
    o.gamma = sub->add_option("--gamma", f.gamma, "conflict decay gamma >= 0");
    o.k = sub->add_option("--top-k", f.k, "number of contexts to select");
    o.m = sub->add_option("--pre-rank", f.m, "pre-ranked pool size");
    o.tol_psd = sub->add_option("--tol-psd", f.tol_psd, "eigenvalue tolerance for PSD checks");
    sub->add_flag("--print-config", f.print_config,
                  "print the effective configuration as JSON and exit");
    sub->add_flag("-v,--verbose", f.verbosity, "progress on stderr");
  };
  auto add_pipeline = [&](CLI::App* sub) {
    Options& o = opts[sub];
    sub->add_option("--input", f.input, "JSONL tasks ('-' for stdin)");
    sub->add_option("--output", f.output, "output path ('-' for stdout)");
    sub->add_option("--persist-matrices", f.persist_dir,
                    "directory for per-query relation matrix dumps");
    sub->add_flag("--timings", f.timings, "include per-stage timings in output records");
    o.order = sub->add_option("--order", f.order, "output order of selected contexts")
                  ->check(CLI::IsMember({"selection", "relevance"}));
    o.skip_conflict =
        sub->add_flag("--no-conflict", f.skip_conflict, "skip NLI; use a zero conflict matrix");
  };

  auto* select = app.add_subcommand("select", "select contexts for one task");
  add_selection(select);
  add_pipeline(select);

  auto* batch = app.add_subcommand("batch", "select contexts for every task of a JSONL file");
  add_selection(batch);
  add_pipeline(batch);
  batch->add_option("--parallel", f.parallel, "tasks run concurrently")
      ->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "objective table over a beta x gamma grid");
  add_selection(sweep);
  add_pipeline(sweep);
  sweep->add_option("--betas", f.betas, "comma-separated beta grid")->delimiter(',');
  sweep->add_option("--gammas", f.gammas, "comma-separated gamma grid")->delimiter(',');
  sweep->add_option("--scores", f.scores,
                    "CSV with query_id,beta,gamma,score to join and rank cells")
      ->check(CLI::ExistingFile);

  auto* inspect = app.add_subcommand("inspect", "spectra and selection for a matrix dump");
  add_selection(inspect);
  inspect->add_option("--input,dump", f.input, "matrix dump header (.json)");
  inspect->add_option("--output", f.output, "output path ('-' for stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "run the randomized property suites");
  std::string suite_help = "one of: all";
  for (const auto& g : verify::suite_groups()) suite_help += ", " + g;
  verify_cmd->add_option("--suite", f.suite, suite_help);
  verify_cmd->add_option("--seed", f.seed, "generator seed");
  verify_cmd->add_option("--output", f.output, "output path ('-' for stdout)");
  verify_cmd->add_flag("-v,--verbose", f.verbosity, "per-suite progress on stderr");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == verify_cmd) {
      if (f.suite != "all" &&
          std::find(verify::suite_groups().begin(), verify::suite_groups().end(), f.suite) ==
              verify::suite_groups().end()) {
        throw UsageError("unknown suite '" + f.suite + "' (" + suite_help + ")");
      }
      return cmd_verify(f, out, err);
    }
    const Options& o = opts.at(sub);
    CliConfig config = effective_config(f, o);
    if (f.print_config) {
      config.selection.validate();
      out << config_to_json(config) << '\n';
      return kExitOk;
    }
    if (sub == select) return cmd_select(f, std::move(config), in, out, err);
    if (sub == batch) return cmd_batch(f, std::move(config), in, out, err);
    if (sub == sweep) return cmd_sweep(f, std::move(config), o, in, out, err);
    return cmd_inspect(f, std::move(config), out, err);
  } catch (const std::exception& e) {
    return report_exception(err, e);
  }
}

}  // namespace smart::cli
