// Command-line front end: corpus ingestion, batch analyses and synthetic
// generator runs. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 numeric failure.

#include "trinfo/analysis.hpp"
#include "trinfo/corpus.hpp"
#include "trinfo/errors.hpp"
#include "trinfo/io.hpp"
#include "trinfo/maxent.hpp"
#include "trinfo/stats.hpp"
#include "trinfo/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct RunConfig {
  std::string input_path;
  std::string lemma_map_path;
  std::string matrix_path;
  std::string selection_path;
  std::string out_dir;
  int parts = 512;
  std::int64_t band_min = 33;
  std::int64_t band_max = 112;
  int max_words = 400;
  double alpha = 0.001;
  std::string threshold_convention = "paper";
  int top_k = 20;
  std::uint64_t seed = 1;
  int workers = 0;
  int band_trials = 2000;
  double scatter_min = 0.0;
  bool no_scatter = false;
  double explained_fraction = 0.9;
  bool shuffle = false;
  std::string stages = "singles,pairs,triplets,mediators,network";
  std::string network_source = "pairs";
  std::string network_format = "dot";
  std::string mediator_candidates;  // comma list of words; empty = all
  bool progress = true;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw trinfo::DataError("cannot open input file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw trinfo::DataError("cannot write output file: " + path.string());
  }
  out << content;
}

struct IngestResult {
  trinfo::PresenceMatrix matrix;
  trinfo::WordSelection selection;
  std::int64_t total_tokens = 0;
  std::int64_t part_size = 0;
};

IngestResult run_ingest_pipeline(const RunConfig& config) {
  const std::string text = read_file(config.input_path);
  trinfo::LemmaMap lemma_map;
  if (!config.lemma_map_path.empty()) {
    lemma_map = trinfo::LemmaMap::from_file(config.lemma_map_path);
  }
  std::vector<std::string> lemmas =
      trinfo::lemmatize(trinfo::tokenize(text), lemma_map);
  if (config.shuffle) {
    lemmas = trinfo::shuffle_tokens(std::move(lemmas), config.seed);
  }
  const trinfo::WordSelection selection = trinfo::select_words(
      lemmas, {config.band_min, config.band_max}, config.max_words);
  trinfo::PartitionedCorpus corpus;
  try {
    corpus = trinfo::partition(std::move(lemmas), config.parts);
  } catch (const std::invalid_argument& error) {
    throw trinfo::DataError(std::string("partition failed: ") + error.what());
  }
  trinfo::PresenceMatrix matrix =
      trinfo::build_presence_matrix(corpus, selection);
  return {std::move(matrix), selection, corpus.total_tokens,
          corpus.part_size};
}

json selection_report(const RunConfig& config, const IngestResult& ingest) {
  json words = json::array();
  for (std::size_t w = 0; w < ingest.selection.words.size(); ++w) {
    words.push_back({{"word", ingest.selection.words[w]},
                     {"count", ingest.selection.counts[w]}});
  }
  json doc;
  doc["words"] = std::move(words);
  doc["band"] = {{"min", ingest.selection.band.min_count},
                 {"max", ingest.selection.band.max_count}};
  doc["requested"] = ingest.selection.requested;
  doc["shortfall"] = ingest.selection.shortfall();
  doc["parts"] = config.parts;
  doc["part_size"] = ingest.part_size;
  doc["total_tokens"] = ingest.total_tokens;
  doc["seed"] = config.seed;
  doc["shuffled"] = config.shuffle;
  return doc;
}

void write_table(const fs::path& path, const std::string& stage,
                 std::uint64_t seed,
                 const std::function<void(std::ostream&)>& body) {
  std::ostringstream out;
  out << "# trinfo " << stage << " seed=" << seed << "\n";
  body(out);
  write_file(path, out.str());
}

std::vector<std::string> split_stages(const std::string& stages) {
  std::vector<std::string> out;
  std::stringstream stream(stages);
  std::string stage;
  while (std::getline(stream, stage, ',')) {
    if (!stage.empty()) out.push_back(stage);
  }
  return out;
}

// Loads or builds the presence matrix plus (optional) per-word counts.
struct AnalysisInput {
  trinfo::PresenceMatrix matrix;
  std::optional<std::vector<std::int64_t>> counts;
};

AnalysisInput load_analysis_input(const RunConfig& config,
                                  const fs::path& out_dir) {
  if (!config.input_path.empty()) {
    IngestResult ingest = run_ingest_pipeline(config);
    // analyze from raw text also materializes the ingest outputs
    std::ostringstream matrix_csv;
    ingest.matrix.write_csv(matrix_csv);
    write_file(out_dir / "matrix.csv", matrix_csv.str());
    write_file(out_dir / "selection.json",
               selection_report(config, ingest).dump(2) + "\n");
    return {std::move(ingest.matrix), std::move(ingest.selection.counts)};
  }
  if (config.matrix_path.empty()) {
    throw trinfo::DataError("analyze needs --input or --matrix");
  }
  std::ifstream in(config.matrix_path);
  if (!in) {
    throw trinfo::DataError("cannot open matrix: " + config.matrix_path);
  }
  trinfo::PresenceMatrix matrix = trinfo::PresenceMatrix::read_csv(in);
  std::optional<std::vector<std::int64_t>> counts;
  if (!config.selection_path.empty()) {
    json doc = json::parse(read_file(config.selection_path));
    std::vector<std::int64_t> parsed;
    for (const auto& entry : doc.at("words")) {
      parsed.push_back(entry.at("count").get<std::int64_t>());
    }
    if (parsed.size() != static_cast<std::size_t>(matrix.word_count())) {
      throw trinfo::DataError(
          "selection word count does not match matrix columns");
    }
    counts = std::move(parsed);
  }
  return {std::move(matrix), std::move(counts)};
}

int cmd_ingest(const RunConfig& config) {
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  const IngestResult ingest = run_ingest_pipeline(config);
  std::ostringstream matrix_csv;
  ingest.matrix.write_csv(matrix_csv);
  write_file(out_dir / "matrix.csv", matrix_csv.str());
  write_file(out_dir / "selection.json",
             selection_report(config, ingest).dump(2) + "\n");
  std::cout << "ingested " << ingest.total_tokens << " tokens into "
            << config.parts << " parts; selected "
            << ingest.selection.words.size() << " words";
  if (ingest.selection.shortfall() > 0) {
    std::cout << " (short of " << ingest.selection.requested << " by "
              << ingest.selection.shortfall() << ")";
  }
  std::cout << "\n";
  return 0;
}

int cmd_analyze(const RunConfig& config) {
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  const std::vector<std::string> stages = split_stages(config.stages);
  const std::set<std::string> known{"singles", "pairs", "triplets",
                                    "mediators", "network"};
  for (const std::string& stage : stages) {
    if (!known.count(stage)) {
      throw CLI::ValidationError("--stages", "unknown stage: " + stage);
    }
  }
  const std::set<std::string> wanted(stages.begin(), stages.end());

  AnalysisInput input = load_analysis_input(config, out_dir);
  const trinfo::PresenceMatrix& matrix = input.matrix;

  const trinfo::SignificanceThreshold threshold = trinfo::significance_threshold(
      {config.alpha, matrix.part_count(), 1});
  const double threshold_bits = config.threshold_convention == "nats"
                                    ? threshold.bits
                                    : threshold.literal_bits;

  const std::string current_stage_header = "analyze";
  std::string active;
  try {
    if (wanted.count("singles")) {
      active = "singles";
      if (!input.counts) {
        throw trinfo::DataError(
            "singles stage needs per-word totals; pass --selection or --input");
      }
      trinfo::SinglesOptions options;
      options.band_trials = config.band_trials;
      options.seed = config.seed;
      const trinfo::SinglesReport report =
          trinfo::analyze_singles(matrix, *input.counts, options);
      write_table(out_dir / "singles.csv", "singles", config.seed,
                  [&](std::ostream& out) { write_singles_csv(out, report); });
      write_file(out_dir / "singles.json",
                 trinfo::singles_to_json(report) + "\n");
    }

    std::optional<std::vector<trinfo::PairRow>> pairs;
    if (wanted.count("pairs") || wanted.count("network")) {
      active = "pairs";
      pairs = trinfo::analyze_pairs(matrix, threshold_bits);
      if (wanted.count("pairs")) {
        write_table(out_dir / "pairs.csv", "pairs", config.seed,
                    [&](std::ostream& out) {
                      write_pairs_csv(out, matrix, *pairs);
                    });
        write_file(out_dir / "pairs.json",
                   trinfo::pairs_to_json(matrix, *pairs) + "\n");
      }
    }

    if (wanted.count("triplets")) {
      active = "triplets";
      trinfo::TripletScanOptions options;
      options.threshold_bits = threshold_bits;
      options.top_k = config.top_k;
      options.workers = config.workers;
      if (!config.no_scatter) {
        options.scatter_min_multi = config.scatter_min;
      }
      if (config.progress) {
        options.progress = [](std::int64_t done, std::int64_t total) {
          static std::mutex gate;
          static std::atomic<int> last{-1};
          const int percent =
              static_cast<int>((100 * done) / (total > 0 ? total : 1));
          if (percent / 10 > last.load()) {
            std::lock_guard<std::mutex> lock(gate);
            if (percent / 10 > last.load()) {
              last = percent / 10;
              std::fprintf(stderr, "triplet scan: %lld/%lld\n",
                           static_cast<long long>(done),
                           static_cast<long long>(total));
            }
          }
        };
      }
      const trinfo::TripletScanResult result =
          trinfo::analyze_triplets(matrix, options);
      const auto dump_table = [&](const char* name,
                                  const std::vector<trinfo::TripletRow>& rows) {
        write_table(out_dir / (std::string(name) + ".csv"), name, config.seed,
                    [&](std::ostream& out) {
                      write_triplets_csv(out, matrix, rows);
                    });
        write_file(out_dir / (std::string(name) + ".json"),
                   trinfo::triplets_to_json(matrix, rows) + "\n");
      };
      dump_table("triplets_top_triple", result.top_triple);
      dump_table("triplets_top_redundancy", result.top_redundancy);
      dump_table("triplets_top_multi", result.top_multi);
      if (!config.no_scatter) {
        write_table(out_dir / "triplet_scatter.csv", "triplet_scatter",
                    config.seed, [&](std::ostream& out) {
                      write_scatter_csv(out, result.scatter);
                    });
      }
      json summary;
      summary["triplet_count"] = result.summary.triplet_count;
      summary["significant_count"] = result.summary.significant_count;
      summary["mean_triple_fraction_significant"] =
          result.summary.mean_triple_fraction_significant;
      summary["max_triple_interaction"] =
          result.summary.max_triple_interaction;
      summary["threshold_bits"] = threshold_bits;
      summary["threshold_convention"] = config.threshold_convention;
      // both conventions, whichever one decisions used
      summary["threshold_bits_paper"] = threshold.literal_bits;
      summary["threshold_bits_nats"] = threshold.bits;
      summary["alpha"] = config.alpha;
      summary["seed"] = config.seed;
      write_file(out_dir / "triplet_summary.json", summary.dump(2) + "\n");
    }

    std::optional<trinfo::MediatorReport> mediators;
    if (wanted.count("mediators") ||
        (wanted.count("network") && config.network_source == "mediators")) {
      active = "mediators";
      trinfo::MediatorScanOptions options;
      options.pair_threshold_bits = threshold_bits;
      options.explained_fraction = config.explained_fraction;
      options.workers = config.workers;
      if (!config.mediator_candidates.empty()) {
        std::vector<int> chosen;
        std::stringstream stream(config.mediator_candidates);
        std::string word;
        while (std::getline(stream, word, ',')) {
          const auto& labels = matrix.column_labels();
          const auto it = std::find(labels.begin(), labels.end(), word);
          if (it == labels.end()) {
            throw trinfo::DataError("mediator candidate not in matrix: " +
                                    word);
          }
          chosen.push_back(static_cast<int>(it - labels.begin()));
        }
        options.candidates = std::move(chosen);
      }
      mediators = trinfo::analyze_mediators(matrix, options);
      if (wanted.count("mediators")) {
        write_table(out_dir / "mediators.csv", "mediators", config.seed,
                    [&](std::ostream& out) {
                      write_mediators_csv(out, matrix, mediators->rows);
                    });
        write_file(out_dir / "mediators.json",
                   trinfo::mediators_to_json(matrix, mediators->rows) + "\n");
        write_table(out_dir / "mediator_hubs.csv", "mediator_hubs",
                    config.seed, [&](std::ostream& out) {
                      write_hubs_csv(out, matrix, mediators->hub_counts);
                    });
        json hubs = json::array();
        for (const auto& [word, count] : mediators->hub_counts) {
          hubs.push_back({{"mediator", matrix.label(word)},
                          {"explained_pairs", count}});
        }
        write_file(out_dir / "mediator_hubs.json", hubs.dump(2) + "\n");
      }
    }

    if (wanted.count("network")) {
      active = "network";
      const trinfo::GraphFormat format = config.network_format == "graphml"
                                             ? trinfo::GraphFormat::graphml
                                             : trinfo::GraphFormat::dot;
      const fs::path path =
          out_dir / (config.network_format == "graphml" ? "network.graphml"
                                                        : "network.dot");
      std::ostringstream out;
      if (config.network_source == "mediators") {
        export_network(out, matrix, mediators->rows, format);
      } else {
        std::vector<trinfo::PairRow> kept;
        for (const trinfo::PairRow& row : *pairs) {
          if (row.significant) kept.push_back(row);
        }
        export_network(out, matrix, kept, format);
      }
      write_file(path, out.str());
    }
  } catch (const trinfo::DataError& error) {
    throw trinfo::DataError("stage " + active + ": " + error.what());
  } catch (const trinfo::NumericError& error) {
    throw trinfo::NumericError("stage " + active + ": " + error.what());
  }
  return 0;
}

int cmd_synthetic(const RunConfig& config, const std::string& kind,
                  int sign, double theta, std::optional<double> beta,
                  double beta_min, double beta_max, int beta_points,
                  Eigen::Index parts) {
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);

  std::optional<trinfo::TripletDistribution> truth;
  if (kind == "xor") {
    truth = trinfo::xor_distribution(sign);
  } else if (kind == "theta") {
    truth = trinfo::theta_distribution(theta);
  } else if (kind == "spins") {
    if (beta_points < 2) {
      throw CLI::ValidationError("--beta-points", "need at least 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(beta_points));
    for (int g = 0; g < beta_points; ++g) {
      grid[static_cast<std::size_t>(g)] =
          beta_min + (beta_max - beta_min) * g / (beta_points - 1);
    }
    const std::vector<trinfo::BetaSweepRow> rows = trinfo::beta_sweep(grid);
    write_table(out_dir / "beta_sweep.csv", "beta_sweep", config.seed,
                [&](std::ostream& out) { write_beta_sweep_csv(out, rows); });
    if (beta) {
      truth = trinfo::spin_marginal(*beta);
    }
  }

  if (truth) {
    write_file(out_dir / "truth.json", truth->to_json() + "\n");
    const trinfo::PresenceMatrix matrix =
        trinfo::sample_corpus(*truth, parts, config.seed);
    std::ostringstream matrix_csv;
    matrix.write_csv(matrix_csv);
    write_file(out_dir / "matrix.csv", matrix_csv.str());
  }
  return 0;
}

int cmd_threshold(double alpha, std::int64_t samples, int dof) {
  const trinfo::SignificanceThreshold t =
      trinfo::significance_threshold({alpha, samples, dof});
  std::cout << "chi2 quantile (dof=" << dof << ", 1-alpha=" << (1.0 - alpha)
            << "): " << trinfo::format_g6(t.chi2_quantile) << "\n"
            << "threshold (paper convention, chi2/2N read in bits): "
            << trinfo::format_g6(t.literal_bits) << "\n"
            << "threshold (nats convention, chi2/(2N ln2) bits): "
            << trinfo::format_g6(t.bits) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairwise and triple statistical dependencies among binary "
               "presence/absence variables"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file; sections per subcommand; flags win");

  RunConfig config;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "RNG seed for anything random");
    cmd->add_option("--workers", config.workers,
                    "parallel workers (0 = hardware)");
  };
  const auto add_ingest_options = [&](CLI::App* cmd) {
    cmd->add_option("--input", config.input_path, "UTF-8 text file");
    cmd->add_option("--lemma-map", config.lemma_map_path,
                    "TSV of surface<TAB>base forms");
    cmd->add_option("--parts", config.parts, "number of parts P")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--band-min", config.band_min,
                    "minimum total count for selected words");
    cmd->add_option("--band-max", config.band_max,
                    "maximum total count for selected words");
    cmd->add_option("--max-words", config.max_words,
                    "cap on selected words K")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--shuffle", config.shuffle,
                  "shuffle the token stream before partitioning");
  };

  CLI::App* ingest = app.add_subcommand(
      "ingest", "turn a text file into a presence matrix");
  add_ingest_options(ingest);
  ingest->get_option("--input")->required();
  ingest->add_option("--out", config.out_dir, "output directory")->required();
  add_common(ingest);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "run analysis stages over a matrix or a text file");
  add_ingest_options(analyze);
  analyze->add_option("--matrix", config.matrix_path,
                      "presence matrix CSV (alternative to --input)");
  analyze->add_option("--selection", config.selection_path,
                      "selection report JSON (for singles counts)");
  analyze->add_option("--stages", config.stages,
                      "comma list: singles,pairs,triplets,mediators,network");
  analyze->add_option("--alpha", config.alpha,
                      "significance level for thresholds");
  analyze->add_option("--threshold-convention", config.threshold_convention,
                      "paper or nats")
      ->check(CLI::IsMember({"paper", "nats"}));
  analyze->add_option("--top-k", config.top_k, "rows kept per triplet table")
      ->check(CLI::NonNegativeNumber);
  analyze->add_option("--band-trials", config.band_trials,
                      "Monte Carlo trials per entropy band")
      ->check(CLI::Range(100, 1000000));
  analyze->add_option("--scatter-min", config.scatter_min,
                      "collect scatter points with total interaction >= this");
  analyze->add_flag("--no-scatter", config.no_scatter,
                    "skip the scatter file");
  analyze->add_option("--explained-fraction", config.explained_fraction,
                      "fraction of I_ij a chain must cover");
  analyze->add_option("--mediator-candidates", config.mediator_candidates,
                      "comma list of words allowed as mediators (default all)");
  analyze->add_option("--network-source", config.network_source,
                      "pairs or mediators")
      ->check(CLI::IsMember({"pairs", "mediators"}));
  analyze->add_option("--network-format", config.network_format,
                      "dot or graphml")
      ->check(CLI::IsMember({"dot", "graphml"}));
  analyze->add_flag("!--no-progress", config.progress,
                    "disable the stderr progress counter");
  analyze->add_option("--out", config.out_dir, "output directory")->required();
  add_common(analyze);

  CLI::App* synthetic = app.add_subcommand(
      "synthetic", "generator distributions: exact truth plus samples");
  std::string kind;
  int sign = 1;
  double theta = 1.0;
  std::optional<double> beta;
  double beta_min = -8.0, beta_max = 0.0;
  int beta_points = 81;
  Eigen::Index synth_parts = 4096;
  synthetic->add_option("--kind", kind, "xor, theta or spins")
      ->required()
      ->check(CLI::IsMember({"xor", "theta", "spins"}));
  synthetic->add_option("--sign", sign, "parity gate sign (+1 or -1)")
      ->check(CLI::IsMember({1, -1}));
  synthetic->add_option("--theta", theta, "theta family parameter");
  synthetic->add_option("--beta", beta,
                        "sample the hidden-spin marginal at this field");
  synthetic->add_option("--beta-min", beta_min, "sweep start");
  synthetic->add_option("--beta-max", beta_max, "sweep end");
  synthetic->add_option("--beta-points", beta_points, "sweep grid size");
  synthetic->add_option("--parts", synth_parts, "samples to draw")
      ->check(CLI::PositiveNumber);
  synthetic->add_option("--out", config.out_dir, "output directory")
      ->required();
  add_common(synthetic);

  CLI::App* threshold = app.add_subcommand(
      "threshold", "print significance thresholds in both conventions");
  double thr_alpha = 0.001;
  std::int64_t thr_samples = 512;
  int thr_dof = 1;
  threshold->add_option("--alpha", thr_alpha, "significance level");
  threshold->add_option("--n", thr_samples, "sample count N")
      ->check(CLI::PositiveNumber);
  threshold->add_option("--dof", thr_dof, "degrees of freedom")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    if (ingest->parsed()) return cmd_ingest(config);
    if (analyze->parsed()) return cmd_analyze(config);
    if (synthetic->parsed()) {
      return cmd_synthetic(config, kind, sign, theta, beta, beta_min,
                           beta_max, beta_points, synth_parts);
    }
    if (threshold->parsed()) {
      return cmd_threshold(thr_alpha, thr_samples, thr_dof);
    }
    return 1;
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 1;
  } catch (const trinfo::IpfError& error) {
    std::cerr << "numeric failure: " << error.what() << "\n";
    return 3;
  } catch (const trinfo::NumericError& error) {
    std::cerr << "numeric failure: " << error.what() << "\n";
    return 3;
  } catch (const trinfo::DataError& error) {
    std::cerr << "data error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
}
