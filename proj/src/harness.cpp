#include "gmlkm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gmlkm/metrics.hpp"

namespace gmlkm::harness {

namespace {

using nlohmann::json;

template <class F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, r.ptr);
}

int metric_rank(const std::string& metric) {
  if (metric == "ACC") return 0;
  if (metric == "NMI") return 1;
  if (metric == "ARI") return 2;
  return 3;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& values) {
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (const double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());  // population variance
  return {mean, std::sqrt(var)};
}

}  // namespace

TableFormat parse_table_format(std::string_view name) {
  if (name == "text") return TableFormat::text;
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw ConfigError("unknown output format: " + std::string(name));
}

void ExperimentConfig::validate() const {
  if (dataset_path.empty() == !synthetic.has_value())
    throw ConfigError("config must set exactly one of 'dataset' and 'synthetic'");
  if (synthetic) {
    if (synthetic->n < 2 || synthetic->k < 1 || synthetic->m < 1 ||
        synthetic->n < static_cast<std::size_t>(synthetic->k))
      throw ConfigError("synthetic spec needs n >= k >= 1 and m >= 1");
    if (!(synthetic->separation > 0.0))
      throw ConfigError("synthetic separation must be > 0");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (!(pep_tau > 0.0)) throw ConfigError("pep_tau must be > 0");
  try {
    pipeline.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const char* known[] = {
      "dataset",        "synthetic",           "normalization",
      "kernel_grid",    "kernel_shift",        "center_kernels",
      "dimension_multiplier", "sweep_dimensions", "row_normalize_partitions",
      "filter_order",   "average_filter_orders", "neighborhood_size",
      "repetitions",    "seed",                "pep_tau",
      "tolerances",     "max_iterations",      "max_cd_sweeps",
      "mu_max_iterations", "format"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) == std::end(known))
      throw ConfigError("unknown config key: " + key);
  }

  ExperimentConfig cfg;
  try {
    if (doc.contains("dataset")) cfg.dataset_path = doc["dataset"].get<std::string>();
    if (doc.contains("synthetic")) {
      const auto& s = doc["synthetic"];
      SyntheticSpec spec;
      spec.n = s.at("n").get<std::size_t>();
      spec.k = s.at("k").get<int>();
      spec.m = s.at("m").get<std::size_t>();
      spec.separation = s.at("separation").get<double>();
      spec.seed = s.value("seed", std::uint64_t{0});
      cfg.synthetic = spec;
    }
    if (doc.contains("normalization"))
      cfg.pipeline.normalization =
          data::parse_normalization(doc["normalization"].get<std::string>());
    if (doc.contains("kernel_grid"))
      cfg.pipeline.kernel_grid = doc["kernel_grid"].get<std::vector<double>>();
    cfg.pipeline.kernel_shift = doc.value("kernel_shift", 0.0);
    cfg.pipeline.center_kernels = doc.value("center_kernels", false);
    cfg.pipeline.dimension_multiplier = doc.value("dimension_multiplier", 1);
    cfg.sweep_dimensions = doc.value("sweep_dimensions", false);
    cfg.pipeline.row_normalize_partitions = doc.value("row_normalize_partitions", false);
    cfg.pipeline.filter_order = doc.value("filter_order", 1);
    cfg.pipeline.average_filter_orders = doc.value("average_filter_orders", false);
    cfg.pipeline.neighborhood_size = doc.value("neighborhood_size", 5);
    cfg.repetitions = doc.value("repetitions", 10);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.pep_tau = doc.value("pep_tau", 1.0);
    if (doc.contains("tolerances")) {
      const auto& tol = doc["tolerances"];
      cfg.pipeline.opt.objective_tol = tol.value("objective", 1e-7);
      cfg.pipeline.opt.mu_tol = tol.value("mu", 1e-12);
    }
    cfg.pipeline.opt.max_iterations = doc.value("max_iterations", 100);
    cfg.pipeline.opt.max_cd_sweeps = doc.value("max_cd_sweeps", 50);
    cfg.pipeline.opt.mu_max_iterations = doc.value("mu_max_iterations", 20000);
    if (doc.contains("format")) cfg.format = parse_table_format(doc["format"].get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

data::MultiViewDataset materialize_dataset(const ExperimentConfig& config) {
  return stage("load-dataset", [&] {
    if (config.synthetic) {
      const auto& s = *config.synthetic;
      return data::synthetic_blobs(s.n, s.k, s.m, s.separation, s.seed);
    }
    return data::load_dataset(config.dataset_path);
  });
}

unsigned thread_cap() {
  if (const char* env = std::getenv("GMLKM_THREADS")) {
    unsigned parsed = 0;
    const auto end = env + std::string_view(env).size();
    const auto r = std::from_chars(env, end, parsed);
    if (r.ec == std::errc() && r.ptr == end && parsed >= 1) return parsed;
    throw ConfigError("GMLKM_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct RepetitionOutcome {
  double acc = 0.0, nmi = 0.0, ari = 0.0;
  double objective = 0.0;
};

std::vector<RepetitionOutcome> run_repetitions(const opt::Pipeline& pipeline,
                                               const ExperimentConfig& config,
                                               const data::MultiViewDataset& dataset) {
  std::vector<Matrix> filter_mats;
  filter_mats.reserve(pipeline.filters.size());
  for (const auto& f : pipeline.filters) filter_mats.push_back(f.values);

  const auto reps = static_cast<std::size_t>(config.repetitions);
  std::vector<RepetitionOutcome> outcomes(reps);

  const auto run_one = [&](std::size_t rep) {
    opt::RunConfig run_cfg = config.pipeline.opt;
    run_cfg.seed = config.seed + rep;
    const opt::OptimizerState state =
        opt::run_embedded(pipeline.embeddings, filter_mats, pipeline.k, run_cfg);
    RepetitionOutcome out;
    out.objective = state.objective_history.back();
    if (dataset.labels) {
      out.acc = 100.0 * metrics::clustering_accuracy(state.y.assignment(), *dataset.labels);
      out.nmi = 100.0 * metrics::nmi(state.y.assignment(), *dataset.labels);
      out.ari = 100.0 * metrics::ari(state.y.assignment(), *dataset.labels);
    }
    return out;
  };

  const unsigned workers = std::min<unsigned>(thread_cap(), static_cast<unsigned>(reps));
  if (workers <= 1) {
    for (std::size_t rep = 0; rep < reps; ++rep) outcomes[rep] = run_one(rep);
    return outcomes;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t rep = next.fetch_add(1);
        if (rep >= reps) return;
        try {
          outcomes[rep] = run_one(rep);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return outcomes;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const data::MultiViewDataset dataset = materialize_dataset(config);

  std::vector<int> multipliers;
  if (config.sweep_dimensions)
    multipliers = {1, 2, 3, 4};
  else
    multipliers = {config.pipeline.dimension_multiplier};

  std::vector<ResultRow> rows;
  for (const int mult : multipliers) {
    opt::PipelineConfig pipe_cfg = config.pipeline;
    pipe_cfg.dimension_multiplier = mult;
    const opt::Pipeline pipeline =
        stage("build-pipeline", [&] { return opt::build_pipeline(dataset, pipe_cfg); });
    const auto outcomes =
        stage("optimize", [&] { return run_repetitions(pipeline, config, dataset); });

    std::string id = dataset.name;
    if (config.sweep_dimensions)
      id += "[r=" + (mult == 1 ? std::string("k") : std::to_string(mult) + "k") + "]";

    const auto push_metric = [&](const std::string& metric, auto select) {
      std::vector<double> values;
      values.reserve(outcomes.size());
      for (const auto& o : outcomes) values.push_back(select(o));
      const Moments m = moments(values);
      rows.push_back(ResultRow{id, metric, m.mean, m.stddev, std::move(values)});
    };
    if (dataset.labels) {
      push_metric("ACC", [](const RepetitionOutcome& o) { return o.acc; });
      push_metric("NMI", [](const RepetitionOutcome& o) { return o.nmi; });
      push_metric("ARI", [](const RepetitionOutcome& o) { return o.ari; });
    } else {
      push_metric("objective", [](const RepetitionOutcome& o) { return o.objective; });
    }
  }
  return rows;
}

std::string emit_table(const std::vector<ResultRow>& rows, TableFormat format) {
  if (rows.empty()) throw std::invalid_argument("emit_table: no rows");

  // group by metric in ACC, NMI, ARI order; stable within a metric
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int ra = metric_rank(rows[a].metric), rb = metric_rank(rows[b].metric);
    if (ra != rb) return ra < rb;
    return rows[a].metric < rows[b].metric;
  });

  if (format == TableFormat::csv) {
    std::string out = "dataset,metric,mean,std";
    const std::size_t run_count = rows.front().runs.size();
    for (std::size_t r = 0; r < run_count; ++r) out += ",run_" + std::to_string(r);
    out.push_back('\n');
    for (const std::size_t i : order) {
      const ResultRow& row = rows[i];
      out += row.dataset;
      out.push_back(',');
      out += row.metric;
      out.push_back(',');
      append_double(out, row.mean);
      out.push_back(',');
      append_double(out, row.stddev);
      for (const double v : row.runs) {
        out.push_back(',');
        append_double(out, v);
      }
      out.push_back('\n');
    }
    return out;
  }

  if (format == TableFormat::json) {
    json doc;
    doc["rows"] = json::array();
    for (const std::size_t i : order) {
      const ResultRow& row = rows[i];
      json r;
      r["dataset"] = row.dataset;
      r["metric"] = row.metric;
      r["mean"] = row.mean;
      r["std"] = row.stddev;
      r["runs"] = row.runs;
      doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
  }

  // text: paper-style "mean ± std" with one decimal for the percent metrics
  std::size_t metric_width = 6, dataset_width = 7;
  for (const ResultRow& row : rows) {
    metric_width = std::max(metric_width, row.metric.size());
    dataset_width = std::max(dataset_width, row.dataset.size());
  }

  // with several datasets per metric (dimension sweep), star the best mean
  std::vector<char> best(rows.size(), 0);
  bool multiple_ids = false;
  for (const ResultRow& row : rows) multiple_ids |= row.dataset != rows.front().dataset;
  if (multiple_ids) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      bool is_best = true;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].metric != rows[i].metric) continue;
        const bool lower_is_better = rows[i].metric == "objective";
        if (lower_is_better ? rows[j].mean < rows[i].mean : rows[j].mean > rows[i].mean)
          is_best = false;
      }
      best[i] = is_best ? 1 : 0;
    }
  }

  std::string out;
  char buf[64];
  for (const std::size_t i : order) {
    const ResultRow& row = rows[i];
    out += row.metric;
    out.append(metric_width - row.metric.size() + 2, ' ');
    out += row.dataset;
    out.append(dataset_width - row.dataset.size() + 2, ' ');
    if (row.metric == "objective") {
      std::snprintf(buf, sizeof(buf), "%.6g \xC2\xB1 %.6g", row.mean, row.stddev);
    } else {
      std::snprintf(buf, sizeof(buf), "%.1f \xC2\xB1 %.1f", row.mean, row.stddev);
    }
    out += buf;
    if (multiple_ids && best[i]) out += " *";
    out.push_back('\n');
  }
  return out;
}

PepReportResult pep_enhancement_report(const ExperimentConfig& config, int t) {
  config.validate();
  const data::MultiViewDataset dataset = materialize_dataset(config);
  const opt::Pipeline pipeline =
      stage("build-pipeline", [&] { return opt::build_pipeline(dataset, config.pipeline); });

  std::vector<Matrix> filter_mats;
  for (const auto& f : pipeline.filters) filter_mats.push_back(f.values);
  opt::RunConfig run_cfg = config.pipeline.opt;
  run_cfg.seed = config.seed;
  const opt::OptimizerState state = stage("optimize", [&] {
    return opt::run_embedded(pipeline.embeddings, filter_mats, pipeline.k, run_cfg);
  });

  return stage("pep-report", [&] {
    std::vector<kernels::KernelMatrix> view_kernels;
    view_kernels.reserve(pipeline.normalized_views.size());
    for (const auto& x : pipeline.normalized_views) {
      const double sigma = config.pep_tau * kernels::median_pairwise_distance(x);
      view_kernels.push_back(kernels::exponential_kernel(x, sigma));
    }
    return PepReportResult{pep::pep_report(view_kernels, pipeline.filters, state.mu, t),
                           state.mu};
  });
}

}  // namespace gmlkm::harness
