#include "stages.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "manifest.hpp"
#include "tgk/cross_validation.hpp"
#include "tgk/dissemination.hpp"
#include "tgk/kernels.hpp"
#include "tgk/sampling.hpp"
#include "tgk/text.hpp"
#include "tgk/transform.hpp"

namespace tgk::cli {

namespace fs = std::filesystem;

namespace {

std::size_t g_threads = 1;

/// Runs fn(0..n-1) on up to thread_limit() workers. Results must be written
/// by index, so the outcome does not depend on scheduling. The exception of
/// the lowest failing index is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, Fn fn) {
  const std::size_t workers = std::min(thread_limit(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (i < failed_at) {
              failed_at = i;
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::string path_in(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

/// Input path as seen from the output directory, so manifests do not depend
/// on where the pipeline was launched from.
std::string relative_to(const std::string& path, const std::string& out) {
  return fs::relative(fs::absolute(path), fs::absolute(out)).generic_string();
}

struct LabeledIds {
  std::vector<std::string> ids;
  std::vector<int> classes;
};

LabeledIds read_labels(const std::string& path) {
  LabeledIds out;
  const auto text = read_file(path);
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    const auto tokens = tokenize(strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(line_no, path + ": expected '<graph id> <class>'");
    int cls = 0;
    if (tokens[1] == "1" || tokens[1] == "+1") {
      cls = 1;
    } else if (tokens[1] == "-1") {
      cls = -1;
    } else {
      throw ParseError(line_no, path + ": class must be +1 or -1");
    }
    out.ids.emplace_back(tokens[0]);
    out.classes.push_back(cls);
  }
  return out;
}

void write_labels(const std::string& dir, const LabeledIds& l) {
  std::ostringstream out;
  for (std::size_t i = 0; i < l.ids.size(); ++i) out << l.ids[i] << ' ' << l.classes[i] << '\n';
  write_file_atomic(path_in(dir, "labels.txt"), out.str());
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::string gram_file(KernelKind kind, int param) {
  return "gram_" + std::string(name(kind)) + "_" + std::to_string(param) + ".txt";
}

}  // namespace

void set_thread_limit(std::size_t threads) { g_threads = threads; }

std::size_t thread_limit() {
  if (g_threads > 0) return g_threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void simulate(const SimulateOptions& o) {
  require(!o.out.empty(), "simulate: --out is required");
  require(o.task == 1 || o.task == 2, "simulate: --task must be 1 or 2");
  require(o.reset >= 0 && o.reset <= 1, "simulate: --reset must lie in [0, 1]");
  StageRecord rec{"simulate", {}, {}, {}};
  rec.param("task", std::to_string(o.task));
  rec.param("s", std::to_string(o.s));
  rec.param("p", format_double(o.p));
  if (o.p2) rec.param("p2", format_double(*o.p2));
  rec.param("I", format_double(o.I));
  rec.param("seed", std::to_string(o.seed));

  std::vector<TemporalGraph> base;
  if (!o.input.empty()) {
    require(o.graphs == 0, "simulate: --input and --graphs are exclusive");
    require(o.cap > 0, "simulate: --input needs --cap");
    base = extract_bfs_subgraphs(read_temporal_graph(o.input), o.cap);
    rec.param("cap", std::to_string(o.cap));
  } else {
    require(o.graphs > 0 && o.vertices > 0 && o.tmax > 0,
            "simulate: give --input with --cap, or --graphs, --vertices, --edges and --tmax");
    base.resize(o.graphs);
    const auto stream = derive_seed(o.seed, 1);
    parallel_for(o.graphs, [&](std::size_t i) {
      Rng rng(derive_seed(stream, i));
      base[i] = random_temporal_graph(o.vertices, o.edges, o.tmax, rng);
    });
    rec.param("graphs", std::to_string(o.graphs));
    rec.param("vertices", std::to_string(o.vertices));
    rec.param("edges", std::to_string(o.edges));
    rec.param("tmax", std::to_string(o.tmax));
  }

  Dataset d;
  if (o.task == 1) {
    d = make_task1(base, SIConfig{o.s, o.p, o.I, derive_seed(o.seed, 2)});
  } else {
    require(o.p2.has_value(), "simulate: task 2 needs --p2");
    d = make_task2(base, o.p, *o.p2, derive_seed(o.seed, 2), o.s, o.I);
  }
  if (o.reset > 0) {
    d = reset_infections(d, o.reset, derive_seed(o.seed, 3));
    rec.param("reset", format_double(o.reset));
  }
  d.cap = o.cap;
  d.seed = o.seed;
  for (const auto& note : d.notes) std::fprintf(stderr, "tgk: note: %s\n", note.c_str());

  fs::create_directories(o.out);
  if (!o.input.empty()) rec.inputs.emplace_back(relative_to(o.input, o.out), file_digest(o.input));
  write_dataset(o.out, d);
  std::vector<std::string> files;
  for (std::size_t i = 0; i < d.graphs.size(); ++i) files.push_back(graph_id(i) + ".tg");
  files.emplace_back("labels.txt");
  files.emplace_back("meta.txt");
  finish_stage(o.out, {}, std::move(rec), files);
  std::printf("simulate: %zu graphs (%zu dropped) -> %s\n", d.graphs.size(), base.size() - d.graphs.size(),
              o.out.c_str());
}

void transform(const TransformOptions& o) {
  require(!o.in.empty() && !o.out.empty(), "transform: --in and --out are required");
  const auto t = parse_transformation(o.method);
  auto upstream = verify_directory(o.in);
  const auto labels = read_labels(path_in(o.in, "labels.txt"));
  fs::create_directories(o.out);

  parallel_for(labels.ids.size(), [&](std::size_t i) {
    const auto g = read_temporal_graph(path_in(o.in, labels.ids[i] + ".tg"));
    write_static_graph(path_in(o.out, labels.ids[i] + ".sg"), apply(t, g, o.waiting));
  });
  write_labels(o.out, labels);

  StageRecord rec{"transform", {}, {}, {}};
  rec.param("method", std::string(name(t)));
  rec.param("waiting", o.waiting ? "1" : "0");
  rec.inputs.emplace_back(relative_to(o.in, o.out), input_digest(o.in));
  std::vector<std::string> files;
  for (const auto& id : labels.ids) files.push_back(id + ".sg");
  files.emplace_back("labels.txt");
  finish_stage(o.out, std::move(upstream), std::move(rec), files);
  std::printf("transform: %zu graphs, %s -> %s\n", labels.ids.size(), std::string(name(t)).c_str(), o.out.c_str());
}

void gram(const GramOptions& o) {
  require(!o.in.empty() && !o.out.empty(), "gram: --in and --out are required");
  const auto kind = parse_kernel_kind(o.kernel);
  require(kind != KernelKind::SampledWalk, "gram: use the sample subcommand for sampled walks");
  require(!o.params.empty(), "gram: --param is required");
  for (int p : o.params) require(p >= 0, "gram: --param values must be non-negative");
  const std::set<int> distinct(o.params.begin(), o.params.end());
  const std::vector<int> params(distinct.begin(), distinct.end());

  auto upstream = verify_directory(o.in);
  const auto labels = read_labels(path_in(o.in, "labels.txt"));
  const std::size_t n = labels.ids.size();
  fs::create_directories(o.out);

  std::vector<std::vector<FeatureVector>> features(params.size(), std::vector<FeatureVector>(n));
  parallel_for(n, [&](std::size_t i) {
    const auto g = read_static_graph(path_in(o.in, labels.ids[i] + ".sg"));
    if (kind == KernelKind::WeisfeilerLehman) {
      const auto all = wl_feature_maps(g, params.back());
      for (std::size_t p = 0; p < params.size(); ++p) features[p][i] = all[static_cast<std::size_t>(params[p])];
    } else {
      for (std::size_t p = 0; p < params.size(); ++p) features[p][i] = rw_feature_map(g, params[p]);
    }
  });

  std::vector<std::string> files;
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto m = tgk::gram(features[p], labels.ids);
    if (o.normalize) m = tgk::normalize(m);
    files.push_back(gram_file(kind, params[p]));
    write_gram(path_in(o.out, files.back()), m);
    if (o.features) {
      for (std::size_t i = 0; i < n; ++i) {
        files.push_back(labels.ids[i] + "." + std::string(name(kind)) + std::to_string(params[p]) + ".fv");
        write_file_atomic(path_in(o.out, files.back()), serialize(features[p][i]));
      }
    }
  }
  write_labels(o.out, labels);
  files.emplace_back("labels.txt");

  StageRecord rec{"gram", {}, {}, {}};
  rec.param("kernel", std::string(name(kind)));
  std::string plist;
  for (int p : params) plist += (plist.empty() ? "" : ",") + std::to_string(p);
  rec.param("param", plist);
  rec.param("normalize", o.normalize ? "1" : "0");
  rec.inputs.emplace_back(relative_to(o.in, o.out), input_digest(o.in));
  finish_stage(o.out, std::move(upstream), std::move(rec), files);
  std::printf("gram: %zu graphs, %s at %s -> %s\n", n, std::string(name(kind)).c_str(), plist.c_str(),
              o.out.c_str());
}

void sample(const SampleOptions& o) {
  require(!o.in.empty() && !o.out.empty(), "sample: --in and --out are required");
  require(!o.ks.empty(), "sample: --k is required");
  auto upstream = verify_directory(o.in);
  const auto labels = read_labels(path_in(o.in, "labels.txt"));
  const std::size_t n = labels.ids.size();
  std::vector<TemporalGraph> graphs(n);
  parallel_for(n, [&](std::size_t i) { graphs[i] = read_temporal_graph(path_in(o.in, labels.ids[i] + ".tg")); });
  fs::create_directories(o.out);

  std::vector<std::string> files;
  for (int k : o.ks) {
    SamplerConfig base;
    base.k = k;
    base.samples = o.samples;
    base.reject = o.reject;
    validate(base);
    std::vector<FeatureVector> features(n);
    // Graph i draws from derive_seed(derive_seed(seed, k), i).
    const auto stream = derive_seed(o.seed, static_cast<std::uint64_t>(k));
    parallel_for(n, [&](std::size_t i) {
      auto cfg = base;
      cfg.seed = derive_seed(stream, i);
      try {
        features[i] = approx_feature_map(graphs[i], cfg);
      } catch (const NoWalkError& e) {
        throw NoWalkError("graph '" + labels.ids[i] + "': " + e.what());
      }
    });
    files.push_back(gram_file(KernelKind::SampledWalk, k));
    write_gram(path_in(o.out, files.back()), tgk::gram(features, labels.ids));
    if (o.features) {
      for (std::size_t i = 0; i < n; ++i) {
        files.push_back(labels.ids[i] + ".sampled" + std::to_string(k) + ".fv");
        write_file_atomic(path_in(o.out, files.back()), serialize(features[i]));
      }
    }
  }
  write_labels(o.out, labels);
  files.emplace_back("labels.txt");

  StageRecord rec{"sample", {}, {}, {}};
  std::string klist;
  for (int k : o.ks) klist += (klist.empty() ? "" : ",") + std::to_string(k);
  rec.param("k", klist);
  rec.param("samples", std::to_string(o.samples));
  rec.param("reject", o.reject ? "1" : "0");
  rec.param("seed", std::to_string(o.seed));
  rec.inputs.emplace_back(relative_to(o.in, o.out), input_digest(o.in));
  finish_stage(o.out, std::move(upstream), std::move(rec), files);
  std::printf("sample: %zu graphs, k = %s, S = %zu -> %s\n", n, klist.c_str(), o.samples, o.out.c_str());
}

namespace {

struct Method {
  std::string name;
  GramFamily family;
};

Method load_method(const std::string& dir) {
  verify_directory(dir);
  Method m;
  m.name = fs::path(dir).lexically_normal().filename().string();
  if (m.name.empty()) m.name = fs::path(dir).lexically_normal().parent_path().filename().string();
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto f = entry.path().filename().string();
    if (entry.is_regular_file() && f.starts_with("gram_") && f.ends_with(".txt")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  require(!files.empty(), "classify: no gram_*.txt files in '" + dir + "'");
  for (const auto& f : files) {
    auto g = read_gram(f.string());
    if (!m.family.empty() && m.family.begin()->second.kind != g.kind) {
      throw std::invalid_argument("classify: '" + dir + "' mixes kernel kinds");
    }
    const int param = g.param;
    if (!m.family.emplace(param, std::move(g)).second) {
      throw std::invalid_argument("classify: '" + dir + "' has two Grams for param " + std::to_string(param));
    }
  }
  return m;
}

}  // namespace

void classify(const ClassifyOptions& o) {
  require(!o.grams.empty(), "classify: --grams is required");
  const std::string labels_path = o.labels.empty() ? path_in(o.grams.front(), "labels.txt") : o.labels;
  const auto labels = read_labels(labels_path);
  std::map<std::string, int> class_of;
  for (std::size_t i = 0; i < labels.ids.size(); ++i) class_of[labels.ids[i]] = labels.classes[i];

  CvProtocol protocol;
  protocol.folds = o.folds;
  protocol.inner_folds = o.folds;
  protocol.repetitions = o.reps;
  protocol.seed = o.seed;

  nlohmann::ordered_json results;
  results["protocol"] = {{"folds", protocol.folds},
                         {"repetitions", protocol.repetitions},
                         {"inner_folds", protocol.inner_folds},
                         {"c_grid", protocol.c_grid},
                         {"seed", protocol.seed}};
  results["methods"] = nlohmann::ordered_json::array();
  std::ostringstream summary;
  for (const auto& dir : o.grams) {
    const auto m = load_method(dir);
    const auto& ids = m.family.begin()->second.ids;
    std::vector<int> classes;
    for (const auto& id : ids) {
      const auto it = class_of.find(id);
      require(it != class_of.end(), "classify: graph '" + id + "' has no label in '" + labels_path + "'");
      classes.push_back(it->second);
    }
    const auto r = cross_validate(m.family, classes, protocol);

    char line[256];
    std::snprintf(line, sizeof line, "%-16s %6.2f±%.2f", m.name.c_str(), r.mean, r.std);
    std::printf("%s\n", line);
    std::fflush(stdout);
    summary << line << '\n';

    nlohmann::ordered_json entry;
    entry["method"] = m.name;
    entry["kernel"] = std::string(name(m.family.begin()->second.kind));
    entry["normalized"] = m.family.begin()->second.normalized;
    std::vector<int> params;
    for (const auto& [p, g] : m.family) params.push_back(p);
    entry["params"] = params;
    entry["mean"] = r.mean;
    entry["std"] = r.std;
    entry["repetition_accuracy"] = r.repetition_accuracy;
    auto& sel = entry["selections"] = nlohmann::ordered_json::array();
    for (const auto& s : r.selections) sel.push_back({{"param", s.param}, {"C", s.C}});
    results["methods"].push_back(std::move(entry));
  }

  if (o.out.empty()) return;
  fs::create_directories(o.out);
  write_file_atomic(path_in(o.out, "results.json"), results.dump(2) + "\n");
  write_file_atomic(path_in(o.out, "results.txt"), summary.str());
  StageRecord rec{"classify", {}, {}, {}};
  rec.param("folds", std::to_string(o.folds));
  rec.param("reps", std::to_string(o.reps));
  rec.param("seed", std::to_string(o.seed));
  for (const auto& dir : o.grams) rec.inputs.emplace_back(relative_to(dir, o.out), input_digest(dir));
  rec.inputs.emplace_back(relative_to(labels_path, o.out), file_digest(labels_path));
  finish_stage(o.out, {}, std::move(rec), {"results.json", "results.txt"});
}

namespace {

struct Experiment {
  std::map<std::string, std::string> values;
  std::set<std::string> used;

  bool has(const std::string& key) const { return values.contains(key); }
  std::string get(const std::string& key, const std::string& fallback) {
    used.insert(key);
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
  template <typename T>
  T number(const std::string& key, T fallback) {
    const auto text = get(key, "");
    if (text.empty()) return fallback;
    std::istringstream in(text);
    T value{};
    in >> value;
    if (!in || !(in >> std::ws).eof()) throw std::invalid_argument("experiment: '" + key + "' is not a number: " + text);
    return value;
  }
  std::vector<std::string> list(const std::string& key, const std::string& fallback) {
    std::vector<std::string> out;
    for (auto t : tokenize(get(key, fallback))) out.emplace_back(t);
    return out;
  }
};

Experiment parse_experiment(const std::string& path) {
  static const std::set<std::string> known{
      "seed", "task",   "s",      "p",         "p2",      "I",      "reset",   "graphs", "vertices", "edges",
      "tmax", "input",  "cap",    "methods",   "waiting", "kernel", "params",  "normalize", "samples", "reject",
      "folds", "reps"};
  Experiment e;
  const auto text = read_file(path);
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, path + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (!known.contains(key)) throw ParseError(line_no, path + ": unknown key '" + key + "'");
    if (!e.values.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw ParseError(line_no, path + ": duplicate key '" + key + "'");
    }
  }
  return e;
}

}  // namespace

void pipeline(const std::string& experiment, const std::string& out) {
  require(!out.empty(), "pipeline: --out is required");
  auto e = parse_experiment(experiment);
  require(e.has("seed"), "experiment: 'seed' is required");
  const auto seed = e.number<std::uint64_t>("seed", 0);
  fs::create_directories(out);

  SimulateOptions sim;
  sim.task = e.number("task", 1);
  sim.s = e.number<std::size_t>("s", 1);
  sim.p = e.number("p", 0.5);
  if (e.has("p2")) sim.p2 = e.number("p2", 0.0);
  sim.I = e.number("I", 0.5);
  sim.reset = e.number("reset", 0.0);
  sim.input = e.get("input", "");
  if (!sim.input.empty() && fs::path(sim.input).is_relative()) {
    sim.input = (fs::path(experiment).parent_path() / sim.input).string();
  }
  sim.cap = e.number<std::size_t>("cap", 0);
  sim.graphs = e.number<std::size_t>("graphs", 0);
  sim.vertices = e.number<std::size_t>("vertices", 0);
  sim.edges = e.number<std::size_t>("edges", 0);
  sim.tmax = e.number<Time>("tmax", 0);
  sim.seed = derive_seed(seed, 0);
  sim.out = path_in(out, "data");
  simulate(sim);

  const auto kernel = e.get("kernel", "wl");
  std::vector<int> params;
  for (const auto& p : e.list("params", "0 1 2 3 4 5")) params.push_back(std::stoi(p));
  std::vector<std::string> method_dirs;
  if (kernel == "sampled") {
    SampleOptions so;
    so.ks = params;
    so.samples = e.number<std::size_t>("samples", 1000);
    so.reject = e.number("reject", 1) != 0;
    so.seed = derive_seed(seed, 1);
    so.in = sim.out;
    so.out = path_in(out, "sampled");
    sample(so);
    method_dirs.push_back(so.out);
  } else {
    const bool waiting = e.number("waiting", 0) != 0;
    const bool normalize = e.number("normalize", 1) != 0;
    for (const auto& method : e.list("methods", "dl se base")) {
      TransformOptions to{method, waiting, sim.out, path_in(out, "graphs-" + method)};
      transform(to);
      GramOptions go;
      go.kernel = kernel;
      go.params = params;
      go.normalize = normalize;
      go.in = to.out;
      go.out = path_in(out, method);
      gram(go);
      method_dirs.push_back(go.out);
    }
  }

  ClassifyOptions co;
  co.grams = method_dirs;
  co.folds = e.number<std::size_t>("folds", 10);
  co.reps = e.number<std::size_t>("reps", 10);
  co.seed = derive_seed(seed, 2);
  co.out = path_in(out, "results");
  classify(co);

  for (const auto& [key, value] : e.values) {
    if (!e.used.contains(key)) std::fprintf(stderr, "tgk: warning: experiment key '%s' was not used\n", key.c_str());
  }
}

}  // namespace tgk::cli
