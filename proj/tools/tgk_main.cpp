// tgk: command-line front end for the temporal graph kernel pipeline.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "stages.hpp"
#include "tgk/error.hpp"
#include "tgk/sampling.hpp"
#include "tgk/svm.hpp"

namespace {

// Exit codes past CLI11's own usage errors.
constexpr int kModuleError = 1;
constexpr int kDigestError = 3;

int fail(const char* kind, const std::exception& e, int code = kModuleError) {
  std::fprintf(stderr, "tgk: error [%s]: %s\n", kind, e.what());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tgk::cli;
  CLI::App app{"Temporal graph kernels: simulate, transform, kernelize and classify"};
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "Worker threads per stage (0 = one per core)")->capture_default_str();

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Build a labelled SI dataset");
  s->add_option("--task", sim.task, "1 (SI vs random times) or 2 (p vs p2)")->required();
  s->add_option("--s", sim.s, "Seed vertices per run")->capture_default_str();
  s->add_option("--p", sim.p, "Infection probability (class +1 in task 2)")->capture_default_str();
  s->add_option("--p2", sim.p2, "Infection probability of class -1 in task 2");
  s->add_option("--I", sim.I, "Target infected fraction")->capture_default_str();
  s->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  s->add_option("--out", sim.out, "Output dataset directory")->required();
  s->add_option("--input", sim.input, "Temporal graph file to cut BFS subgraphs from");
  s->add_option("--cap", sim.cap, "Vertex budget of each BFS subgraph");
  s->add_option("--graphs", sim.graphs, "Number of random graphs (instead of --input)");
  s->add_option("--vertices", sim.vertices, "Vertices per random graph");
  s->add_option("--edges", sim.edges, "Temporal edges per random graph");
  s->add_option("--tmax", sim.tmax, "Largest time stamp of the random graphs");
  s->add_option("--reset", sim.reset, "Fraction of infected vertices reset to susceptible");

  TransformOptions tr;
  auto* t = app.add_subcommand("transform", "Turn temporal graphs into static ones");
  t->add_option("--method", tr.method, "rd, dl, se or base")->required();
  t->add_flag("--waiting", tr.waiting, "Annotate DL arcs with waiting times");
  t->add_option("--in", tr.in, "Dataset directory")->required();
  t->add_option("--out", tr.out, "Output directory")->required();

  GramOptions gr;
  auto* g = app.add_subcommand("gram", "Exact kernel Gram matrices, one file per parameter");
  g->add_option("--kernel", gr.kernel, "rw or wl")->required();
  g->add_option("--param", gr.params, "Walk length k or WL depth h; several values allowed")->required();
  g->add_flag("--normalize", gr.normalize, "Cosine-normalize the Gram matrices");
  g->add_flag("--features", gr.features, "Also write per-graph feature vectors");
  g->add_option("--in", gr.in, "Directory of static graphs")->required();
  g->add_option("--out", gr.out, "Output directory")->required();

  SampleOptions sa;
  bool no_reject = false;
  auto* sm = app.add_subcommand("sample", "Sampled temporal walk kernel");
  sm->add_option("--k", sa.ks, "Walk length; several values allowed")->required();
  sm->add_option("--samples", sa.samples, "Walks per graph")->required();
  sm->add_flag("--no-reject", no_reject, "Skip the rejection step (non-uniform walks)");
  sm->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
  sm->add_flag("--features", sa.features, "Also write per-graph feature vectors");
  sm->add_option("--in", sa.in, "Dataset directory")->required();
  sm->add_option("--out", sa.out, "Output directory")->required();

  ClassifyOptions cl;
  auto* c = app.add_subcommand("classify", "Nested cross-validated C-SVM accuracy");
  c->add_option("--grams", cl.grams, "Directories of param-indexed Gram files, one per method")->required();
  c->add_option("--labels", cl.labels, "Label file (default: labels.txt of the first Gram directory)");
  c->add_option("--folds", cl.folds, "Outer and inner folds")->capture_default_str();
  c->add_option("--reps", cl.reps, "Repetitions")->capture_default_str();
  c->add_option("--seed", cl.seed, "Fold seed")->capture_default_str();
  c->add_option("--out", cl.out, "Results directory");

  std::string experiment, pipeline_out;
  auto* p = app.add_subcommand("pipeline", "Run a whole experiment file");
  p->add_option("experiment", experiment, "Experiment file (key = value)")->required()->check(CLI::ExistingFile);
  p->add_option("--out", pipeline_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  sa.reject = !no_reject;
  set_thread_limit(threads);

  try {
    if (*s) simulate(sim);
    if (*t) transform(tr);
    if (*g) gram(gr);
    if (*sm) sample(sa);
    if (*c) classify(cl);
    if (*p) pipeline(experiment, pipeline_out);
  } catch (const DigestMismatch& e) {
    return fail("digest", e, kDigestError);
  } catch (const tgk::ParseError& e) {
    return fail("parse", e);
  } catch (const tgk::ValidationError& e) {
    return fail("validation", e);
  } catch (const tgk::NoWalkError& e) {
    return fail("no-walk", e);
  } catch (const tgk::ConvergenceError& e) {
    return fail("convergence", e);
  } catch (const tgk::Error& e) {
    return fail("io", e);
  } catch (const std::invalid_argument& e) {
    return fail("argument", e);
  } catch (const std::exception& e) {
    return fail("internal", e);
  }
  return 0;
}
