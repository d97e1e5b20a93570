// cocycle-lab: batch diagnostics for linear cocycles over topological
// dynamical systems.  Subcommands mirror the library diagnostics and write
// deterministic CSV/JSON artifacts.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "cocyclelab/experiment.hpp"

using namespace cocyclelab;

namespace {

void add_common(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_option("--example", cfg.example, "catalog example name");
  sub->add_option("--n", cfg.horizon, "horizon (schedule grows geometrically up to this)");
  sub->add_option("--points", cfg.points, "sample size");
  sub->add_option("--level", cfg.level, "subshift level for symbolic examples");
  sub->add_option("--seed", cfg.seed, "sample seed");
  sub->add_option("--k", cfg.k, "splitting index");
  sub->add_option("--grid-step", cfg.grid_step, "Sacker-Sell lambda grid step");
  sub->add_option("--tol", cfg.tol, "verdict tolerance (nats/iterate)");
  sub->add_option("--rate-floor", cfg.rate_floor, "domination rate floor");
  sub->add_option("--alpha", cfg.alpha, "oscillation witness lower level");
  sub->add_option("--beta", cfg.beta, "oscillation witness upper level (0: derive)");
  sub->add_flag("--include-junctions", cfg.include_junctions,
                "append subshift junction points to the sample");
  sub->add_flag("--assert-expected", cfg.assert_expected,
                "exit nonzero when catalog expectations fail");
  sub->add_option("--out-dir", cfg.out_dir, "artifact directory")->envname("COCYCLE_LAB_OUT");
  sub->add_option("--out-prefix", cfg.out_prefix, "artifact filename prefix");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for linear cocycles"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override file keys");

  ExperimentConfig cfg;
  const char* diagnostics[] = {"spectrum",    "gap",        "dominate", "oseledets",
                               "sacker-sell", "regularity", "complete", "witness"};
  const char* blurbs[] = {"finite-time Lyapunov spectrum along the schedule",
                          "singular-value gap series per sample point",
                          "dominated-splitting verdict at index k",
                          "Oseledets subspace estimate at the first sample point",
                          "Sacker-Sell spectrum estimate over a lambda grid",
                          "per-point LP-regularity probes",
                          "complete-regularity probe over the sample",
                          "oscillation witnesses for dense I/S sets"};
  for (size_t i = 0; i < std::size(diagnostics); ++i) {
    CLI::App* sub = app.add_subcommand(diagnostics[i], blurbs[i]);
    add_common(sub, cfg);
    sub->callback([&cfg, name = std::string(diagnostics[i])] { cfg.diagnostic = name; });
  }

  std::string catalog_action = "list";
  std::string catalog_name;
  CLI::App* cat = app.add_subcommand("catalog", "list or describe catalog examples");
  cat->add_option("action", catalog_action, "list | describe")->check(CLI::IsMember({"list", "describe"}));
  cat->add_option("name", catalog_name, "example name for describe");
  cat->add_flag("--json", "emit the expectation block as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cat->parsed()) {
      if (catalog_action == "list") {
        for (const auto& e : catalog()) std::printf("%-24s %s\n", e.name.c_str(), e.description.c_str());
        return 0;
      }
      if (catalog_name.empty()) {
        std::fprintf(stderr, "describe needs an example name\n");
        return 2;
      }
      const NamedExample ex = make_example(catalog_name);
      if (cat->count("--json")) {
        Json j;
        j["name"] = ex.name;
        j["description"] = ex.description;
        Json arr = Json::array();
        for (const auto& e : ex.expected) {
          Json item;
          item["key"] = e.key;
          item["value"] = e.value;
          item["provenance"] = e.provenance;
          arr.push_back(item);
        }
        j["expected"] = arr;
        std::printf("%s\n", j.dump(2).c_str());
      } else {
        std::printf("%s: %s\n", ex.name.c_str(), ex.description.c_str());
        std::printf("dim=%d  label=%s\n", ex.cocycle.dim, ex.cocycle.label.c_str());
        for (const auto& e : ex.expected)
          std::printf("  expect %-28s %-40s [%s]\n", e.key.c_str(), e.value.c_str(),
                      e.provenance.c_str());
      }
      return 0;
    }

    bool known = false;
    for (const auto& e : catalog())
      if (e.name == cfg.example) known = true;
    if (!known && cfg.example != "walters") {
      std::fprintf(stderr, "unknown example '%s' (see `catalog list`)\n", cfg.example.c_str());
      return 2;
    }
    return run_experiment(cfg);
  } catch (const WindowExhausted& e) {
    std::fprintf(stderr, "runtime: %s\n", e.what());
    return 3;
  } catch (const InvalidParameter& e) {
    std::fprintf(stderr, "config: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
