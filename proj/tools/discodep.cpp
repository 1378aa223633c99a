#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "discodep/cli.hpp"

namespace {

using namespace discodep;

template <typename T, typename Parse>
CLI::Option* add_enum(CLI::App* app, const std::string& name, T& target, Parse parse,
                      const std::string& help) {
  return app->add_option_function<std::string>(
      name,
      [&target, parse, name](const std::string& v) {
        auto parsed = parse(v);
        if (!parsed) throw CLI::ValidationError(name, "unknown value '" + v + "'");
        target = *parsed;
      },
      help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discourse dependency conversion and distance statistics"};
  app.require_subcommand(1);

  cli::Context ctx{&std::cout, &std::cerr, cli::log_level_from_env()};
  std::size_t workers = 1;
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
  };
  auto opt_string = [](CLI::App* sub, const std::string& name, std::optional<std::string>& target,
                       const std::string& help) {
    return sub->add_option_function<std::string>(
        name, [&target](const std::string& v) { target = v; }, help);
  };

  cli::ConvertPdtbOptions pdtb;
  std::string columns;
  auto* c_pdtb = app.add_subcommand("convert-pdtb", "PDTB relation files to local dependency forests");
  c_pdtb->add_option("--input", pdtb.input, "Relation file or directory of <doc_id>.pdtb")->required();
  c_pdtb->add_option("--edus", pdtb.edus, "Segmentation file")->required();
  c_pdtb->add_option("--out", pdtb.out, "Output directory")->required();
  add_enum(c_pdtb, "--format", pdtb.format, parse_dep_format, "conll, csv or json");
  c_pdtb->add_option("--theta", pdtb.theta, "Minimum EDU overlap fraction");
  c_pdtb->add_option("--columns", columns, "Eight comma-separated field indices");
  opt_string(c_pdtb, "--head-rules", pdtb.head_rules, "Per-class head rule overrides");
  c_pdtb->add_flag("--strict", pdtb.strict, "Exit 1 on data diagnostics");
  add_workers(c_pdtb);

  cli::ConvertRstOptions rst;
  auto* c_rst = app.add_subcommand("convert-rst", "RST .dis trees to rooted dependency trees");
  c_rst->add_option("--input", rst.input, "Tree file or directory of <doc_id>.dis")->required();
  c_rst->add_option("--out", rst.out, "Output directory")->required();
  add_enum(c_rst, "--algo", rst.algo, cli::parse_rst_algo, "hirao or li");
  add_enum(c_rst, "--format", rst.format, parse_dep_format, "conll, csv or json");
  opt_string(c_rst, "--labels", rst.labels, "relation<TAB>class map");
  c_rst->add_flag("--strict", rst.strict, "Exit 1 on data diagnostics");
  add_workers(c_rst);

  cli::MetricsOptions metrics;
  auto* c_metrics = app.add_subcommand("metrics", "Per-document mean dependency distance and SD");
  c_metrics->add_option("--input", metrics.inputs, "Dependency files or directories")->required();
  c_metrics->add_option_function<std::string>(
      "--format", [&](const std::string& v) {
        metrics.format = parse_dep_format(v);
        if (!metrics.format) throw CLI::ValidationError("--format", "unknown value '" + v + "'");
      },
      "conll, csv or json (default: from extension)");
  add_enum(c_metrics, "--mode", metrics.mode, parse_metrics_mode, "local or rooted");
  opt_string(c_metrics, "--out", metrics.out, "Output csv (default stdout)");
  add_workers(c_metrics);

  cli::CorrelateOptions corr;
  auto* c_corr = app.add_subcommand("correlate", "Pearson correlation of two metrics files");
  c_corr->add_option("--left", corr.left, "Metrics csv")->required();
  c_corr->add_option("--right", corr.right, "Metrics csv")->required();
  c_corr->add_option("--key", corr.key, "Join key");
  add_enum(c_corr, "--field", corr.field, parse_metric_field, "mdd or sd");
  opt_string(c_corr, "--out", corr.out, "Output csv (default stdout)");
  add_workers(c_corr);

  cli::ValidateOptions val;
  auto* c_val = app.add_subcommand("validate", "Check dependency graph invariants");
  c_val->add_option("--input", val.inputs, "Dependency files or directories")->required();
  c_val->add_option_function<std::string>(
      "--format", [&](const std::string& v) {
        val.format = parse_dep_format(v);
        if (!val.format) throw CLI::ValidationError("--format", "unknown value '" + v + "'");
      },
      "conll, csv or json (default: from extension)");
  opt_string(c_val, "--out", val.out, "Report file (default stdout)");
  add_workers(c_val);

  cli::SplitOptions split;
  auto* c_split = app.add_subcommand("split", "Seeded train/dev/test manifests");
  c_split->add_option("--input", split.input, "Corpus directory or id list")->required();
  c_split->add_option("--out", split.out, "Manifest directory")->required();
  c_split->add_option("--train", split.train)->required();
  c_split->add_option("--dev", split.dev)->required();
  c_split->add_option("--test", split.test)->required();
  c_split->add_option("--seed", split.seed);
  add_workers(c_split);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_pdtb) {
      if (!columns.empty()) pdtb.columns = ColumnMap::parse(columns);
      pdtb.workers = workers;
      return cli::convert_pdtb_cmd(pdtb, ctx);
    }
    if (*c_rst) {
      rst.workers = workers;
      return cli::convert_rst_cmd(rst, ctx);
    }
    if (*c_metrics) {
      metrics.workers = workers;
      return cli::metrics_cmd(metrics, ctx);
    }
    if (*c_corr) {
      corr.workers = workers;
      return cli::correlate_cmd(corr, ctx);
    }
    if (*c_val) {
      val.workers = workers;
      return cli::validate_cmd(val, ctx);
    }
    if (*c_split) {
      split.workers = workers;
      return cli::split_cmd(split, ctx);
    }
  } catch (const Error& e) {
    std::cerr << "discodep: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "discodep: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
