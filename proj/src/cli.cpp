#include "stance/cli.hpp"

#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "stance/ingest.hpp"
#include "stance/service.hpp"
#include "stance/snapshot.hpp"

namespace stance::cli {

namespace {

struct BuildOptions {
  std::string input;
  std::string format;
  std::string dataset;
  std::size_t min_count = kDefaultMinActivity;
  std::string output;
};

struct ServeOptions {
  std::string listen = "127.0.0.1:8080";
  std::vector<std::string> snapshots;
  std::string static_dir;
};

InputFormat infer_format(const std::string& path) {
  auto dot = path.rfind('.');
  auto ext = dot == std::string::npos ? std::string{} : path.substr(dot + 1);
  return ext == "jsonl" || ext == "ndjson" ? InputFormat::LineDelimitedRecords
                                           : InputFormat::DelimitedText;
}

int run_build(const BuildOptions& opt, std::ostream& out, std::ostream& err) {
  InputFormat format = opt.format.empty() ? infer_format(opt.input)
                       : opt.format == "jsonl"  ? InputFormat::LineDelimitedRecords
                                                : InputFormat::DelimitedText;
  auto dataset = *parse_dataset_id(opt.dataset);

  std::ifstream in(opt.input, std::ios::binary);
  if (!in) {
    err << "error: cannot read input " << opt.input << '\n';
    return kParseError;
  }

  DatasetSnapshot snap;
  try {
    auto records = parse_dataset(in, format);
    snap = build_snapshot(records, dataset, opt.min_count);
  } catch (const ParseError& e) {
    err << "error: " << opt.input << ": " << e.what() << '\n';
    return kParseError;
  } catch (const BuildError& e) {
    err << "error: " << opt.input << ": " << e.what() << '\n';
    return e.kind() == BuildError::Kind::EmptyAfterFilter ? kEmptyAfterFilter : kParseError;
  }

  std::ofstream dest(opt.output, std::ios::binary | std::ios::trunc);
  if (!dest) {
    err << "error: cannot write output " << opt.output << '\n';
    return kWriteError;
  }
  try {
    export_snapshot(snap, dest);
  } catch (const std::ios_base::failure&) {
    err << "error: failed writing " << opt.output << '\n';
    return kWriteError;
  }

  out << "wrote " << opt.output << ": " << snap.points.size() << " points, "
      << snap.authors.size() << " authors, " << snap.months.size() << " months, "
      << snap.topic_stats.size() << " topic stats\n";
  return kOk;
}

int run_serve(const ServeOptions& opt, std::ostream& out, std::ostream& err) {
  ServiceConfig config;
  auto address = parse_listen_address(opt.listen);
  if (!address) {
    err << "error: bad listen address '" << opt.listen << "'\n";
    return kUsage;
  }
  std::tie(config.host, config.port) = *address;
  config.snapshot_paths = opt.snapshots;
  if (!opt.static_dir.empty()) config.static_dir = opt.static_dir;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::shared_ptr<const SnapshotStore> store;
  try {
    store = std::make_shared<const SnapshotStore>(SnapshotStore::load(config.snapshot_paths));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    HttpService service(store, config.static_dir);
    if (service.bind(config.host, config.port) < 0) {
      err << "error: cannot listen on " << config.host << ':' << config.port << '\n';
      return kServeError;
    }
    out << "serving " << store->snapshots().size() << " dataset(s) on http://" << config.host
        << ':' << config.port << std::endl;
    return service.listen_after_bind() ? kOk : kServeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kServeError;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cumulative stance and topic snapshots for labeled tweet datasets"};
  app.require_subcommand(1);

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Turn a labeled tweet file into a snapshot");
  build_cmd->add_option("-i,--input", build.input, "Labeled tweet file")->required();
  build_cmd->add_option("-f,--format", build.format, "csv or jsonl (default: from extension)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  build_cmd->add_option("-d,--dataset", build.dataset, "motivating or demotivating")
      ->required()
      ->check(CLI::IsMember({"motivating", "demotivating"}));
  build_cmd->add_option("-m,--min-count", build.min_count, "Minimum tweets per author")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  build_cmd->add_option("-o,--output", build.output, "Snapshot file to write")->required();

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve snapshots over a read-only HTTP API");
  serve_cmd->add_option("-l,--listen", serve.listen, "host:port")
      ->capture_default_str()
      ->envname("STANCE_LISTEN");
  serve_cmd->add_option("-s,--snapshot", serve.snapshots, "Snapshot file (repeatable)")
      ->delimiter(',')
      ->envname("STANCE_SNAPSHOTS");
  serve_cmd->add_option("--static", serve.static_dir, "Directory with the UI bundle")
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  if (*build_cmd) return run_build(build, out, err);
  return run_serve(serve, out, err);
}

}  // namespace stance::cli
