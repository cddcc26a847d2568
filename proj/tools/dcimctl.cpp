// dcimctl: batch CLI and HTTP server front end.
//
// Subcommands: serve, apply <file>, query "<intent>", simulate <scenario>
// [--seed N], report, snapshot <file>, restore <file>. Machine-readable
// output goes to stdout, diagnostics to stderr. Exit codes: 0 success,
// 1 rejected/invalid input, 2 internal error or bad usage.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "dcim/svc/service.hpp"

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? v : fallback;
}

int run(int argc, char** argv) {
  CLI::App app{"DCIM connectivity, reasoning and digital-twin toolkit"};
  app.require_subcommand(1);

  dcim::svc::ServiceOptions options;
  options.data_dir = env_or("DCIM_DATA_DIR", "data");
  options.scenario_dir = env_or("DCIM_SCENARIO_DIR", "scenarios");
  int port = std::atoi(env_or("DCIM_PORT", "8080").c_str());

  auto* serve = app.add_subcommand("serve", "run the HTTP front door");
  serve->add_option("--port", port, "listen port");

  std::string apply_file;
  auto* apply = app.add_subcommand("apply", "apply a UDCP transaction file");
  apply->add_option("file", apply_file, "UDCP JSON document")->required();

  std::string intent_text;
  auto* query = app.add_subcommand("query", "evaluate a controlled-grammar intent");
  query->add_option("intent", intent_text, "e.g. \"show racks with power_kw > 40\"")->required();

  std::string scenario_name;
  std::uint64_t seed = 0;
  bool seed_set = false;
  auto* simulate = app.add_subcommand("simulate", "run a named scenario");
  simulate->add_option("scenario", scenario_name, "scenario name (file in scenario dir)")
      ->required();
  simulate->add_option("--seed", seed, "override scenario seed");

  auto* report = app.add_subcommand("report", "print the current efficiency report");

  std::string snapshot_file;
  auto* snapshot = app.add_subcommand("snapshot", "write a snapshot of the live state");
  snapshot->add_option("file", snapshot_file, "output path")->required();

  std::string restore_file;
  auto* restore = app.add_subcommand("restore", "replace live state from a snapshot");
  restore->add_option("file", restore_file, "snapshot path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    int code = app.exit(e, usage, usage);
    std::cerr << usage.str();
    return code == 0 ? 0 : 2;
  }

  seed_set = simulate->count("--seed") > 0;
  dcim::svc::Service service(options);

  if (serve->parsed()) {
    httplib::Server server;
    service.attach_routes(server);
    std::cerr << "listening on 127.0.0.1:" << port << " (data: " << options.data_dir << ")\n";
    if (!server.listen("127.0.0.1", port)) {
      std::cerr << "failed to bind port " << port << "\n";
      return 2;
    }
    return 0;
  }

  if (apply->parsed()) {
    std::ifstream in(apply_file);
    if (!in) {
      std::cerr << "cannot open " << apply_file << "\n";
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    dcim::svc::HttpResponse res = service.handle_udcp(buf.str());
    std::cout << res.body.dump(2) << "\n";
    return res.status == 200 ? 0 : 1;
  }

  if (query->parsed()) {
    dcim::svc::HttpResponse res =
        service.handle_intent(nlohmann::json{{"text", intent_text}}.dump());
    std::cout << res.body.dump(2) << "\n";
    return res.status == 200 ? 0 : 1;
  }

  if (simulate->parsed()) {
    nlohmann::json body{{"scenario", scenario_name}};
    if (seed_set) body["seed"] = seed;
    dcim::svc::HttpResponse res = service.handle_simulate(body.dump());
    if (res.status != 200) {
      std::cerr << res.body.dump() << "\n";
      return res.status == 404 ? 1 : 1;
    }
    std::cout << res.body.dump(2) << "\n";
    return 0;
  }

  if (report->parsed()) {
    std::cout << service.handle_metrics().body.dump(2) << "\n";
    return 0;
  }

  if (snapshot->parsed()) {
    std::ofstream out(snapshot_file);
    if (!out) {
      std::cerr << "cannot write " << snapshot_file << "\n";
      return 2;
    }
    out << service.snapshot().dump(2) << "\n";
    return 0;
  }

  if (restore->parsed()) {
    std::ifstream in(restore_file);
    if (!in) {
      std::cerr << "cannot open " << restore_file << "\n";
      return 2;
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
      std::cerr << "snapshot is not valid JSON\n";
      return 1;
    }
    service.restore(doc);
    std::cout << "{\"restored\": true}\n";
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
