#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "occo/ctdl.hpp"
#include "occo/json_codec.hpp"
#include "occo/registry_store.hpp"
#include "occo/service.hpp"

namespace occo {

inline constexpr std::string_view kDefaultBind = "127.0.0.1:7468";

namespace cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInvalidVerdict = 1;
inline constexpr int kUsage = 2;
inline constexpr int kFailure = 3;

inline std::vector<EntityId> split_ids(const std::string& csv) {
  std::vector<EntityId> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.emplace_back(part);
  return out;
}

inline std::filesystem::path graph_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("OCCO_GRAPH"); env && *env) return env;
  throw Error(errc::kUsage, "no graph file: pass --graph or set OCCO_GRAPH");
}

inline std::vector<JobDescription> select_jobs(const GraphSnapshot& g, const std::string& csv,
                                               const Date& at) {
  if (csv.empty()) return load_jobs(g, at);
  std::vector<JobDescription> jobs;
  for (const auto& id : split_ids(csv)) jobs.push_back(load_job(g, id, at));
  return jobs;
}

}  // namespace cli

// Runs one CLI invocation. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"occo: credential registry, validity reasoner and talent matcher", "occo"};
  app.require_subcommand(1);

  std::string graph_flag, at_text, holder, job, tmpl, jobs_csv, provider, file, bind, valid_from;
  std::string cred;
  std::size_t k = 10;
  bool strict = false;

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", graph_flag, "graph file (.occg); defaults to $OCCO_GRAPH");
  };
  auto add_at = [&](CLI::App* sub) {
    sub->add_option("--at", at_text, "evaluation date YYYY-MM-DD")->required();
  };

  auto* schema = app.add_subcommand("schema", "schema commands");
  schema->require_subcommand(1);
  auto* schema_dump = schema->add_subcommand("dump", "print the schema registry records");
  auto* schema_hash = schema->add_subcommand("hash", "print the built-in schema hash");

  auto* load = app.add_subcommand("load", "load a graph file and print a summary");
  add_graph(load);

  auto* validate = app.add_subcommand("validate", "classify a credential; exit 1 if invalid");
  validate->add_option("credential", cred)->required();
  add_graph(validate);
  add_at(validate);
  validate->add_flag("--strict-revocation", strict,
                     "treat accreditation revoked after issuance as invalidating");

  auto* explain_cmd = app.add_subcommand("explain", "per-rule validity report");
  explain_cmd->add_option("credential", cred)->required();
  add_graph(explain_cmd);
  add_at(explain_cmd);
  explain_cmd->add_flag("--strict-revocation", strict);

  auto* match = app.add_subcommand("match", "rank jobs for a holder");
  match->add_option("--holder", holder)->required();
  match->add_option("--jobs", jobs_csv, "comma-separated job ids (default: all jobs)");
  match->add_option("-k", k, "number of results");
  add_graph(match);
  add_at(match);

  auto* pathway = app.add_subcommand("pathway", "recommend credentials closing a job gap");
  pathway->add_option("--holder", holder)->required();
  pathway->add_option("--job", job)->required();
  add_graph(pathway);
  add_at(pathway);

  auto* whatif = app.add_subcommand("what-if", "score gains from earning a credential template");
  whatif->add_option("--holder", holder)->required();
  whatif->add_option("--template", tmpl)->required();
  whatif->add_option("--jobs", jobs_csv, "comma-separated job ids (default: all jobs)");
  add_graph(whatif);
  add_at(whatif);

  auto* recruits = app.add_subcommand("recruits", "recruitment suggestions for a provider");
  recruits->add_option("--provider", provider)->required();
  recruits->add_option("-k", k, "number of results");
  add_graph(recruits);
  add_at(recruits);

  auto* import_ctdl = app.add_subcommand("import-ctdl", "import CTDL-subset records into a graph");
  import_ctdl->add_option("file", file)->required();
  import_ctdl->add_option("--valid-from", valid_from,
                          "start date for imported assertions (default 1970-01-01)");
  add_graph(import_ctdl);

  auto* export_cmd = app.add_subcommand("export", "print the canonical form of a graph file");
  add_graph(export_cmd);

  auto* serve = app.add_subcommand("serve", "run the HTTP registry service");
  add_graph(serve);
  serve->add_option("--bind", bind, "listen address host:port (default 127.0.0.1:7468)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return cli::kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n" << app.help();
    return cli::kUsage;
  }

  try {
    auto date = [&] { return Date::parse(at_text); };
    auto graph = [&] { return load_graph_file(cli::graph_path(graph_flag)); };

    if (schema_dump->parsed()) {
      out << builtin_schema().dump();
      return cli::kOk;
    }
    if (schema_hash->parsed()) {
      out << builtin_schema().hash() << "\n";
      return cli::kOk;
    }
    if (load->parsed()) {
      const auto g = graph();
      std::size_t ext = 0;
      for (const auto& [_, c] : g.schema().classes()) ext += c.builtin ? 0 : 1;
      out << "entities " << g.entities().size() << "\n"
          << "assertions " << g.assertions().size() << "\n"
          << "extension_classes " << ext << "\n"
          << "schema_hash " << g.schema().hash() << "\n";
      return cli::kOk;
    }
    if (validate->parsed()) {
      const auto v = classify_credential(graph(), EntityId(cred), date(), {strict});
      out << render_verdict_line(v) << "\n";
      return v.valid() ? cli::kOk : cli::kInvalidVerdict;
    }
    if (explain_cmd->parsed()) {
      out << explain(graph(), EntityId(cred), date(), {strict});
      return cli::kOk;
    }
    if (match->parsed()) {
      const auto g = graph();
      const Date at = date();
      const auto profile = infer_profile(g, EntityId(holder), at);
      for (const auto& m : rank_jobs(g, profile, cli::select_jobs(g, jobs_csv, at), k))
        out << codec::match(m).dump() << "\n";
      return cli::kOk;
    }
    if (pathway->parsed()) {
      const auto g = graph();
      out << codec::pathway(pathway_for(g, EntityId(holder), EntityId(job), date())).dump()
          << "\n";
      return cli::kOk;
    }
    if (whatif->parsed()) {
      const auto g = graph();
      const Date at = date();
      const auto rows = what_if(g, infer_profile(g, EntityId(holder), at), EntityId(tmpl),
                                cli::select_jobs(g, jobs_csv, at), at);
      for (const auto& r : rows) out << codec::what_if_row(r).dump() << "\n";
      return cli::kOk;
    }
    if (recruits->parsed()) {
      const auto g = graph();
      const Date at = date();
      for (const auto& r : recommend_recruits(g, EntityId(provider), all_holders(g),
                                              load_jobs(g, at), at, k))
        out << codec::recruit(r).dump() << "\n";
      return cli::kOk;
    }
    if (import_ctdl->parsed()) {
      const auto path = cli::graph_path(graph_flag);
      const auto base = std::filesystem::exists(path) ? load_graph_file(path)
                                                      : GraphSnapshot::empty();
      CtdlImportOptions opts;
      if (!valid_from.empty()) opts.valid_from = Date::parse(valid_from);
      auto [g, report] = map_to_graph(parse_ctdl(read_file(file)), base, opts);
      write_file_atomic(path, export_graph(g));
      out << codec::import_report(report).dump() << "\n";
      return cli::kOk;
    }
    if (export_cmd->parsed()) {
      out << export_graph(graph());
      return cli::kOk;
    }
    if (serve->parsed()) {
      auto store = RegistryStore::open(cli::graph_path(graph_flag));
      const auto [host, port] = parse_bind_address(bind.empty() ? std::string(kDefaultBind) : bind);
      HttpServer http(store);
      const int bound = http.bind(host, port);
      out << "listening on " << host << ":" << bound << std::endl;
      http.listen_after_bind();
      return cli::kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return e.code() == errc::kUsage ? cli::kUsage : cli::kFailure;
  }
  err << app.help();
  return cli::kUsage;
}

}  // namespace occo
