// geol: discover topological links between two SPARQL geospatial resources.
//
//   geol run --config task.json [--relation R] [--output PATH]
//            [--cache-dir DIR] [--dry-run] [--quiet]
//   geol serve [--bind HOST:PORT] [--cache-dir DIR]
//
// Exit codes for run: 0 success, 1 configuration error, 2 endpoint or
// storage failure (the partial cache is preserved).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "geol/link_engine.hpp"
#include "geol/service.hpp"
#include "geol/task_config.hpp"

namespace {

std::string resolve_cache_dir(const std::string& flag, const geol::TaskConfig& config) {
  if (!flag.empty()) return flag;
  if (config.cache_dir) return *config.cache_dir;
  if (const char* env = std::getenv("GEOL_CACHE_DIR"); env && *env) return env;
  return "geol-cache";
}

int run_command(const std::string& config_path, const std::string& relation_override,
                const std::string& output_override, const std::string& cache_dir_flag,
                bool dry_run, bool quiet) {
  geol::TaskConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << "\n";
      return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    config = geol::parse_config(buffer.str());
    if (!relation_override.empty()) {
      auto rel = geol::parse_relation(relation_override);
      if (!rel) {
        std::cerr << "error: unknown relation \"" << relation_override << "\"\n";
        return 1;
      }
      config.task.relation = *rel;
    }
    if (!output_override.empty()) config.task.output = output_override;
  } catch (const geol::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (dry_run) {
    if (!quiet) std::cerr << "configuration valid\n";
    return 0;
  }

  try {
    geol::CacheStore store(resolve_cache_dir(cache_dir_flag, config));
    geol::LinkEngine engine(store);
    geol::EngineProgressFn progress;
    if (!quiet) {
      progress = [](const geol::ProgressEvent& event) {
        std::cerr << geol::phase_name(event.phase) << " " << event.done << "/" << event.total
                  << "\n";
      };
    }
    geol::LinkMapping mapping = engine.run(config.task, progress);
    if (config.task.output == "inline") {
      geol::write_links(mapping, std::cout);
    }
    if (!quiet) {
      std::cerr << "links: " << mapping.stats.links_found
                << "  excluded: " << mapping.excluded.size()
                << "  candidates: " << mapping.stats.candidates_tested << "\n";
      if (mapping.stats.duplicate_ids > 0) {
        std::cerr << "warning: " << mapping.stats.duplicate_ids
                  << " duplicate resource id(s); links are reported as a set\n";
      }
      for (const auto& ex : mapping.excluded) {
        std::cerr << "excluded " << (ex.side == geol::Side::Source ? "source" : "target") << " <"
                  << ex.id << ">: " << geol::exclusion_reason_name(ex.reason) << " (" << ex.detail
                  << ")\n";
      }
    }
    return 0;
  } catch (const geol::EndpointError& e) {
    std::cerr << "endpoint error: " << e.what() << "\n";
    return 2;
  } catch (const geol::QueryError& e) {
    std::cerr << "query error: " << e.what() << "\n";
    return 2;
  } catch (const geol::StorageError& e) {
    std::cerr << "storage error: " << e.what() << "\n";
    return 2;
  } catch (const geol::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  }
}

int serve_command(const std::string& bind, const std::string& cache_dir_flag) {
  std::string host = "127.0.0.1";
  int port = 8080;
  if (auto colon = bind.rfind(':'); colon != std::string::npos) {
    host = bind.substr(0, colon);
    port = std::atoi(bind.c_str() + colon + 1);
  } else if (!bind.empty()) {
    host = bind;
  }

  geol::LinkService::Options options;
  options.cache_dir = cache_dir_flag.empty()
                          ? resolve_cache_dir("", geol::TaskConfig{})
                          : cache_dir_flag;
  try {
    geol::LinkService service(options);
    std::cerr << "serving on http://" << host << ":" << port << "\n";
    service.serve(host, port);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geospatial link discovery over SPARQL endpoints"};
  app.require_subcommand(0, 1);

  std::string config_path, relation_override, output_override, cache_dir;
  bool dry_run = false, quiet = false;
  auto* run = app.add_subcommand("run", "run a link discovery task");
  run->add_option("--config", config_path, "task configuration JSON")->required();
  run->add_option("--relation", relation_override, "override the configured relation");
  run->add_option("--output", output_override, "override the output destination");
  run->add_option("--cache-dir", cache_dir, "override the cache directory");
  run->add_flag("--dry-run", dry_run, "validate the configuration only");
  run->add_flag("--quiet", quiet, "suppress progress output");

  std::string bind = "127.0.0.1:8080", serve_cache_dir;
  auto* serve = app.add_subcommand("serve", "run the REST job service");
  serve->add_option("--bind", bind, "HOST:PORT to listen on");
  serve->add_option("--cache-dir", serve_cache_dir, "cache directory");

  // Bare `geol --config ...` is treated as `geol run --config ...`.
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args.front().rfind("-", 0) == 0) {
    args.insert(args.begin(), "run");
  }
  std::vector<const char*> cargs{argv[0]};
  for (const auto& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (run->parsed())
    return run_command(config_path, relation_override, output_override, cache_dir, dry_run, quiet);
  if (serve->parsed()) return serve_command(bind, serve_cache_dir);
  std::cout << app.help();
  return 0;
}
