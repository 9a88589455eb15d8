#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "geol/sparql_client.hpp"

namespace geol {

/// Small REST job service over the link engine.
///
///   POST   /tasks          body: TaskConfig JSON -> 202 {"job_id": ...}
///                          400 with the violation list, 409 when an
///                          identical task is already pending or running
///   GET    /tasks/{id}       -> JobRecord JSON with the latest progress
///   GET    /tasks/{id}/links -> N-Triples body (404 until the job is Done)
///   DELETE /tasks/{id}       -> cancels a Pending/Running job
///
/// Jobs run on an in-memory queue; the cache, not the job record, is the
/// durable artifact.
class LinkService {
 public:
  struct Options {
    std::filesystem::path cache_dir;
    std::size_t worker_threads = 0;  // engine refine workers (0 = hardware)
    std::size_t job_workers = 2;     // concurrently running jobs
    SparqlClient::Options client;
  };

  explicit LinkService(Options options);
  ~LinkService();

  LinkService(const LinkService&) = delete;
  LinkService& operator=(const LinkService&) = delete;

  /// Binds an ephemeral (or fixed) port and serves on a background thread.
  /// Returns the bound port. Throws IoError when binding fails.
  int start(const std::string& host = "127.0.0.1", int port = 0);

  /// Serves on the calling thread until stop() is invoked elsewhere.
  void serve(const std::string& host, int port);

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace geol
