#include "geol/service.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "geol/task_config.hpp"

namespace geol {

namespace {

using nlohmann::json;

enum class JobState { Pending, Running, Failed, Done };

std::string_view state_name(JobState s) {
  switch (s) {
    case JobState::Pending:
      return "pending";
    case JobState::Running:
      return "running";
    case JobState::Failed:
      return "failed";
    case JobState::Done:
      return "done";
  }
  return "?";
}

struct Job {
  std::string id;
  TaskConfig config;
  std::string config_key;

  mutable std::mutex mutex;
  JobState state = JobState::Pending;
  ProgressEvent latest{};
  LinkMapping result;
  std::string links_body;  // serialized N-Triples, set when Done
  std::string error;
  std::atomic<bool> cancel{false};
};

}  // namespace

struct LinkService::Impl {
  Options options;
  CacheStore store;
  httplib::Server server;
  std::thread server_thread;

  std::mutex jobs_mutex;
  std::condition_variable queue_cv;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::deque<std::shared_ptr<Job>> queue;
  std::vector<std::thread> workers;
  bool shutting_down = false;
  std::uint64_t next_id = 1;

  explicit Impl(Options opts) : options(std::move(opts)), store(options.cache_dir) {
    register_routes();
    for (std::size_t i = 0; i < std::max<std::size_t>(1, options.job_workers); ++i)
      workers.emplace_back([this] { worker_loop(); });
  }

  ~Impl() {
    {
      std::lock_guard lock(jobs_mutex);
      shutting_down = true;
    }
    queue_cv.notify_all();
    for (auto& w : workers) w.join();
    if (server.is_running()) server.stop();
    if (server_thread.joinable()) server_thread.join();
  }

  std::shared_ptr<Job> find(const std::string& id) {
    std::lock_guard lock(jobs_mutex);
    auto it = jobs.find(id);
    return it == jobs.end() ? nullptr : it->second;
  }

  void register_routes() {
    server.Post("/tasks", [this](const httplib::Request& req, httplib::Response& res) {
      TaskConfig config;
      try {
        config = parse_config(req.body);
      } catch (const ConfigError& e) {
        json body;
        body["errors"] = e.violations();
        res.status = 400;
        res.set_content(body.dump(2), "application/json");
        return;
      }
      std::string key = canonical_config(config);
      std::shared_ptr<Job> job;
      {
        std::lock_guard lock(jobs_mutex);
        for (const auto& [id, existing] : jobs) {
          std::lock_guard job_lock(existing->mutex);
          if (existing->config_key == key &&
              (existing->state == JobState::Pending || existing->state == JobState::Running)) {
            json body;
            body["error"] = "identical task already submitted";
            body["job_id"] = existing->id;
            res.status = 409;
            res.set_content(body.dump(2), "application/json");
            return;
          }
        }
        job = std::make_shared<Job>();
        job->id = "job-" + std::to_string(next_id++);
        job->config = std::move(config);
        job->config_key = std::move(key);
        jobs[job->id] = job;
        queue.push_back(job);
      }
      queue_cv.notify_one();
      json body;
      body["job_id"] = job->id;
      res.status = 202;
      res.set_content(body.dump(2), "application/json");
    });

    server.Get(R"(/tasks/([^/]+)/links)", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
      auto job = find(req.matches[1]);
      if (!job) {
        res.status = 404;
        return;
      }
      std::lock_guard lock(job->mutex);
      if (job->state != JobState::Done) {
        res.status = 404;
        res.set_content("{\"error\":\"links not available until the job is done\"}",
                        "application/json");
        return;
      }
      res.set_content(job->links_body, "application/n-triples");
    });

    server.Get(R"(/tasks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto job = find(req.matches[1]);
      if (!job) {
        res.status = 404;
        return;
      }
      res.set_content(job_record(*job).dump(2), "application/json");
    });

    server.Delete(R"(/tasks/([^/]+))", [this](const httplib::Request& req,
                                              httplib::Response& res) {
      auto job = find(req.matches[1]);
      if (!job) {
        res.status = 404;
        return;
      }
      std::lock_guard lock(job->mutex);
      if (job->state == JobState::Done || job->state == JobState::Failed) {
        res.status = 409;
        res.set_content("{\"error\":\"job already finished\"}", "application/json");
        return;
      }
      job->cancel.store(true);
      if (job->state == JobState::Pending) {
        job->state = JobState::Failed;
        job->error = "cancelled";
      }
      res.status = 204;
    });
  }

  json job_record(const Job& job) {
    std::lock_guard lock(job.mutex);
    json rec;
    rec["job_id"] = job.id;
    rec["state"] = std::string(state_name(job.state));
    rec["progress"] = {{"phase", std::string(phase_name(job.latest.phase))},
                       {"done", job.latest.done},
                       {"total", job.latest.total}};
    if (job.state == JobState::Done) {
      const LinkStats& s = job.result.stats;
      rec["result"] = {{"links_found", s.links_found},
                       {"source_total", s.source_total},
                       {"target_total", s.target_total},
                       {"source_valid", s.source_valid},
                       {"target_valid", s.target_valid},
                       {"candidates_tested", s.candidates_tested},
                       {"excluded", job.result.excluded.size()}};
    } else {
      rec["result"] = nullptr;
    }
    rec["error"] = job.error.empty() ? json(nullptr) : json(job.error);
    return rec;
  }

  void worker_loop() {
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lock(jobs_mutex);
        queue_cv.wait(lock, [this] { return shutting_down || !queue.empty(); });
        if (shutting_down) return;
        job = std::move(queue.front());
        queue.pop_front();
      }
      run_job(*job);
    }
  }

  void run_job(Job& job) {
    {
      std::lock_guard lock(job.mutex);
      if (job.state != JobState::Pending) return;  // cancelled while queued
      job.state = JobState::Running;
    }
    try {
      // A per-task cache_dir overrides the service store.
      std::unique_ptr<CacheStore> own_store;
      CacheStore* use = &store;
      if (job.config.cache_dir) {
        own_store = std::make_unique<CacheStore>(*job.config.cache_dir);
        use = own_store.get();
      }
      LinkEngine::Options engine_options;
      engine_options.worker_threads = options.worker_threads;
      engine_options.client = options.client;
      LinkEngine engine(*use, engine_options);
      LinkMapping mapping = engine.run(
          job.config.task,
          [&](const ProgressEvent& event) {
            std::lock_guard lock(job.mutex);
            job.latest = event;
          },
          &job.cancel);
      std::ostringstream body;
      write_links(mapping, body);
      std::lock_guard lock(job.mutex);
      job.result = std::move(mapping);
      job.links_body = body.str();
      job.state = JobState::Done;
    } catch (const CancelledError&) {
      std::lock_guard lock(job.mutex);
      job.error = "cancelled";
      job.state = JobState::Failed;
    } catch (const std::exception& e) {
      std::lock_guard lock(job.mutex);
      job.error = e.what();
      job.state = JobState::Failed;
    }
  }
};

LinkService::LinkService(Options options) : impl_(std::make_unique<Impl>(std::move(options))) {}

LinkService::~LinkService() = default;

int LinkService::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw IoError("cannot bind " + host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      throw IoError("cannot bind " + host + ":" + std::to_string(port));
    }
  }
  impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void LinkService::serve(const std::string& host, int port) {
  if (!impl_->server.listen(host, port))
    throw IoError("cannot listen on " + host + ":" + std::to_string(port));
}

void LinkService::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
  if (impl_->server_thread.joinable()) impl_->server_thread.join();
}

}  // namespace geol
