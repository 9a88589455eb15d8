#include "geol/link_engine.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "geol/wkt.hpp"

namespace geol {

namespace {

using Clock = std::chrono::steady_clock;

struct ParsedRow {
  std::string id;
  PreparedGeometry prepared;
};

struct ParseOutcome {
  std::vector<ParsedRow> rows;
  std::vector<Exclusion> excluded;
  std::int64_t total = 0;
  std::int64_t duplicate_ids = 0;
};

void check_cancel(const std::atomic<bool>* cancel) {
  if (cancel && cancel->load(std::memory_order_relaxed)) throw CancelledError();
}

std::vector<TripleRow> read_covered_rows(ResourceTable& table, Interval requested) {
  std::vector<TripleRow> rows;
  for (const auto& iv : table.coverage().covered(requested)) {
    auto part = table.read_rows(iv.lo, iv.count());
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return rows;
}

ParseOutcome parse_rows(const std::vector<TripleRow>& rows, Side side) {
  ParseOutcome out;
  out.total = static_cast<std::int64_t>(rows.size());
  std::unordered_map<std::string, int> seen;
  for (const auto& row : rows) {
    if (++seen[row.id] == 2) ++out.duplicate_ids;
    if (row.geo_wkt.empty()) {
      out.excluded.push_back(
          {row.id, side, ExclusionReason::MissingGeometry, "no geometry binding"});
      continue;
    }
    try {
      Geometry g = parse_wkt(row.geo_wkt);
      if (g.is_empty()) {
        out.excluded.push_back(
            {row.id, side, ExclusionReason::EmptyGeometry, "empty geometry literal"});
        continue;
      }
      PreparedGeometry prepared(std::move(g));
      if (!prepared.valid()) {
        out.excluded.push_back(
            {row.id, side, ExclusionReason::InvalidGeometry, prepared.validity().summary()});
        continue;
      }
      out.rows.push_back({row.id, std::move(prepared)});
    } catch (const UnsupportedTypeError& e) {
      out.excluded.push_back({row.id, side, ExclusionReason::UnsupportedType, e.what()});
    } catch (const ParseError& e) {
      out.excluded.push_back({row.id, side, ExclusionReason::ParseFailure, e.what()});
    } catch (const GeometryError& e) {
      out.excluded.push_back({row.id, side, ExclusionReason::ParseFailure, e.what()});
    }
  }
  return out;
}

// evaluate() with the crosses dimension guard folded in: a pair for which
// the relation is undefined is simply not a link.
bool evaluate_pair(TopoRelation rel, const PreparedGeometry& a, const PreparedGeometry& b) {
  if (rel == TopoRelation::Crosses) {
    int da = a.dim(), db = b.dim();
    if (da == db && da != 1) return false;
  }
  return evaluate(rel, a, b);
}

std::string escape_iri(const std::string& iri) {
  // N-Triples IRIs may not contain control characters, space, or the
  // delimiters below; escape them as UCHAR so output lines stay parseable.
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(iri.size());
  for (unsigned char c : iri) {
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      out += "\\u00";
      out += hex[(c >> 4) & 0xf];
      out += hex[c & 0xf];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

}  // namespace

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::CachingSource:
      return "caching-source";
    case Phase::CachingTarget:
      return "caching-target";
    case Phase::Parsing:
      return "parsing";
    case Phase::Indexing:
      return "indexing";
    case Phase::Linking:
      return "linking";
    case Phase::Writing:
      return "writing";
  }
  return "?";
}

std::string_view exclusion_reason_name(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::ParseFailure:
      return "parse-failure";
    case ExclusionReason::UnsupportedType:
      return "unsupported-type";
    case ExclusionReason::InvalidGeometry:
      return "invalid-geometry";
    case ExclusionReason::MissingGeometry:
      return "missing-geometry";
    case ExclusionReason::EmptyGeometry:
      return "empty-geometry";
  }
  return "?";
}

std::string_view relation_iri(TopoRelation rel) {
  switch (rel) {
    case TopoRelation::Equals:
      return "http://www.opengis.net/ont/geosparql#sfEquals";
    case TopoRelation::Disjoint:
      return "http://www.opengis.net/ont/geosparql#sfDisjoint";
    case TopoRelation::Intersects:
      return "http://www.opengis.net/ont/geosparql#sfIntersects";
    case TopoRelation::Touches:
      return "http://www.opengis.net/ont/geosparql#sfTouches";
    case TopoRelation::Crosses:
      return "http://www.opengis.net/ont/geosparql#sfCrosses";
    case TopoRelation::Overlaps:
      return "http://www.opengis.net/ont/geosparql#sfOverlaps";
    case TopoRelation::Within:
      return "http://www.opengis.net/ont/geosparql#sfWithin";
    case TopoRelation::Contains:
      return "http://www.opengis.net/ont/geosparql#sfContains";
    case TopoRelation::Covers:
      return "http://www.opengis.net/ont/geosparql#ehCovers";
    case TopoRelation::CoveredBy:
      return "http://www.opengis.net/ont/geosparql#ehCoveredBy";
  }
  return "";
}

void candidate_pairs(std::span<const std::pair<std::string, BoundingBox>> sources,
                     const RTree<std::string>& target_index,
                     const std::function<void(const std::string&, const std::string&)>& emit) {
  for (const auto& [id, box] : sources) {
    target_index.query(box, [&](const std::string& target_id) { emit(id, target_id); });
  }
}

std::uint64_t write_links(const LinkMapping& mapping, std::ostream& out) {
  std::uint64_t bytes = 0;
  std::string_view pred = relation_iri(mapping.relation);
  for (const auto& link : mapping.links) {
    std::string line = "<" + escape_iri(link.source_id) + "> <" + std::string(pred) + "> <" +
                       escape_iri(link.target_id) + "> .\n";
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    bytes += line.size();
  }
  if (!out) throw IoError("failed writing links");
  return bytes;
}

std::uint64_t write_links(const LinkMapping& mapping, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file " + path.string());
  std::uint64_t bytes = write_links(mapping, out);
  out.flush();
  if (!out) throw IoError("failed writing output file " + path.string());
  return bytes;
}

LinkEngine::LinkEngine(CacheStore& store) : LinkEngine(store, Options()) {}

LinkEngine::LinkEngine(CacheStore& store, Options options)
    : store_(store), options_(options) {
  if (options_.worker_threads == 0) {
    options_.worker_threads = std::max(1u, std::thread::hardware_concurrency());
  }
}

LinkMapping LinkEngine::run(const LinkTask& task, const EngineProgressFn& progress,
                            const std::atomic<bool>* cancel) {
  return run_impl(task, progress, nullptr, cancel);
}

LinkMapping LinkEngine::run_streaming(const LinkTask& task, const EngineProgressFn& progress,
                                      const std::function<void(const Link&)>& sink,
                                      const std::atomic<bool>* cancel) {
  return run_impl(task, progress, &sink, cancel);
}

LinkMapping LinkEngine::run_impl(const LinkTask& task, const EngineProgressFn& progress,
                                 const std::function<void(const Link&)>* sink,
                                 const std::atomic<bool>* cancel) {
  LinkMapping mapping;
  mapping.relation = task.relation;
  SparqlClient client(options_.client);

  auto emit = [&](Phase phase, std::int64_t done, std::int64_t total) {
    if (progress) progress({phase, done, std::max(done, total)});
  };
  auto phase_start = Clock::now();
  auto end_phase = [&](Phase phase) {
    auto now = Clock::now();
    mapping.stats.phase_elapsed_ms[static_cast<int>(phase)] =
        std::chrono::duration<double, std::milli>(now - phase_start).count();
    phase_start = now;
  };

  // --- caching -------------------------------------------------------------
  check_cancel(cancel);
  emit(Phase::CachingSource, 0, task.source.limit.value_or(0));
  CoverageReport src_report = store_.ensure_cached(task.source, client,
                                                   [&](std::int64_t done, std::int64_t total) {
                                                     emit(Phase::CachingSource, done, total);
                                                   });
  end_phase(Phase::CachingSource);

  check_cancel(cancel);
  emit(Phase::CachingTarget, 0, task.target.limit.value_or(0));
  CoverageReport tgt_report = store_.ensure_cached(task.target, client,
                                                   [&](std::int64_t done, std::int64_t total) {
                                                     emit(Phase::CachingTarget, done, total);
                                                   });
  end_phase(Phase::CachingTarget);

  // --- parsing -------------------------------------------------------------
  check_cancel(cancel);
  ResourceTable& src_table = store_.get_or_create_table(task.source);
  ResourceTable& tgt_table = store_.get_or_create_table(task.target);
  std::vector<TripleRow> src_rows = read_covered_rows(src_table, src_report.requested);
  std::vector<TripleRow> tgt_rows = read_covered_rows(tgt_table, tgt_report.requested);
  std::int64_t parse_total = static_cast<std::int64_t>(src_rows.size() + tgt_rows.size());
  emit(Phase::Parsing, 0, parse_total);
  ParseOutcome src = parse_rows(src_rows, Side::Source);
  emit(Phase::Parsing, static_cast<std::int64_t>(src_rows.size()), parse_total);
  check_cancel(cancel);
  ParseOutcome tgt = parse_rows(tgt_rows, Side::Target);
  emit(Phase::Parsing, parse_total, parse_total);
  src_rows.clear();
  tgt_rows.clear();

  mapping.stats.source_total = src.total;
  mapping.stats.target_total = tgt.total;
  mapping.stats.source_valid = static_cast<std::int64_t>(src.rows.size());
  mapping.stats.target_valid = static_cast<std::int64_t>(tgt.rows.size());
  mapping.stats.duplicate_ids = src.duplicate_ids + tgt.duplicate_ids;
  mapping.excluded = std::move(src.excluded);
  mapping.excluded.insert(mapping.excluded.end(), std::make_move_iterator(tgt.excluded.begin()),
                          std::make_move_iterator(tgt.excluded.end()));
  end_phase(Phase::Parsing);

  // --- indexing ------------------------------------------------------------
  check_cancel(cancel);
  emit(Phase::Indexing, 0, static_cast<std::int64_t>(tgt.rows.size()));
  std::vector<RTree<std::uint32_t>::Entry> entries;
  entries.reserve(tgt.rows.size());
  for (std::uint32_t i = 0; i < tgt.rows.size(); ++i) {
    entries.push_back({tgt.rows[i].prepared.box(), i});
  }
  RTree<std::uint32_t> index = RTree<std::uint32_t>::bulk_load(std::move(entries));
  emit(Phase::Indexing, static_cast<std::int64_t>(tgt.rows.size()),
       static_cast<std::int64_t>(tgt.rows.size()));
  end_phase(Phase::Indexing);

  // --- linking -------------------------------------------------------------
  check_cancel(cancel);
  const std::int64_t link_total = static_cast<std::int64_t>(src.rows.size());
  emit(Phase::Linking, 0, link_total);

  std::mutex collect_mutex;
  std::vector<Link> links;
  std::int64_t processed = 0;
  std::int64_t streamed = 0;
  std::atomic<std::int64_t> candidates_tested{0};
  std::atomic<std::uint32_t> next{0};
  std::exception_ptr worker_error;

  const bool disjoint = task.relation == TopoRelation::Disjoint;

  auto worker = [&]() {
    std::vector<Link> local;
    std::vector<std::uint32_t> hits;
    try {
      for (;;) {
        std::uint32_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= src.rows.size()) break;
        check_cancel(cancel);
        const ParsedRow& s = src.rows[i];
        if (disjoint) {
          // MBB filtering cannot serve disjoint directly: take the
          // complement of the intersecting pairs over all valid targets.
          hits.clear();
          index.query(s.prepared.box(), [&](std::uint32_t t) {
            ++candidates_tested;
            if (evaluate_pair(TopoRelation::Intersects, s.prepared, tgt.rows[t].prepared))
              hits.push_back(t);
          });
          std::sort(hits.begin(), hits.end());
          std::size_t h = 0;
          for (std::uint32_t t = 0; t < tgt.rows.size(); ++t) {
            if (h < hits.size() && hits[h] == t) {
              ++h;
              continue;
            }
            local.push_back({s.id, tgt.rows[t].id});
          }
        } else {
          index.query(s.prepared.box(), [&](std::uint32_t t) {
            ++candidates_tested;
            if (evaluate_pair(task.relation, s.prepared, tgt.rows[t].prepared))
              local.push_back({s.id, tgt.rows[t].id});
          });
        }
        std::lock_guard lock(collect_mutex);
        ++processed;
        if (local.size() >= 4096) {
          streamed += static_cast<std::int64_t>(local.size());
          if (sink) {
            for (const auto& link : local) (*sink)(link);
          } else {
            links.insert(links.end(), std::make_move_iterator(local.begin()),
                         std::make_move_iterator(local.end()));
          }
          local.clear();
        }
        if (processed % 256 == 0 || processed == link_total)
          emit(Phase::Linking, processed, link_total);
      }
      if (!local.empty()) {
        std::lock_guard lock(collect_mutex);
        streamed += static_cast<std::int64_t>(local.size());
        if (sink) {
          for (const auto& link : local) (*sink)(link);
        } else {
          links.insert(links.end(), std::make_move_iterator(local.begin()),
                       std::make_move_iterator(local.end()));
        }
      }
    } catch (...) {
      std::lock_guard lock(collect_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };

  std::size_t thread_count = std::min<std::size_t>(options_.worker_threads,
                                                   std::max<std::size_t>(1, src.rows.size()));
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (std::size_t w = 0; w < thread_count; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (worker_error) std::rethrow_exception(worker_error);
  emit(Phase::Linking, link_total, link_total);
  mapping.stats.candidates_tested = candidates_tested.load();
  end_phase(Phase::Linking);

  // --- writing -------------------------------------------------------------
  check_cancel(cancel);
  if (!sink) {
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
    mapping.links = std::move(links);
  }
  mapping.stats.links_found = sink ? streamed : static_cast<std::int64_t>(mapping.links.size());
  std::int64_t write_total = static_cast<std::int64_t>(mapping.links.size());
  emit(Phase::Writing, 0, write_total);
  if (!sink && !task.output.empty() && task.output != "inline") {
    write_links(mapping, std::filesystem::path(task.output));
  }
  emit(Phase::Writing, write_total, write_total);
  end_phase(Phase::Writing);

  return mapping;
}

}  // namespace geol
