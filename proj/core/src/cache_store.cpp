#include "geol/cache_store.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace geol {

namespace {

using nlohmann::json;

constexpr char kMetaName[] = "meta.json";
constexpr char kLogName[] = "rows.log";

void write_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.append(buf, 4);
}

void write_u64(std::string& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.append(buf, 8);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

std::string encode_record(const TripleRow& row) {
  std::string payload;
  write_u64(payload, static_cast<std::uint64_t>(row.index));
  write_u32(payload, static_cast<std::uint32_t>(row.id.size()));
  payload += row.id;
  write_u32(payload, static_cast<std::uint32_t>(row.geo_wkt.size()));
  payload += row.geo_wkt;
  std::string record;
  write_u32(record, static_cast<std::uint32_t>(payload.size()));
  record += payload;
  return record;
}

}  // namespace

// ---------------------------------------------------------------------------
// ResourceTable
// ---------------------------------------------------------------------------

ResourceTable::ResourceTable(std::string key, std::filesystem::path dir, const ResourceSpec& spec)
    : key_(std::move(key)),
      dir_(std::move(dir)),
      endpoint_(spec.endpoint),
      query_normalized_(CacheStore::normalize_query(spec.query)),
      id_var_(spec.id_var),
      geo_var_(spec.geo_var) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw StorageError("cannot create cache directory " + dir_.string() + ": " + ec.message());
  load();
}

void ResourceTable::load() {
  auto meta_path = dir_ / kMetaName;
  auto log_path = dir_ / kLogName;

  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw StorageError("corrupt cache metadata: " + meta_path.string());
    for (const auto& iv : doc.value("coverage", json::array()))
      coverage_.add(iv.at(0).get<std::int64_t>(), iv.at(1).get<std::int64_t>());
    if (doc.contains("exhausted_at") && !doc["exhausted_at"].is_null())
      exhausted_at_ = doc["exhausted_at"].get<std::int64_t>();
    valid_length_ = doc.value("valid_length", std::uint64_t{0});
  }

  if (!std::filesystem::exists(log_path)) {
    std::ofstream create(log_path, std::ios::binary);
    if (!create) throw StorageError("cannot create row log " + log_path.string());
  }

  // Drop any torn tail beyond the committed length; the metadata rename is
  // the commit point.
  auto actual = std::filesystem::file_size(log_path);
  if (actual > valid_length_) {
    std::filesystem::resize_file(log_path, valid_length_);
  } else if (actual < valid_length_) {
    throw StorageError("row log shorter than committed length: " + log_path.string());
  }

  std::ifstream in(log_path, std::ios::binary);
  std::uint64_t pos = 0;
  while (pos < valid_length_) {
    std::uint32_t len = read_u32(in);
    if (!in) throw StorageError("corrupt row log: " + log_path.string());
    std::int64_t index = static_cast<std::int64_t>(read_u64(in));
    row_offsets_.emplace_back(index, pos);
    in.seekg(static_cast<std::streamoff>(pos + 4 + len));
    pos += 4 + len;
    if (!in) throw StorageError("corrupt row log: " + log_path.string());
  }
  std::sort(row_offsets_.begin(), row_offsets_.end());
}

void ResourceTable::commit_meta() {
  json doc;
  doc["endpoint"] = endpoint_;
  doc["query"] = query_normalized_;
  doc["id_var"] = id_var_;
  doc["geo_var"] = geo_var_;
  json cov = json::array();
  for (const auto& iv : coverage_.intervals()) cov.push_back({iv.lo, iv.hi});
  doc["coverage"] = cov;
  doc["exhausted_at"] = exhausted_at_ ? json(*exhausted_at_) : json(nullptr);
  doc["valid_length"] = valid_length_;

  auto tmp = dir_ / (std::string(kMetaName) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << doc.dump(2);
    out.flush();
    if (!out) throw StorageError("cannot write cache metadata " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dir_ / kMetaName, ec);
  if (ec) throw StorageError("cannot commit cache metadata: " + ec.message());
}

void ResourceTable::set_exhausted(std::int64_t first_missing) {
  std::lock_guard lock(mutex_);
  if (!exhausted_at_ || first_missing < *exhausted_at_) {
    exhausted_at_ = first_missing;
    commit_meta();
  }
}

void ResourceTable::store_chunk(std::span<const TripleRow> rows) {
  std::lock_guard lock(mutex_);
  if (rows.empty()) return;

  auto log_path = dir_ / kLogName;
  std::ofstream out(log_path, std::ios::binary | std::ios::app);
  if (!out) throw StorageError("cannot open row log for append: " + log_path.string());

  std::uint64_t pos = valid_length_;
  std::uint64_t appended = 0;
  std::vector<std::pair<std::int64_t, std::uint64_t>> added;
  for (const auto& row : rows) {
    if (coverage_.contains(row.index)) continue;  // index uniqueness
    std::string record = encode_record(row);
    out.write(record.data(), static_cast<std::streamsize>(record.size()));
    added.emplace_back(row.index, pos + appended);
    appended += record.size();
  }
  out.flush();
  if (!out) throw StorageError("failed appending to row log: " + log_path.string());
  if (added.empty()) return;

  valid_length_ += appended;
  for (const auto& [index, off] : added) {
    row_offsets_.insert(
        std::lower_bound(row_offsets_.begin(), row_offsets_.end(),
                         std::make_pair(index, std::uint64_t{0})),
        {index, off});
    coverage_.add(index, index);
  }
  commit_meta();
}

std::vector<TripleRow> ResourceTable::read_rows(std::int64_t offset, std::int64_t count) {
  std::lock_guard lock(mutex_);
  if (count <= 0) return {};
  if (!coverage_.contains({offset, offset + count - 1}))
    throw CacheMissError("rows [" + std::to_string(offset) + ", " +
                         std::to_string(offset + count - 1) + ") not fully cached");

  auto it = std::lower_bound(row_offsets_.begin(), row_offsets_.end(),
                             std::make_pair(offset, std::uint64_t{0}));
  std::ifstream in(dir_ / kLogName, std::ios::binary);
  std::vector<TripleRow> rows;
  rows.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i, ++it) {
    if (it == row_offsets_.end() || it->first != offset + i)
      throw StorageError("row index table out of sync with coverage");
    in.seekg(static_cast<std::streamoff>(it->second));
    std::uint32_t len = read_u32(in);
    (void)len;
    TripleRow row;
    row.index = static_cast<std::int64_t>(read_u64(in));
    std::uint32_t id_len = read_u32(in);
    row.id.resize(id_len);
    in.read(row.id.data(), id_len);
    std::uint32_t wkt_len = read_u32(in);
    row.geo_wkt.resize(wkt_len);
    in.read(row.geo_wkt.data(), wkt_len);
    if (!in) throw StorageError("failed reading row log record");
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CacheStore
// ---------------------------------------------------------------------------

CacheStore::CacheStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw StorageError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::string CacheStore::normalize_query(std::string_view query) {
  std::string out;
  bool in_space = true;  // trims leading whitespace
  for (char c : query) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out += ' ';
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string CacheStore::table_key(const ResourceSpec& spec) {
  std::string material =
      spec.endpoint + '\n' + normalize_query(spec.query) + '\n' + spec.id_var + '\n' + spec.geo_var;
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : material) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

ResourceTable& CacheStore::get_or_create_table(const ResourceSpec& spec) {
  std::string key = table_key(spec);
  std::lock_guard lock(mutex_);
  auto it = tables_.find(key);
  if (it == tables_.end()) {
    auto table = std::unique_ptr<ResourceTable>(new ResourceTable(key, dir_ / key, spec));
    it = tables_.emplace(key, std::move(table)).first;
  }
  return *it->second;
}

std::vector<Interval> CacheStore::missing_intervals(ResourceTable& table, std::int64_t offset,
                                                    std::int64_t count) const {
  std::lock_guard lock(table.mutex_);
  return table.coverage_.missing({offset, offset + count - 1});
}

CoverageReport CacheStore::ensure_cached(const ResourceSpec& spec, const SparqlClient& client,
                                         const ProgressFn& progress) {
  ResourceTable& table = get_or_create_table(spec);
  std::lock_guard lock(table.mutex_);

  CoverageReport report;
  std::int64_t done = 0;

  auto emit = [&](std::int64_t total) {
    if (progress) progress(done, std::max(done, total));
  };

  // Coalesces the probe row's one-element interval with the page run that
  // follows it.
  auto note_downloaded = [&](Interval iv) {
    if (!report.downloaded.empty() && report.downloaded.back().hi + 1 == iv.lo) {
      report.downloaded.back().hi = iv.hi;
    } else {
      report.downloaded.push_back(iv);
    }
  };

  // Downloads one missing interval, honoring the frontier guard probe.
  // Returns false when the end of data was hit inside this interval.
  auto fill_gap = [&](Interval gap, std::int64_t total_for_progress) -> bool {
    auto max_idx = table.coverage_.max_index();
    bool frontier = max_idx.has_value() && gap.lo > *max_idx;
    std::int64_t start = gap.lo;
    std::int64_t remaining = gap.count();
    if (frontier) {
      // Extending past the stored maximum: check the endpoint actually has
      // a row at the first missing index. The probed row is persisted, so
      // the probe never costs a second fetch of that index.
      auto row = client.probe(spec, gap.lo);
      if (!row) {
        table.set_exhausted(gap.lo);
        return false;
      }
      const TripleRow one[1] = {*row};
      table.store_chunk(std::span<const TripleRow>(one, 1));
      note_downloaded({gap.lo, gap.lo});
      ++done;
      emit(total_for_progress);
      start = gap.lo + 1;
      --remaining;
    }
    if (remaining <= 0) return true;
    std::int64_t base = done;
    std::int64_t stored = client.retrieve_triples(
        spec, start, remaining, table, [&](std::int64_t so_far) {
          done = base + so_far;
          emit(total_for_progress);
        });
    done = base + stored;
    emit(total_for_progress);
    if (stored > 0) note_downloaded({start, start + stored - 1});
    if (stored < remaining) {
      table.set_exhausted(start + stored);
      return false;
    }
    return true;
  };

  if (spec.limit.has_value()) {
    const std::int64_t hi = spec.offset + *spec.limit - 1;
    report.requested = {spec.offset, hi};
    report.served_from_cache = table.coverage_.covered(report.requested);
    for (const auto& iv : report.served_from_cache) done += iv.count();
    emit(*spec.limit);

    std::int64_t effective_hi = hi;
    if (table.exhausted_at_ && *table.exhausted_at_ - 1 < effective_hi)
      effective_hi = *table.exhausted_at_ - 1;

    if (effective_hi >= spec.offset) {
      for (const auto& gap : table.coverage_.missing({spec.offset, effective_hi})) {
        if (!fill_gap(gap, *spec.limit)) break;
      }
    }

    // End-of-data detection when the request ran exactly to the stored
    // frontier: probe one index past it. A returned row is kept (it can
    // never be re-fetched), an empty probe memoizes the endpoint's end.
    if (!table.exhausted_at_ && table.coverage_.max_index() == hi) {
      auto row = client.probe(spec, hi + 1);
      if (row) {
        const TripleRow one[1] = {*row};
        table.store_chunk(std::span<const TripleRow>(one, 1));
      } else {
        table.set_exhausted(hi + 1);
      }
    }
    report.end_of_data = table.exhausted_at_ && *table.exhausted_at_ <= hi + 1;
    return report;
  }

  // limit = "all": fill interior gaps, then extend from the frontier until
  // the endpoint runs dry.
  auto max_idx = table.coverage_.max_index();
  if (max_idx && *max_idx >= spec.offset) {
    report.served_from_cache = table.coverage_.covered({spec.offset, *max_idx});
    for (const auto& iv : report.served_from_cache) done += iv.count();
    emit(done);
    for (const auto& gap : table.coverage_.missing({spec.offset, *max_idx})) {
      if (!fill_gap(gap, done)) break;
    }
  }
  while (!table.exhausted_at_) {
    std::int64_t frontier = std::max(
        table.coverage_.max_index() ? *table.coverage_.max_index() + 1 : spec.offset, spec.offset);
    auto row = client.probe(spec, frontier);
    if (!row) {
      table.set_exhausted(frontier);
      break;
    }
    const TripleRow one[1] = {*row};
    table.store_chunk(std::span<const TripleRow>(one, 1));
    note_downloaded({frontier, frontier});
    ++done;
    emit(done);
    std::int64_t base = done;
    std::int64_t stored = client.retrieve_triples(
        spec, frontier + 1, std::numeric_limits<std::int64_t>::max() / 2, table,
        [&](std::int64_t so_far) {
          done = base + so_far;
          emit(done);
        });
    done = base + stored;
    if (stored > 0) note_downloaded({frontier + 1, frontier + stored});
    table.set_exhausted(frontier + 1 + stored);
  }
  std::int64_t end = table.exhausted_at_ ? *table.exhausted_at_ : spec.offset;
  report.requested = {spec.offset, std::max(spec.offset, end - 1)};
  report.end_of_data = true;
  return report;
}

}  // namespace geol
