#include "rpsgmm/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rpsgmm/errors.hpp"

namespace rpsgmm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

int parse_int(const std::string& s, long line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected integer, got '" + s + "'", line);
  }
  return v;
}

double parse_double(const std::string& s, long line) {
  if (s.empty()) throw ParseError("empty numeric field", line);
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError("expected number, got '" + s + "'", line);
  }
  return v;
}

struct SeriesAccum {
  std::optional<std::string> label;
  // day -> per-channel value; presence tracked per channel
  std::map<int, std::vector<std::pair<bool, double>>> rows;
};

}  // namespace

std::string format_double(double v) {
  // Shortest decimal form that round-trips; falls back to %.17g coverage.
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  for (int prec = 1; prec < 17; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) return probe;
  }
  return buf;
}

Dataset load_dataset(const std::filesystem::path& path,
                     const std::vector<std::string>& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++line_no;
  if (split_csv_line(line) !=
      std::vector<std::string>{"series_id", "day", "channel", "value",
                               "label"}) {
    throw ParseError("expected header 'series_id,day,channel,value,label'",
                     line_no);
  }

  std::map<std::string, int> channel_idx;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    channel_idx[schema[c]] = static_cast<int>(c);
  }

  std::map<std::string, SeriesAccum> acc;
  std::vector<std::string> order;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw ParseError("expected 5 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    const std::string& id = fields[0];
    const int day = parse_int(fields[1], line_no);
    auto ch = channel_idx.find(fields[2]);
    if (ch == channel_idx.end()) {
      throw SchemaError("channel '" + fields[2] +
                        "' not in declared schema (line " +
                        std::to_string(line_no) + ")");
    }
    const double value = parse_double(fields[3], line_no);

    auto [it, inserted] = acc.try_emplace(id);
    if (inserted) order.push_back(id);
    SeriesAccum& s = it->second;

    if (!fields[4].empty()) {
      if (s.label && *s.label != fields[4]) {
        throw SchemaError("series '" + id + "' has conflicting labels '" +
                          *s.label + "' and '" + fields[4] + "' (line " +
                          std::to_string(line_no) + ")");
      }
      s.label = fields[4];
    }

    auto& row = s.rows[day];
    if (row.empty()) row.assign(schema.size(), {false, 0.0});
    auto& cell = row[static_cast<std::size_t>(ch->second)];
    if (cell.first) {
      throw DuplicateSampleError("duplicate sample for series '" + id +
                                 "', day " + std::to_string(day) +
                                 ", channel '" + fields[2] + "' (line " +
                                 std::to_string(line_no) + ")");
    }
    cell = {true, value};
  }

  Dataset data;
  data.channel_schema = schema;
  for (const auto& id : order) {
    const SeriesAccum& s = acc.at(id);
    TimeSeries ts;
    ts.id = id;
    ts.channels = schema;
    ts.label = s.label;
    ts.timestamps.reserve(s.rows.size());
    ts.values.resize(static_cast<int>(s.rows.size()),
                     static_cast<int>(schema.size()));
    int r = 0;
    for (const auto& [day, row] : s.rows) {
      ts.timestamps.push_back(day);
      for (std::size_t c = 0; c < schema.size(); ++c) {
        if (!row[c].first) {
          throw SchemaError("series '" + id + "', day " +
                            std::to_string(day) + ": missing channel '" +
                            schema[c] + "'");
        }
        ts.values(r, static_cast<int>(c)) = row[c].second;
      }
      ++r;
    }
    ts.validate();
    data.series.push_back(std::move(ts));
  }
  data.validate();
  return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "series_id,day,channel,value,label\n";
  for (const auto& s : data.series) {
    const std::string label = s.label.value_or("");
    for (int r = 0; r < s.length(); ++r) {
      for (int c = 0; c < s.channel_count(); ++c) {
        out << s.id << ',' << s.timestamps[r] << ',' << s.channels[c] << ','
            << format_double(s.values(r, c)) << ',' << label << '\n';
      }
    }
  }
  write_file_atomic(path, out.str());
}

std::vector<RawObservations> load_raw_observations(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++line_no;
  if (split_csv_line(line) !=
      std::vector<std::string>{"series_id", "day", "channel", "value"}) {
    throw ParseError("expected header 'series_id,day,channel,value'",
                     line_no);
  }

  std::map<std::string, std::size_t> index;
  std::vector<RawObservations> out;
  std::set<std::tuple<std::string, int, std::string>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw ParseError("expected 4 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    const std::string& id = fields[0];
    const int day = parse_int(fields[1], line_no);
    const double value = parse_double(fields[3], line_no);
    if (!seen.insert({id, day, fields[2]}).second) {
      throw DuplicateSampleError("duplicate raw observation for series '" +
                                 id + "', day " + std::to_string(day) +
                                 ", channel '" + fields[2] + "' (line " +
                                 std::to_string(line_no) + ")");
    }
    auto [it, inserted] = index.try_emplace(id, out.size());
    if (inserted) {
      out.emplace_back();
      out.back().id = id;
    }
    out[it->second].samples[fields[2]].emplace_back(day, value);
  }
  for (auto& raw : out) {
    for (auto& [_, obs] : raw.samples) std::sort(obs.begin(), obs.end());
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out.flush()) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("rename to '" + path.string() + "' failed: " + ec.message());
  }
}

}  // namespace rpsgmm
