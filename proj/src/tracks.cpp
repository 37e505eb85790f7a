#include "topotrack/tracks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "topotrack/errors.hpp"
#include "topotrack/rng.hpp"

namespace topotrack {

ProjectionVector draw_projection_vector(std::uint64_t seed) {
    Rng rng(seed);
    ProjectionVector v;
    v.vx = rng.uniform_open_closed();
    v.vy = rng.uniform_open_closed();
    v.seed = seed;
    return v;
}

std::vector<SubTrack> extract_subtracks(const Track& track, int nstar) {
    if (nstar < 1) throw ConfigError("sub-track length must be >= 1, got " + std::to_string(nstar));
    const std::size_t n = track.length();
    if (static_cast<std::size_t>(nstar) >= n) {
        throw InputError("track '" + track.id + "' too short: length " + std::to_string(n) +
                         " <= requested sub-track length " + std::to_string(nstar));
    }
    const std::size_t count = n - static_cast<std::size_t>(nstar);
    std::vector<SubTrack> subs;
    subs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        SubTrack s;
        s.parent_id = track.id;
        s.window_index = static_cast<int>(k) + 1;
        s.points.reserve(static_cast<std::size_t>(nstar));
        for (std::size_t i = 0; i < static_cast<std::size_t>(nstar); ++i) {
            const TrackPoint& p = track.points[k + i];
            s.points.push_back({p.x, p.y});
        }
        subs.push_back(std::move(s));
    }
    return subs;
}

NormalizedSubTrack normalize_subtrack(const SubTrack& sub) {
    NormalizedSubTrack out;
    out.parent_id = sub.parent_id;
    out.window_index = sub.window_index;
    out.points.resize(sub.points.size());

    double min_x = sub.points[0].x, max_x = sub.points[0].x;
    double min_y = sub.points[0].y, max_y = sub.points[0].y;
    for (const Vec2& p : sub.points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double range_x = max_x - min_x;
    const double range_y = max_y - min_y;
    for (std::size_t i = 0; i < sub.points.size(); ++i) {
        out.points[i].x = range_x > 0.0 ? (sub.points[i].x - min_x) / range_x : 0.0;
        out.points[i].y = range_y > 0.0 ? (sub.points[i].y - min_y) / range_y : 0.0;
    }
    return out;
}

ProjectedSeries project(const NormalizedSubTrack& norm, const ProjectionVector& v) {
    ProjectedSeries s;
    s.provenance = {norm.parent_id, norm.window_index};
    s.values.reserve(norm.points.size());
    for (const Vec2& p : norm.points) s.values.push_back(p.x * v.vx + p.y * v.vy);
    return s;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtoll(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

IngestResult read_track_csv(std::istream& in) {
    IngestResult result;
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw InputError("track CSV is empty");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "track_id,label,frame,x,y") {
        throw InputError("track CSV header must be 'track_id,label,frame,x,y', got '" + line + "'");
    }

    Track* current = nullptr;
    std::string last_id;  // ids must be contiguous and ascending
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        auto fields = split_csv_row(line);
        if (fields.size() != 5) {
            result.errors.push_back({lineno, "expected 5 fields, got " + std::to_string(fields.size())});
            continue;
        }
        const std::string& id = fields[0];
        const std::string& label = fields[1];
        std::int64_t frame;
        double x, y;
        if (id.empty()) {
            result.errors.push_back({lineno, "empty track_id"});
            continue;
        }
        if (!parse_int64(fields[2], frame)) {
            result.errors.push_back({lineno, "bad frame '" + fields[2] + "'"});
            continue;
        }
        if (!parse_double(fields[3], x) || !parse_double(fields[4], y)) {
            result.errors.push_back({lineno, "bad coordinate '" + fields[3] + "," + fields[4] + "'"});
            continue;
        }
        if (!std::isfinite(x) || !std::isfinite(y)) {
            result.errors.push_back({lineno, "non-finite coordinate"});
            continue;
        }

        if (current == nullptr || current->id != id) {
            if (!last_id.empty() && id <= last_id) {
                // seen before or out of order: rows must be sorted by track_id
                result.errors.push_back({lineno, "track_id '" + id + "' out of (track_id, frame) order"});
                continue;
            }
            result.tracks.push_back(Track{id, label, {}});
            current = &result.tracks.back();
            last_id = id;
        } else {
            if (label != current->label) {
                result.errors.push_back({lineno, "track '" + id + "' has conflicting labels '" +
                                                     current->label + "' and '" + label + "'"});
                continue;
            }
            if (!current->points.empty() && frame <= current->points.back().frame) {
                result.errors.push_back({lineno, "frame " + std::to_string(frame) +
                                                     " not strictly increasing in track '" + id + "'"});
                continue;
            }
        }
        current->points.push_back({frame, x, y});
    }

    // drop tracks whose rows were all rejected
    std::erase_if(result.tracks, [](const Track& t) { return t.points.empty(); });
    return result;
}

IngestResult read_track_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open track CSV '" + path + "'");
    return read_track_csv(in);
}

void write_track_csv(std::ostream& out, const std::vector<Track>& tracks) {
    out << "track_id,label,frame,x,y\n";
    for (const Track& t : tracks) {
        for (const TrackPoint& p : t.points) {
            out << t.id << ',' << t.label << ',' << p.frame << ',' << format_double(p.x) << ','
                << format_double(p.y) << '\n';
        }
    }
}

void write_track_csv_file(const std::string& path, const std::vector<Track>& tracks) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write track CSV '" + path + "'");
    write_track_csv(out, tracks);
}

}  // namespace topotrack
