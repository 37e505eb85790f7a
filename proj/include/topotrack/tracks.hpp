#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace topotrack {

struct TrackPoint {
    std::int64_t frame = 0;
    double x = 0.0;
    double y = 0.0;
};

// One moving object: frame-indexed image coordinates plus a class label.
// Invariants: frames strictly increasing, at least one point, finite coords.
struct Track {
    std::string id;
    std::string label;
    std::vector<TrackPoint> points;

    std::size_t length() const { return points.size(); }
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Identifies where a derived quantity came from: parent track and the 1-based
// window index of the sub-track it was cut from.
struct Provenance {
    std::string parent_id;
    int window_index = 0;

    friend bool operator==(const Provenance& a, const Provenance& b) {
        return a.window_index == b.window_index && a.parent_id == b.parent_id;
    }
    friend bool operator<(const Provenance& a, const Provenance& b) {
        if (a.parent_id != b.parent_id) return a.parent_id < b.parent_id;
        return a.window_index < b.window_index;
    }
};

// Contiguous fixed-length window of a parent track. window_index k >= 1;
// window k holds parent points [k-1, k-1+N*).
struct SubTrack {
    std::string parent_id;
    int window_index = 1;
    std::vector<Vec2> points;
};

// Sub-track rescaled per axis into [0,1]; a constant axis maps to all zeros.
struct NormalizedSubTrack {
    std::string parent_id;
    int window_index = 1;
    std::vector<Vec2> points;
};

// Random projection direction, both entries in (0,1]. Drawn once per
// experiment and applied to every sub-track; the seed is kept for the
// run manifest.
struct ProjectionVector {
    double vx = 0.0;
    double vy = 0.0;
    std::uint64_t seed = 0;
};

// 1-D statistic of a normalized sub-track: values[i] = x~[i]*vx + y~[i]*vy.
struct ProjectedSeries {
    std::vector<double> values;
    Provenance provenance;
};

ProjectionVector draw_projection_vector(std::uint64_t seed);

// Windows the track at stride 1 into K = N - nstar sub-tracks (window start
// offsets 0..K-1). Throws InputError("... too short ...") when nstar >= N,
// ConfigError when nstar < 1.
std::vector<SubTrack> extract_subtracks(const Track& track, int nstar);

// Per axis: subtract the axis minimum, then divide by the maximum of the
// result. A constant axis yields all zeros.
NormalizedSubTrack normalize_subtrack(const SubTrack& sub);

ProjectedSeries project(const NormalizedSubTrack& norm, const ProjectionVector& v);

// One rejected CSV row.
struct RowError {
    std::size_t line = 0;  // 1-based physical line number in the file
    std::string message;
};

struct IngestResult {
    std::vector<Track> tracks;
    std::vector<RowError> errors;
};

// Reads the track CSV (header `track_id,label,frame,x,y`, rows sorted by
// (track_id, frame)). Malformed rows are skipped and reported with their line
// number; structural problems (missing file, bad header) throw InputError.
IngestResult read_track_csv(std::istream& in);
IngestResult read_track_csv_file(const std::string& path);

void write_track_csv(std::ostream& out, const std::vector<Track>& tracks);
void write_track_csv_file(const std::string& path, const std::vector<Track>& tracks);

}  // namespace topotrack
