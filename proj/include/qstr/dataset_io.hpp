#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qstr/tracks.hpp"

namespace qstr {

enum class DatasetFormat : std::uint8_t {
    Canonical,  // one JSON file per video
    Cad120,     // raw skeleton/annotation text layout, converted on the fly
};

DatasetFormat dataset_format_from_name(std::string_view name);

/// Validate a raw video in place: drop frames with missing or non-finite
/// joints, interpolate object boxes across gaps of at most
/// max_interp_gap frames (drop the frames otherwise), reindex frames
/// consecutively from 0. Returns false when fewer than 2 frames survive.
/// Appends one line per repair to warnings when given.
bool validate_video(TrackedVideo& video, std::vector<std::string>* warnings,
                    int max_interp_gap = 5);

/// Parse one canonical JSON video document. Pre-validation representation:
/// frames may be incomplete. Throws qstr::Error("dataset") with the video id
/// and frame index on schema violations.
TrackedVideo load_video(const std::filesystem::path& file);

/// Serialize to the canonical JSON document.
std::string video_to_json(const TrackedVideo& video);
void save_video(const TrackedVideo& video, const std::filesystem::path& file);

/// Load every video under path (canonical: all *.json files, sorted), or
/// convert a CAD-120-style directory in memory. Videos are validated; videos
/// left with fewer than 2 frames are skipped with a warning. Throws
/// qstr::Error("dataset") on an unreadable path or when nothing survives.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                     std::vector<std::string>* warnings = nullptr);

/// Parse a CAD-120-style directory (activityLabel.txt plus per-video
/// skeleton and object track files) into raw videos, without validation.
std::vector<TrackedVideo> parse_cad120(const std::filesystem::path& dir,
                                       std::vector<std::string>* warnings = nullptr);

/// Convert CAD-120-style raw files into canonical per-video JSON files.
/// Returns the number of videos written.
int convert_cad120(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                   std::vector<std::string>* warnings = nullptr);

/// Write one canonical JSON file per video into out_dir ("<video_id>.json").
void save_dataset(const Dataset& dataset, const std::filesystem::path& out_dir);

}  // namespace qstr
