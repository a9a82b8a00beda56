#include "qstr/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qstr/error.hpp"

namespace qstr {

namespace fs = std::filesystem;
using nlohmann::json;

DatasetFormat dataset_format_from_name(std::string_view name) {
    if (name == "canonical") return DatasetFormat::Canonical;
    if (name == "cad120") return DatasetFormat::Cad120;
    throw Error("dataset", "unknown dataset format: " + std::string(name));
}

namespace {

void warn(std::vector<std::string>* warnings, std::string message) {
    if (warnings) warnings->push_back(std::move(message));
}

bool valid_box(const Rect& r) {
    return finite(r.center) && std::isfinite(r.width) && std::isfinite(r.height) &&
           r.width > 0.0 && r.height > 0.0;
}

}  // namespace

bool validate_video(TrackedVideo& video, std::vector<std::string>* warnings,
                    int max_interp_gap) {
    auto& frames = video.frames;

    std::stable_sort(frames.begin(), frames.end(),
                     [](const FrameSnapshot& a, const FrameSnapshot& b) {
                         return a.frame_index < b.frame_index;
                     });
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].frame_index == frames[i - 1].frame_index) {
            throw Error("dataset", "video " + video.video_id + ": duplicate frame index " +
                                       std::to_string(frames[i].frame_index));
        }
    }

    // Joint completeness.
    std::vector<FrameSnapshot> kept;
    kept.reserve(frames.size());
    for (FrameSnapshot& f : frames) {
        bool ok = f.complete();
        if (ok) {
            for (Joint j : tracked_joints()) {
                if (!finite(f.joint(j))) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) {
            warn(warnings, "video " + video.video_id + ": dropped frame " +
                               std::to_string(f.frame_index) + " (incomplete skeleton)");
            continue;
        }
        kept.push_back(std::move(f));
    }
    frames = std::move(kept);

    // Degenerate boxes count as tracker dropouts.
    std::set<int> ids;
    for (FrameSnapshot& f : frames) {
        for (auto it = f.objects.begin(); it != f.objects.end();) {
            if (!valid_box(it->second)) {
                warn(warnings, "video " + video.video_id + ": discarded degenerate box for object " +
                                   std::to_string(it->first) + " in frame " +
                                   std::to_string(f.frame_index));
                it = f.objects.erase(it);
            } else {
                ids.insert(it->first);
                ++it;
            }
        }
    }

    // Interpolate short interior gaps per object; longer or edge gaps drop
    // the affected frames.
    std::vector<bool> drop(frames.size(), false);
    for (int id : ids) {
        std::ptrdiff_t prev = -1;
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(frames.size()); ++i) {
            const auto it = frames[static_cast<std::size_t>(i)].objects.find(id);
            if (it == frames[static_cast<std::size_t>(i)].objects.end()) continue;
            if (prev >= 0 && i - prev > 1) {
                const auto gap = i - prev - 1;
                if (gap <= max_interp_gap) {
                    const Rect& a = frames[static_cast<std::size_t>(prev)].objects.at(id);
                    const Rect& b = it->second;
                    for (std::ptrdiff_t t = prev + 1; t < i; ++t) {
                        const double u = static_cast<double>(t - prev) / static_cast<double>(i - prev);
                        frames[static_cast<std::size_t>(t)].objects[id] = Rect{
                            {a.center.x + u * (b.center.x - a.center.x),
                             a.center.y + u * (b.center.y - a.center.y)},
                            a.width + u * (b.width - a.width),
                            a.height + u * (b.height - a.height)};
                    }
                    warn(warnings, "video " + video.video_id + ": interpolated object " +
                                       std::to_string(id) + " across " + std::to_string(gap) +
                                       " frame(s)");
                } else {
                    for (std::ptrdiff_t t = prev + 1; t < i; ++t) {
                        drop[static_cast<std::size_t>(t)] = true;
                    }
                    warn(warnings, "video " + video.video_id + ": object " + std::to_string(id) +
                                       " missing for " + std::to_string(gap) +
                                       " frames; frames dropped");
                }
            }
            prev = i;
        }
        // Edge gaps (before first or after last detection).
        std::ptrdiff_t first = -1;
        std::ptrdiff_t last = -1;
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(frames.size()); ++i) {
            if (frames[static_cast<std::size_t>(i)].objects.count(id)) {
                if (first < 0) first = i;
                last = i;
            }
        }
        for (std::ptrdiff_t i = 0; i < first; ++i) drop[static_cast<std::size_t>(i)] = true;
        for (std::ptrdiff_t i = last + 1; i < static_cast<std::ptrdiff_t>(frames.size()); ++i) {
            drop[static_cast<std::size_t>(i)] = true;
        }
        if (first > 0 || (last >= 0 && last + 1 < static_cast<std::ptrdiff_t>(frames.size()))) {
            warn(warnings, "video " + video.video_id + ": object " + std::to_string(id) +
                               " untracked at sequence edges; frames dropped");
        }
    }

    std::vector<FrameSnapshot> final_frames;
    final_frames.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (!drop[i]) final_frames.push_back(std::move(frames[i]));
    }
    for (std::size_t i = 0; i < final_frames.size(); ++i) {
        final_frames[i].frame_index = static_cast<int>(i);
    }
    frames = std::move(final_frames);
    return frames.size() >= 2;
}

TrackedVideo load_video(const fs::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error("dataset", "cannot open " + file.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error("dataset", file.string() + ": " + e.what());
    }

    TrackedVideo video;
    try {
        video.video_id = doc.at("video_id").get<std::string>();
        video.subject_id = doc.at("subject_id").get<std::string>();
        video.label = doc.at("label").get<std::string>();
        for (const json& jf : doc.at("frames")) {
            FrameSnapshot frame;
            frame.frame_index = jf.at("frame").get<int>();
            frame.joints_present = 0;
            for (const auto& [name, pos] : jf.at("joints").items()) {
                const auto joint = joint_from_name(name);
                if (!joint || *joint == Joint::Hip) {
                    throw Error("dataset", "video " + video.video_id + " frame " +
                                               std::to_string(frame.frame_index) +
                                               ": unknown joint '" + name + "'");
                }
                frame.set_joint(*joint, {pos.at(0).get<double>(), pos.at(1).get<double>()});
            }
            if (jf.contains("objects")) {
                for (const auto& [key, box] : jf.at("objects").items()) {
                    int id = 0;
                    try {
                        id = std::stoi(key);
                    } catch (const std::exception&) {
                        throw Error("dataset", "video " + video.video_id +
                                                   ": non-numeric object id '" + key + "'");
                    }
                    frame.objects[id] =
                        Rect{{box.at(0).get<double>(), box.at(1).get<double>()},
                             box.at(2).get<double>(), box.at(3).get<double>()};
                }
            }
            video.frames.push_back(std::move(frame));
        }
    } catch (const json::exception& e) {
        throw Error("dataset", file.string() + ": schema violation: " + e.what());
    }
    return video;
}

std::string video_to_json(const TrackedVideo& video) {
    json frames = json::array();
    for (const FrameSnapshot& f : video.frames) {
        json joints;
        for (Joint j : tracked_joints()) {
            if (!f.has_joint(j)) continue;
            const Point2D& p = f.joint(j);
            joints[std::string(joint_name(j))] = {p.x, p.y};
        }
        json objects = json::object();
        for (const auto& [id, box] : f.objects) {
            objects[std::to_string(id)] = {box.center.x, box.center.y, box.width, box.height};
        }
        frames.push_back({{"frame", f.frame_index}, {"joints", joints}, {"objects", objects}});
    }
    const json doc = {{"video_id", video.video_id},
                      {"subject_id", video.subject_id},
                      {"label", video.label},
                      {"frames", frames}};
    return doc.dump(2) + "\n";
}

void save_video(const TrackedVideo& video, const fs::path& file) {
    std::ofstream out(file);
    if (!out) {
        throw Error("dataset", "cannot write " + file.string());
    }
    out << video_to_json(video);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

// 11 joints stored with orientation then position, 4 with position only.
constexpr std::array<Joint, 11> kCadOrientedJoints = {
    Joint::Head,     Joint::Neck,      Joint::Torso,    Joint::LeftShoulder,
    Joint::LeftElbow, Joint::RightShoulder, Joint::RightElbow, Joint::LeftHip,
    Joint::LeftKnee, Joint::RightHip,  Joint::RightKnee,
};
constexpr std::array<Joint, 4> kCadPositionJoints = {
    Joint::LeftHand,
    Joint::RightHand,
    Joint::LeftFoot,
    Joint::RightFoot,
};

// Depth-camera pinhole projection of millimetre coordinates to pixels.
constexpr double kFx = 525.0;
constexpr double kFy = 525.0;
constexpr double kCx = 320.0;
constexpr double kCy = 240.0;

bool project_joint(double x, double y, double z, Point2D& out) {
    if (!(z > 0.0)) return false;
    out = {kCx + kFx * x / z, kCy - kFy * y / z};
    return finite(out);
}

struct CadEntry {
    std::string video_id;
    std::string label;
    std::string subject_id;
};

std::vector<CadEntry> parse_activity_labels(const fs::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error("dataset", "cannot open " + file.string());
    }
    std::vector<CadEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("END", 0) == 0) continue;
        const auto fields = split_csv(line);
        if (fields.size() < 3) {
            throw Error("dataset", file.string() + ": malformed label line: " + line);
        }
        entries.push_back({fields[0], fields[1], "S" + fields[2]});
    }
    return entries;
}

void parse_cad_skeleton(const fs::path& file, TrackedVideo& video) {
    std::ifstream in(file);
    if (!in) {
        throw Error("dataset", "cannot open " + file.string());
    }
    // frame, 11*(9 ori + 1 conf + 3 pos + 1 conf), 4*(3 pos + 1 conf)
    constexpr std::size_t kExpectedFields = 1 + 11 * 14 + 4 * 4;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("END", 0) == 0) continue;
        auto fields = split_csv(line);
        while (!fields.empty() && fields.back().empty()) fields.pop_back();
        if (fields.size() < kExpectedFields) {
            throw Error("dataset", file.string() + ": skeleton line with " +
                                       std::to_string(fields.size()) + " fields, expected " +
                                       std::to_string(kExpectedFields));
        }
        FrameSnapshot frame;
        frame.frame_index = std::stoi(fields[0]);
        frame.joints_present = 0;
        std::size_t pos = 1;
        for (Joint j : kCadOrientedJoints) {
            pos += 10;  // orientation matrix + its confidence
            const double x = std::stod(fields[pos]);
            const double y = std::stod(fields[pos + 1]);
            const double z = std::stod(fields[pos + 2]);
            const double conf = std::stod(fields[pos + 3]);
            pos += 4;
            Point2D p;
            if (conf != 0.0 && project_joint(x, y, z, p)) frame.set_joint(j, p);
        }
        for (Joint j : kCadPositionJoints) {
            const double x = std::stod(fields[pos]);
            const double y = std::stod(fields[pos + 1]);
            const double z = std::stod(fields[pos + 2]);
            const double conf = std::stod(fields[pos + 3]);
            pos += 4;
            Point2D p;
            if (conf != 0.0 && project_joint(x, y, z, p)) frame.set_joint(j, p);
        }
        video.frames.push_back(std::move(frame));
    }
}

void parse_cad_objects(const fs::path& file, int object_id, TrackedVideo& video) {
    std::ifstream in(file);
    if (!in) {
        throw Error("dataset", "cannot open " + file.string());
    }
    std::map<int, FrameSnapshot*> by_index;
    for (FrameSnapshot& f : video.frames) by_index[f.frame_index] = &f;

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("END", 0) == 0) continue;
        const auto fields = split_csv(line);
        if (fields.size() < 6) {
            throw Error("dataset", file.string() + ": object line with fewer than 6 fields");
        }
        const int frame_index = std::stoi(fields[0]);
        const double x1 = std::stod(fields[2]);
        const double y1 = std::stod(fields[3]);
        const double x2 = std::stod(fields[4]);
        const double y2 = std::stod(fields[5]);
        const auto it = by_index.find(frame_index);
        if (it == by_index.end()) continue;  // box for a frame without skeleton data
        const Rect box{{(x1 + x2) / 2.0, (y1 + y2) / 2.0}, std::abs(x2 - x1), std::abs(y2 - y1)};
        if (box.width > 0.0 && box.height > 0.0) {
            it->second->objects[object_id] = box;
        }
    }
}

}  // namespace

std::vector<TrackedVideo> parse_cad120(const fs::path& dir, std::vector<std::string>* warnings) {
    const auto entries = parse_activity_labels(dir / "activityLabel.txt");
    std::vector<TrackedVideo> videos;
    for (const CadEntry& entry : entries) {
        const fs::path skeleton = dir / (entry.video_id + ".txt");
        if (!fs::exists(skeleton)) {
            warn(warnings, "skipping " + entry.video_id + ": no skeleton file");
            continue;
        }
        TrackedVideo video;
        video.video_id = entry.video_id;
        video.subject_id = entry.subject_id;
        video.label = entry.label;
        parse_cad_skeleton(skeleton, video);
        for (int k = 1;; ++k) {
            const fs::path obj = dir / (entry.video_id + "_obj" + std::to_string(k) + ".txt");
            if (!fs::exists(obj)) break;
            parse_cad_objects(obj, k, video);
        }
        videos.push_back(std::move(video));
    }
    return videos;
}

Dataset load_dataset(const fs::path& path, DatasetFormat format,
                     std::vector<std::string>* warnings) {
    if (!fs::exists(path)) {
        throw Error("dataset", "no such path: " + path.string());
    }

    std::vector<TrackedVideo> raw;
    if (format == DatasetFormat::Canonical) {
        std::vector<fs::path> files;
        if (fs::is_directory(path)) {
            for (const auto& e : fs::directory_iterator(path)) {
                if (e.path().extension() == ".json") files.push_back(e.path());
            }
            std::sort(files.begin(), files.end());
        } else {
            files.push_back(path);
        }
        for (const fs::path& f : files) {
            raw.push_back(load_video(f));
        }
    } else {
        raw = parse_cad120(path, warnings);
    }

    Dataset dataset;
    for (TrackedVideo& video : raw) {
        if (validate_video(video, warnings)) {
            dataset.videos.push_back(std::move(video));
        } else {
            warn(warnings,
                 "video " + video.video_id + ": fewer than 2 frames after validation; skipped");
        }
    }
    if (dataset.videos.empty()) {
        throw Error("dataset", "empty dataset at " + path.string());
    }
    std::sort(dataset.videos.begin(), dataset.videos.end(),
              [](const TrackedVideo& a, const TrackedVideo& b) {
                  return std::tie(a.subject_id, a.video_id) < std::tie(b.subject_id, b.video_id);
              });
    dataset.labels = LabelTable::from_videos(dataset.videos);
    return dataset;
}

int convert_cad120(const fs::path& in_dir, const fs::path& out_dir,
                   std::vector<std::string>* warnings) {
    const auto videos = parse_cad120(in_dir, warnings);
    fs::create_directories(out_dir);
    int written = 0;
    for (const TrackedVideo& v : videos) {
        save_video(v, out_dir / (v.video_id + ".json"));
        ++written;
    }
    return written;
}

void save_dataset(const Dataset& dataset, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    for (const TrackedVideo& v : dataset.videos) {
        save_video(v, out_dir / (v.video_id + ".json"));
    }
}

}  // namespace qstr
