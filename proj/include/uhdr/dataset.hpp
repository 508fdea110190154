// Copyright (c) 2026 The uhdr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end training-pair synthesis. For every (source, sample) pair:
//
//   clean -> amplify -> I_L -> fuse_to_raw -> I_LF -> ratio_map -> S
//                          \-> sample noise -> synthesize_noisy -> I_NL
//
// Each sample draws from its own engine seeded with derive_seed(seed, index),
// so output is identical for any worker count.
//
// Layout of an output directory:
//
//   manifest.json
//   samples/<id>/input.uraw        I_NL (packed f32, amplified, unclipped)
//   samples/<id>/ratio_map.uraw    S    (packed f32)
//   samples/<id>/target.uraw       I_LF (packed f32)
//   samples/<id>/provenance.json
//   samples/<id>/encoding.uenc     optional, encoding of R / S

#pragma once

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "uhdr/byte_io.hpp"
#include "uhdr/encoding.hpp"
#include "uhdr/errors.hpp"
#include "uhdr/fusion.hpp"
#include "uhdr/highlight.hpp"
#include "uhdr/noise.hpp"
#include "uhdr/profile.hpp"
#include "uhdr/random.hpp"
#include "uhdr/uraw.hpp"

namespace uhdr {

inline constexpr int kDatasetVersion = 1;

struct SynthConfig {
    int samples_per_image = 1;
    FusionParams fusion;
    double epsilon_r = kRatioEpsilon;
    double ratio_min = 50.0;
    double ratio_max = 300.0;
    HighlightSpec highlight;
    EncodingSpec encoding;
    NoiseModel noise_model = NoiseModel::Physics;
    bool write_encoding = false;

    friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

inline void validate(const SynthConfig& c) {
    if (c.samples_per_image < 1) throw ConfigError("samples_per_image must be at least 1");
    if (!(c.epsilon_r > 0.0)) throw ConfigError("epsilon_r must be positive");
    if (!(c.ratio_min >= 1.0) || !(c.ratio_min <= c.ratio_max)) {
        throw ConfigError("ratio bounds must satisfy 1 <= ratio_min <= ratio_max");
    }
    validate(c.fusion);
    validate(c.highlight);
    validate(c.encoding);
}

inline nlohmann::json to_json(const SynthConfig& c) {
    return {{"samples_per_image", c.samples_per_image},
            {"fusion", to_json(c.fusion)},
            {"epsilon_r", c.epsilon_r},
            {"ratio_min", c.ratio_min},
            {"ratio_max", c.ratio_max},
            {"highlight", to_json(c.highlight)},
            {"encoding", to_json(c.encoding)},
            {"noise_model", to_string(c.noise_model)},
            {"write_encoding", c.write_encoding}};
}

/// Missing keys keep their defaults.
inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
    SynthConfig c;
    try {
        c.samples_per_image = j.value("samples_per_image", c.samples_per_image);
        if (j.contains("fusion")) c.fusion = fusion_params_from_json(j["fusion"]);
        c.epsilon_r = j.value("epsilon_r", c.epsilon_r);
        c.ratio_min = j.value("ratio_min", c.ratio_min);
        c.ratio_max = j.value("ratio_max", c.ratio_max);
        if (j.contains("highlight")) c.highlight = highlight_spec_from_json(j["highlight"]);
        if (j.contains("encoding")) c.encoding = encoding_spec_from_json(j["encoding"]);
        if (j.contains("noise_model")) c.noise_model = noise_model_from_string(j["noise_model"].get<std::string>());
        c.write_encoding = j.value("write_encoding", c.write_encoding);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed synthesis config: ") + e.what());
    }
    validate(c);
    return c;
}

inline SynthConfig read_synth_config(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(detail::read_file_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return synth_config_from_json(j);
}

struct SynthesizedSample {
    PackedRaw lighted;  // I_L, kept in memory only
    PackedRaw fused;    // I_LF
    RatioMap ratio;     // S
    PackedRaw noisy;    // I_NL
    HighlightSpec highlight;
    std::vector<HighlightPatch> patches;
    NoiseSample noise;
};

/// True when S (I_LF + eps) reproduces I_L to within two float epsilons of
/// each pixel's magnitude (the product is evaluated in double).
inline bool ratio_identity_holds(const RatioMap& s, const PackedRaw& fused, const PackedRaw& lighted, double epsilon) {
    for (size_t i = 0; i < s.values.size(); ++i) {
        const double l = lighted.planes.values()[i];
        const double rec = static_cast<double>(s.values.values()[i]) * (static_cast<double>(fused.planes.values()[i]) + epsilon);
        if (std::abs(rec - l) > 2.0 * FLT_EPSILON * std::abs(l)) return false;
    }
    return true;
}

/// Pure function of (clean, profile, config, seed). The clean input is
/// clipped to [0,1] first.
inline SynthesizedSample synthesize_sample(const PackedRaw& clean, const CameraProfile& profile,
                                           const SynthConfig& config, uint64_t seed) {
    validate(config);
    Rng rng(seed);
    SynthesizedSample s;
    PackedRaw source = clean;
    source.planes = clipped(std::move(source.planes));

    s.highlight = config.highlight;
    s.highlight.seed = seed;
    s.lighted = amplify(source, s.highlight, rng, &s.patches);
    s.fused = fuse_to_raw(s.lighted, profile, config.fusion);
    s.ratio = ratio_map(s.lighted, s.fused, config.epsilon_r);

    s.noise = sample_noise_params(profile, rng, config.noise_model);
    s.noise.R = sample_ratio(config.ratio_min, config.ratio_max, rng);
    s.noise.seed = seed;
    s.noisy = synthesize_noisy(s.lighted, s.noise, rng);

    if (!ratio_identity_holds(s.ratio, s.fused, s.lighted, config.epsilon_r)) {
        throw Error("ratio map does not reproduce the lighted image");
    }
    return s;
}

struct ManifestEntry {
    std::string id;
    std::string source;  // file name inside the source directory
    size_t source_index = 0;
    size_t sample_index = 0;
    uint64_t seed = 0;
    nlohmann::json provenance;
};

struct Manifest {
    std::string profile_name;
    nlohmann::json profile;
    SynthConfig config;
    uint64_t seed = 0;
    std::vector<ManifestEntry> samples;
    std::vector<std::string> warnings;  // not serialized
};

inline nlohmann::json to_json(const Manifest& m) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& e : m.samples) {
        samples.push_back({{"id", e.id},
                           {"source", e.source},
                           {"source_index", e.source_index},
                           {"sample_index", e.sample_index},
                           {"seed", e.seed},
                           {"files",
                            {{"input", "samples/" + e.id + "/input.uraw"},
                             {"ratio_map", "samples/" + e.id + "/ratio_map.uraw"},
                             {"target", "samples/" + e.id + "/target.uraw"}}},
                           {"provenance", e.provenance}});
    }
    return {{"format", "uhdr-dataset"},
            {"version", kDatasetVersion},
            {"profile", {{"name", m.profile_name}, {"parameters", m.profile}}},
            {"config", to_json(m.config)},
            {"seed", m.seed},
            {"samples", samples}};
}

inline nlohmann::json sample_provenance(const ManifestEntry& e, const SynthesizedSample& s, const SynthConfig& c) {
    nlohmann::json patches = nlohmann::json::array();
    for (const auto& p : s.patches) patches.push_back(to_json(p));
    return {{"source", e.source},
            {"seed", e.seed},
            {"highlight", to_json(s.highlight)},
            {"patches", patches},
            {"noise", to_json(s.noise)},
            {"n_stops", c.fusion.n_stops},
            {"fusion", to_json(c.fusion)},
            {"epsilon_r", c.epsilon_r}};
}

inline std::string sample_id(size_t index, const std::filesystem::path& source) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06zu", index);
    return std::string(buf) + "_" + source.stem().string();
}

inline std::vector<std::filesystem::path> list_sources(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("source directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".uraw") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

struct SynthJob {
    std::filesystem::path src_dir;
    std::filesystem::path out_dir;
    CameraProfile profile;
    SynthConfig config;
    uint64_t seed = 0;
    int workers = 1;
    bool overwrite = false;
};

/// tile_ratio for stored samples. A tile that is black in I_L has S = 0 and
/// no finite ratio; it takes the top of the encoding grid instead.
inline Tensor<double> sample_tile_ratio(const RatioMap& ratio, double R, const EncodingSpec& spec) {
    RatioMap safe = ratio;
    for (int y = 0; y < safe.values.height(); ++y) {
        for (int x = 0; x < safe.values.width(); ++x) {
            double sum = 0.0;
            for (int c = 0; c < safe.values.channels(); ++c) sum += safe.values(c, y, x);
            if (sum > 0.0) continue;
            for (int c = 0; c < safe.values.channels(); ++c) safe.values(c, y, x) = static_cast<float>(R / spec.r_hi);
        }
    }
    return tile_ratio(safe, R);
}

inline void write_sample_files(const std::filesystem::path& dir, const ManifestEntry& entry,
                               const SynthesizedSample& s, const SynthConfig& config) {
    std::filesystem::create_directories(dir);
    write_uraw(s.noisy, dir / "input.uraw");
    write_uraw(PackedRaw(s.ratio.values, s.lighted.meta), dir / "ratio_map.uraw");
    write_uraw(s.fused, dir / "target.uraw");
    if (config.write_encoding) {
        EncodedRatio enc{encode(sample_tile_ratio(s.ratio, s.noise.R, config.encoding), config.encoding), config.encoding,
                         EncoderKind::Gaussian, static_cast<float>(s.noise.R)};
        write_uenc(enc, dir / "encoding.uenc");
    }
    detail::write_file_text(dir / "provenance.json", entry.provenance.dump(2) + "\n");
}

/// Synthesizes a whole dataset. On failure every file written by this call
/// is removed before the first error (lowest sample index) is rethrown.
inline Manifest synth_dataset(const SynthJob& job) {
    namespace fs = std::filesystem;
    validate(job.config);
    validate(job.profile);

    Manifest manifest;
    manifest.profile_name = job.profile.name;
    manifest.profile = to_json(job.profile);
    manifest.config = job.config;
    manifest.seed = job.seed;

    const auto sources = list_sources(job.src_dir);
    const fs::path samples_dir = job.out_dir / "samples";
    const fs::path manifest_path = job.out_dir / "manifest.json";
    if (fs::exists(manifest_path) || fs::exists(samples_dir)) {
        if (!job.overwrite) throw IoError("output directory already holds a dataset: " + job.out_dir.string());
        fs::remove_all(samples_dir);
        fs::remove(manifest_path);
    }
    fs::create_directories(samples_dir);

    if (sources.empty()) {
        manifest.warnings.push_back("no .uraw sources found in " + job.src_dir.string());
        detail::write_file_text(manifest_path, to_json(manifest).dump(2) + "\n");
        return manifest;
    }

    const size_t spp = static_cast<size_t>(job.config.samples_per_image);
    const size_t total = sources.size() * spp;
    std::vector<ManifestEntry> entries(total);
    std::vector<std::exception_ptr> errors(total);
    std::atomic<size_t> next{0};

    auto work = [&] {
        for (size_t i = next++; i < total; i = next++) {
            auto& e = entries[i];
            e.source_index = i / spp;
            e.sample_index = i % spp;
            e.source = sources[e.source_index].filename().string();
            e.id = sample_id(i, sources[e.source_index]);
            e.seed = derive_seed(job.seed, i);
            const fs::path partial = samples_dir / (e.id + ".partial");
            try {
                const auto clean = read_packed(sources[e.source_index]);
                const auto s = synthesize_sample(clean, job.profile, job.config, e.seed);
                e.provenance = sample_provenance(e, s, job.config);
                write_sample_files(partial, e, s, job.config);
                fs::rename(partial, samples_dir / e.id);
            } catch (...) {
                errors[i] = std::current_exception();
                std::error_code ec;
                fs::remove_all(partial, ec);
            }
        }
    };

    const int workers = std::max(1, std::min<int>(job.workers, static_cast<int>(total)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    for (const auto& err : errors) {
        if (err) {
            std::error_code ec;
            fs::remove_all(samples_dir, ec);
            fs::remove(manifest_path, ec);
            std::rethrow_exception(err);
        }
    }
    manifest.samples = std::move(entries);
    detail::write_file_text(manifest_path, to_json(manifest).dump(2) + "\n");
    return manifest;
}

/// Checks that every file a manifest lists exists and parses. Returns the
/// number of samples verified.
inline size_t validate_dataset(const std::filesystem::path& out_dir) {
    nlohmann::json m;
    try {
        m = nlohmann::json::parse(detail::read_file_text(out_dir / "manifest.json"));
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (m.value("format", "") != "uhdr-dataset") throw FormatError("not a uhdr dataset manifest");
    if (m.value("version", 0) != kDatasetVersion) throw VersionError("unsupported dataset version");
    size_t n = 0;
    for (const auto& s : m.at("samples")) {
        for (const auto& [role, rel] : s.at("files").items()) {
            const auto img = read_packed(out_dir / rel.get<std::string>());
            if (img.planes.empty()) throw FormatError("empty " + role + " image in sample " + s.at("id").get<std::string>());
        }
        ++n;
    }
    return n;
}

}  // namespace uhdr
