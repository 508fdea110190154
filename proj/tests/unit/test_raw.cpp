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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "support/scenes.hpp"
#include "uhdr/profile.hpp"
#include "uhdr/raw.hpp"
#include "uhdr/uraw.hpp"

using namespace uhdr;
using uhdr::testing::TempDir;

namespace {

RawMetadata meta14(BayerPattern p = BayerPattern::RGGB) {
    RawMetadata m;
    m.bayer = p;
    m.black_level = {512, 512, 512, 512};
    m.white_level = 16383;
    return m;
}

}  // namespace

TEST(Pack, BlackLevelMapsToZero) {
    RawImage raw(2, 2, meta14(), 512);
    const auto p = pack(raw);
    ASSERT_EQ(p.planes.channels(), 4);
    for (int c = 0; c < 4; ++c) EXPECT_EQ(p.planes(c, 0, 0), 0.0f);
}

TEST(Pack, WhiteLevelMapsToOne) {
    RawImage raw(4, 4, meta14(), 16383);
    const auto p = pack(raw);
    for (float v : p.planes.values()) EXPECT_EQ(v, 1.0f);
}

TEST(Pack, QuarterRangeAtRedSite) {
    // DN = black + 0.25 (white - black) with white - black = 15871 is not an
    // integer, so use a range divisible by four.
    RawMetadata m = meta14();
    m.white_level = 512 + 4000;
    RawImage raw(2, 2, m, 512);
    raw.at(0, 0) = 512 + 1000;
    const auto p = pack(raw);
    EXPECT_EQ(p.planes(kR, 0, 0), 0.25f);
    EXPECT_EQ(p.planes(kG1, 0, 0), 0.0f);
    EXPECT_EQ(p.planes(kB, 0, 0), 0.0f);
}

TEST(Pack, PerChannelBlackLevels) {
    RawMetadata m;
    m.black_level = {100, 200, 300, 400};
    m.white_level = 1100;
    RawImage raw(2, 2, m);
    raw.at(0, 0) = 600;   // R
    raw.at(0, 1) = 700;   // G1
    raw.at(1, 0) = 800;   // G2
    raw.at(1, 1) = 1100;  // B
    const auto p = pack(raw);
    EXPECT_FLOAT_EQ(p.planes(kR, 0, 0), 500.0f / 1000.0f);
    EXPECT_FLOAT_EQ(p.planes(kG1, 0, 0), 500.0f / 900.0f);
    EXPECT_FLOAT_EQ(p.planes(kG2, 0, 0), 500.0f / 800.0f);
    EXPECT_FLOAT_EQ(p.planes(kB, 0, 0), 1.0f);
}

TEST(Pack, RejectsOddDimensions) {
    RawImage raw(3, 2, meta14(), 600);
    EXPECT_THROW(pack(raw), DimensionError);
    RawImage raw2(2, 5, meta14(), 600);
    EXPECT_THROW(pack(raw2), DimensionError);
}

TEST(Pack, RejectsBlackAboveWhite) {
    RawMetadata m = meta14();
    m.black_level[2] = 16383;
    RawImage raw(2, 2, m, 0);
    EXPECT_THROW(pack(raw), ProfileError);
}

TEST(Pack, BayerPatternPermutesChannelsNotValues) {
    // Same mosaic, four CFA interpretations: the multiset of values in each
    // tile never changes, only which plane receives which site.
    const auto base = uhdr::testing::synthetic_mosaic(8, 6, 3);
    const std::array<std::pair<int, int>, 4> rggb_sites{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    for (auto pat : {BayerPattern::RGGB, BayerPattern::BGGR, BayerPattern::GRBG, BayerPattern::GBRG}) {
        auto raw = base;
        raw.meta.bayer = pat;
        const auto p = pack(raw);
        const auto sites = cfa_sites(pat);
        std::set<std::pair<int, int>> seen;
        for (int c = 0; c < 4; ++c) seen.insert({sites[c].dy, sites[c].dx});
        EXPECT_EQ(seen.size(), 4u);
        for (int y = 0; y < p.height(); ++y) {
            for (int x = 0; x < p.width(); ++x) {
                std::multiset<float> a, b;
                for (int c = 0; c < 4; ++c) a.insert(p.planes(c, y, x));
                for (auto [dy, dx] : rggb_sites) {
                    b.insert(static_cast<float>((raw.at(2 * y + dy, 2 * x + dx) - 512.0) / (16383.0 - 512.0)));
                }
                EXPECT_EQ(a, b);
            }
        }
    }
}

TEST(Pack, RedAndBlueSitesFollowPattern) {
    RawMetadata m = meta14(BayerPattern::BGGR);
    RawImage raw(2, 2, m, 512);
    raw.at(1, 1) = 16383;  // red site of BGGR
    const auto p = pack(raw);
    EXPECT_EQ(p.planes(kR, 0, 0), 1.0f);
    EXPECT_EQ(p.planes(kB, 0, 0), 0.0f);
}

TEST(Unpack, RoundTripIsBitExact) {
    for (auto pat : {BayerPattern::RGGB, BayerPattern::BGGR, BayerPattern::GRBG, BayerPattern::GBRG}) {
        auto raw = uhdr::testing::synthetic_mosaic(16, 12, 11, pat);
        const auto back = unpack(pack(raw), raw.meta);
        EXPECT_EQ(back.data, raw.data);
        EXPECT_FALSE(back.meta.clip_warning);
    }
}

TEST(Unpack, ConstantHalfPlane) {
    PackedRaw p(2, 2, meta14(), 0.5f);
    const auto raw = unpack(p, meta14());
    const auto expected = static_cast<uint16_t>(std::nearbyint(512 + 0.5 * (16383 - 512)));
    for (uint16_t v : raw.data) EXPECT_EQ(v, expected);
}

TEST(Unpack, ClampsAboveWhiteAndFlags) {
    PackedRaw p(1, 1, meta14(), 1.2f);
    const auto raw = unpack(p, meta14());
    for (uint16_t v : raw.data) EXPECT_EQ(v, 16383);
    EXPECT_TRUE(raw.meta.clip_warning);
}

TEST(Unpack, PropertyWithinOneDn) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        PackedRaw p(5, 7, meta14());
        for (auto& v : p.planes.values()) v = static_cast<float>(u(rng));
        const auto back = pack(unpack(p, meta14()));
        for (size_t i = 0; i < p.planes.size(); ++i) {
            EXPECT_LE(std::abs(back.planes.values()[i] - p.planes.values()[i]), 1.0 / (16383 - 512));
        }
    }
}

TEST(Uraw, PackedFileSize) {
    TempDir dir("uraw");
    PackedRaw p(2, 2, meta14(), 0.0f);
    write_uraw(p, dir.path() / "z.uraw");
    EXPECT_EQ(std::filesystem::file_size(dir.path() / "z.uraw"), kUrawHeaderSize + 4u * 2 * 2 * 4);
    EXPECT_EQ(kUrawHeaderSize, 52u);
}

TEST(Uraw, MosaicRoundTripBitExact) {
    TempDir dir("uraw");
    auto raw = uhdr::testing::synthetic_mosaic(10, 6, 2, BayerPattern::GBRG);
    raw.meta.iso = 3200;
    raw.meta.exposure_time = 1.0f / 30;
    write_uraw(raw, dir.path() / "m.uraw");
    const auto back = std::get<RawImage>(read_uraw(dir.path() / "m.uraw"));
    EXPECT_EQ(back, raw);
}

TEST(Uraw, PackedRoundTripBitExact) {
    TempDir dir("uraw");
    PackedRaw p(3, 4, meta14());
    p.planes = uhdr::testing::random_tensor(4, 3, 4, 9, -0.5, 7.0);
    p.planes(1, 1, 1) = std::nextafter(1.0f, 2.0f);
    write_uraw(p, dir.path() / "p.uraw");
    const auto bytes1 = detail::read_file_bytes(dir.path() / "p.uraw");
    const auto back = std::get<PackedRaw>(read_uraw(dir.path() / "p.uraw"));
    EXPECT_EQ(back, p);
    EXPECT_EQ(encode_uraw(back), bytes1);
}

TEST(Uraw, BadMagic) {
    auto bytes = encode_uraw(PackedRaw(1, 1, meta14()));
    bytes[0] = 'X';
    EXPECT_THROW(decode_uraw(bytes), BadMagicError);
}

TEST(Uraw, VersionMismatch) {
    auto bytes = encode_uraw(PackedRaw(1, 1, meta14()));
    bytes[4] = 2;
    EXPECT_THROW(decode_uraw(bytes), VersionError);
}

TEST(Uraw, TruncatedPayload) {
    auto bytes = encode_uraw(PackedRaw(2, 2, meta14()));
    bytes.resize(bytes.size() - 3);
    EXPECT_THROW(decode_uraw(bytes), TruncatedError);
    bytes.resize(20);
    EXPECT_THROW(decode_uraw(bytes), TruncatedError);
}

TEST(Uraw, ErrorsAreDistinct) {
    // Each failure must be catchable on its own, never as a sibling type.
    auto bytes = encode_uraw(PackedRaw(1, 1, meta14()));
    bytes[0] = 'X';
    bool caught_version = false;
    try {
        decode_uraw(bytes);
    } catch (const VersionError&) {
        caught_version = true;
    } catch (const BadMagicError&) {
    }
    EXPECT_FALSE(caught_version);
}

TEST(Uraw, MissingFileIsIoError) { EXPECT_THROW(read_uraw("/nonexistent/x.uraw"), IoError); }

TEST(Uraw, ReadPackedPacksMosaics) {
    TempDir dir("uraw");
    const auto raw = uhdr::testing::synthetic_mosaic(8, 8, 4);
    write_uraw(raw, dir.path() / "m.uraw");
    EXPECT_EQ(read_packed(dir.path() / "m.uraw"), pack(raw));
}

static nlohmann::json identity_doc() { return to_json(CameraProfile{}); }

TEST(Profile, IdentityLoads) {
    const auto p = parse_profile(identity_doc().dump());
    for (const auto& row : p.ccm) EXPECT_DOUBLE_EQ(row[0] + row[1] + row[2], 1.0);
    EXPECT_EQ(p.wb_gains, (std::array<double, 3>{1, 1, 1}));
}

TEST(Profile, ZeroRowRejected) {
    auto j = identity_doc();
    j["ccm"][1] = {0, 0, 0};
    EXPECT_THROW(parse_profile(j.dump()), ProfileError);
}

TEST(Profile, InvertedKBoundsRejected) {
    auto j = identity_doc();
    j["noise"]["log_K_min"] = -3.0;
    j["noise"]["log_K_max"] = -5.0;
    EXPECT_THROW(parse_profile(j.dump()), ProfileError);
}

TEST(Profile, RowSumMustBeOne) {
    auto j = identity_doc();
    j["ccm"][0] = {1.1, 0, 0};
    EXPECT_THROW(parse_profile(j.dump()), ProfileError);
}

TEST(Profile, IllConditionedRejected) {
    // Rows sum to one but the matrix is nearly singular.
    auto j = identity_doc();
    j["ccm"] = {{0.5, 0.5, 0}, {0.5, 0.5000001, -0.0000001}, {0, 0, 1}};
    EXPECT_THROW(parse_profile(j.dump()), ProfileError);
}

TEST(Profile, NegativeScatterRejected) {
    auto j = identity_doc();
    j["noise"]["read_scatter"] = -0.1;
    EXPECT_THROW(parse_profile(j.dump()), ProfileError);
}

TEST(Profile, NonPositiveWhiteBalanceRejected) {
    auto j = identity_doc();
    j["wb_gains"] = {1.0, 0.0, 1.0};
    EXPECT_THROW(parse_profile(j.dump()), ProfileError);
}

TEST(Profile, MissingFieldRejected) {
    auto j = identity_doc();
    j.erase("ccm");
    EXPECT_THROW(parse_profile(j.dump()), ProfileError);
}

TEST(Profile, MalformedDocument) { EXPECT_THROW(parse_profile("{not json"), ProfileError); }

TEST(Profile, JsonRoundTrip) {
    TempDir dir("profile");
    const auto p = uhdr::testing::generic_profile();
    write_profile(p, dir.path() / "p.json");
    EXPECT_EQ(read_profile(dir.path() / "p.json"), p);
}

TEST(Profile, InverseIsInverse) {
    const auto m = uhdr::testing::generic_profile().ccm;
    const auto inv = inverse(m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += m[i][k] * inv[k][j];
            EXPECT_NEAR(acc, i == j ? 1.0 : 0.0, 1e-12);
        }
}
