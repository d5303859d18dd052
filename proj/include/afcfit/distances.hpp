#pragma once

#include <filesystem>
#include <utility>
#include <vector>

namespace afcfit {

// Small image patch with pixel values in [0, 1], row-major, channel-interleaved.
struct ImagePatch {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> pixels;

    double at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    static ImagePatch make(int width, int height, int channels);
};

// Root-mean-square pixel difference over all channels.
double euclidean_distance(const ImagePatch& a, const ImagePatch& b);

// 1 - mean local SSIM index over 8x8 uniform windows (stride 1) with the
// standard stabilising constants; multi-channel input is converted to
// grayscale by an equal-weight channel mean. Result lies in [0, 2].
double ssim_distance(const ImagePatch& a, const ImagePatch& b);

enum class PatchMetric { euclidean, ssim };

std::pair<double, double> triplet_distances(const ImagePatch& ref, const ImagePatch& x0,
                                            const ImagePatch& x1, PatchMetric metric);

// Binary PGM (P5) / PPM (P6) with maxval 255, or the raw CSV patch format
// (header line `width,height,channels` followed by one row per line).
ImagePatch load_patch(const std::filesystem::path& path);
void save_patch(const ImagePatch& patch, const std::filesystem::path& path);

}  // namespace afcfit
