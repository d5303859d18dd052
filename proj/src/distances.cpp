#include "afcfit/distances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "afcfit/common.hpp"

namespace afcfit {

namespace {

constexpr int kWindow = 8;
constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2 with L = 1
constexpr double kC2 = 0.03 * 0.03;

void check_patch(const ImagePatch& p, const char* which) {
    if (p.width < 1 || p.height < 1 || p.channels < 1) {
        throw InputError(cat(which, ": empty patch"));
    }
    if (p.pixels.size() !=
        static_cast<std::size_t>(p.width) * p.height * p.channels) {
        throw InputError(cat(which, ": pixel buffer size does not match dimensions"));
    }
    for (double v : p.pixels) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InputError(cat(which, ": pixel values must be finite and in [0,1]"));
        }
    }
}

void check_same_shape(const ImagePatch& a, const ImagePatch& b, const char* op) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
        throw InputError(cat(op, ": shape mismatch (", a.width, "x", a.height, "x", a.channels,
                             " vs ", b.width, "x", b.height, "x", b.channels, ")"));
    }
}

std::vector<double> to_gray(const ImagePatch& p) {
    std::vector<double> gray(static_cast<std::size_t>(p.width) * p.height);
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            double acc = 0.0;
            for (int c = 0; c < p.channels; ++c) acc += p.at(x, y, c);
            gray[static_cast<std::size_t>(y) * p.width + x] = acc / p.channels;
        }
    }
    return gray;
}

// Summed-area table with a zero top row and left column.
std::vector<double> integral(const std::vector<double>& img, int w, int h) {
    std::vector<double> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double row = 0.0;
        for (int x = 0; x < w; ++x) {
            row += img[static_cast<std::size_t>(y) * w + x];
            sat[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
                sat[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] + row;
        }
    }
    return sat;
}

double window_sum(const std::vector<double>& sat, int stride, int x, int y, int size) {
    const auto s = [&](int yy, int xx) {
        return sat[static_cast<std::size_t>(yy) * stride + xx];
    };
    return s(y + size, x + size) - s(y, x + size) - s(y + size, x) + s(y, x);
}

}  // namespace

ImagePatch ImagePatch::make(int width, int height, int channels) {
    ImagePatch p;
    p.width = width;
    p.height = height;
    p.channels = channels;
    p.pixels.assign(static_cast<std::size_t>(width) * height * channels, 0.0);
    return p;
}

double euclidean_distance(const ImagePatch& a, const ImagePatch& b) {
    check_patch(a, "euclidean_distance(a)");
    check_patch(b, "euclidean_distance(b)");
    check_same_shape(a, b, "euclidean_distance");
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = a.pixels[i] - b.pixels[i];
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(a.pixels.size()));
}

double ssim_distance(const ImagePatch& a, const ImagePatch& b) {
    check_patch(a, "ssim_distance(a)");
    check_patch(b, "ssim_distance(b)");
    check_same_shape(a, b, "ssim_distance");
    if (a.width < kWindow || a.height < kWindow) {
        throw InputError(cat("ssim_distance: patches must be at least ", kWindow, "x", kWindow,
                             ", got ", a.width, "x", a.height));
    }

    const int w = a.width;
    const int h = a.height;
    const auto ga = to_gray(a);
    const auto gb = to_gray(b);

    std::vector<double> ga2(ga.size()), gb2(ga.size()), gab(ga.size());
    for (std::size_t i = 0; i < ga.size(); ++i) {
        ga2[i] = ga[i] * ga[i];
        gb2[i] = gb[i] * gb[i];
        gab[i] = ga[i] * gb[i];
    }
    const auto sa = integral(ga, w, h);
    const auto sb = integral(gb, w, h);
    const auto sa2 = integral(ga2, w, h);
    const auto sb2 = integral(gb2, w, h);
    const auto sab = integral(gab, w, h);

    const int stride = w + 1;
    const double count = kWindow * kWindow;
    double total = 0.0;
    int windows = 0;
    for (int y = 0; y + kWindow <= h; ++y) {
        for (int x = 0; x + kWindow <= w; ++x) {
            const double mu_a = window_sum(sa, stride, x, y, kWindow) / count;
            const double mu_b = window_sum(sb, stride, x, y, kWindow) / count;
            const double var_a = window_sum(sa2, stride, x, y, kWindow) / count - mu_a * mu_a;
            const double var_b = window_sum(sb2, stride, x, y, kWindow) / count - mu_b * mu_b;
            const double cov = window_sum(sab, stride, x, y, kWindow) / count - mu_a * mu_b;
            const double index = ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
                                 ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
            total += index;
            ++windows;
        }
    }
    return 1.0 - total / windows;
}

std::pair<double, double> triplet_distances(const ImagePatch& ref, const ImagePatch& x0,
                                            const ImagePatch& x1, PatchMetric metric) {
    const auto d = [metric](const ImagePatch& p, const ImagePatch& q) {
        return metric == PatchMetric::euclidean ? euclidean_distance(p, q) : ssim_distance(p, q);
    };
    return {d(ref, x0), d(ref, x1)};
}

namespace {

int pnm_token(std::istream& in, const char* what) {
    // Skips whitespace and '#' comments between header tokens.
    while (true) {
        const int c = in.peek();
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = 0;
    if (!(in >> value)) throw ParseError(cat("pnm: missing ", what));
    return value;
}

ImagePatch load_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(cat("cannot open patch file: ", path.string()));
    char magic[2] = {0, 0};
    in.read(magic, 2);
    int channels = 0;
    if (magic[0] == 'P' && magic[1] == '5') {
        channels = 1;
    } else if (magic[0] == 'P' && magic[1] == '6') {
        channels = 3;
    } else {
        throw ParseError(cat(path.string(), ": expected binary PGM (P5) or PPM (P6)"));
    }
    const int width = pnm_token(in, "width");
    const int height = pnm_token(in, "height");
    const int maxval = pnm_token(in, "maxval");
    if (width < 1 || height < 1) throw ParseError(cat(path.string(), ": bad dimensions"));
    if (maxval != 255) throw ParseError(cat(path.string(), ": only maxval 255 is supported"));
    in.get();  // single whitespace after maxval

    auto patch = ImagePatch::make(width, height, channels);
    std::vector<unsigned char> raw(patch.pixels.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw ParseError(cat(path.string(), ": truncated pixel data"));
    }
    for (std::size_t i = 0; i < raw.size(); ++i) patch.pixels[i] = raw[i] / 255.0;
    return patch;
}

ImagePatch load_patch_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(cat("cannot open patch file: ", path.string()));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(cat(path.string(), ": empty file"));
    int width = 0, height = 0, channels = 0;
    char comma1 = 0, comma2 = 0;
    std::istringstream header(line);
    if (!(header >> width >> comma1 >> height >> comma2 >> channels) || comma1 != ',' ||
        comma2 != ',') {
        throw ParseError(cat(path.string(), ": header must be 'width,height,channels'"));
    }
    if (width < 1 || height < 1 || channels < 1) {
        throw ParseError(cat(path.string(), ": bad dimensions"));
    }
    auto patch = ImagePatch::make(width, height, channels);
    std::size_t index = 0;
    for (int y = 0; y < height; ++y) {
        if (!std::getline(in, line)) {
            throw ParseError(cat(path.string(), ": missing pixel row ", y));
        }
        std::istringstream row(line);
        std::string cell;
        for (int i = 0; i < width * channels; ++i) {
            if (!std::getline(row, cell, ',')) {
                throw ParseError(cat(path.string(), ": row ", y, " has too few values"));
            }
            patch.pixels[index++] = std::stod(cell);
        }
    }
    check_patch(patch, path.string().c_str());
    return patch;
}

}  // namespace

ImagePatch load_patch(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".pgm" || ext == ".ppm") return load_pnm(path);
    if (ext == ".csv") return load_patch_csv(path);
    throw InputError(cat("unsupported patch format '", ext, "' (expected .pgm/.ppm/.csv)"));
}

void save_patch(const ImagePatch& patch, const std::filesystem::path& path) {
    check_patch(patch, "save_patch");
    if (patch.channels != 1 && patch.channels != 3) {
        throw InputError(cat("save_patch: only 1 or 3 channels supported, got ", patch.channels));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(cat("cannot write patch file: ", path.string()));
    out << (patch.channels == 1 ? "P5" : "P6") << '\n'
        << patch.width << ' ' << patch.height << "\n255\n";
    for (double v : patch.pixels) {
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
    if (!out) throw InputError(cat("write failed: ", path.string()));
}

}  // namespace afcfit
