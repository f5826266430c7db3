#include "qlr/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "qlr/io.hpp"

namespace qlr {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_{bytes} {}

    std::string token() {
        skip_space_and_comments();
        std::string out;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
               bytes_[pos_] != '#') {
            out.push_back(bytes_[pos_++]);
        }
        if (out.empty()) {
            throw ValidationError("ppm: truncated header");
        }
        return out;
    }

    long integer() {
        const std::string t = token();
        if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
            t.size() > 9) {
            throw ValidationError("ppm: expected a nonnegative integer, got '" + t + "'");
        }
        return std::stol(t);
    }

    // P6: exactly one whitespace byte separates maxval from the raster.
    void skip_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw ValidationError("ppm: missing whitespace before raster");
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

void ImageTensor::validate() const {
    if (width < 1 || height < 1) {
        throw ValidationError("image: width and height must be positive");
    }
    if (bit_depth != 8 && bit_depth != 16) {
        throw ValidationError("image: bit depth must be 8 or 16");
    }
    for (const RealMatrix* p : {&red, &green, &blue}) {
        if (p->rows() != height || p->cols() != width) {
            throw DimensionError("image: channel plane shape differs from height x width");
        }
        if (!p->allFinite() || p->minCoeff() < 0.0 || p->maxCoeff() > 1.0) {
            throw ValidationError("image: channel values must lie in [0, 1]");
        }
    }
}

ImageTensor parse_ppm(std::string_view bytes) {
    HeaderReader hdr(bytes);
    const std::string magic = hdr.token();
    if (magic != "P6" && magic != "P3") {
        throw ValidationError("ppm: unsupported magic '" + magic + "' (expected P6 or P3)");
    }
    const long width = hdr.integer();
    const long height = hdr.integer();
    const long maxval = hdr.integer();
    if (width < 1 || height < 1) {
        throw ValidationError("ppm: width and height must be positive");
    }
    if (maxval < 1 || maxval > 65535) {
        throw ValidationError("ppm: maxval must lie in [1, 65535]");
    }

    ImageTensor img;
    img.width = width;
    img.height = height;
    img.bit_depth = maxval > 255 ? 16 : 8;
    img.red.resize(height, width);
    img.green.resize(height, width);
    img.blue.resize(height, width);
    RealMatrix* planes[3] = {&img.red, &img.green, &img.blue};
    const double scale = 1.0 / static_cast<double>(maxval);

    auto store = [&](long idx, long value) {
        if (value > maxval) {
            throw ValidationError("ppm: sample exceeds maxval");
        }
        const long pixel = idx / 3;
        (*planes[idx % 3])(pixel / width, pixel % width) = static_cast<double>(value) * scale;
    };

    const long samples = 3 * width * height;
    if (magic == "P6") {
        hdr.skip_single_space();
        const std::size_t bps = maxval > 255 ? 2 : 1;
        std::size_t pos = hdr.pos();
        if (bytes.size() < pos + static_cast<std::size_t>(samples) * bps) {
            throw ValidationError("ppm: raster shorter than width * height * 3 samples");
        }
        for (long s = 0; s < samples; ++s) {
            long v = static_cast<unsigned char>(bytes[pos++]);
            if (bps == 2) {
                v = (v << 8) | static_cast<unsigned char>(bytes[pos++]);
            }
            store(s, v);
        }
    } else {
        for (long s = 0; s < samples; ++s) {
            store(s, hdr.integer());
        }
    }
    return img;
}

ImageTensor read_ppm(const std::string& path) {
    try {
        return parse_ppm(read_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string encode_ppm(const ImageTensor& img) {
    img.validate();
    const long maxval = img.bit_depth == 16 ? 65535 : 255;
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
                      std::to_string(maxval) + "\n";
    out.reserve(out.size() + static_cast<std::size_t>(img.width * img.height * 3 * (img.bit_depth / 8)));
    const RealMatrix* planes[3] = {&img.red, &img.green, &img.blue};
    for (Index r = 0; r < img.height; ++r) {
        for (Index c = 0; c < img.width; ++c) {
            for (const RealMatrix* p : planes) {
                const auto v = static_cast<long>(std::lround((*p)(r, c) * static_cast<double>(maxval)));
                if (img.bit_depth == 16) {
                    out.push_back(static_cast<char>((v >> 8) & 0xff));
                }
                out.push_back(static_cast<char>(v & 0xff));
            }
        }
    }
    return out;
}

void write_ppm(const ImageTensor& img, const std::string& path) { write_file_atomic(path, encode_ppm(img)); }

QuatMatrix image_to_quat(const ImageTensor& img) {
    img.validate();
    return QuatMatrix::pure(img.red, img.green, img.blue);
}

ImageTensor quat_to_image(const QuatMatrix& a, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw ValidationError("image: bit depth must be 8 or 16");
    }
    if (!(real_part(a).norm() < 1e-9)) {
        throw ValidationError("quat_to_image: matrix has a real part; apply pi2 first");
    }
    const double maxval = bit_depth == 16 ? 65535.0 : 255.0;
    auto quantize = [maxval](const RealMatrix& m) -> RealMatrix {
        return m.unaryExpr([maxval](double v) { return std::round(std::clamp(v, 0.0, 1.0) * maxval) / maxval; });
    };
    ImageTensor img;
    img.width = a.cols();
    img.height = a.rows();
    img.bit_depth = bit_depth;
    img.red = quantize(a.a1());
    img.green = quantize(a.a2());
    img.blue = quantize(a.a3());
    return img;
}

double psnr(const QuatMatrix& reference, const QuatMatrix& approx) {
    require_same_shape(reference, approx, "psnr");
    double sq = 0.0;
    for (int c = 1; c < 4; ++c) {
        sq += (reference.component(c) - approx.component(c)).squaredNorm();
    }
    const double mse = sq / static_cast<double>(3 * reference.rows() * reference.cols());
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return -10.0 * std::log10(mse);
}

}  // namespace qlr
