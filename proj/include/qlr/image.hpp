#pragma once

#include <string>
#include <string_view>

#include "qlr/quat_matrix.hpp"

namespace qlr {

/// RGB raster with channel values in [0, 1]. Planes are height x width.
struct ImageTensor {
    Index width = 0;
    Index height = 0;
    int bit_depth = 8;  ///< 8 or 16
    RealMatrix red;
    RealMatrix green;
    RealMatrix blue;

    void validate() const;
};

/// Reads binary P6 (8- or 16-bit, big-endian samples) or ASCII P3.
ImageTensor parse_ppm(std::string_view bytes);
ImageTensor read_ppm(const std::string& path);

/// Writes binary P6 with maxval 255 or 65535 according to bit_depth.
std::string encode_ppm(const ImageTensor& img);
void write_ppm(const ImageTensor& img, const std::string& path);

/// R -> A1, G -> A2, B -> A3, A0 = 0.
QuatMatrix image_to_quat(const ImageTensor& img);

/// Inverse of image_to_quat. The input must be pure (||Re A|| < 1e-9);
/// channel values are clamped to [0, 1] and quantized to bit_depth.
ImageTensor quat_to_image(const QuatMatrix& a, int bit_depth = 8);

/// Peak signal-to-noise ratio in dB over the three imaginary channels, peak 1.
double psnr(const QuatMatrix& reference, const QuatMatrix& approx);

}  // namespace qlr
