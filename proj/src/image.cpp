#include "advlab/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "advlab/errors.hpp"

namespace advlab {

namespace {
void check_dims(std::size_t c, std::size_t h, std::size_t w, std::size_t count) {
    if (c != 1 && c != 3) throw dimension_error("image channel count must be 1 or 3");
    if (h == 0 || w == 0) throw dimension_error("image dimensions must be positive");
    if (count != c * h * w) {
        std::ostringstream os;
        os << "image " << c << "x" << h << "x" << w << " needs " << c * h * w
           << " pixels, got " << count;
        throw dimension_error(os.str());
    }
}
}  // namespace

Image::Image(std::size_t h, std::size_t w, double fill) : Image(1, h, w, fill) {}

Image::Image(std::size_t h, std::size_t w, std::vector<double> values)
    : Image(1, h, w, std::move(values)) {}

Image::Image(std::size_t c, std::size_t h, std::size_t w, double fill)
    : channels(c), height(h), width(w), pixels(c * h * w, fill) {
    check_dims(c, h, w, pixels.size());
}

Image::Image(std::size_t c, std::size_t h, std::size_t w, std::vector<double> values)
    : channels(c), height(h), width(w), pixels(std::move(values)) {
    check_dims(c, h, w, pixels.size());
}

double bilinear_sample(const Image& img, double row, double col, std::size_t channel) {
    if (channel >= img.channels) throw index_error("bilinear_sample channel out of range");
    const double r = std::clamp(row, 0.0, static_cast<double>(img.height - 1));
    const double c = std::clamp(col, 0.0, static_cast<double>(img.width - 1));
    const std::size_t r0 = static_cast<std::size_t>(std::floor(r));
    const std::size_t c0 = static_cast<std::size_t>(std::floor(c));
    const std::size_t r1 = std::min(r0 + 1, img.height - 1);
    const std::size_t c1 = std::min(c0 + 1, img.width - 1);
    const double fr = r - static_cast<double>(r0);
    const double fc = c - static_cast<double>(c0);
    const double top = img.at(channel, r0, c0) * (1.0 - fc) + img.at(channel, r0, c1) * fc;
    const double bot = img.at(channel, r1, c0) * (1.0 - fc) + img.at(channel, r1, c1) * fc;
    return top * (1.0 - fr) + bot * fr;
}

Tensor to_tensor(const Image& img) {
    return Tensor({img.channels, img.height, img.width}, img.pixels);
}

Image from_tensor(const Tensor& t) {
    if (t.rank() != 3 || (t.shape[0] != 1 && t.shape[0] != 3)) {
        throw dimension_error("image tensors must be [C,H,W] with C in {1,3}, got " + t.shape_str());
    }
    return Image(t.shape[0], t.shape[1], t.shape[2], t.data);
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

void clip01_inplace(Image& img) {
    for (double& p : img.pixels) p = clip01(p);
}

void clip01_inplace(Tensor& t) {
    for (double& v : t.data) v = clip01(v);
}

}  // namespace advlab
