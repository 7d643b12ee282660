#include "advlab/transforms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "advlab/errors.hpp"

namespace advlab {

std::string to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::crop: return "crop";
        case TransformKind::magnify: return "magnify";
        case TransformKind::rotate: return "rotate";
        case TransformKind::brightness: return "brightness";
    }
    throw value_error("unknown transform kind");
}

TransformKind transform_kind_from_string(std::string_view name) {
    if (name == "crop") return TransformKind::crop;
    if (name == "magnify") return TransformKind::magnify;
    if (name == "rotate") return TransformKind::rotate;
    if (name == "brightness") return TransformKind::brightness;
    throw value_error("unknown transform kind '" + std::string(name) +
                      "' (expected crop, magnify, rotate, or brightness)");
}

double identity_magnitude(TransformKind kind) {
    switch (kind) {
        case TransformKind::crop: return 0.0;
        case TransformKind::magnify: return 1.0;
        case TransformKind::rotate: return 0.0;
        case TransformKind::brightness: return 1.0;
    }
    throw value_error("unknown transform kind");
}

std::vector<double> default_grid(TransformKind kind) {
    switch (kind) {
        case TransformKind::crop: return {0, 1, 2, 3, 4, 5, 6, 7, 8};
        case TransformKind::magnify: return {1.0, 1.1, 1.25, 1.5, 1.75, 2.0};
        case TransformKind::rotate: return {0.0, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0};
        case TransformKind::brightness: return {1.0, 1.1, 1.25, 1.5, 1.75, 2.0};
    }
    throw value_error("unknown transform kind");
}

namespace {

void check_magnitude(TransformKind kind, double m) {
    switch (kind) {
        case TransformKind::crop:
            if (m < 0.0 || std::floor(m) != m) {
                std::ostringstream os;
                os << "crop magnitude must be a non-negative integer, got " << m;
                throw validation_error(os.str());
            }
            return;
        case TransformKind::magnify:
            if (!(m >= 1.0)) {
                std::ostringstream os;
                os << "magnify factor must be >= 1, got " << m;
                throw validation_error(os.str());
            }
            return;
        case TransformKind::rotate:
            if (!std::isfinite(m)) throw validation_error("rotation degrees must be finite");
            return;
        case TransformKind::brightness:
            if (!(m > 0.0)) {
                std::ostringstream os;
                os << "brightness factor must be > 0, got " << m;
                throw validation_error(os.str());
            }
            return;
    }
    throw value_error("unknown transform kind");
}

}  // namespace

void validate(const TransformSpec& spec) {
    if (spec.grid.empty()) throw validation_error("transform grid must not be empty");
    if (spec.grid.front() != identity_magnitude(spec.kind)) {
        std::ostringstream os;
        os << to_string(spec.kind) << " grid must start at the identity magnitude "
           << identity_magnitude(spec.kind) << ", starts at " << spec.grid.front();
        throw validation_error(os.str());
    }
    for (double m : spec.grid) check_magnitude(spec.kind, m);
    for (std::size_t i = 1; i < spec.grid.size(); ++i) {
        if (!(std::fabs(spec.grid[i]) > std::fabs(spec.grid[i - 1]))) {
            std::ostringstream os;
            os << to_string(spec.kind) << " grid must be strictly increasing in |magnitude|: "
               << spec.grid[i - 1] << " then " << spec.grid[i];
            throw validation_error(os.str());
        }
    }
}

Image crop(const Image& img, int top, int bottom, int left, int right) {
    if (top < 0 || bottom < 0 || left < 0 || right < 0) {
        throw value_error("crop margins must be >= 0");
    }
    if (static_cast<std::size_t>(top) + static_cast<std::size_t>(bottom) >= img.height ||
        static_cast<std::size_t>(left) + static_cast<std::size_t>(right) >= img.width) {
        std::ostringstream os;
        os << "crop (top=" << top << ",bottom=" << bottom << ",left=" << left
           << ",right=" << right << ") exhausts a " << img.height << "x" << img.width << " image";
        throw value_error(os.str());
    }
    const std::size_t h = img.height - top - bottom;
    const std::size_t w = img.width - left - right;
    Image out(img.channels, h, w, 0.0);
    for (std::size_t c = 0; c < img.channels; ++c) {
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t col = 0; col < w; ++col) {
                out.at(c, r, col) = img.at(c, r + top, col + left);
            }
        }
    }
    return out;
}

Image crop_by(const Image& img, int k) {
    if (k < 0) throw value_error("crop_by needs k >= 0");
    std::size_t rows = img.height, cols = img.width;
    int top = 0, bottom = 0, left = 0, right = 0;
    for (int unit = 0; unit < k; ++unit) {
        const int side = unit % 4;  // bottom, right, top, left
        const bool removes_row = side == 0 || side == 2;
        if (removes_row ? rows <= 1 : cols <= 1) {
            std::ostringstream os;
            os << "crop_by k=" << k << " exhausts a " << img.height << "x" << img.width << " image";
            throw value_error(os.str());
        }
        switch (side) {
            case 0: ++bottom; --rows; break;
            case 1: ++right; --cols; break;
            case 2: ++top; --rows; break;
            default: ++left; --cols; break;
        }
    }
    if (k == 0) return img;
    return crop(img, top, bottom, left, right);
}

Image magnify(const Image& img, double factor) {
    if (!(factor >= 1.0)) {
        std::ostringstream os;
        os << "magnify factor must be >= 1, got " << factor;
        throw value_error(os.str());
    }
    if (factor == 1.0) return img;
    const double cy = static_cast<double>(img.height - 1) / 2.0;
    const double cx = static_cast<double>(img.width - 1) / 2.0;
    Image out(img.channels, img.height, img.width, 0.0);
    for (std::size_t c = 0; c < img.channels; ++c) {
        for (std::size_t i = 0; i < img.height; ++i) {
            const double sy = cy + (static_cast<double>(i) - cy) / factor;
            for (std::size_t j = 0; j < img.width; ++j) {
                const double sx = cx + (static_cast<double>(j) - cx) / factor;
                out.at(c, i, j) = bilinear_sample(img, sy, sx, c);
            }
        }
    }
    return out;
}

Image rotate(const Image& img, double degrees) {
    double d = std::fmod(degrees, 360.0);
    if (d < 0.0) d += 360.0;
    if (d == 0.0) return img;

    if (img.height == img.width && (d == 90.0 || d == 180.0 || d == 270.0)) {
        const std::size_t n = img.height;
        Image out(img.channels, n, n, 0.0);
        for (std::size_t c = 0; c < img.channels; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (d == 90.0) out.at(c, i, j) = img.at(c, n - 1 - j, i);
                    else if (d == 180.0) out.at(c, i, j) = img.at(c, n - 1 - i, n - 1 - j);
                    else out.at(c, i, j) = img.at(c, j, n - 1 - i);
                }
            }
        }
        return out;
    }

    const double theta = d * std::numbers::pi / 180.0;
    const double cs = std::cos(theta), sn = std::sin(theta);
    const double cy = static_cast<double>(img.height - 1) / 2.0;
    const double cx = static_cast<double>(img.width - 1) / 2.0;
    Image out(img.channels, img.height, img.width, 0.0);
    for (std::size_t c = 0; c < img.channels; ++c) {
        for (std::size_t i = 0; i < img.height; ++i) {
            const double dy = static_cast<double>(i) - cy;
            for (std::size_t j = 0; j < img.width; ++j) {
                const double dx = static_cast<double>(j) - cx;
                const double sy = cy + dy * cs - dx * sn;
                const double sx = cx + dy * sn + dx * cs;
                out.at(c, i, j) = bilinear_sample(img, sy, sx, c);
            }
        }
    }
    return out;
}

Image brightness(const Image& img, double factor) {
    if (!(factor > 0.0)) {
        std::ostringstream os;
        os << "brightness factor must be > 0, got " << factor;
        throw value_error(os.str());
    }
    Image out = img;
    for (double& p : out.pixels) p = std::min(1.0, factor * p);
    return out;
}

Image resize_to(const Image& img, std::size_t h, std::size_t w) {
    if (h == 0 || w == 0) throw value_error("resize_to needs positive target dims");
    if (h == img.height && w == img.width) return img;
    Image out(img.channels, h, w, 0.0);
    for (std::size_t c = 0; c < img.channels; ++c) {
        for (std::size_t i = 0; i < h; ++i) {
            const double sy = h == 1 ? static_cast<double>(img.height - 1) / 2.0
                                     : static_cast<double>(i) *
                                           static_cast<double>(img.height - 1) /
                                           static_cast<double>(h - 1);
            for (std::size_t j = 0; j < w; ++j) {
                const double sx = w == 1 ? static_cast<double>(img.width - 1) / 2.0
                                         : static_cast<double>(j) *
                                               static_cast<double>(img.width - 1) /
                                               static_cast<double>(w - 1);
                out.at(c, i, j) = bilinear_sample(img, sy, sx, c);
            }
        }
    }
    return out;
}

Image apply(TransformKind kind, double magnitude, const Image& img,
            std::optional<Dims> resize_hint) {
    switch (kind) {
        case TransformKind::crop: {
            if (magnitude < 0.0 || std::floor(magnitude) != magnitude) {
                std::ostringstream os;
                os << "crop magnitude must be a non-negative integer, got " << magnitude;
                throw value_error(os.str());
            }
            Image cropped = crop_by(img, static_cast<int>(magnitude));
            if (resize_hint) return resize_to(cropped, resize_hint->height, resize_hint->width);
            return cropped;
        }
        case TransformKind::magnify: return magnify(img, magnitude);
        case TransformKind::rotate: return rotate(img, magnitude);
        case TransformKind::brightness: return brightness(img, magnitude);
    }
    throw value_error("unknown transform kind");
}

}  // namespace advlab
