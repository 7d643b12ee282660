#include "advlab/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "advlab/errors.hpp"
#include "advlab/rng.hpp"

namespace advlab {

using ordered_json = nlohmann::ordered_json;

namespace {

void check_keys(const ordered_json& obj, const std::set<std::string>& required,
                const std::set<std::string>& optional, const std::string& where) {
    if (!obj.is_object()) throw validation_error(where + " must be a JSON object");
    for (const auto& item : obj.items()) {
        if (!required.count(item.key()) && !optional.count(item.key())) {
            throw validation_error(where + ": unknown key '" + item.key() + "'");
        }
    }
    for (const std::string& key : required) {
        if (!obj.contains(key)) throw validation_error(where + ": missing key '" + key + "'");
    }
}

std::vector<double> doubles_from(const ordered_json& arr, const std::string& where) {
    if (!arr.is_array()) throw validation_error(where + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw validation_error(where + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::size_t size_from(const ordered_json& v, const std::string& where) {
    if (!v.is_number_unsigned()) throw validation_error(where + " must be a non-negative integer");
    return v.get<std::size_t>();
}

ordered_json parse_strict(const std::string& text, const std::string& what) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(what + ": " + e.what());
    }
}

}  // namespace

std::string model_to_text(const Model& m) {
    ordered_json doc;
    doc["version"] = 1;
    doc["name"] = m.name;
    doc["input_shape"] = m.input_shape;
    doc["num_classes"] = m.num_classes;
    ordered_json layers = ordered_json::array();
    for (const Layer& l : m.layers) {
        ordered_json lj;
        lj["type"] = to_string(l.kind);
        switch (l.kind) {
            case LayerKind::dense:
                lj["in"] = l.weights.shape[1];
                lj["out"] = l.weights.shape[0];
                lj["weights"] = l.weights.data;
                lj["bias"] = l.bias.data;
                break;
            case LayerKind::conv2d:
                lj["in"] = l.weights.shape[1];
                lj["out"] = l.weights.shape[0];
                lj["kh"] = l.weights.shape[2];
                lj["kw"] = l.weights.shape[3];
                lj["stride"] = l.stride;
                lj["pad"] = l.pad;
                lj["weights"] = l.weights.data;
                lj["bias"] = l.bias.data;
                break;
            case LayerKind::relu:
            case LayerKind::flatten:
                break;
        }
        layers.push_back(std::move(lj));
    }
    doc["layers"] = std::move(layers);
    return doc.dump();
}

Model model_from_text(const std::string& text) {
    ordered_json doc = parse_strict(text, "model file");
    check_keys(doc, {"version", "name", "input_shape", "num_classes", "layers"}, {}, "model file");
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != 1) {
        throw validation_error("model file: unsupported version");
    }
    if (!doc["name"].is_string()) throw validation_error("model file: name must be a string");

    Model m;
    m.name = doc["name"].get<std::string>();
    if (!doc["input_shape"].is_array() || doc["input_shape"].size() != 3) {
        throw validation_error("model file: input_shape must be [C,H,W]");
    }
    for (const auto& v : doc["input_shape"]) {
        m.input_shape.push_back(size_from(v, "model file: input_shape"));
    }
    m.num_classes = size_from(doc["num_classes"], "model file: num_classes");

    if (!doc["layers"].is_array()) throw validation_error("model file: layers must be an array");
    std::size_t index = 0;
    for (const auto& lj : doc["layers"]) {
        std::ostringstream where;
        where << "model file: layer " << index;
        check_keys(lj, {"type"}, {"in", "out", "kh", "kw", "stride", "pad", "weights", "bias"},
                   where.str());
        if (!lj["type"].is_string()) throw validation_error(where.str() + ": type must be a string");
        const LayerKind kind = layer_kind_from_string(lj["type"].get<std::string>());
        switch (kind) {
            case LayerKind::dense: {
                check_keys(lj, {"type", "in", "out", "weights", "bias"}, {}, where.str());
                const std::size_t in = size_from(lj["in"], where.str() + ": in");
                const std::size_t out = size_from(lj["out"], where.str() + ": out");
                std::vector<double> w = doubles_from(lj["weights"], where.str() + ": weights");
                std::vector<double> b = doubles_from(lj["bias"], where.str() + ": bias");
                if (in == 0 || out == 0) throw validation_error(where.str() + ": in/out must be positive");
                if (w.size() != in * out) {
                    std::ostringstream os;
                    os << where.str() << ": weights length " << w.size() << " != out*in " << out * in;
                    throw validation_error(os.str());
                }
                if (b.size() != out) {
                    std::ostringstream os;
                    os << where.str() << ": bias length " << b.size() << " != out units " << out;
                    throw validation_error(os.str());
                }
                m.layers.push_back(Layer::dense(Tensor({out, in}, std::move(w)),
                                                Tensor({out}, std::move(b))));
                break;
            }
            case LayerKind::conv2d: {
                check_keys(lj, {"type", "in", "out", "kh", "kw", "stride", "pad", "weights", "bias"},
                           {}, where.str());
                const std::size_t in = size_from(lj["in"], where.str() + ": in");
                const std::size_t out = size_from(lj["out"], where.str() + ": out");
                const std::size_t kh = size_from(lj["kh"], where.str() + ": kh");
                const std::size_t kw = size_from(lj["kw"], where.str() + ": kw");
                if (!lj["stride"].is_number_integer() || !lj["pad"].is_number_integer()) {
                    throw validation_error(where.str() + ": stride/pad must be integers");
                }
                std::vector<double> w = doubles_from(lj["weights"], where.str() + ": weights");
                std::vector<double> b = doubles_from(lj["bias"], where.str() + ": bias");
                if (in == 0 || out == 0 || kh == 0 || kw == 0) {
                    throw validation_error(where.str() + ": in/out/kh/kw must be positive");
                }
                if (w.size() != out * in * kh * kw) {
                    std::ostringstream os;
                    os << where.str() << ": weights length " << w.size() << " != out*in*kh*kw "
                       << out * in * kh * kw;
                    throw validation_error(os.str());
                }
                if (b.size() != out) {
                    std::ostringstream os;
                    os << where.str() << ": bias length " << b.size() << " != out channels " << out;
                    throw validation_error(os.str());
                }
                m.layers.push_back(Layer::conv(Tensor({out, in, kh, kw}, std::move(w)),
                                               Tensor({out}, std::move(b)),
                                               lj["stride"].get<int>(), lj["pad"].get<int>()));
                break;
            }
            case LayerKind::relu:
                check_keys(lj, {"type"}, {}, where.str());
                m.layers.push_back(Layer::relu());
                break;
            case LayerKind::flatten:
                check_keys(lj, {"type"}, {}, where.str());
                m.layers.push_back(Layer::flatten());
                break;
        }
        ++index;
    }
    validate(m);
    return m;
}

std::string dataset_to_text(const LabeledDataset& data) {
    if (data.images.size() != data.labels.size()) {
        throw value_error("dataset images and labels disagree in length");
    }
    ordered_json doc;
    doc["version"] = 1;
    doc["seed"] = data.seed;
    doc["class_names"] = data.class_names;
    ordered_json dims = ordered_json::array();
    ordered_json images = ordered_json::array();
    for (const Image& img : data.images) {
        dims.push_back(ordered_json::array({img.channels, img.height, img.width}));
        images.push_back(img.pixels);
    }
    doc["dims"] = std::move(dims);
    doc["images"] = std::move(images);
    doc["labels"] = data.labels;
    return doc.dump();
}

LabeledDataset dataset_from_text(const std::string& text) {
    ordered_json doc = parse_strict(text, "dataset file");
    check_keys(doc, {"version", "seed", "class_names", "dims", "images", "labels"}, {},
               "dataset file");
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != 1) {
        throw validation_error("dataset file: unsupported version");
    }
    LabeledDataset data;
    if (!doc["seed"].is_number_unsigned()) {
        throw validation_error("dataset file: seed must be a non-negative integer");
    }
    data.seed = doc["seed"].get<std::uint64_t>();
    if (!doc["class_names"].is_array()) {
        throw validation_error("dataset file: class_names must be an array");
    }
    for (const auto& v : doc["class_names"]) {
        if (!v.is_string()) throw validation_error("dataset file: class_names must hold strings");
        data.class_names.push_back(v.get<std::string>());
    }
    const auto& dims = doc["dims"];
    const auto& images = doc["images"];
    const auto& labels = doc["labels"];
    if (!dims.is_array() || !images.is_array() || !labels.is_array() ||
        dims.size() != images.size() || labels.size() != images.size()) {
        throw validation_error("dataset file: dims, images, and labels must be equal-length arrays");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        std::ostringstream where;
        where << "dataset file: image " << i;
        if (!dims[i].is_array() || dims[i].size() != 3) {
            throw validation_error(where.str() + ": dims entry must be [C,H,W]");
        }
        const std::size_t c = size_from(dims[i][0], where.str() + ": channels");
        const std::size_t h = size_from(dims[i][1], where.str() + ": height");
        const std::size_t w = size_from(dims[i][2], where.str() + ": width");
        std::vector<double> pixels = doubles_from(images[i], where.str());
        if (pixels.size() != c * h * w) {
            throw validation_error(where.str() + ": pixel count does not match dims");
        }
        try {
            data.images.emplace_back(c, h, w, std::move(pixels));
        } catch (const value_error& e) {
            throw validation_error(where.str() + ": " + e.what());
        }
        const std::size_t label = size_from(labels[i], where.str() + ": label");
        if (!data.class_names.empty() && label >= data.class_names.size()) {
            throw validation_error(where.str() + ": label out of range");
        }
        data.labels.push_back(label);
    }
    return data;
}

std::string image_to_text(const Image& img) {
    ordered_json doc;
    doc["version"] = 1;
    doc["channels"] = img.channels;
    doc["height"] = img.height;
    doc["width"] = img.width;
    doc["pixels"] = img.pixels;
    return doc.dump();
}

Image image_from_text(const std::string& text) {
    ordered_json doc = parse_strict(text, "image file");
    check_keys(doc, {"version", "channels", "height", "width", "pixels"}, {}, "image file");
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != 1) {
        throw validation_error("image file: unsupported version");
    }
    const std::size_t c = size_from(doc["channels"], "image file: channels");
    const std::size_t h = size_from(doc["height"], "image file: height");
    const std::size_t w = size_from(doc["width"], "image file: width");
    std::vector<double> pixels = doubles_from(doc["pixels"], "image file: pixels");
    if (pixels.size() != c * h * w) {
        throw validation_error("image file: pixel count does not match dims");
    }
    try {
        return Image(c, h, w, std::move(pixels));
    } catch (const value_error& e) {
        throw validation_error(std::string("image file: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw io_error("failed reading '" + path.string() + "'");
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw io_error("failed writing '" + path.string() + "'");
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
    return fnv1a64(read_text_file(path));
}

void save_model(const Model& m, const std::filesystem::path& path) {
    write_text_file(path, model_to_text(m) + "\n");
}

Model load_model(const std::filesystem::path& path) { return model_from_text(read_text_file(path)); }

void save_dataset(const LabeledDataset& data, const std::filesystem::path& path) {
    write_text_file(path, dataset_to_text(data) + "\n");
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    return dataset_from_text(read_text_file(path));
}

void save_image(const Image& img, const std::filesystem::path& path) {
    write_text_file(path, image_to_text(img) + "\n");
}

Image load_image(const std::filesystem::path& path) { return image_from_text(read_text_file(path)); }

}  // namespace advlab
