#include "yodet/netdef.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "yodet/errors.hpp"

namespace yodet {

const char* to_string(LayerKind k) {
    switch (k) {
    case LayerKind::Convolutional: return "convolutional";
    case LayerKind::Shortcut: return "shortcut";
    case LayerKind::Route: return "route";
    case LayerKind::Upsample: return "upsample";
    case LayerKind::Yolo: return "yolo";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ','))
        out.push_back(trim(item));
    return out;
}

int parse_int_value(const std::string& value, const std::string& context) {
    try {
        size_t pos = 0;
        int v = std::stoi(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw BuildError(context + ": expected integer, got '" + value + "'");
    }
}

double parse_double_value(const std::string& value, const std::string& context) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw BuildError(context + ": expected number, got '" + value + "'");
    }
}

} // namespace

int LayerSpec::get_int(const std::string& key) const {
    auto it = attributes.find(key);
    if (it == attributes.end())
        throw BuildError("missing mandatory attribute '" + key + "'", index);
    return parse_int_value(it->second, "layer " + std::to_string(index) + " '" + key + "'");
}

int LayerSpec::get_int(const std::string& key, int fallback) const {
    auto it = attributes.find(key);
    if (it == attributes.end())
        return fallback;
    return parse_int_value(it->second, "layer " + std::to_string(index) + " '" + key + "'");
}

double LayerSpec::get_double(const std::string& key, double fallback) const {
    auto it = attributes.find(key);
    if (it == attributes.end())
        return fallback;
    return parse_double_value(it->second, "layer " + std::to_string(index) + " '" + key + "'");
}

std::string LayerSpec::get_str(const std::string& key, const std::string& fallback) const {
    auto it = attributes.find(key);
    return it == attributes.end() ? fallback : it->second;
}

std::vector<int> LayerSpec::get_int_list(const std::string& key) const {
    auto it = attributes.find(key);
    if (it == attributes.end())
        throw BuildError("missing mandatory attribute '" + key + "'", index);
    std::vector<int> out;
    for (const auto& item : split_commas(it->second))
        out.push_back(parse_int_value(item, "layer " + std::to_string(index) + " '" + key + "'"));
    return out;
}

std::vector<double> LayerSpec::get_double_list(const std::string& key) const {
    auto it = attributes.find(key);
    if (it == attributes.end())
        throw BuildError("missing mandatory attribute '" + key + "'", index);
    std::vector<double> out;
    for (const auto& item : split_commas(it->second))
        out.push_back(
            parse_double_value(item, "layer " + std::to_string(index) + " '" + key + "'"));
    return out;
}

namespace {

std::optional<LayerKind> kind_from_name(const std::string& name) {
    if (name == "convolutional") return LayerKind::Convolutional;
    if (name == "shortcut") return LayerKind::Shortcut;
    if (name == "route") return LayerKind::Route;
    if (name == "upsample") return LayerKind::Upsample;
    if (name == "yolo") return LayerKind::Yolo;
    return std::nullopt;
}

void check_mandatory(const LayerSpec& layer) {
    static const std::map<LayerKind, std::vector<const char*>> required = {
        {LayerKind::Convolutional, {"filters", "size", "stride"}},
        {LayerKind::Shortcut, {"from"}},
        {LayerKind::Route, {"layers"}},
        {LayerKind::Upsample, {}},
        {LayerKind::Yolo, {"mask", "anchors", "classes"}},
    };
    for (const char* key : required.at(layer.kind)) {
        if (!layer.has(key))
            throw ParseError("layer " + std::to_string(layer.index) +
                             " [" + to_string(layer.kind) + "]: missing mandatory attribute '" +
                             key + "'");
    }
}

int normalize_ref(int value, int layer_index, const std::string& what) {
    int abs = value < 0 ? layer_index + value : value;
    if (abs < 0 || abs >= layer_index)
        throw ParseError("layer " + std::to_string(layer_index) + ": " + what + " " +
                         std::to_string(value) + " does not resolve to an earlier layer");
    return abs;
}

} // namespace

NetDef parse_netdef(std::istream& text) {
    NetDef def;

    struct Section {
        std::string name;
        int line = 0;
        std::map<std::string, std::string> attributes;
    };
    std::vector<Section> sections;

    std::string raw;
    int line_no = 0;
    while (std::getline(text, raw)) {
        ++line_no;
        std::string line = raw;
        if (size_t hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("malformed section header '" + raw + "'", line_no);
            sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, got '" + raw + "'", line_no);
        if (sections.empty())
            throw ParseError("attribute before any [section]", line_no);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("empty attribute key", line_no);
        sections.back().attributes[key] = value;
    }

    size_t first_layer = 0;
    if (!sections.empty() && (sections[0].name == "net" || sections[0].name == "network")) {
        const auto& net = sections[0].attributes;
        auto get = [&](const char* key, int fallback) {
            auto it = net.find(key);
            if (it == net.end())
                return fallback;
            return parse_int_value(it->second, std::string("[net] '") + key + "'");
        };
        def.channels = get("channels", 3);
        def.height = get("height", 416);
        def.width = get("width", 416);
        if (def.channels < 1 || def.height < 1 || def.width < 1)
            throw ParseError("[net] dimensions must be positive", sections[0].line);
        first_layer = 1;
    }

    for (size_t s = first_layer; s < sections.size(); ++s) {
        const Section& sec = sections[s];
        if (sec.name == "net" || sec.name == "network")
            throw ParseError("[net] section must come first", sec.line);
        auto kind = kind_from_name(sec.name);
        if (!kind)
            throw ParseError("unknown section kind '[" + sec.name + "]'", sec.line);

        LayerSpec layer;
        layer.kind = *kind;
        layer.index = static_cast<int>(s - first_layer);
        layer.attributes = sec.attributes;
        check_mandatory(layer);

        if (layer.kind == LayerKind::Shortcut)
            layer.from = normalize_ref(layer.get_int("from"), layer.index, "shortcut from");
        if (layer.kind == LayerKind::Route) {
            for (int v : layer.get_int_list("layers"))
                layer.route_layers.push_back(normalize_ref(v, layer.index, "route reference"));
            if (layer.route_layers.empty())
                throw ParseError("layer " + std::to_string(layer.index) +
                                 ": route needs at least one reference");
        }
        def.layers.push_back(std::move(layer));
    }
    return def;
}

NetDef parse_netdef_string(const std::string& text) {
    std::istringstream is(text);
    return parse_netdef(is);
}

NetDef parse_netdef_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open network definition file: " + path);
    return parse_netdef(is);
}

int kernel_size(int boxes_per_cell, int class_count) {
    if (boxes_per_cell < 1 || class_count < 1)
        throw BuildError("kernel_size needs boxes_per_cell >= 1 and class_count >= 1");
    return boxes_per_cell * (5 + class_count);
}

namespace {

struct ConvShape {
    int filters, size, stride, padding, batch_normalize;
};

ConvShape conv_shape_attrs(const LayerSpec& spec) {
    ConvShape cs{};
    cs.filters = spec.get_int("filters");
    cs.size = spec.get_int("size");
    cs.stride = spec.get_int("stride");
    // Darknet convention: `pad` is a flag selecting size/2 padding,
    // `padding` is the explicit pixel count.
    cs.padding = spec.get_int("pad", 0) != 0 ? cs.size / 2 : spec.get_int("padding", 0);
    cs.batch_normalize = spec.get_int("batch_normalize", 0);
    if (cs.filters < 1 || cs.size < 1 || cs.stride < 1)
        throw BuildError("convolutional filters/size/stride must be positive", spec.index);
    return cs;
}

void check_activation(const LayerSpec& spec) {
    std::string act = spec.get_str("activation", "linear");
    if (act != "linear" && act != "leaky")
        throw BuildError("unsupported activation '" + act + "'", spec.index);
}

YoloSpec yolo_attrs(const LayerSpec& spec) {
    YoloSpec ys;
    ys.mask = spec.get_int_list("mask");
    ys.classes = spec.get_int("classes");
    std::vector<double> flat = spec.get_double_list("anchors");
    if (flat.size() % 2 != 0)
        throw BuildError("anchors list must have an even number of values", spec.index);
    int num = spec.get_int("num", static_cast<int>(flat.size() / 2));
    if (num < 1 || static_cast<size_t>(num) * 2 != flat.size())
        throw BuildError("num=" + std::to_string(num) + " does not match " +
                             std::to_string(flat.size() / 2) + " anchor pairs",
                         spec.index);
    for (size_t i = 0; i < flat.size(); i += 2) {
        if (flat[i] <= 0.0 || flat[i + 1] <= 0.0)
            throw BuildError("anchor dimensions must be positive", spec.index);
        ys.anchors.push_back({flat[i], flat[i + 1]});
    }
    if (ys.mask.empty())
        throw BuildError("yolo mask must name at least one anchor slot", spec.index);
    for (int m : ys.mask) {
        if (m < 0 || m >= num)
            throw BuildError("mask index " + std::to_string(m) + " outside [0," +
                                 std::to_string(num) + ")",
                             spec.index);
    }
    if (ys.classes < 1)
        throw BuildError("classes must be >= 1", spec.index);
    return ys;
}

} // namespace

std::vector<std::array<int, 3>> infer_shapes(const NetDef& def) {
    std::vector<std::array<int, 3>> shapes;
    shapes.reserve(def.layers.size());
    auto shape_of = [&](int idx) -> const std::array<int, 3>& { return shapes[idx]; };

    std::array<int, 3> prev{def.channels, def.height, def.width};
    for (const LayerSpec& spec : def.layers) {
        std::array<int, 3> out{};
        switch (spec.kind) {
        case LayerKind::Convolutional: {
            ConvShape cs = conv_shape_attrs(spec);
            check_activation(spec);
            try {
                out = {cs.filters, conv_out_extent(prev[1], cs.size, cs.padding, cs.stride),
                       conv_out_extent(prev[2], cs.size, cs.padding, cs.stride)};
            } catch (const ShapeError& e) {
                throw BuildError(e.what(), spec.index);
            }
            break;
        }
        case LayerKind::Upsample: {
            if (int stride = spec.get_int("stride", 2); stride != 2)
                throw BuildError("only stride-2 upsampling is supported, got stride=" +
                                     std::to_string(stride),
                                 spec.index);
            out = {prev[0], prev[1] * 2, prev[2] * 2};
            break;
        }
        case LayerKind::Shortcut: {
            check_activation(spec);
            const auto& from = shape_of(spec.from);
            if (from != prev)
                throw BuildError("shortcut shape mismatch: from layer " +
                                     std::to_string(spec.from) + " is (" +
                                     std::to_string(from[0]) + "x" + std::to_string(from[1]) +
                                     "x" + std::to_string(from[2]) + "), previous is (" +
                                     std::to_string(prev[0]) + "x" + std::to_string(prev[1]) +
                                     "x" + std::to_string(prev[2]) + ")",
                                 spec.index);
            out = prev;
            break;
        }
        case LayerKind::Route: {
            const auto& first = shape_of(spec.route_layers[0]);
            int total_c = 0;
            for (int ref : spec.route_layers) {
                const auto& s = shape_of(ref);
                if (s[1] != first[1] || s[2] != first[2])
                    throw BuildError("route spatial mismatch between layers " +
                                         std::to_string(spec.route_layers[0]) + " and " +
                                         std::to_string(ref),
                                     spec.index);
                total_c += s[0];
            }
            out = {total_c, first[1], first[2]};
            break;
        }
        case LayerKind::Yolo: {
            if (spec.index == 0)
                throw BuildError("yolo layer cannot be first", spec.index);
            YoloSpec ys = yolo_attrs(spec);
            int want = kernel_size(static_cast<int>(ys.mask.size()), ys.classes);
            if (prev[0] != want)
                throw BuildError("yolo head expects " + std::to_string(want) +
                                     " input channels (B*(5+C) with B=" +
                                     std::to_string(ys.mask.size()) + ", C=" +
                                     std::to_string(ys.classes) + "), preceding layer has " +
                                     std::to_string(prev[0]),
                                 spec.index);
            out = prev;
            break;
        }
        }
        shapes.push_back(out);
        prev = out;
    }
    return shapes;
}

int64_t layer_weight_floats(const NetDef& def, int layer_index) {
    const LayerSpec& spec = def.layers[static_cast<size_t>(layer_index)];
    if (spec.kind != LayerKind::Convolutional)
        return 0;
    // In-channel count requires the shapes of everything before this layer.
    std::vector<std::array<int, 3>> shapes = infer_shapes(def);
    int in_c = layer_index == 0 ? def.channels : shapes[static_cast<size_t>(layer_index) - 1][0];
    ConvShape cs = conv_shape_attrs(spec);
    int64_t per_filter = static_cast<int64_t>(in_c) * cs.size * cs.size;
    return (cs.batch_normalize ? 4LL : 1LL) * cs.filters + cs.filters * per_filter;
}

int64_t expected_weight_floats(const NetDef& def) {
    std::vector<std::array<int, 3>> shapes = infer_shapes(def);
    int64_t total = 0;
    std::array<int, 3> prev{def.channels, def.height, def.width};
    for (size_t i = 0; i < def.layers.size(); ++i) {
        const LayerSpec& spec = def.layers[i];
        if (spec.kind == LayerKind::Convolutional) {
            ConvShape cs = conv_shape_attrs(spec);
            int64_t per_filter = static_cast<int64_t>(prev[0]) * cs.size * cs.size;
            total += (cs.batch_normalize ? 4LL : 1LL) * cs.filters + cs.filters * per_filter;
        }
        prev = shapes[i];
    }
    return total;
}

namespace {

class FloatReader {
public:
    FloatReader(const std::vector<uint8_t>& bytes, size_t offset)
        : bytes_(bytes), pos_(offset) {}

    uint32_t read_u32() {
        require(4);
        uint32_t v = static_cast<uint32_t>(bytes_[pos_]) |
                     static_cast<uint32_t>(bytes_[pos_ + 1]) << 8 |
                     static_cast<uint32_t>(bytes_[pos_ + 2]) << 16 |
                     static_cast<uint32_t>(bytes_[pos_ + 3]) << 24;
        pos_ += 4;
        return v;
    }

    uint64_t read_u64() {
        uint64_t lo = read_u32();
        uint64_t hi = read_u32();
        return lo | hi << 32;
    }

    void read_floats(float* dst, size_t count) {
        for (size_t i = 0; i < count; ++i)
            dst[i] = std::bit_cast<float>(read_u32());
    }

    void read_floats(std::vector<float>& dst, size_t count) {
        dst.resize(count);
        read_floats(dst.data(), count);
    }

    size_t pos() const { return pos_; }
    size_t remaining() const { return bytes_.size() - pos_; }

private:
    void require(size_t n) {
        if (pos_ + n > bytes_.size())
            throw WeightsError("weights stream ended prematurely");
    }

    const std::vector<uint8_t>& bytes_;
    size_t pos_;
};

} // namespace

NetworkGraph load_weights(const std::vector<uint8_t>& bytes, const NetDef& def) {
    std::vector<std::array<int, 3>> shapes = infer_shapes(def);

    if (bytes.size() < 12)
        throw WeightsError("weights file shorter than the 12-byte version header");

    FloatReader reader(bytes, 0);
    WeightsHeader header;
    header.major = static_cast<int32_t>(reader.read_u32());
    header.minor = static_cast<int32_t>(reader.read_u32());
    header.revision = static_cast<int32_t>(reader.read_u32());
    if (header.major < 0 || header.major > 2 || header.minor < 0)
        throw WeightsError("unsupported weights header version " + std::to_string(header.major) +
                           "." + std::to_string(header.minor));
    if (header.major * 10 + header.minor >= 2) {
        if (reader.remaining() < 8)
            throw WeightsError("weights file truncated inside the images_seen field");
        header.images_seen = reader.read_u64();
    } else {
        if (reader.remaining() < 4)
            throw WeightsError("weights file truncated inside the images_seen field");
        header.images_seen = reader.read_u32();
    }

    const int64_t expected = expected_weight_floats(def);
    const size_t payload_bytes = bytes.size() - reader.pos();
    const int64_t available = static_cast<int64_t>(payload_bytes / 4);
    if (payload_bytes % 4 != 0 || available < expected)
        throw WeightsError("weights payload too short: definition needs " +
                               std::to_string(expected) + " floats, file provides " +
                               std::to_string(available),
                           expected, available);
    if (available > expected)
        throw WeightsError("trailing data after weights: definition needs " +
                               std::to_string(expected) + " floats, file provides " +
                               std::to_string(available),
                           expected, available);

    NetworkGraph graph;
    graph.in_channels = def.channels;
    graph.in_height = def.height;
    graph.in_width = def.width;
    graph.header = header;
    graph.weights_digest = fnv1a64(bytes.data(), bytes.size());

    std::array<int, 3> prev{def.channels, def.height, def.width};
    for (size_t i = 0; i < def.layers.size(); ++i) {
        const LayerSpec& spec = def.layers[i];
        GraphLayer layer;
        layer.spec = spec;
        layer.out_shape = shapes[i];

        if (spec.kind == LayerKind::Convolutional) {
            ConvShape cs = conv_shape_attrs(spec);
            ConvParams params;
            params.stride = cs.stride;
            params.pad = cs.padding;
            const int n = cs.filters;
            if (cs.batch_normalize) {
                BatchNorm bn;
                reader.read_floats(bn.beta, n);
                reader.read_floats(bn.gamma, n);
                reader.read_floats(bn.rolling_mean, n);
                reader.read_floats(bn.rolling_var, n);
                for (float v : bn.rolling_var) {
                    if (v < 0.0f)
                        throw WeightsError("layer " + std::to_string(spec.index) +
                                           ": negative rolling variance in weights file");
                }
                params.batchnorm = std::move(bn);
                params.bias.assign(static_cast<size_t>(n), 0.0f);
            } else {
                reader.read_floats(params.bias, n);
            }
            std::vector<float> w;
            reader.read_floats(w, static_cast<size_t>(n) * prev[0] * cs.size * cs.size);
            params.weights = Tensor({n, prev[0], cs.size, cs.size}, std::move(w));
            layer.conv = std::move(params);
        } else if (spec.kind == LayerKind::Yolo) {
            layer.yolo = yolo_attrs(spec);
            graph.yolo_heads.push_back(spec.index);
        }

        prev = shapes[i];
        graph.layers.push_back(std::move(layer));
    }
    return graph;
}

NetworkGraph load_weights_file(const std::string& path, const NetDef& def) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open weights file: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                               std::istreambuf_iterator<char>());
    return load_weights(bytes, def);
}

NetworkGraph fold_batchnorm(const NetworkGraph& graph) {
    NetworkGraph folded = graph;
    for (GraphLayer& layer : folded.layers) {
        if (layer.conv && layer.conv->batchnorm)
            layer.conv = yodet::fold_batchnorm(*layer.conv);
    }
    return folded;
}

uint64_t fnv1a64(const uint8_t* data, size_t len) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace yodet
