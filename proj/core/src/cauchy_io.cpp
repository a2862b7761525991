#include "osm/errors.hpp"
#include "osm/forward.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace osm {
namespace {

using nlohmann::json;

json descriptor_json(const CurveDescriptor& d) {
    json j = {{"kind", d.kind == CurveKind::Circle ? "circle" : "arc"},
              {"radius", d.radius},
              {"count", d.count}};
    if (d.kind == CurveKind::Arc) {
        j["start_deg"] = d.start_deg;
        j["end_deg"] = d.end_deg;
    }
    return j;
}

CurveDescriptor descriptor_from(const json& j) {
    CurveDescriptor d;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "circle") {
        d.kind = CurveKind::Circle;
    } else if (kind == "arc") {
        d.kind = CurveKind::Arc;
        d.start_deg = j.at("start_deg").get<double>();
        d.end_deg = j.at("end_deg").get<double>();
    } else {
        throw ParseError("unknown curve kind '" + kind + "'");
    }
    d.radius = j.at("radius").get<double>();
    d.count = j.at("count").get<int>();
    return d;
}

void put_f64(std::string& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

double get_f64(const std::string& in, std::size_t offset) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
    }
    return std::bit_cast<double>(bits);
}

std::filesystem::path with_ext(std::filesystem::path p, const char* ext) {
    if (p.extension() == ".json" || p.extension() == ".bin") p.replace_extension();
    p += ext;
    return p;
}

}  // namespace

std::string curve_descriptor_to_json(const CurveDescriptor& d) { return descriptor_json(d).dump(); }

CurveDescriptor curve_descriptor_from_json(std::string_view text) {
    try {
        return descriptor_from(json::parse(text));
    } catch (const json::exception& e) {
        throw ParseError(std::string("curve descriptor: ") + e.what());
    }
}

void write_cauchy_data(const std::filesystem::path& stem, const CauchyData& data) {
    data.validate();
    const auto header_path = with_ext(stem, ".json");
    const auto payload_path = with_ext(stem, ".bin");

    std::string payload;
    payload.reserve(32 * data.us.size());
    for (const auto* values : {&data.us, &data.dus}) {
        for (const cplx v : *values) {
            put_f64(payload, v.real());
            put_f64(payload, v.imag());
        }
    }
    const json header = {{"version", 1},
                         {"k", data.k},
                         {"theta", data.theta},
                         {"curve", descriptor_json(data.curve.descriptor)},
                         {"count", data.us.size()},
                         {"payload", payload_path.filename().string()}};

    std::ofstream bin(payload_path, std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write " + payload_path.string());
    bin.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    std::ofstream head(header_path);
    if (!head) throw std::runtime_error("cannot write " + header_path.string());
    head << header.dump(2) << '\n';
}

CauchyData read_cauchy_data(const std::filesystem::path& path) {
    const auto header_path = with_ext(path, ".json");
    std::ifstream head(header_path);
    if (!head) throw ParseError("cannot open " + header_path.string());

    json header;
    CauchyData data;
    std::size_t count = 0;
    std::filesystem::path payload_path;
    try {
        header = json::parse(head);
        if (header.at("version").get<int>() != 1) throw ParseError("unsupported Cauchy data version");
        data.k = header.at("k").get<double>();
        data.theta = header.at("theta").get<double>();
        data.curve = MeasurementCurve::from_descriptor(descriptor_from(header.at("curve")));
        count = header.at("count").get<std::size_t>();
        payload_path = header_path.parent_path() / header.at("payload").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("Cauchy header: ") + e.what());
    }
    if (count != data.curve.size()) throw ParseError("Cauchy header count disagrees with curve");

    std::ifstream bin(payload_path, std::ios::binary);
    if (!bin) throw ParseError("cannot open " + payload_path.string());
    const std::string payload((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
    if (payload.size() != 32 * count) throw ParseError("Cauchy payload has the wrong size");

    data.us.resize(count);
    data.dus.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        data.us[i] = {get_f64(payload, 16 * i), get_f64(payload, 16 * i + 8)};
        const std::size_t o = 16 * (count + i);
        data.dus[i] = {get_f64(payload, o), get_f64(payload, o + 8)};
    }
    return data;
}

}  // namespace osm
