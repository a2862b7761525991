#include "osm/fresnel.hpp"

#include "osm/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

namespace osm {
namespace {

constexpr double kPi = std::numbers::pi;

struct FieldName {
    FresnelField field;
    std::string_view name;
};

constexpr FieldName kFieldNames[] = {
    {FresnelField::TxAngle, "tx"},          {FresnelField::RxAngle, "rx"},
    {FresnelField::Frequency, "freq"},      {FresnelField::TotalRe, "total_re"},
    {FresnelField::TotalIm, "total_im"},    {FresnelField::IncidentRe, "inc_re"},
    {FresnelField::IncidentIm, "inc_im"},   {FresnelField::Ignore, "skip"},
};

std::string_view field_name(FresnelField f) {
    for (const auto& n : kFieldNames) {
        if (n.field == f) return n.name;
    }
    return "?";
}

bool parse_number(std::string_view token, double& value) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

std::vector<double> distinct(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return close(a, b); }), v.end());
    return v;
}

}  // namespace

ColumnMap ColumnMap::parse(std::string_view spec) {
    ColumnMap map;
    map.columns.clear();
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', start), spec.size());
        std::string_view name = spec.substr(start, comma - start);
        while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
        while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
        const auto it = std::find_if(std::begin(kFieldNames), std::end(kFieldNames),
                                     [&](const FieldName& f) { return f.name == name; });
        if (it == std::end(kFieldNames)) {
            throw std::invalid_argument("unknown Fresnel column '" + std::string(name) + "'");
        }
        map.columns.push_back(it->field);
        start = comma + 1;
    }
    map.validate();
    return map;
}

std::string ColumnMap::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += field_name(columns[i]);
    }
    return out;
}

void ColumnMap::validate() const {
    for (const auto& n : kFieldNames) {
        if (n.field == FresnelField::Ignore) continue;
        const auto c = std::count(columns.begin(), columns.end(), n.field);
        if (c != 1) {
            throw std::invalid_argument("column map must name '" + std::string(n.name) + "' exactly once");
        }
    }
}

void FresnelSet::index() {
    std::vector<double> tx, rx, freq;
    for (const auto& r : records) {
        tx.push_back(r.tx_deg);
        rx.push_back(r.rx_deg);
        freq.push_back(r.freq_ghz);
    }
    tx_angles = distinct(std::move(tx));
    rx_angles = distinct(std::move(rx));
    frequencies = distinct(std::move(freq));

    std::set<std::tuple<double, double, double>> seen;
    for (const auto& r : records) seen.emplace(r.tx_deg, r.rx_deg, r.freq_ghz);
    const std::size_t full = tx_angles.size() * rx_angles.size() * frequencies.size();
    ragged = seen.size() != records.size() || records.size() != full;
}

FresnelSet parse_fresnel(std::istream& in, const FresnelParseOptions& options) {
    options.columns.validate();
    const std::size_t width = options.columns.columns.size();
    FresnelSet set;
    set.source = options.source;

    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto tokens = split(line);
        if (tokens.empty() || tokens.front().front() == '#') continue;
        double probe = 0.0;
        if (!parse_number(tokens.front(), probe)) continue;  // header row

        std::string problem;
        FresnelRecord rec;
        if (tokens.size() != width) {
            problem = "expected " + std::to_string(width) + " columns, found " + std::to_string(tokens.size());
        } else {
            double total_re = 0, total_im = 0, inc_re = 0, inc_im = 0;
            for (std::size_t c = 0; c < width && problem.empty(); ++c) {
                double v = 0.0;
                if (!parse_number(tokens[c], v) || !std::isfinite(v)) {
                    problem = "non-numeric field '" + std::string(tokens[c]) + "' in column " + std::to_string(c + 1);
                    break;
                }
                switch (options.columns.columns[c]) {
                    case FresnelField::TxAngle: rec.tx_deg = v; break;
                    case FresnelField::RxAngle: rec.rx_deg = v; break;
                    case FresnelField::Frequency: rec.freq_ghz = v; break;
                    case FresnelField::TotalRe: total_re = v; break;
                    case FresnelField::TotalIm: total_im = v; break;
                    case FresnelField::IncidentRe: inc_re = v; break;
                    case FresnelField::IncidentIm: inc_im = v; break;
                    case FresnelField::Ignore: break;
                }
            }
            rec.total = {total_re, total_im};
            rec.incident = {inc_re, inc_im};
            if (problem.empty() && !(rec.freq_ghz > 0.0)) problem = "frequency must be positive";
        }
        if (!problem.empty()) {
            set.diagnostics.push_back({number, problem});
            continue;
        }
        set.records.push_back(rec);
    }
    if (!set.diagnostics.empty() && !options.lenient) {
        const auto& d = set.diagnostics.front();
        throw ParseError((set.source.empty() ? std::string("input") : set.source) + ": line " +
                         std::to_string(d.line) + ": " + d.message);
    }
    if (set.records.empty()) throw ParseError("no Fresnel records found");
    set.index();
    return set;
}

FresnelSet parse_fresnel(std::string_view text, const FresnelParseOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_fresnel(in, options);
}

FresnelSet read_fresnel(const std::filesystem::path& path, FresnelParseOptions options) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    if (options.source.empty()) options.source = path.filename().string();
    return parse_fresnel(in, options);
}

std::string serialize_fresnel(const FresnelSet& set, const ColumnMap& columns) {
    columns.validate();
    std::string out = "# " + columns.to_string() + "\n";
    char buf[32];
    for (const auto& r : set.records) {
        for (std::size_t c = 0; c < columns.columns.size(); ++c) {
            double v = 0.0;
            switch (columns.columns[c]) {
                case FresnelField::TxAngle: v = r.tx_deg; break;
                case FresnelField::RxAngle: v = r.rx_deg; break;
                case FresnelField::Frequency: v = r.freq_ghz; break;
                case FresnelField::TotalRe: v = r.total.real(); break;
                case FresnelField::TotalIm: v = r.total.imag(); break;
                case FresnelField::IncidentRe: v = r.incident.real(); break;
                case FresnelField::IncidentIm: v = r.incident.imag(); break;
                case FresnelField::Ignore: v = 0.0; break;
            }
            std::snprintf(buf, sizeof buf, "%.9g", v);
            if (c) out += ' ';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

double fresnel_wave_number(double freq_ghz) {
    if (!(freq_ghz > 0.0)) throw std::invalid_argument("frequency must be positive");
    return 2.0 * kPi * freq_ghz * 1e9 / kSpeedOfLight * kFresnelUnit;
}

ScatteredArc to_scattered(const FresnelSet& set, double freq_ghz, double tx_deg) {
    std::vector<const FresnelRecord*> slice;
    for (const auto& r : set.records) {
        if (close(r.freq_ghz, freq_ghz) && close(r.tx_deg, tx_deg)) slice.push_back(&r);
    }
    if (slice.empty()) {
        std::ostringstream msg;
        msg << "no records at " << freq_ghz << " GHz for transmitter " << tx_deg << " deg";
        throw LookupError(msg.str());
    }
    std::sort(slice.begin(), slice.end(),
              [](const FresnelRecord* a, const FresnelRecord* b) { return a->rx_deg < b->rx_deg; });

    ScatteredArc arc;
    arc.k = fresnel_wave_number(freq_ghz);
    arc.theta = (tx_deg + 180.0) * kPi / 180.0;
    const double r = kFresnelRadius;
    const std::size_t m = slice.size();
    auto& c = arc.curve;
    c.descriptor = {CurveKind::Arc, r, static_cast<int>(m), slice.front()->rx_deg, slice.back()->rx_deg};
    for (std::size_t j = 0; j < m; ++j) {
        const double angle = slice[j]->rx_deg * kPi / 180.0;
        const Vec2 nu = unit_vector(angle);
        c.points.push_back(r * nu);
        c.normals.push_back(nu);
        arc.us.push_back(slice[j]->total - slice[j]->incident);
        // Rectangle rule: mean of the adjacent gaps, the single gap at an end.
        double gap = 0.0;
        if (m == 1) {
            gap = 2.0 * kPi;
        } else if (j == 0) {
            gap = slice[1]->rx_deg - slice[0]->rx_deg;
        } else if (j + 1 == m) {
            gap = slice[j]->rx_deg - slice[j - 1]->rx_deg;
        } else {
            gap = 0.5 * (slice[j + 1]->rx_deg - slice[j - 1]->rx_deg);
        }
        c.weights.push_back(m == 1 ? r * gap : r * gap * kPi / 180.0);
    }
    return arc;
}

FresnelImage image_fresnel(const FresnelSet& set, double freq_ghz, double tx_deg,
                           const SamplingGrid& grid, IndicatorParams params, int image_size) {
    const ScatteredArc arc = to_scattered(set, freq_ghz, tx_deg);
    params.normalize = true;
    FresnelImage out;
    out.result = indicator_farfield(arc.curve, arc.us, arc.k, grid, params);
    out.result.provenance.indicator = "farfield (derivative-free)";
    out.image = preliminary_image(out.result, image_size);
    return out;
}

FresnelSet synthetic_fresnel_set(const ContrastScene& scene, const SyntheticFresnelOptions& o) {
    if (!(o.rx_step_deg > 0.0) || o.rx_end_deg < o.rx_start_deg) {
        throw std::invalid_argument("synthetic_fresnel_set: bad receiver range");
    }
    const double k = fresnel_wave_number(o.freq_ghz);
    // The transmitter sits at tx_deg, so the wave travels the opposite way.
    const double theta = (o.tx_deg + 180.0) * kPi / 180.0;
    const Simulation sim = simulate(scene, k, theta, o.simulation);

    const int count = static_cast<int>(std::floor((o.rx_end_deg - o.rx_start_deg) / o.rx_step_deg + 1e-9)) + 1;
    std::vector<double> rx(count);
    std::vector<Vec2> points(count);
    for (int j = 0; j < count; ++j) {
        rx[j] = o.tx_deg + o.rx_start_deg + j * o.rx_step_deg;
        points[j] = kFresnelRadius * unit_vector(rx[j] * kPi / 180.0);
    }
    const auto us = scattered_at(sim.total, sim.grid, points);
    FresnelSet set;
    set.source = "synthetic";
    for (int j = 0; j < count; ++j) {
        const cplx inc = incident_plane_wave(k, theta, points[j]);
        set.records.push_back({o.tx_deg, rx[j], o.freq_ghz, inc + us[j], inc});
    }
    set.index();
    return set;
}

}  // namespace osm
