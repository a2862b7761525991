#pragma once

#include "osm/forward.hpp"
#include "osm/imaging.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace osm {

/// Speed of light used for the wave-number rescaling, m/s.
inline constexpr double kSpeedOfLight = 2.99792458e8;
/// Length unit of the rescaled geometry: 40 mm.
inline constexpr double kFresnelUnit = 0.04;
/// Receiver circle radius, 760 mm in rescaled units.
inline constexpr double kFresnelRadius = 0.76 / kFresnelUnit;

enum class FresnelField { TxAngle, RxAngle, Frequency, TotalRe, TotalIm, IncidentRe, IncidentIm, Ignore };

/// Column-to-field mapping of an .exp file. The default is
/// tx, rx, freq, total_re, total_im, inc_re, inc_im.
struct ColumnMap {
    std::vector<FresnelField> columns{FresnelField::TxAngle,   FresnelField::RxAngle,
                                      FresnelField::Frequency, FresnelField::TotalRe,
                                      FresnelField::TotalIm,   FresnelField::IncidentRe,
                                      FresnelField::IncidentIm};

    /// Comma-separated field names; "skip" ignores a column.
    static ColumnMap parse(std::string_view spec);
    std::string to_string() const;
    void validate() const;
};

struct FresnelRecord {
    double tx_deg = 0.0;
    double rx_deg = 0.0;
    double freq_ghz = 0.0;
    cplx total;
    cplx incident;

    friend bool operator==(const FresnelRecord&, const FresnelRecord&) = default;
};

struct ParseDiagnostic {
    int line = 0;
    std::string message;
};

struct FresnelSet {
    std::vector<FresnelRecord> records;
    std::vector<double> tx_angles;    // distinct, ascending
    std::vector<double> rx_angles;    // distinct, ascending
    std::vector<double> frequencies;  // distinct, ascending
    std::string source;
    bool ragged = false;  // records do not form a full tx x rx x freq grid
    std::vector<ParseDiagnostic> diagnostics;

    /// Recomputes the distinct value lists and the ragged flag.
    void index();
};

struct FresnelParseOptions {
    ColumnMap columns;
    bool lenient = false;
    std::string source;
};

/// Whitespace-separated numeric columns; '#' lines and lines whose first
/// token is not numeric are headers. Strict mode throws ParseError naming the
/// first malformed line; lenient mode skips and records it.
FresnelSet parse_fresnel(std::istream& in, const FresnelParseOptions& options = {});
FresnelSet parse_fresnel(std::string_view text, const FresnelParseOptions& options = {});
FresnelSet read_fresnel(const std::filesystem::path& path, FresnelParseOptions options = {});

/// Text form with 9 significant digits, readable by parse_fresnel.
std::string serialize_fresnel(const FresnelSet& set, const ColumnMap& columns = {});

/// (2 pi f / c) * 40 mm for f in GHz.
double fresnel_wave_number(double freq_ghz);

struct ScatteredArc {
    MeasurementCurve curve;
    std::vector<cplx> us;
    double k = 0.0;
    double theta = 0.0;  // provenance only
};

/// u_sc = total - incident per receiver of the (frequency, transmitter)
/// slice, placed on the circle of radius 19 at the receiver angles, with
/// rectangle-rule weights over the covered arc. Throws LookupError when the
/// slice is absent.
ScatteredArc to_scattered(const FresnelSet& set, double freq_ghz, double tx_deg);

struct FresnelImage {
    ImagingResult result;  // normalized, far-field variant
    PixelImage image;      // upsampled preliminary image
};

FresnelImage image_fresnel(const FresnelSet& set, double freq_ghz, double tx_deg,
                           const SamplingGrid& grid = {}, IndicatorParams params = {},
                           int image_size = 160);

struct SyntheticFresnelOptions {
    double freq_ghz = 8.0;
    double tx_deg = 0.0;
    double rx_start_deg = 60.0;  // relative to the transmitter
    double rx_end_deg = 300.0;
    double rx_step_deg = 5.0;
    SimulationOptions simulation;
};

/// Records of the laboratory geometry computed with the forward solver: the
/// transmitter at tx_deg sends a plane wave toward the origin and receivers
/// sit at tx + [rx_start, rx_end].
FresnelSet synthetic_fresnel_set(const ContrastScene& scene, const SyntheticFresnelOptions& options = {});

}  // namespace osm
