#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "random.hpp"

namespace vrprpd {

// ---------------------------------------------------------------------------
// TSPLIB ingestion
// ---------------------------------------------------------------------------

class TsplibError : public std::runtime_error {
public:
    enum class Kind { UnsupportedEdgeWeightType, MalformedSection, DimensionMismatch };

    TsplibError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Full symmetric travel-time matrix read from a TSPLIB file.
struct RawTsplib {
    std::string name;
    int dimension = 0;
    std::vector<double> weights;  // dimension * dimension, row-major

    double at(int i, int j) const { return weights[static_cast<std::size_t>(i) * dimension + j]; }
};

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string upper(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

// TSPLIB "nint": round half up on the truncated representation.
inline double nint(double x) { return static_cast<double>(static_cast<long long>(x + 0.5)); }

inline double geo_radians(double x) {
    constexpr double kPi = 3.141592;  // the TSPLIB definition truncates pi
    const double deg = static_cast<double>(static_cast<long long>(x));
    const double min = x - deg;
    return kPi * (deg + 5.0 * min / 3.0) / 180.0;
}

inline double coordinate_distance(const std::string& type, double xi, double yi, double xj, double yj) {
    if (type == "EUC_2D") {
        return nint(std::hypot(xi - xj, yi - yj));
    }
    if (type == "CEIL_2D") {
        return std::ceil(std::hypot(xi - xj, yi - yj));
    }
    if (type == "ATT") {
        const double xd = xi - xj, yd = yi - yj;
        const double r = std::sqrt((xd * xd + yd * yd) / 10.0);
        const double t = nint(r);
        return t < r ? t + 1.0 : t;
    }
    // GEO
    constexpr double kEarthRadius = 6378.388;
    const double lat_i = geo_radians(xi), lon_i = geo_radians(yi);
    const double lat_j = geo_radians(xj), lon_j = geo_radians(yj);
    const double q1 = std::cos(lon_i - lon_j);
    const double q2 = std::cos(lat_i - lat_j);
    const double q3 = std::cos(lat_i + lat_j);
    return static_cast<double>(static_cast<long long>(
        kEarthRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0));
}

}  // namespace detail

inline void validate_matrix(const RawTsplib& raw) {
    const auto dim = static_cast<std::size_t>(raw.dimension);
    if (raw.weights.size() != dim * dim) {
        throw TsplibError(TsplibError::Kind::DimensionMismatch, "matrix size does not match DIMENSION");
    }
    for (int i = 0; i < raw.dimension; ++i) {
        if (raw.at(i, i) != 0.0) {
            throw TsplibError(TsplibError::Kind::MalformedSection, "non-zero diagonal entry at node " + std::to_string(i + 1));
        }
        for (int j = 0; j < i; ++j) {
            const double a = raw.at(i, j), b = raw.at(j, i);
            if (a < 0.0 || b < 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
                throw TsplibError(TsplibError::Kind::MalformedSection, "negative or non-finite edge weight");
            }
            if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)})) {
                throw TsplibError(TsplibError::Kind::MalformedSection, "edge weights are not symmetric");
            }
        }
    }
}

/// Reads a TSPLIB95 symmetric instance.
///
/// Supported EDGE_WEIGHT_TYPEs: EXPLICIT (FULL_MATRIX, UPPER_ROW, LOWER_ROW,
/// UPPER_DIAG_ROW, LOWER_DIAG_ROW), EUC_2D, CEIL_2D, ATT and GEO. Node
/// coordinates are expanded into a full matrix with the TSPLIB rounding rule
/// of the declared type.
inline RawTsplib parse_tsplib(std::istream& in) {
    using Kind = TsplibError::Kind;
    RawTsplib raw;
    std::string edge_type, edge_format;
    std::vector<double> explicit_values;
    std::vector<std::pair<double, double>> coords;
    bool have_coords = false, have_weights = false;

    auto read_numbers = [&](std::size_t count, std::vector<double>& out, const char* section) {
        out.reserve(count);
        double v = 0.0;
        while (out.size() < count && (in >> v)) out.push_back(v);
        if (out.size() != count) {
            throw TsplibError(Kind::MalformedSection, std::string(section) + ": expected " + std::to_string(count) +
                                                          " numbers, found " + std::to_string(out.size()));
        }
    };

    std::string line;
    while (std::getline(in, line)) {
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        const auto colon = trimmed.find(':');
        std::string key = detail::upper(detail::trim(trimmed.substr(0, colon)));
        std::string value = colon == std::string::npos ? std::string{} : detail::trim(trimmed.substr(colon + 1));

        if (key == "EOF") break;
        if (key == "NAME") {
            raw.name = value;
        } else if (key == "DIMENSION") {
            int dim = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), dim);
            if (ec != std::errc{} || dim <= 0) throw TsplibError(Kind::MalformedSection, "bad DIMENSION: " + value);
            raw.dimension = dim;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            edge_type = detail::upper(value);
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            edge_format = detail::upper(value);
        } else if (key == "NODE_COORD_SECTION") {
            if (raw.dimension <= 0) throw TsplibError(Kind::MalformedSection, "NODE_COORD_SECTION before DIMENSION");
            coords.assign(static_cast<std::size_t>(raw.dimension), {0.0, 0.0});
            std::vector<bool> seen(static_cast<std::size_t>(raw.dimension), false);
            for (int k = 0; k < raw.dimension; ++k) {
                long long id = 0;
                double x = 0.0, y = 0.0;
                if (!(in >> id >> x >> y)) throw TsplibError(Kind::MalformedSection, "truncated NODE_COORD_SECTION");
                if (id < 1 || id > raw.dimension || seen[static_cast<std::size_t>(id - 1)]) {
                    throw TsplibError(Kind::DimensionMismatch, "node id out of range in NODE_COORD_SECTION");
                }
                seen[static_cast<std::size_t>(id - 1)] = true;
                coords[static_cast<std::size_t>(id - 1)] = {x, y};
            }
            have_coords = true;
        } else if (key == "EDGE_WEIGHT_SECTION") {
            if (raw.dimension <= 0) throw TsplibError(Kind::MalformedSection, "EDGE_WEIGHT_SECTION before DIMENSION");
            const auto n = static_cast<std::size_t>(raw.dimension);
            std::size_t count = 0;
            if (edge_format == "FULL_MATRIX") count = n * n;
            else if (edge_format == "UPPER_ROW" || edge_format == "LOWER_ROW") count = n * (n - 1) / 2;
            else if (edge_format == "UPPER_DIAG_ROW" || edge_format == "LOWER_DIAG_ROW") count = n * (n + 1) / 2;
            else throw TsplibError(Kind::UnsupportedEdgeWeightType, "unsupported EDGE_WEIGHT_FORMAT: " + edge_format);
            read_numbers(count, explicit_values, "EDGE_WEIGHT_SECTION");
            have_weights = true;
        } else if (key == "DISPLAY_DATA_SECTION") {
            // Display coordinates carry no distance information.
            for (int k = 0; k < raw.dimension; ++k) {
                double id, x, y;
                if (!(in >> id >> x >> y)) throw TsplibError(Kind::MalformedSection, "truncated DISPLAY_DATA_SECTION");
            }
        } else if (key == "TYPE" || key == "COMMENT" || key == "DISPLAY_DATA_TYPE" || key == "NODE_COORD_TYPE") {
            // informational
        } else {
            throw TsplibError(Kind::MalformedSection, "unexpected keyword: " + key);
        }
    }

    if (raw.dimension <= 0) throw TsplibError(Kind::MalformedSection, "missing DIMENSION");
    const auto n = static_cast<std::size_t>(raw.dimension);
    raw.weights.assign(n * n, 0.0);

    if (edge_type == "EXPLICIT") {
        if (!have_weights) throw TsplibError(Kind::MalformedSection, "missing EDGE_WEIGHT_SECTION");
        auto set = [&](std::size_t i, std::size_t j, double w) {
            raw.weights[i * n + j] = w;
            raw.weights[j * n + i] = w;
        };
        std::size_t idx = 0;
        if (edge_format == "FULL_MATRIX") {
            raw.weights = explicit_values;
        } else if (edge_format == "LOWER_DIAG_ROW") {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j <= i; ++j) set(i, j, explicit_values[idx++]);
        } else if (edge_format == "LOWER_ROW") {
            for (std::size_t i = 1; i < n; ++i)
                for (std::size_t j = 0; j < i; ++j) set(i, j, explicit_values[idx++]);
        } else if (edge_format == "UPPER_DIAG_ROW") {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) set(i, j, explicit_values[idx++]);
        } else {  // UPPER_ROW
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) set(i, j, explicit_values[idx++]);
        }
    } else if (edge_type == "EUC_2D" || edge_type == "CEIL_2D" || edge_type == "ATT" || edge_type == "GEO") {
        if (!have_coords) throw TsplibError(Kind::MalformedSection, "missing NODE_COORD_SECTION");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                raw.weights[i * n + j] = detail::coordinate_distance(edge_type, coords[i].first, coords[i].second,
                                                                     coords[j].first, coords[j].second);
            }
        }
    } else {
        throw TsplibError(Kind::UnsupportedEdgeWeightType, "unsupported EDGE_WEIGHT_TYPE: " + edge_type);
    }

    validate_matrix(raw);
    return raw;
}

inline RawTsplib parse_tsplib(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_tsplib(in);
}

inline RawTsplib load_tsplib(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open TSPLIB file: " + path);
    RawTsplib raw = parse_tsplib(in);
    if (raw.name.empty()) {
        auto slash = path.find_last_of("/\\");
        raw.name = path.substr(slash == std::string::npos ? 0 : slash + 1);
        if (auto dot = raw.name.rfind('.'); dot != std::string::npos) raw.name.resize(dot);
    }
    return raw;
}

inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Writes the matrix as an EXPLICIT FULL_MATRIX file using shortest
// round-trip number formatting.
inline std::string write_tsplib(const RawTsplib& raw) {
    std::ostringstream out;
    out << "NAME: " << raw.name << "\nTYPE: TSP\nDIMENSION: " << raw.dimension
        << "\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n";
    for (int i = 0; i < raw.dimension; ++i) {
        for (int j = 0; j < raw.dimension; ++j) out << (j ? " " : "") << format_number(raw.at(i, j));
        out << '\n';
    }
    out << "EOF\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

enum class VariantKind { Base, Double, Quintuple, Random10, Random20 };

inline std::string to_string(VariantKind k) {
    switch (k) {
        case VariantKind::Base: return "base";
        case VariantKind::Double: return "2x";
        case VariantKind::Quintuple: return "5x";
        case VariantKind::Random10: return "1r10";
        case VariantKind::Random20: return "1r20";
    }
    return "base";
}

inline VariantKind parse_variant_kind(std::string_view s) {
    const std::string u = detail::upper(std::string(s));
    if (u == "BASE") return VariantKind::Base;
    if (u == "2X") return VariantKind::Double;
    if (u == "5X") return VariantKind::Quintuple;
    if (u == "1R10") return VariantKind::Random10;
    if (u == "1R20") return VariantKind::Random20;
    throw std::invalid_argument("unknown variant kind: " + std::string(s));
}

inline bool is_stochastic(VariantKind k) { return k == VariantKind::Random10 || k == VariantKind::Random20; }

struct VariantSpec {
    VariantKind kind = VariantKind::Base;
    std::uint64_t seed = 0;
    int replicate = 0;  // only meaningful for the 1R10 / 1R20 kinds
};

struct FleetConfig {
    int m = 1;  // vehicles
    int k = 1;  // resources per vehicle
};

inline FleetConfig fleet_for(int n) {
    if (n < 1) throw std::invalid_argument("fleet_for: customer count must be positive");
    return n < 24 ? FleetConfig{3, 5} : FleetConfig{6, 4};
}

/// A VRP-RPD instance. Location 0 is the depot, customers are 1..n.
struct Instance {
    std::string label;
    int n = 0;
    FleetConfig fleet;
    std::vector<double> travel;      // (n+1)*(n+1), row-major
    std::vector<double> processing;  // n+1 entries, processing[0] == 0
    VariantSpec variant;

    int m() const { return fleet.m; }
    int k() const { return fleet.k; }
    int locations() const { return n + 1; }
    double d(int i, int j) const { return travel[static_cast<std::size_t>(i) * (n + 1) + j]; }
    double p(int c) const { return processing[static_cast<std::size_t>(c)]; }
};

inline void validate_instance(const Instance& inst) {
    if (inst.n < 1) throw std::invalid_argument("instance needs at least one customer");
    if (inst.fleet.m < 1 || inst.fleet.k < 1) throw std::invalid_argument("fleet needs m >= 1 and k >= 1");
    const auto loc = static_cast<std::size_t>(inst.n + 1);
    if (inst.travel.size() != loc * loc) throw std::invalid_argument("travel matrix has wrong size");
    if (inst.processing.size() != loc) throw std::invalid_argument("processing vector has wrong size");
    for (std::size_t c = 1; c < loc; ++c)
        if (!(inst.processing[c] >= 0.0)) throw std::invalid_argument("processing times must be non-negative");
    RawTsplib raw{inst.label, inst.n + 1, inst.travel};
    validate_matrix(raw);
}

/// Builds an instance from an explicit matrix (depot = row 0) and customer
/// processing times p_1..p_n.
inline Instance make_instance(std::vector<std::vector<double>> matrix, const std::vector<double>& processing,
                              FleetConfig fleet, std::string label = "custom") {
    Instance inst;
    inst.label = std::move(label);
    inst.n = static_cast<int>(matrix.size()) - 1;
    inst.fleet = fleet;
    for (auto& row : matrix) {
        if (row.size() != matrix.size()) throw std::invalid_argument("matrix must be square");
        inst.travel.insert(inst.travel.end(), row.begin(), row.end());
    }
    inst.processing.assign(1, 0.0);
    inst.processing.insert(inst.processing.end(), processing.begin(), processing.end());
    validate_instance(inst);
    return inst;
}

/// Base processing times drawn uniformly from [d_min, d_max] over the
/// off-diagonal weights. Integer weights give integer draws so that all
/// schedule arithmetic stays exact.
inline std::vector<double> draw_base_processing(const RawTsplib& raw, std::uint64_t seed) {
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    bool integral = true;
    for (int i = 0; i < raw.dimension; ++i) {
        for (int j = 0; j < raw.dimension; ++j) {
            if (i == j) continue;
            const double w = raw.at(i, j);
            dmin = std::min(dmin, w);
            dmax = std::max(dmax, w);
            integral = integral && w == std::floor(w);
        }
    }
    Rng rng(derive_seed(seed, 0x62617365ULL /* "base" */));
    std::vector<double> base(static_cast<std::size_t>(raw.dimension), 0.0);
    for (int c = 1; c < raw.dimension; ++c) {
        base[static_cast<std::size_t>(c)] =
            integral ? static_cast<double>(rng.uniform_int(static_cast<std::int64_t>(dmin), static_cast<std::int64_t>(dmax)))
                     : rng.uniform(dmin, dmax);
    }
    return base;
}

inline std::string variant_label(const std::string& name, const VariantSpec& v) {
    std::string label = name + "-" + to_string(v.kind) + "-s" + std::to_string(v.seed);
    if (is_stochastic(v.kind)) label += "-r" + std::to_string(v.replicate);
    return label;
}

/// Turns a TSPLIB matrix into a VRP-RPD instance for one processing-time
/// variant. Base draws depend only on the seed, so every kind built from the
/// same (raw, seed) shares them; the 1R multipliers come from a stream
/// derived from (seed, kind, replicate).
inline Instance build_instance(const RawTsplib& raw, const VariantSpec& variant) {
    if (raw.dimension < 2) throw std::invalid_argument("build_instance: dimension must be at least 2");
    Instance inst;
    inst.n = raw.dimension - 1;
    inst.travel = raw.weights;
    inst.fleet = fleet_for(inst.n);
    inst.variant = variant;
    inst.label = variant_label(raw.name, variant);
    inst.processing = draw_base_processing(raw, variant.seed);

    Rng mult_rng(derive_seed(variant.seed, static_cast<std::uint64_t>(variant.kind) + 1,
                             static_cast<std::uint64_t>(variant.replicate)));
    for (int c = 1; c <= inst.n; ++c) {
        double& p = inst.processing[static_cast<std::size_t>(c)];
        switch (variant.kind) {
            case VariantKind::Base: break;
            case VariantKind::Double: p *= 2.0; break;
            case VariantKind::Quintuple: p *= 5.0; break;
            case VariantKind::Random10: p *= static_cast<double>(mult_rng.uniform_int(1, 10)); break;
            case VariantKind::Random20: p *= static_cast<double>(mult_rng.uniform_int(1, 20)); break;
        }
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Instance documents (JSON)
// ---------------------------------------------------------------------------

inline nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json matrix = nlohmann::json::array();
    for (int i = 0; i <= inst.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j <= inst.n; ++j) row.push_back(inst.d(i, j));
        matrix.push_back(std::move(row));
    }
    std::vector<double> proc(inst.processing.begin() + 1, inst.processing.end());
    return {{"label", inst.label},
            {"n", inst.n},
            {"m", inst.m()},
            {"k", inst.k()},
            {"matrix", matrix},
            {"processing_times", proc},
            {"variant", to_string(inst.variant.kind)},
            {"seed", inst.variant.seed},
            {"replicate", inst.variant.replicate}};
}

inline Instance instance_from_json(const nlohmann::json& j) {
    auto matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
    auto proc = j.at("processing_times").get<std::vector<double>>();
    FleetConfig fleet{j.at("m").get<int>(), j.at("k").get<int>()};
    Instance inst = make_instance(std::move(matrix), proc, fleet, j.value("label", std::string("custom")));
    if (j.contains("n") && j.at("n").get<int>() != inst.n) throw std::invalid_argument("instance document: n mismatch");
    if (j.contains("variant")) inst.variant.kind = parse_variant_kind(j.at("variant").get<std::string>());
    inst.variant.seed = j.value("seed", std::uint64_t{0});
    inst.variant.replicate = j.value("replicate", 0);
    return inst;
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return instance_from_json(nlohmann::json::parse(in));
}

}  // namespace vrprpd
