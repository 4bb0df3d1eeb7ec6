#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itac/analysis.hpp"
#include "itac/desirability.hpp"
#include "itac/error.hpp"
#include "itac/mixture_space.hpp"
#include "itac/optics.hpp"
#include "itac/provenance.hpp"
#include "itac/resm.hpp"

namespace itac::io {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Numbers and files

/// Decimal text with 17 significant digits; parses back to the identical double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

/// Shortest decimal text that parses back to the identical double.
inline std::string format_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<double> try_parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline double parse_double(std::string_view s, const std::string& where) {
    auto v = try_parse_double(s);
    if (!v) throw Error(ErrorCode::ParseError, where + ": expected a number, got '" + std::string(s) + "'", where);
    return *v;
}

inline int parse_int(std::string_view s, const std::string& where) {
    s = trim(s);
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::ParseError, where + ": expected an integer, got '" + std::string(s) + "'", where);
    }
    return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'", path.string());
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'", path.string());
}

// ---------------------------------------------------------------------------
// key = value records

/**
 * @brief Ordered `key = value` record with a `# itac <kind>` first line.
 *
 * Lines starting with '#' are comments; keys are unique.
 */
struct Record {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> fields;

    void set(const std::string& key, const std::string& value) {
        if (value.find('\n') != std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "record values must be single-line", key);
        }
        for (auto& [k, v] : fields) {
            if (k == key) {
                v = value;
                return;
            }
        }
        fields.emplace_back(key, value);
    }

    [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
        for (const auto& [k, v] : fields) {
            if (k == key) return v;
        }
        return std::nullopt;
    }

    [[nodiscard]] std::string require(const std::string& key, const std::string& source) const {
        auto v = get(key);
        if (!v) throw Error(ErrorCode::ParseError, source + ": missing field '" + key + "'", key);
        return *v;
    }

    [[nodiscard]] double number(const std::string& key, const std::string& source) const {
        return parse_double(require(key, source), source + ": field '" + key + "'");
    }

    [[nodiscard]] std::string serialize() const {
        std::string out = "# itac " + kind + "\n";
        for (const auto& [k, v] : fields) out += k + " = " + v + "\n";
        return out;
    }

    static Record parse(std::string_view text, const std::string& source) {
        Record r;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto nl = text.find('\n', pos);
            const auto line = trim(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
            ++line_no;
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            if (line.empty()) continue;
            if (line.front() == '#') {
                // "# itac <kind>"; the provenance line "# itac <version>" starts with a digit
                if (r.kind.empty() && line.starts_with("# itac ") && line.size() > 7 &&
                    !std::isdigit(static_cast<unsigned char>(line[7]))) {
                    r.kind = std::string(trim(line.substr(7)));
                }
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw Error(ErrorCode::ParseError,
                            source + ":" + std::to_string(line_no) + ": expected 'key = value'", source);
            }
            const std::string key(trim(line.substr(0, eq)));
            if (r.get(key)) {
                throw Error(ErrorCode::ParseError,
                            source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'", key);
            }
            r.fields.emplace_back(key, std::string(trim(line.substr(eq + 1))));
        }
        return r;
    }
};

// ---------------------------------------------------------------------------
// CSV

/// Comma-separated table; '#' lines are collected as comments, the first other line is the header.
struct CsvTable {
    std::string source;
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    static CsvTable parse(std::string_view text, const std::string& source) {
        CsvTable t;
        t.source = source;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos < text.size()) {
            const auto nl = text.find('\n', pos);
            const auto raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() : nl + 1;
            ++line_no;
            const auto line = trim(raw);
            if (line.empty()) continue;
            if (line.front() == '#') {
                t.comments.emplace_back(trim(line.substr(1)));
                continue;
            }
            auto cells = split(line, ',');
            if (t.header.empty()) {
                t.header = std::move(cells);
                continue;
            }
            if (cells.size() != t.header.size()) {
                throw Error(ErrorCode::ParseError,
                            source + ":" + std::to_string(line_no) + ": expected " +
                                std::to_string(t.header.size()) + " columns, found " + std::to_string(cells.size()),
                            source);
            }
            t.rows.push_back(std::move(cells));
            t.line_numbers.push_back(line_no);
        }
        if (t.header.empty()) throw Error(ErrorCode::ParseError, source + ": missing header row", source);
        return t;
    }

    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    }

    [[nodiscard]] std::size_t require_column(std::string_view name) const {
        auto c = column(name);
        if (!c) throw Error(ErrorCode::ParseError, source + ": missing column '" + std::string(name) + "'",
                            std::string(name));
        return *c;
    }

    [[nodiscard]] std::string where(std::size_t row, std::size_t col) const {
        return source + ":" + std::to_string(line_numbers[row]) + ":" + std::to_string(col + 1);
    }

    [[nodiscard]] const std::string& cell(std::size_t row, std::size_t col) const { return rows[row][col]; }

    [[nodiscard]] double number(std::size_t row, std::size_t col) const {
        return parse_double(rows[row][col], where(row, col));
    }

    [[nodiscard]] int integer(std::size_t row, std::size_t col) const { return parse_int(rows[row][col], where(row, col)); }

    /// Value of a `# key = value` comment line, if present.
    [[nodiscard]] std::optional<std::string> meta(std::string_view key) const {
        for (const auto& c : comments) {
            const auto eq = c.find('=');
            if (eq == std::string::npos) continue;
            if (trim(std::string_view(c).substr(0, eq)) == key) return std::string(trim(std::string_view(c).substr(eq + 1)));
        }
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Models

inline std::string serialize_model(const ScheffeModel& m) {
    m.check();
    Record r;
    r.kind = "model";
    r.set("property", m.property_name);
    r.set("units", m.units);
    r.set("terms", m.terms.str());
    const auto act = m.terms.active();
    for (std::size_t i = 0; i < act.size(); ++i) {
        r.set("coef." + std::string(term_name(act[i])), format_double(m.coefficients[i]));
    }
    if (m.fit_stats) {
        const auto& f = *m.fit_stats;
        r.set("fit.n", std::to_string(f.n));
        r.set("fit.k", std::to_string(f.k));
        r.set("fit.sse", format_double(f.sse));
        r.set("fit.rmse", format_double(f.rmse));
        r.set("fit.r2", format_double(f.r2));
        r.set("fit.adj_r2", format_double(f.adj_r2));
        r.set("fit.aic", format_double(f.aic));
        r.set("fit.bic", format_double(f.bic));
    }
    if (!m.source_dataset.empty()) r.set("dataset", m.source_dataset);
    r.set("provenance", m.provenance);
    return r.serialize();
}

inline ScheffeModel parse_model(std::string_view text, const std::string& source) {
    const Record r = Record::parse(text, source);
    if (r.kind != "model") throw Error(ErrorCode::ParseError, source + ": not a model record", source);
    ScheffeModel m;
    m.property_name = r.require("property", source);
    m.units = r.require("units", source);
    for (const auto& name : split_ws(r.require("terms", source))) {
        auto t = parse_term(name);
        if (!t) throw Error(ErrorCode::ParseError, source + ": unknown term '" + name + "'", name);
        m.terms.set(*t, true);
    }
    m.terms.check();
    for (Term t : m.terms.active()) m.coefficients.push_back(r.number("coef." + std::string(term_name(t)), source));
    if (r.get("fit.n")) {
        FitReport f;
        f.n = parse_int(r.require("fit.n", source), source + ": fit.n");
        f.k = parse_int(r.require("fit.k", source), source + ": fit.k");
        f.sse = r.number("fit.sse", source);
        f.rmse = r.number("fit.rmse", source);
        f.r2 = r.number("fit.r2", source);
        f.adj_r2 = r.number("fit.adj_r2", source);
        f.aic = r.number("fit.aic", source);
        f.bic = r.number("fit.bic", source);
        m.fit_stats = f;
    }
    m.source_dataset = r.get("dataset").value_or("");
    m.provenance = r.get("provenance").value_or("");
    return m;
}

// ---------------------------------------------------------------------------
// Datasets

inline std::string serialize_dataset(const PropertyDataset& d) {
    std::string out = "# itac dataset\n# property = " + d.property_name + "\n# units = " + d.units + "\n";
    out += "label,x1,x2,x3,value\n";
    for (const auto& row : d.rows) {
        out += row.label + "," + std::to_string(row.composition[0]) + "," + std::to_string(row.composition[1]) + "," +
               std::to_string(row.composition[2]) + "," + format_shortest(row.value) + "\n";
    }
    return out;
}

inline PropertyDataset parse_dataset(std::string_view text, const std::string& source,
                                     const ComponentBounds& bounds = {}) {
    const CsvTable t = CsvTable::parse(text, source);
    PropertyDataset d;
    d.property_name = t.meta("property").value_or("");
    d.units = t.meta("units").value_or("");
    const auto cl = t.require_column("label");
    const auto c1 = t.require_column("x1");
    const auto c2 = t.require_column("x2");
    const auto c3 = t.require_column("x3");
    const auto cv = t.require_column("value");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::array<int, kComponents> raw{t.integer(i, c1), t.integer(i, c2), t.integer(i, c3)};
        Composition c;
        try {
            c = validate_composition(raw, bounds);
        } catch (const Error& e) {
            throw Error(e.code(), t.where(i, c1) + ": " + e.detail(), e.field());
        }
        d.rows.push_back({t.cell(i, cl), c, t.number(i, cv)});
    }
    return d;
}

// ---------------------------------------------------------------------------
// Desirability configs

inline void put_criterion(Record& r, const std::string& prefix, const Criterion& c) {
    r.set(prefix + ".kind", std::string(to_string(c.kind)));
    r.set(prefix + ".target", format_double(c.target));
    r.set(prefix + ".lower", format_double(c.lower));
    r.set(prefix + ".upper", format_double(c.upper));
    r.set(prefix + ".exponent", format_double(c.exponent));
}

inline Criterion get_criterion(const Record& r, const std::string& prefix, const std::string& source) {
    Criterion c;
    const auto kind = r.require(prefix + ".kind", source);
    auto k = parse_criterion_kind(kind);
    if (!k) throw Error(ErrorCode::ParseError, source + ": unknown criterion kind '" + kind + "'", prefix + ".kind");
    c.kind = *k;
    c.target = r.number(prefix + ".target", source);
    c.lower = r.number(prefix + ".lower", source);
    c.upper = r.number(prefix + ".upper", source);
    c.exponent = r.number(prefix + ".exponent", source);
    return c;
}

inline std::string serialize_config(const DesirabilityConfig& cfg) {
    Record r;
    r.kind = "config";
    put_criterion(r, "criterion_1", cfg.criterion_1);
    put_criterion(r, "criterion_2", cfg.criterion_2);
    r.set("weights", format_double(cfg.weights[0]) + " " + format_double(cfg.weights[1]));
    return r.serialize();
}

inline DesirabilityConfig parse_config(std::string_view text, const std::string& source) {
    const Record r = Record::parse(text, source);
    if (r.kind != "config") throw Error(ErrorCode::ParseError, source + ": not a config record", source);
    const auto w = split_ws(r.require("weights", source));
    if (w.size() != 2) throw Error(ErrorCode::ParseError, source + ": weights needs two values", "weights");
    const std::array<double, 2> weights{parse_double(w[0], source + ": weights"),
                                        parse_double(w[1], source + ": weights")};
    return DesirabilityConfig::make(get_criterion(r, "criterion_1", source), get_criterion(r, "criterion_2", source),
                                    weights);
}

// ---------------------------------------------------------------------------
// Bounds

inline std::string format_triple(const std::array<double, kComponents>& v) {
    return format_shortest(v[0]) + " " + format_shortest(v[1]) + " " + format_shortest(v[2]);
}

inline std::array<double, kComponents> parse_triple(const std::string& s, const std::string& where) {
    const auto parts = split_ws(s);
    if (parts.size() != 3) throw Error(ErrorCode::ParseError, where + ": expected three values", where);
    return {parse_double(parts[0], where), parse_double(parts[1], where), parse_double(parts[2], where)};
}

// ---------------------------------------------------------------------------
// Measurement ingestion

struct SpectraMeta {
    double thickness_mm = optics::kCanonicalThicknessMm;
    std::string bias_label = "air";
    double wavelength_nm = optics::kReferenceWavelengthNm;
};

inline SpectraMeta parse_spectra_meta(std::string_view text, const std::string& source) {
    const Record r = Record::parse(text, source);
    SpectraMeta m;
    m.thickness_mm = r.number("thickness_mm", source);
    m.bias_label = r.require("bias_label", source);
    if (r.get("wavelength_nm")) m.wavelength_nm = r.number("wavelength_nm", source);
    return m;
}

struct SpectraSample {
    std::string label;
    optics::OpticalSummary summary;
};

struct IngestResult {
    PropertyDataset dataset;
    std::vector<std::string> skipped;                           // plan labels excluded from the dataset
    std::vector<std::pair<std::string, std::size_t>> counts;    // readings per label (hardness)
    std::vector<SpectraSample> optical;                         // per-sample optics (spectra)
};

namespace detail {
inline void order_by_plan(PropertyDataset& d, const SamplePlan& plan) {
    auto rank = [&](const std::string& label) {
        for (std::size_t i = 0; i < plan.entries.size(); ++i) {
            if (plan.entries[i].label == label) return i;
        }
        return plan.entries.size();
    };
    std::stable_sort(d.rows.begin(), d.rows.end(),
                     [&](const DataRow& a, const DataRow& b) { return rank(a.label) < rank(b.label); });
}
}  // namespace detail

/**
 * @brief Transparency dataset (percent) from a spectra table.
 *
 * Header `wavelength_nm,<label>,...`; each label column holds transmission
 * fractions. The bias column is the pure-air reference. Labels the plan
 * excludes (e.g. the optical-only pure-GM sample) are reported as skipped.
 */
inline IngestResult ingest_spectra(std::string_view text, const std::string& source, const SpectraMeta& meta,
                                   const SamplePlan& plan) {
    const CsvTable t = CsvTable::parse(text, source);
    if (t.header.empty() || t.header[0] != "wavelength_nm") {
        throw Error(ErrorCode::ParseError, source + ":1:1: first column must be 'wavelength_nm'", "wavelength_nm");
    }
    const auto bias_col = t.column(meta.bias_label);
    if (!bias_col) {
        throw Error(ErrorCode::MissingBiasColumn, source + ": no bias column '" + meta.bias_label + "'",
                    meta.bias_label);
    }
    auto spectrum = [&](std::size_t col) {
        std::vector<optics::SpectrumPoint> pts;
        pts.reserve(t.rows.size());
        for (std::size_t i = 0; i < t.rows.size(); ++i) pts.push_back({t.number(i, 0), t.number(i, col)});
        return optics::TransmissionSpectrum(t.header[col], meta.thickness_mm, std::move(pts));
    };
    const double t_bias = optics::transmission_at(spectrum(*bias_col), meta.wavelength_nm);

    IngestResult res;
    res.dataset.property_name = "transparency";
    res.dataset.units = "percent";
    for (std::size_t col = 1; col < t.header.size(); ++col) {
        if (col == *bias_col) continue;
        const auto& label = t.header[col];
        const PlanEntry* entry = plan.find(label);
        if (entry == nullptr) {
            if (plan.find_exclusion(label) != nullptr) {
                res.skipped.push_back(label);
                continue;
            }
            throw Error(ErrorCode::UnknownLabel, source + ": label '" + label + "' is not in the sample plan", label);
        }
        const auto summary = optics::summarize(spectrum(col), t_bias, meta.wavelength_nm);
        res.optical.push_back({label, summary});
        res.dataset.rows.push_back({label, entry->composition, summary.t_unbiased * 100.0});
    }
    detail::order_by_plan(res.dataset, plan);
    return res;
}

/// Hardness dataset (Shore 00) as the mean of repeated `label,reading` rows.
inline IngestResult ingest_hardness(std::string_view text, const std::string& source, const SamplePlan& plan) {
    const CsvTable t = CsvTable::parse(text, source);
    const auto cl = t.require_column("label");
    const auto cr = t.require_column("reading");
    std::vector<std::string> order;
    std::map<std::string, std::pair<double, std::size_t>> acc;
    IngestResult res;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& label = t.cell(i, cl);
        const double v = t.number(i, cr);
        if (plan.find(label) == nullptr) {
            if (plan.find_exclusion(label) != nullptr) {
                if (std::find(res.skipped.begin(), res.skipped.end(), label) == res.skipped.end()) {
                    res.skipped.push_back(label);
                }
                continue;
            }
            throw Error(ErrorCode::UnknownLabel, t.where(i, cl) + ": label '" + label + "' is not in the sample plan",
                        label);
        }
        if (!acc.count(label)) order.push_back(label);
        acc[label].first += v;
        acc[label].second += 1;
    }
    res.dataset.property_name = "hardness";
    res.dataset.units = "shore00";
    for (const auto& label : order) {
        const auto& [sum, n] = acc[label];
        res.dataset.rows.push_back({label, plan.find(label)->composition, sum / static_cast<double>(n)});
        res.counts.emplace_back(label, n);
    }
    detail::order_by_plan(res.dataset, plan);
    return res;
}

/// Stress-strain leg: first line `mode,<tension|compression>`, then `strain,stress_kPa` rows.
inline analysis::StressStrainCurve parse_curve(std::string_view text, const std::string& source) {
    const auto nl = text.find('\n');
    const auto first = split(trim(text.substr(0, nl)), ',');
    if (first.size() != 2 || first[0] != "mode") {
        throw Error(ErrorCode::ParseError, source + ":1: expected 'mode,<tension|compression>'", "mode");
    }
    analysis::StressStrainCurve c;
    if (first[1] == "tension") {
        c.mode = analysis::CurveMode::Tension;
    } else if (first[1] == "compression") {
        c.mode = analysis::CurveMode::Compression;
    } else {
        throw Error(ErrorCode::ParseError, source + ":1: unknown mode '" + first[1] + "'", "mode");
    }
    const CsvTable t = CsvTable::parse(nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1), source);
    const auto cs = t.require_column("strain");
    const auto cp = t.require_column("stress_kPa");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        // line numbers in the sub-table are offset by the mode line
        const double strain = parse_double(t.cell(i, cs), source + ":" + std::to_string(t.line_numbers[i] + 1) + ":" +
                                                              std::to_string(cs + 1));
        const double stress = parse_double(t.cell(i, cp), source + ":" + std::to_string(t.line_numbers[i] + 1) + ":" +
                                                              std::to_string(cp + 1));
        c.points.push_back({strain, stress});
    }
    return c;
}

// ---------------------------------------------------------------------------
// Project

template <typename T>
struct Named {
    std::string name;
    std::string path;  // relative to the project root
    T value;
};

/**
 * @brief A directory of bounds, datasets, models and configs described by `project.ini`.
 *
 * project.ini keys: bounds.lower, bounds.upper, pair (two model names),
 * dataset.<name>, model.<name>, config.<name>, note.
 */
struct Project {
    fs::path root;
    ComponentBounds bounds;
    std::vector<Named<PropertyDataset>> datasets;
    std::vector<Named<ScheffeModel>> models;
    std::vector<Named<DesirabilityConfig>> configs;
    std::array<std::string, 2> pair{"transparency", "hardness"};
    std::string note;
    std::map<std::string, std::string> digests;  // relative path -> sha256

    template <typename T>
    static const T& lookup(const std::vector<Named<T>>& items, const std::string& name, const char* what) {
        for (const auto& it : items) {
            if (it.name == name) return it.value;
        }
        throw Error(ErrorCode::NotFound, std::string("unknown ") + what + " '" + name + "'", name);
    }

    [[nodiscard]] const PropertyDataset& dataset(const std::string& name) const {
        return lookup(datasets, name, "dataset");
    }
    [[nodiscard]] const ScheffeModel& model(const std::string& name) const { return lookup(models, name, "model"); }
    [[nodiscard]] const DesirabilityConfig& config(const std::string& name) const {
        return lookup(configs, name, "config");
    }
    [[nodiscard]] const ScheffeModel& model_1() const { return model(pair[0]); }
    [[nodiscard]] const ScheffeModel& model_2() const { return model(pair[1]); }

    [[nodiscard]] std::vector<InputDigest> model_digests() const {
        std::vector<InputDigest> out;
        for (const auto& name : pair) {
            for (const auto& m : models) {
                if (m.name != name) continue;
                auto it = digests.find(m.path);
                out.push_back({m.path, it == digests.end() ? sha256_hex(serialize_model(m.value)) : it->second});
            }
        }
        return out;
    }

    void check() const {
        bounds.check();
        auto unique = [](const auto& items, const char* what) {
            for (std::size_t i = 0; i < items.size(); ++i) {
                for (std::size_t j = i + 1; j < items.size(); ++j) {
                    if (items[i].name == items[j].name) {
                        throw Error(ErrorCode::InvalidArgument, std::string("duplicate ") + what + " '" + items[i].name + "'",
                                    items[i].name);
                    }
                }
            }
        };
        unique(datasets, "dataset");
        unique(models, "model");
        unique(configs, "config");
        for (const auto& m : models) {
            if (m.value.source_dataset.empty()) continue;
            bool found = false;
            for (const auto& d : datasets) found = found || d.name == m.value.source_dataset;
            if (!found) {
                throw Error(ErrorCode::NotFound,
                            "model '" + m.name + "' references missing dataset '" + m.value.source_dataset + "'",
                            m.name);
            }
        }
    }
};

inline Project load_project(const fs::path& root) {
    Project p;
    p.root = root;
    const auto ini_path = root / "project.ini";
    const std::string ini_text = read_file(ini_path);
    const Record r = Record::parse(ini_text, ini_path.string());
    const std::string src = ini_path.string();
    if (r.get("bounds.lower")) p.bounds.lower = parse_triple(*r.get("bounds.lower"), src + ": bounds.lower");
    if (r.get("bounds.upper")) p.bounds.upper = parse_triple(*r.get("bounds.upper"), src + ": bounds.upper");
    if (r.get("pair")) {
        const auto parts = split_ws(*r.get("pair"));
        if (parts.size() != 2) throw Error(ErrorCode::ParseError, src + ": pair needs two model names", "pair");
        p.pair = {parts[0], parts[1]};
    }
    p.note = r.get("note").value_or("");
    for (const auto& [key, rel] : r.fields) {
        auto load = [&](std::string_view prefix) -> std::optional<std::pair<std::string, std::string>> {
            if (!key.starts_with(prefix)) return std::nullopt;
            const auto text = read_file(root / rel);
            p.digests[rel] = sha256_hex(text);
            return std::make_pair(key.substr(prefix.size()), text);
        };
        if (auto d = load("dataset.")) {
            p.datasets.push_back({d->first, rel, parse_dataset(d->second, (root / rel).string(), p.bounds)});
        } else if (auto m = load("model.")) {
            p.models.push_back({m->first, rel, parse_model(m->second, (root / rel).string())});
        } else if (auto c = load("config.")) {
            p.configs.push_back({c->first, rel, parse_config(c->second, (root / rel).string())});
        }
    }
    p.check();
    return p;
}

inline std::string serialize_project_index(const Project& p) {
    Record r;
    r.kind = "project";
    r.set("bounds.lower", format_triple(p.bounds.lower));
    r.set("bounds.upper", format_triple(p.bounds.upper));
    r.set("pair", p.pair[0] + " " + p.pair[1]);
    for (const auto& d : p.datasets) r.set("dataset." + d.name, d.path);
    for (const auto& m : p.models) r.set("model." + m.name, m.path);
    for (const auto& c : p.configs) r.set("config." + c.name, c.path);
    if (!p.note.empty()) r.set("note", p.note);
    return r.serialize();
}

inline void save_project(const Project& p, const fs::path& root) {
    p.check();
    for (const auto& d : p.datasets) write_file(root / d.path, serialize_dataset(d.value));
    for (const auto& m : p.models) write_file(root / m.path, serialize_model(m.value));
    for (const auto& c : p.configs) write_file(root / c.path, serialize_config(c.value));
    write_file(root / "project.ini", serialize_project_index(p));
}

}  // namespace itac::io
