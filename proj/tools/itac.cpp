// itac: command-line front end for the mixture inverse-design toolkit.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "itac/analysis.hpp"
#include "itac/api.hpp"
#include "itac/desirability.hpp"
#include "itac/error.hpp"
#include "itac/fps.hpp"
#include "itac/io.hpp"
#include "itac/mixture_space.hpp"
#include "itac/provenance.hpp"
#include "itac/server.hpp"
#include "itac/resm.hpp"
#include "itac/window.hpp"

namespace fs = std::filesystem;
using namespace itac;
using api::json;

namespace {

enum Exit { kOk = 0, kValidation = 2, kIo = 3, kInfeasible = 4 };

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return kIo;
        case ErrorCode::AllZeroDesirability:
        case ErrorCode::EmptyWindow: return kInfeasible;
        default: return kValidation;
    }
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Writes to a file when a path is given, otherwise to stdout.
void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        io::write_file(path, content);
        std::cerr << "wrote " << path << "\n";
    }
}

InputDigest digest_of(const fs::path& path) { return {path.filename().string(), sha256_hex(io::read_file(path))}; }

std::array<int, 3> parse_composition(const std::string& s) {
    const auto parts = io::split(s, ',');
    if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "composition must be x1,x2,x3", "composition");
    return {io::parse_int(parts[0], "composition"), io::parse_int(parts[1], "composition"),
            io::parse_int(parts[2], "composition")};
}

std::array<double, 2> parse_pair(const std::string& s, const char* field) {
    auto parts = io::split(s, ',');
    if (parts.size() != 2) parts = io::split(s, 'x');
    if (parts.size() != 2) throw Error(ErrorCode::InvalidArgument, std::string(field) + " needs two values", field);
    return {io::parse_double(parts[0], field), io::parse_double(parts[1], field)};
}

TermSet parse_terms(const std::string& spec) {
    if (spec == "full") return TermSet::full();
    if (spec == "quadratic") return TermSet::quadratic();
    if (spec == "linear") return TermSet::linear();
    TermSet t;
    for (const auto& name : io::split_ws(spec == "" ? "" : std::string(spec))) {
        for (const auto& piece : io::split(name, ',')) {
            if (piece.empty()) continue;
            auto term = parse_term(piece);
            if (!term) throw Error(ErrorCode::InvalidArgument, "unknown term '" + piece + "'", "terms");
            t.set(*term, true);
        }
    }
    t.check();
    return t;
}

// Shared options of commands that act on a loaded project.
struct ProjectOpts {
    std::string dir;
    io::Project load() const {
        if (dir.empty()) throw Error(ErrorCode::InvalidArgument, "--project is required", "project");
        return io::load_project(dir);
    }
};

// Anything with a directory separator or a file extension is a path, not a project name.
bool looks_like_path(const std::string& ref) {
    return ref.find('/') != std::string::npos || fs::path(ref).has_extension() || fs::is_regular_file(ref);
}

// A dataset given either as a project name or a file path.
struct DatasetRef {
    PropertyDataset data;
    std::string name;
    InputDigest digest;
};

DatasetRef resolve_dataset(const ProjectOpts& popt, const std::string& ref) {
    if (looks_like_path(ref)) {
        const auto text = io::read_file(ref);
        auto d = io::parse_dataset(text, ref);
        return {d, d.property_name, {fs::path(ref).filename().string(), sha256_hex(text)}};
    }
    const auto project = popt.load();
    for (const auto& d : project.datasets) {
        if (d.name == ref) return {d.value, d.name, {d.path, project.digests.at(d.path)}};
    }
    throw Error(ErrorCode::NotFound, "unknown dataset '" + ref + "'", "dataset");
}

// Desirability selection flags shared by optimize and window.
struct ConfigOpts {
    int guideline = 0;
    std::optional<double> t1;
    std::optional<double> t2;
    double w1 = 0.5;
    double w2 = 0.5;
    std::string config;

    void add(CLI::App* app) {
        app->add_option("--guideline", guideline, "guideline id 1..9");
        app->add_option("--t1", t1, "target for property 1 (transparency)");
        app->add_option("--t2", t2, "target for property 2 (hardness)");
        app->add_option("--w1", w1, "weight of property 1");
        app->add_option("--w2", w2, "weight of property 2");
        app->add_option("--config", config, "project config name or config file");
    }

    json request() const {
        json req = json::object();
        if (!config.empty()) {
            if (looks_like_path(config)) {
                const auto cfg = io::parse_config(io::read_file(config), config);
                req = api::to_json(cfg);
            } else {
                req["config"] = config;
            }
            return req;
        }
        if (guideline == 0) throw Error(ErrorCode::InvalidArgument, "give --guideline or --config", "guideline");
        req["guideline"] = guideline;
        if (t1) req["t1"] = *t1;
        if (t2) req["t2"] = *t2;
        req["w1"] = w1;
        req["w2"] = w2;
        return req;
    }
};

// Runs a request through the API handler so CLI JSON output equals the server's.
int run_json(const io::Project& p, const std::string& path, const json& req, const std::string& out) {
    const auto r = api::handle(p, path, req.dump());
    emit(out, r.body);
    if (r.status == 200) return kOk;
    const auto err = json::parse(r.body);
    const auto code = err["error"]["code"].get<std::string>();
    std::cerr << "error: " << code << ": " << err["error"]["message"].get<std::string>() << "\n";
    if (code == "AllZeroDesirability" || code == "EmptyWindow") return kInfeasible;
    if (code == "IoError") return kIo;
    return kValidation;
}

std::string fit_report(const ScheffeModel& m) {
    std::string out = "property " + m.property_name + " (" + m.units + ")\nterms " + m.terms.str() + "\n";
    const auto act = m.terms.active();
    for (std::size_t i = 0; i < act.size(); ++i) {
        out += "  " + std::string(term_name(act[i])) + " " + fmt("%.4f", m.coefficients[i]) + "\n";
    }
    if (m.fit_stats) {
        const auto& f = *m.fit_stats;
        out += "n " + std::to_string(f.n) + "  k " + std::to_string(f.k) + "\n";
        out += "RMSE " + fmt("%.3f", f.rmse) + "\nR2 " + fmt("%.4f", f.r2) + "\nadj R2 " + fmt("%.4f", f.adj_r2) +
               "\nAIC " + fmt("%.3f", f.aic) + "\nBIC " + fmt("%.3f", f.bic) + "\n";
    }
    return out;
}

std::string solution_text(const DesignSolution& s, const DesirabilityConfig& cfg) {
    std::string out = "criteria " + std::string(to_string(cfg.criterion_1.kind)) + "/" +
                      std::string(to_string(cfg.criterion_2.kind)) + "  weights " + fmt("%.2f", cfg.weights[0]) +
                      "/" + fmt("%.2f", cfg.weights[1]) + "\n";
    out += "composition " + s.composition.str() + "\n";
    out += "Y1_hat " + fmt("%.2f", s.predictions[0]) + "  Y2_hat " + fmt("%.2f", s.predictions[1]) + "  D " +
           fmt("%.4f", s.desirability) + "\n";
    out += "continuous (" + fmt("%.4f", s.continuous_point[0]) + ", " + fmt("%.4f", s.continuous_point[1]) + ", " +
           fmt("%.4f", s.continuous_point[2]) + ")  D " + fmt("%.4f", s.continuous_desirability) + "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"itac: mixture design, response surfaces and desirability-based inverse design"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    ProjectOpts popt;
    auto add_project = [&](CLI::App* sub) { sub->add_option("--project", popt.dir, "project directory"); };
    std::string out;
    bool as_json = false;

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "print the 19-point sampling plan");
    plan_cmd->add_option("--out", out, "output file");

    // ingest
    std::string spectra, meta, hardness, out_dir;
    auto* ingest_cmd = app.add_subcommand("ingest", "build datasets from raw spectra and hardness readings");
    ingest_cmd->add_option("--spectra", spectra, "spectra table");
    ingest_cmd->add_option("--meta", meta, "spectra metadata (thickness_mm, bias_label)");
    ingest_cmd->add_option("--hardness", hardness, "hardness readings table");
    ingest_cmd->add_option("--out-dir", out_dir, "directory for dataset files")->required();

    // fit / anova / prune
    std::string dataset, terms = "full", keep;
    double p_threshold = 0.45;
    auto* fit_cmd = app.add_subcommand("fit", "least-squares fit of a Scheffe model");
    auto* anova_cmd = app.add_subcommand("anova", "partial F tests for each model term");
    auto* prune_cmd = app.add_subcommand("prune", "backward elimination by p-value");
    for (auto* sub : {fit_cmd, anova_cmd, prune_cmd}) {
        add_project(sub);
        sub->add_option("--dataset", dataset, "dataset name or file")->required();
        sub->add_option("--terms", terms, "full | quadratic | linear | list such as 'x1 x2 x3 x1x3'");
        sub->add_option("--out", out, "output file");
    }
    prune_cmd->add_option("--p", p_threshold, "drop terms while p exceeds this");
    prune_cmd->add_option("--keep", keep, "terms that are never dropped");

    // predict
    std::string composition;
    std::string model_name;
    auto* predict_cmd = app.add_subcommand("predict", "evaluate the model pair at a composition");
    add_project(predict_cmd);
    predict_cmd->add_option("--composition", composition, "x1,x2,x3 in percent")->required();
    predict_cmd->add_option("--model", model_name, "single model name");
    predict_cmd->add_flag("--json", as_json, "print the HTTP API response body");

    // fps
    std::string grid = "5x5", target, tolerance = "1,1";
    auto* fps_cmd = app.add_subcommand("fps", "feasible property space of the lattice");
    add_project(fps_cmd);
    fps_cmd->add_option("--grid", grid, "component map grid, e.g. 5x5");
    fps_cmd->add_option("--target", target, "check a (Y1,Y2) target, e.g. 97,44");
    fps_cmd->add_option("--tol", tolerance, "feasibility tolerance per property");
    fps_cmd->add_option("--out", out, "output file for the point cloud");
    fps_cmd->add_flag("--json", as_json, "print the HTTP API response body");

    // optimize / window
    ConfigOpts copt;
    std::string save_config;
    auto* opt_cmd = app.add_subcommand("optimize", "maximize overall desirability over the lattice");
    add_project(opt_cmd);
    copt.add(opt_cmd);
    opt_cmd->add_option("--save-config", save_config, "write the resolved config");
    opt_cmd->add_flag("--json", as_json, "print the HTTP API response body");

    double dx = 3.0, dy = 3.0;
    std::string cut = "desirability";
    auto* win_cmd = app.add_subcommand("window", "operating window around the optimum");
    add_project(win_cmd);
    copt.add(win_cmd);
    win_cmd->add_option("--dx", dx, "composition tolerance, percent");
    win_cmd->add_option("--dy", dy, "desirability tolerance, percent");
    win_cmd->add_option("--cut", cut, "desirability | per_property");
    win_cmd->add_option("--out", out, "composition sheet file");
    win_cmd->add_flag("--json", as_json, "print the HTTP API response body");

    // report
    std::string table;
    auto* report_cmd = app.add_subcommand("report", "Error1/Error2 accounting of inverse designs");
    report_cmd->add_option("--table", table, "table with design,rank,t1,y1_hat,r1,t2,y2_hat,r2")->required();
    report_cmd->add_option("--out", out, "output file");

    // correlate
    std::string xcol, ycol, usaf, load_curve, unload_curve;
    double ref_strain = 1.0;
    auto* corr_cmd = app.add_subcommand("correlate", "property correlations and scalar formulas");
    corr_cmd->add_option("--table", table, "material property table");
    corr_cmd->add_option("--x", xcol, "x column");
    corr_cmd->add_option("--y", ycol, "y column");
    corr_cmd->add_option("--usaf", usaf, "group,element of a USAF 1951 chart reading");
    corr_cmd->add_option("--load", load_curve, "loading leg file");
    corr_cmd->add_option("--unload", unload_curve, "unloading leg file");
    corr_cmd->add_option("--ref-strain", ref_strain, "reference strain for the modulus");
    corr_cmd->add_option("--out", out, "output file");

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "read-only HTTP service over a project");
    add_project(serve_cmd);
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--port", port, "port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    try {
        if (plan_cmd->parsed()) {
            const auto plan = standard_sample_plan();
            std::string s = provenance_header({}) + "label,design,x1,x2,x3,status\n";
            for (const auto& e : plan.entries) {
                s += e.label + "," + e.design + "," + std::to_string(e.composition[0]) + "," +
                     std::to_string(e.composition[1]) + "," + std::to_string(e.composition[2]) + ",sample\n";
            }
            for (const auto& e : plan.exclusions) {
                s += e.label + "," + e.design + "," + std::to_string(e.raw[0]) + "," + std::to_string(e.raw[1]) + "," +
                     std::to_string(e.raw[2]) + "," +
                     (e.reason == ExclusionReason::Forbidden ? "forbidden" : "optical-only") + "\n";
            }
            emit(out, s);
            return kOk;
        }

        if (ingest_cmd->parsed()) {
            if (spectra.empty() && hardness.empty()) {
                throw Error(ErrorCode::InvalidArgument, "give --spectra and/or --hardness", "spectra");
            }
            const auto plan = standard_sample_plan();
            if (!spectra.empty()) {
                if (meta.empty()) throw Error(ErrorCode::InvalidArgument, "--meta is required with --spectra", "meta");
                const auto meta_record = io::parse_spectra_meta(io::read_file(meta), meta);
                const auto res = io::ingest_spectra(io::read_file(spectra), spectra, meta_record, plan);
                emit((fs::path(out_dir) / "transparency.csv").string(),
                     provenance_header({digest_of(spectra), digest_of(meta)}) + io::serialize_dataset(res.dataset));
                for (const auto& s : res.skipped) std::cerr << "skipped " << s << " (not a modelled sample)\n";
                for (const auto& s : res.optical) {
                    std::cout << s.label << " unbiased " << fmt("%.4f", s.summary.t_unbiased) << " opacity density "
                              << fmt("%.6f", s.summary.opacity_density) << " /mm\n";
                }
            }
            if (!hardness.empty()) {
                const auto res = io::ingest_hardness(io::read_file(hardness), hardness, plan);
                emit((fs::path(out_dir) / "hardness.csv").string(),
                     provenance_header({digest_of(hardness)}) + io::serialize_dataset(res.dataset));
                for (const auto& [label, n] : res.counts) std::cout << label << " readings " << n << "\n";
            }
            return kOk;
        }

        if (fit_cmd->parsed() || anova_cmd->parsed() || prune_cmd->parsed()) {
            const auto ds = resolve_dataset(popt, dataset);
            const TermSet start = parse_terms(terms);
            const auto header = provenance_header({ds.digest});
            if (fit_cmd->parsed()) {
                const auto m = fit_ols(ds.data, start);
                std::cout << fit_report(m);
                if (!out.empty()) emit(out, header + io::serialize_model(m));
                return kOk;
            }
            if (anova_cmd->parsed()) {
                const auto m = fit_ols(ds.data, start);
                const auto a = anova_partial_f(ds.data, m);
                std::string s = header + "term,F,p\n";
                for (const auto& t : a.tests) {
                    s += std::string(term_name(t.term)) + "," + fmt("%.4f", t.f_statistic) + "," +
                         fmt("%.4f", t.p_value) + "\n";
                }
                emit(out, s);
                return kOk;
            }
            const TermSet keep_set = keep.empty() ? TermSet{} : parse_terms(keep);
            const auto m = prune_terms(ds.data, start, p_threshold, keep_set);
            std::cout << fit_report(m);
            if (!out.empty()) emit(out, header + io::serialize_model(m));
            return kOk;
        }

        if (predict_cmd->parsed()) {
            const auto p = popt.load();
            json req = {{"composition", parse_composition(composition)}};
            if (!model_name.empty()) req["model"] = model_name;
            if (as_json) return run_json(p, "/predict", req, "");
            const auto c = validate_composition(parse_composition(composition), p.bounds);
            if (!model_name.empty()) {
                std::cout << model_name << " " << fmt("%.4f", predict(p.model(model_name), c)) << "\n";
            } else {
                std::cout << "composition " << c.str() << "\n"
                          << p.pair[0] << " " << fmt("%.4f", predict(p.model_1(), c)) << "\n"
                          << p.pair[1] << " " << fmt("%.4f", predict(p.model_2(), c)) << "\n";
            }
            return kOk;
        }

        if (fps_cmd->parsed()) {
            const auto p = popt.load();
            const auto g = parse_pair(grid, "grid");
            if (as_json) {
                if (!target.empty()) {
                    return run_json(p, "/feasibility",
                                    {{"target", parse_pair(target, "target")},
                                     {"tolerance", parse_pair(tolerance, "tol")}},
                                    out);
                }
                return run_json(p, "/fps", {{"grid", g}}, out);
            }
            const auto cloud = build_fps(p.model_1(), p.model_2(), p.bounds);
            std::cout << "points " << cloud.points.size() << "\n"
                      << "Y1 range " << fmt("%.2f", cloud.y1.min) << " .. " << fmt("%.2f", cloud.y1.max) << "\n"
                      << "Y2 range " << fmt("%.2f", cloud.y2.min) << " .. " << fmt("%.2f", cloud.y2.max) << "\n";
            for (int comp = 0; comp < kComponents; ++comp) {
                const auto map = component_map(cloud, comp, static_cast<int>(g[0]), static_cast<int>(g[1]));
                std::cout << "mean " << kComponentNames[static_cast<std::size_t>(comp)]
                          << " by cell (rows Y1 low..high, cols Y2 low..high)\n";
                for (int i1 = 0; i1 < map.cells_1; ++i1) {
                    for (int i2 = 0; i2 < map.cells_2; ++i2) {
                        const auto& cell = map.at(i1, i2);
                        std::cout << (i2 ? " " : "  ")
                                  << (cell.mean_fraction ? fmt("%5.2f", *cell.mean_fraction) : std::string("    -"));
                    }
                    std::cout << "\n";
                }
            }
            if (!out.empty()) {
                std::string s = provenance_header(p.model_digests()) + "x1,x2,x3,Y1_hat,Y2_hat\n";
                for (const auto& pt : cloud.points) {
                    s += std::to_string(pt.source[0]) + "," + std::to_string(pt.source[1]) + "," +
                         std::to_string(pt.source[2]) + "," + fmt("%.4f", pt.y1) + "," + fmt("%.4f", pt.y2) + "\n";
                }
                emit(out, s);
            }
            if (!target.empty()) {
                const auto v = feasibility(cloud, parse_pair(target, "target"), parse_pair(tolerance, "tol"));
                std::cout << "target " << (v.feasible ? "feasible" : "infeasible") << "; nearest "
                          << v.nearest.source.str() << " (" << fmt("%.2f", v.nearest.y1) << ", "
                          << fmt("%.2f", v.nearest.y2) << ")\n";
                if (!v.feasible) return kInfeasible;
            }
            return kOk;
        }

        if (opt_cmd->parsed() || win_cmd->parsed()) {
            const auto p = popt.load();
            json req = copt.request();
            if (win_cmd->parsed()) {
                req["dx"] = dx;
                req["dy"] = dy;
                req["cut"] = cut;
            }
            const std::string path = opt_cmd->parsed() ? "/optimize" : "/window";
            if (as_json) return run_json(p, path, req, out);
            const auto cfg = api::config_from_json(p, req);
            if (opt_cmd->parsed()) {
                const auto s = optimize(p.model_1(), p.model_2(), cfg, p.bounds);
                std::cout << solution_text(s, cfg);
                if (!save_config.empty()) emit(save_config, io::serialize_config(cfg));
                return kOk;
            }
            const auto spec = api::window_spec_from_json(req);
            const auto w = optimal_window(p.model_1(), p.model_2(), cfg, spec, p.bounds);
            std::cout << "optimum " << w.anchor.composition.str() << " D " << fmt("%.4f", w.anchor.desirability)
                      << "; window members " << w.members.size() << "\n";
            emit(out, api::window_sheet(p, w));
            return kOk;
        }

        if (report_cmd->parsed()) {
            const auto t = io::CsvTable::parse(io::read_file(table), table);
            const auto cd = t.require_column("design");
            const auto cr = t.require_column("rank");
            const std::array<std::array<std::size_t, 3>, 2> cols{
                {{t.require_column("t1"), t.require_column("y1_hat"), t.require_column("r1")},
                 {t.require_column("t2"), t.require_column("y2_hat"), t.require_column("r2")}}};
            std::vector<analysis::DesignErrors> rows;
            std::string s = provenance_header({digest_of(table)}) +
                            "design,rank,T1,Y1_hat,R1,Y1_error1,Y1_error2,T2,Y2_hat,R2,Y2_error1,Y2_error2\n";
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                analysis::DesignErrors de{t.cell(i, cd), t.cell(i, cr), {}};
                s += de.design + "," + de.rank;
                for (std::size_t k = 0; k < 2; ++k) {
                    de.records[k] = analysis::error_record(t.number(i, cols[k][0]), t.number(i, cols[k][1]),
                                                           t.number(i, cols[k][2]));
                    const auto& e = de.records[k];
                    s += "," + fmt("%.2f", e.target) + "," + fmt("%.2f", e.prediction) + "," + fmt("%.2f", e.measured) +
                         "," + analysis::format_error(e.error1_abs, e.error1_pct) + "," +
                         analysis::format_error(e.error2_abs, e.error2_pct);
                }
                s += "\n";
                rows.push_back(de);
            }
            const auto agg = analysis::aggregate_errors(rows);
            s += "# mean error1 % " + fmt("%.2f", agg.mean_error1_pct[0]) + " / " + fmt("%.2f", agg.mean_error1_pct[1]) +
                 "; mean error2 % " + fmt("%.2f", agg.mean_error2_pct[0]) + " / " +
                 fmt("%.2f", agg.mean_error2_pct[1]) + "\n";
            for (const auto& r : agg.by_rank) {
                s += "# " + r.rank + " accumulated |error| Y1 " + fmt("%.2f", r.error1_abs_sum[0] + r.error2_abs_sum[0]) +
                     " Y2 " + fmt("%.2f", r.error1_abs_sum[1] + r.error2_abs_sum[1]) + "\n";
            }
            emit(out, s);
            return kOk;
        }

        if (corr_cmd->parsed()) {
            std::string s;
            if (!table.empty()) {
                const auto t = io::CsvTable::parse(io::read_file(table), table);
                s += provenance_header({digest_of(table)});
                std::vector<std::size_t> numeric;
                for (std::size_t c = 0; c < t.header.size(); ++c) {
                    if (t.rows.empty() || io::try_parse_double(t.cell(0, c))) numeric.push_back(c);
                }
                auto column = [&](std::size_t c) {
                    std::vector<double> v;
                    for (std::size_t i = 0; i < t.rows.size(); ++i) v.push_back(t.number(i, c));
                    return v;
                };
                if (!xcol.empty() || !ycol.empty()) {
                    const auto f = analysis::linear_fit(column(t.require_column(xcol)), column(t.require_column(ycol)));
                    s += "x,y,slope,intercept,r2\n" + xcol + "," + ycol + "," + fmt("%.6g", f.slope) + "," +
                         fmt("%.6g", f.intercept) + "," + fmt("%.4f", f.r2) + "\n";
                } else {
                    s += "x,y,r2\n";
                    for (std::size_t a = 0; a < numeric.size(); ++a) {
                        for (std::size_t b = a + 1; b < numeric.size(); ++b) {
                            const auto f = analysis::linear_fit(column(numeric[a]), column(numeric[b]));
                            s += t.header[numeric[a]] + "," + t.header[numeric[b]] + "," + fmt("%.4f", f.r2) + "\n";
                        }
                    }
                }
            }
            if (!usaf.empty()) {
                const auto ge = parse_pair(usaf, "usaf");
                s += "usaf G=" + fmt("%.0f", ge[0]) + " E=" + fmt("%.0f", ge[1]) + " " +
                     fmt("%.2f", analysis::usaf_resolution(static_cast<int>(ge[0]), static_cast<int>(ge[1]))) +
                     " lp/mm\n";
            }
            if (!load_curve.empty()) {
                const auto load = io::parse_curve(io::read_file(load_curve), load_curve);
                s += "modulus " + fmt("%.2f", analysis::curve_scalars(load, ref_strain)) + " kPa (secant at strain " +
                     fmt("%g", ref_strain) + ")\n";
                if (!unload_curve.empty()) {
                    const auto unload = io::parse_curve(io::read_file(unload_curve), unload_curve);
                    s += "hysteresis " + fmt("%.4f", analysis::hysteresis(load, unload)) + "\n";
                }
            }
            if (s.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to do; give --table, --usaf or --load");
            emit(out, s);
            return kOk;
        }

        if (serve_cmd->parsed()) {
            const auto p = popt.load();
            httplib::Server server;
            api::mount(server, p);
            std::cerr << "serving " << popt.dir << " on " << host << ":" << port << "\n";
            if (!server.listen(host, port)) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
