#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "projdim/analysis.hpp"

using namespace projdim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::Config, "cannot write '" + path + "'");
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hausdorff dimension of projections of products of self-similar sets"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path, csv_path;
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");
    app.add_option("--csv", csv_path, "write the CSV output here");

    std::string config_path;
    auto* analyze = app.add_subcommand("analyze", "full pipeline for one projection");
    analyze->add_option("config", config_path, "config JSON")->required();

    auto* dims = app.add_subcommand("dims", "dimension bracket only");
    dims->add_option("config", config_path, "config JSON")->required();

    std::string thetas;
    auto* sweep = app.add_subcommand("sweep", "one analysis per angle");
    sweep->add_option("config", config_path, "config JSON")->required();
    sweep->add_option("--thetas", thetas, "a:b:n range in radians, or a file with one angle per line")->required();
    std::size_t workers = 0;
    sweep->add_option("--workers", workers, "worker cap (0 = hardware concurrency)");

    long lmax = 0;
    auto* matchings = app.add_subcommand("matchings", "Matching list and count series");
    matchings->add_option("config", config_path, "config JSON")->required();
    matchings->add_option("--lmax", lmax, "length cap")->required()->check(CLI::PositiveNumber);

    double floor = 0;
    auto* vitali = app.add_subcommand("vitali", "greedy disjoint selection and its lower bound");
    vitali->add_option("config", config_path, "config JSON")->required();
    vitali->add_option("--floor", floor, "diameter floor")->required()->check(CLI::PositiveNumber);

    std::string beta_spec = "3/2";
    long floor_exponent = 100;
    auto* verify = app.add_subcommand("verify-example8", "threshold chain and both regimes of the two-map fixture");
    verify->add_option("--beta", beta_spec, "rational beta, e.g. 3/2 or 1.75");
    verify->add_option("--floor-exponent", floor_exponent, "Vitali floor is |hull| * beta^-e")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*analyze) {
            AnalysisReport r = run_analysis(load_config(config_path));
            emit(dump(r.json), out_path);
            if (!csv_path.empty()) {
                std::string csv = "scale,count\n";
                const Json& o = r.json["oracle"];
                if (o.is_object() && o.contains("scales"))
                    for (std::size_t i = 0; i < o["scales"].size(); ++i) {
                        char buf[64];
                        std::snprintf(buf, sizeof buf, "%.17g,%.0f\n", o["scales"][i].get<double>(), o["counts"][i].get<double>());
                        csv += buf;
                    }
                emit(csv, csv_path);
            }
        } else if (*dims) {
            emit(dump(run_dims(load_config(config_path))), out_path);
        } else if (*sweep) {
            AnalysisConfig c = load_config(config_path);
            if (workers) c.options.workers = workers;
            auto rows = run_sweep(c, parse_thetas(thetas));
            Json j = Json::array();
            for (const auto& r : rows) {
                Json row{{"theta", r.theta}};
                row["slope"] = r.vertical ? Json("vertical") : Json(r.slope);
                row["dimension"] = r.bracket ? bracket_json(*r.bracket) : Json(nullptr);
                row["oracle_slope"] = r.oracle_slope ? Json(*r.oracle_slope) : Json(nullptr);
                row["error"] = r.error;
                j.push_back(row);
            }
            emit(dump(Json{{"rows", j}}), out_path);
            if (!csv_path.empty()) emit(sweep_csv(rows), csv_path);
        } else if (*matchings) {
            auto [j, csv] = run_matchings(load_config(config_path), lmax);
            emit(dump(j), out_path);
            if (!csv_path.empty()) emit(csv, csv_path);
        } else if (*vitali) {
            Json j = run_vitali(load_config(config_path), floor);
            emit(dump(j), out_path);
            if (!csv_path.empty()) {
                std::string csv = "length,translation,word\n";
                for (const auto& m : j["maps"]) {
                    std::string w;
                    for (const auto& x : m["word"]) w += (w.empty() ? "" : " ") + std::to_string(x.get<std::size_t>());
                    csv += std::to_string(m["length"].get<long>()) + "," + m["translation"].get<std::string>() + "," + w + "\n";
                }
                emit(csv, csv_path);
            }
        } else if (*verify) {
            Rational b = parse_rational(beta_spec);
            if (b <= 1) fail(ErrorCode::InvalidField, "beta must exceed 1");
            Json j = verify_example8(b, floor_exponent);
            emit(dump(j), out_path);
            if (!csv_path.empty()) {
                std::string csv = "name,value\n";
                for (const auto& t : j["thresholds"]) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.17g", t["value"].get<double>());
                    csv += t["name"].get<std::string>() + "," + buf + "\n";
                }
                emit(csv, csv_path);
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_config_error() ? kExitConfig : kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
    return 0;
}
