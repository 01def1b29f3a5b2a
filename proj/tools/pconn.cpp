#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pconn/errors.hpp"
#include "pconn/io.hpp"
#include "pconn/lab.hpp"
#include "pconn/version.hpp"

namespace {

using pconn::io::json;

pconn::PadicScalar parse_lambda(const pconn::Ctx& ctx, const std::string& spec) {
    std::string body = spec;
    bool negate = false;
    if (!body.empty() && body[0] == '-' && body.rfind("-gap:", 0) == 0) {
        negate = true;
        body = body.substr(1);
    }
    pconn::PadicScalar lam = [&] {
        if (body.rfind("gap:", 0) == 0) {
            int k = std::stoi(body.substr(4));
            return pconn::gap_number(ctx, k).lambda;
        }
        return pconn::io::scalar_from_rational_string(ctx, body);
    }();
    return negate ? -lam : lam;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << j.dump(2) << '\n';
}

pconn::SeriesMat parse_rhs(const pconn::RegularConnection& m, const std::string& spec,
                           long deg) {
    if (spec == "ones") {
        pconn::SeriesMat b;
        for (long d = 0; d <= deg; ++d) {
            pconn::Mat c(m.ctx, m.rank, 1);
            for (int i = 0; i < m.rank; ++i) c.at(i, 0) = pconn::PadicScalar::one(m.ctx);
            b.push_back(std::move(c));
        }
        return b;
    }
    std::ifstream in(spec);
    if (!in) throw std::runtime_error("cannot open rhs file " + spec);
    json j;
    in >> j;
    if (!j.is_array()) throw std::runtime_error("rhs json must be an array of columns");
    pconn::SeriesMat b;
    for (long d = 0; d <= deg; ++d) {
        pconn::Mat c(m.ctx, m.rank, 1);
        if (d < static_cast<long>(j.size())) {
            const json& col = j[d];
            if (static_cast<int>(col.size()) != m.rank)
                throw std::runtime_error("rhs degree " + std::to_string(d) +
                                         " does not have rank entries");
            for (int i = 0; i < m.rank; ++i)
                c.at(i, 0) = pconn::io::scalar_from_json(m.ctx, col[i]);
        }
        b.push_back(std::move(c));
    }
    return b;
}

std::vector<pconn::ProfilePoint> scan_profile(const pconn::TypeEstimate& est, long prec) {
    std::vector<long> vs(est.horizon, 0);
    std::vector<bool> sat(est.horizon, false);
    for (const pconn::TypeSpike& s : est.spikes)
        if (s.m >= 1 && s.m <= est.horizon) vs[s.m - 1] = s.v;
    for (long m : est.saturated)
        if (m >= 1 && m <= est.horizon) sat[m - 1] = true;
    std::vector<pconn::ProfilePoint> prof;
    prof.reserve(est.horizon);
    for (long m = 1; m <= est.horizon; ++m)
        prof.push_back({m, sat[m - 1] ? pconn::Val::at_least(prec)
                                      : pconn::Val::exact(vs[m - 1])});
    return prof;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(pconn::kVersion) +
                 " — regular connections over p-adic power series"};
    app.set_version_flag("--version", pconn::kVersion);

    unsigned long p = 2;
    long precision = 1024;
    long terms = 300;
    long deg = 300;
    long k_agree = 0;
    long window = 64;
    double threshold = 0.5;
    std::string lambda_spec, conn_path, other_path, rhs_spec = "ones";
    std::string csv_path, out_path, run_target, csv_dir;
    unsigned long seed = 1;

    CLI::App* c_type = app.add_subcommand("type", "Liouville type estimate for an exponent");
    c_type->add_option("--p", p, "prime");
    c_type->add_option("--precision", precision, "working precision N");
    c_type->add_option("--lambda", lambda_spec, "gap:k, num/den, or digits")->required();
    c_type->add_option("--terms", terms, "scan horizon M");
    c_type->add_option("--threshold", threshold, "suspect threshold for the bound");
    c_type->add_option("--csv", csv_path, "write the v(lambda - m) scan as CSV");
    c_type->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_solve = app.add_subcommand("solve", "inhomogeneous solve theta(a) + A a = b");
    c_solve->add_option("--conn", conn_path, "connection JSON file")->required();
    c_solve->add_option("--rhs", rhs_spec, "\"ones\" or a JSON file of columns");
    c_solve->add_option("--deg", deg, "solution truncation");
    c_solve->add_option("--window", window, "integer detection window");
    c_solve->add_option("--csv", csv_path, "write the valuation profile as CSV");
    c_solve->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_fuchs = app.add_subcommand("fuchs", "horizontal section transport U");
    c_fuchs->add_option("--conn", conn_path, "connection JSON file")->required();
    c_fuchs->add_option("--deg", deg, "solution truncation");
    c_fuchs->add_option("--window", window, "integer detection window");
    c_fuchs->add_option("--csv", csv_path, "write the valuation profile as CSV");
    c_fuchs->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_coh = app.add_subcommand("cohomology", "de Rham dimensions h0, h1");
    c_coh->add_option("--conn", conn_path, "connection JSON file")->required();
    c_coh->add_option("--window", window, "integer detection window");
    c_coh->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_gauge = app.add_subcommand("gauge", "reconstruct T between congruent models");
    c_gauge->add_option("--conn", conn_path, "source connection JSON")->required();
    c_gauge->add_option("--other", other_path, "target connection JSON")->required();
    c_gauge->add_option("--k", k_agree, "agreement degree (congruent mod z^{k+1})");
    c_gauge->add_option("--deg", deg, "transform truncation");
    c_gauge->add_option("--window", window, "integer detection window");
    c_gauge->add_option("--out", out_path, "write the JSON report here");

    CLI::App* c_run = app.add_subcommand("run", "run a named or JSON-described scenario");
    c_run->add_option("target", run_target, "scenario name or scenario JSON file")->required();
    c_run->add_option("--out", out_path, "write the report here");
    c_run->add_option("--csv", csv_dir, "directory for valuation profile CSVs");
    c_run->add_option("--seed", seed, "scenario seed (PCONN_SEED overrides)");

    CLI::App* c_list = app.add_subcommand("list-scenarios", "list built-in scenario names");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        if (c_type->parsed()) {
            pconn::Ctx ctx = pconn::make_context(p, precision);
            pconn::PadicScalar lam = parse_lambda(ctx, lambda_spec);
            pconn::TypeEstimate est = pconn::estimate_type(lam, terms);
            pconn::SlopeReport slope = pconn::slope_criterion(lam, terms);
            json report;
            report["lambda"] = lambda_spec;
            report["p"] = p;
            report["precision"] = precision;
            report["suspect"] = est.bound < threshold;
            report["estimate"] = pconn::io::type_estimate_to_json(est);
            report["slope_criterion"] = pconn::io::slope_report_to_json(slope);
            if (!csv_path.empty())
                pconn::io::write_profile_csv(csv_path, scan_profile(est, precision));
            emit(report, out_path);
        } else if (c_solve->parsed()) {
            pconn::RegularConnection m = pconn::io::load_connection(conn_path);
            pconn::SeriesMat b = parse_rhs(m, rhs_spec, deg);
            pconn::ClarkResult r = pconn::clark_solve(m, b, deg, window);
            json report;
            report["residual_zero"] = pconn::smat_is_zero_at_precision(r.residual);
            report["certificate"] = pconn::io::certificate_to_json(r.cert);
            if (!csv_path.empty()) pconn::io::write_profile_csv(csv_path, r.cert.profile);
            emit(report, out_path);
        } else if (c_fuchs->parsed()) {
            pconn::RegularConnection m = pconn::io::load_connection(conn_path);
            pconn::FuchsResult r = pconn::fuchs_solution(m, deg, window);
            json report;
            report["residual_zero"] = pconn::smat_is_zero_at_precision(r.residual);
            report["certificate"] = pconn::io::certificate_to_json(r.cert);
            if (!csv_path.empty()) pconn::io::write_profile_csv(csv_path, r.cert.profile);
            emit(report, out_path);
        } else if (c_coh->parsed()) {
            pconn::RegularConnection m = pconn::io::load_connection(conn_path);
            emit(pconn::io::cohomology_to_json(pconn::cohomology_dims(m, window)), out_path);
        } else if (c_gauge->parsed()) {
            pconn::RegularConnection ma = pconn::io::load_connection(conn_path);
            pconn::RegularConnection mb = pconn::io::load_connection(other_path);
            pconn::GaugeResult r = pconn::gauge_equivalence(ma, mb, k_agree, deg, window);
            json report;
            report["residual_zero"] = pconn::smat_is_zero_at_precision(r.residual);
            report["det_constant_unit"] = r.det_constant_unit;
            report["certificate"] = pconn::io::certificate_to_json(r.cert);
            emit(report, out_path);
        } else if (c_run->parsed()) {
            pconn::lab::LabOptions opt;
            std::string name = run_target;
            std::ifstream in(run_target);
            if (in) {
                json j;
                in >> j;
                if (!j.contains("scenario"))
                    throw std::runtime_error("scenario json needs a \"scenario\" field");
                name = j["scenario"].get<std::string>();
                opt = pconn::lab::options_from_json(j);
            } else {
                opt.seed = seed;
            }
            opt.csv_dir = csv_dir;
            emit(pconn::lab::run_scenario(name, opt), out_path);
        } else if (c_list->parsed()) {
            for (const std::string& name : pconn::lab::scenario_names())
                std::cout << name << '\n';
        }
    } catch (const pconn::Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
