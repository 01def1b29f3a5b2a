#include "pconn/lab.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "pconn/errors.hpp"
#include "pconn/version.hpp"

namespace pconn::lab {

namespace {

using io::json;

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json parameter_block(const LabOptions& o) {
    return {{"p", o.p},       {"precision", o.precision}, {"deg", o.deg},
            {"horizon", o.horizon}, {"window", o.window},  {"seed", o.seed}};
}

void maybe_csv(const LabOptions& o, const std::string& name,
               const std::vector<ProfilePoint>& profile) {
    if (o.csv_dir.empty()) return;
    std::filesystem::create_directories(o.csv_dir);
    io::write_profile_csv((std::filesystem::path(o.csv_dir) / (name + ".csv")).string(),
                          profile);
}

int pick_gap_k(const Ctx& ctx) {
    for (int k = 4; k >= 2; --k) {
        try {
            gap_number(ctx, k);
            return k;
        } catch (const PrecisionTooSmall&) {
        }
    }
    throw PrecisionTooSmall("no gap number fits this precision");
}

RegularConnection rank1(const Ctx& ctx, const PadicScalar& lambda) {
    Mat a0(ctx, 1, 1);
    a0.at(0, 0) = lambda;
    return make_connection(ctx, {a0}, std::vector<PadicScalar>{lambda});
}

SeriesMat ones_column(const Ctx& ctx, int rank, long deg) {
    SeriesMat b;
    b.reserve(deg + 1);
    for (long d = 0; d <= deg; ++d) {
        Mat c(ctx, rank, 1);
        for (int i = 0; i < rank; ++i) c.at(i, 0) = PadicScalar::one(ctx);
        b.push_back(std::move(c));
    }
    return b;
}

long rand_small(std::mt19937_64& rng) { return static_cast<long>(rng() % 16); }

// Horizontal sections of a prepared rank-2 model with diagonal tail.
// Diagonal tails keep the per-entry division chains decoupled, so the
// tracked precision loss stays near one digit per degree.
json fuchs_demo(const LabOptions& o) {
    Ctx ctx = make_context(o.p, o.precision);
    std::mt19937_64 rng(o.seed);
    std::vector<PadicScalar> exps{PadicScalar::from_integer(ctx, 0),
                                  PadicScalar::from_rational(ctx, Rational(1, 3))};
    long tail = 8;
    SeriesMat a;
    for (long d = 0; d <= tail; ++d) {
        Mat c(ctx, 2, 2);
        if (d == 0) {
            c.at(0, 0) = exps[0];
            c.at(1, 1) = exps[1];
        } else {
            c.at(0, 0) = PadicScalar::from_integer(ctx, rand_small(rng));
            c.at(1, 1) = PadicScalar::from_integer(ctx, rand_small(rng));
        }
        a.push_back(std::move(c));
    }
    RegularConnection m = make_connection(ctx, std::move(a), exps);
    ClassifyReport cls = classify_exponents(exps, o.horizon);
    FuchsResult f = fuchs_solution(m, o.deg, o.window);
    maybe_csv(o, "fuchs_demo", f.cert.profile);
    json res;
    res["tail_degree"] = tail;
    res["exponents"] = {"0", "1/3"};
    res["one_sided_suspect"] = cls.one_sided_suspect;
    res["pairwise_suspect"] = cls.pairwise_suspect;
    res["residual_zero"] = smat_is_zero_at_precision(f.residual);
    res["certificate"] = io::certificate_to_json(f.cert);
    return res;
}

// One inhomogeneous rank-1 solve on each side of the dichotomy: a
// harmless exponent converges, a gap-number exponent lets v(lambda + m)
// spike and the solution valuations collapse at the matching degree.
json rank1_liouville(const LabOptions& o) {
    Ctx ctx = make_context(o.p, o.precision);
    int k = pick_gap_k(ctx);
    GapNumber g = gap_number(ctx, k);
    PadicScalar tame = PadicScalar::from_rational(ctx, Rational(1, 3));
    PadicScalar wild = -g.lambda;

    ClarkResult tame_run = clark_solve(rank1(ctx, tame), ones_column(ctx, 1, o.deg), o.deg,
                                       o.window);
    ClarkResult wild_run = clark_solve(rank1(ctx, wild), ones_column(ctx, 1, o.deg), o.deg,
                                       o.window);
    maybe_csv(o, "rank1_liouville_convergent", tame_run.cert.profile);
    maybe_csv(o, "rank1_liouville_divergent", wild_run.cert.profile);

    json res;
    res["gap_k"] = k;
    res["gap_exponents"] = g.exponents;
    res["convergent"] = {{"lambda", "1/3"},
                         {"type_of_minus_lambda",
                          io::type_estimate_to_json(estimate_type(-tame, o.horizon))},
                         {"certificate", io::certificate_to_json(tame_run.cert)}};
    res["divergent"] = {{"lambda", "-gap"},
                        {"type_of_minus_lambda",
                         io::type_estimate_to_json(estimate_type(g.lambda, o.horizon))},
                        {"certificate", io::certificate_to_json(wild_run.cert)}};
    return res;
}

// Direct sum O(lambda) + O(lambda + 1) with lambda = -gap: every
// pairwise difference is +-1, so the two-sided hypothesis holds, yet
// type(-lambda) = 0 makes the one-sided one fail — and the rank-1 solve
// on the lambda component indeed certifies divergence.
json nld_counterexample(const LabOptions& o) {
    Ctx ctx = make_context(o.p, o.precision);
    GapNumber g = gap_number(ctx, pick_gap_k(ctx));
    PadicScalar lam = -g.lambda;
    PadicScalar lam1 = lam + PadicScalar::one(ctx);
    ClassifyReport cls = classify_exponents({lam, lam1}, o.horizon);
    ClarkResult run = clark_solve(rank1(ctx, lam), ones_column(ctx, 1, o.deg), o.deg,
                                  o.window);
    maybe_csv(o, "nld_counterexample", run.cert.profile);
    json res;
    res["exponents"] = {"-gap", "-gap+1"};
    res["pairwise_suspect"] = cls.pairwise_suspect;
    res["one_sided_suspect"] = cls.one_sided_suspect;
    res["classify"] = io::classify_to_json(cls);
    res["clark_certificate"] = io::certificate_to_json(run.cert);
    return res;
}

// Non-split extension of the trivial rank-1 module by O(lambda) with
// cocycle b = sum z^i: the connection matrix is [[lambda, b], [0, 0]].
// Splitting it means solving the same rank-1 problem, so the horizontal
// section transport runs (the exponent difference is not an integer in
// the window) but its valuations collapse where v(i + lambda) spikes.
json nonsplit_extension(const LabOptions& o) {
    Ctx ctx = make_context(o.p, o.precision);
    GapNumber g = gap_number(ctx, pick_gap_k(ctx));
    PadicScalar lam = -g.lambda;
    SeriesMat a;
    for (long d = 0; d <= o.deg; ++d) {
        Mat c(ctx, 2, 2);
        if (d == 0) c.at(0, 0) = lam;
        c.at(0, 1) = PadicScalar::one(ctx);
        a.push_back(std::move(c));
    }
    RegularConnection m = make_connection(
        ctx, std::move(a), std::vector<PadicScalar>{lam, PadicScalar::from_integer(ctx, 0)});
    FuchsResult f = fuchs_solution(m, o.deg, o.window);
    ClarkResult cocycle = clark_solve(rank1(ctx, lam), ones_column(ctx, 1, o.deg), o.deg,
                                      o.window);
    maybe_csv(o, "nonsplit_extension_fuchs", f.cert.profile);
    maybe_csv(o, "nonsplit_extension_cocycle", cocycle.cert.profile);
    json res;
    res["exponents"] = {"-gap", "0"};
    res["fuchs_certificate"] = io::certificate_to_json(f.cert);
    res["fuchs_residual_zero"] = smat_is_zero_at_precision(f.residual);
    res["cocycle_certificate"] = io::certificate_to_json(cocycle.cert);
    return res;
}

// Degree-k data determines a prepared connection: pairs that agree mod
// z^{k+1} are gauge equivalent, and the reconstruction is exact.
json determinacy(const LabOptions& o) {
    Ctx ctx = make_context(o.p, o.precision);
    std::mt19937_64 rng(o.seed);
    long gauge_deg = std::min<long>(o.deg, 48);
    json instances = json::array();
    for (long k = 0; k <= 3; ++k) {
        std::vector<PadicScalar> exps{PadicScalar::from_integer(ctx, 0),
                                      PadicScalar::from_rational(ctx, Rational(1, 3))};
        SeriesMat shared;
        for (long d = 0; d <= k; ++d) {
            Mat c(ctx, 2, 2);
            if (d == 0) {
                c.at(0, 0) = exps[0];
                c.at(1, 1) = exps[1];
            } else {
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        c.at(i, j) = PadicScalar::from_integer(ctx, rand_small(rng));
            }
            shared.push_back(std::move(c));
        }
        SeriesMat b_mat = shared;
        for (long d = k + 1; d <= k + 4; ++d) {
            Mat c(ctx, 2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    c.at(i, j) = PadicScalar::from_integer(ctx, rand_small(rng));
            b_mat.push_back(std::move(c));
        }
        RegularConnection ma = make_connection(ctx, std::move(shared), exps);
        RegularConnection mb = make_connection(ctx, std::move(b_mat), exps);
        GaugeResult gr = gauge_equivalence(ma, mb, k, gauge_deg, o.window);
        instances.push_back({{"k", k},
                             {"residual_zero", smat_is_zero_at_precision(gr.residual)},
                             {"det_constant_unit", gr.det_constant_unit},
                             {"verdict", verdict_name(gr.cert.verdict)}});
    }
    json res;
    res["gauge_deg"] = gauge_deg;
    res["instances"] = std::move(instances);
    return res;
}

// de Rham dimensions across twists: only exponents hitting the
// nonpositive integers contribute, and large twists kill everything.
json cohomology_table(const LabOptions& o) {
    Ctx ctx = make_context(o.p, o.precision);
    json rows = json::array();
    auto add_row = [&](const std::string& label, const RegularConnection& m) {
        CohomologyReport r = cohomology_dims(m, o.window);
        rows.push_back({{"module", label}, {"h0", r.h0}, {"h1", r.h1}, {"n_used", r.n_used}});
    };
    add_row("O(0)", rank1(ctx, PadicScalar::from_integer(ctx, 0)));
    add_row("O(5)", rank1(ctx, PadicScalar::from_integer(ctx, 5)));
    add_row("O(-2)", rank1(ctx, PadicScalar::from_integer(ctx, -2)));
    {
        Mat a0 = Mat::zeros(ctx, 2, 2);
        std::vector<PadicScalar> exps{PadicScalar::from_integer(ctx, 0),
                                      PadicScalar::from_integer(ctx, 0)};
        add_row("trivial_rank2", make_connection(ctx, {a0}, exps));
    }
    RegularConnection base = rank1(ctx, PadicScalar::from_integer(ctx, 0));
    for (long n = 0; n <= 3; ++n)
        add_row("twist(O(0)," + std::to_string(n) + ")", twist(base, n));
    json res;
    res["rows"] = std::move(rows);
    return res;
}

} // namespace

std::vector<std::string> scenario_names() {
    return {"fuchs_demo",        "rank1_liouville", "nld_counterexample",
            "nonsplit_extension", "determinacy",     "cohomology_table"};
}

io::json run_scenario(const std::string& name, LabOptions opt) {
    if (const char* env = std::getenv("PCONN_SEED"))
        opt.seed = std::strtoul(env, nullptr, 10);
    json results;
    if (name == "fuchs_demo")
        results = fuchs_demo(opt);
    else if (name == "rank1_liouville")
        results = rank1_liouville(opt);
    else if (name == "nld_counterexample")
        results = nld_counterexample(opt);
    else if (name == "nonsplit_extension")
        results = nonsplit_extension(opt);
    else if (name == "determinacy")
        results = determinacy(opt);
    else if (name == "cohomology_table")
        results = cohomology_table(opt);
    else
        throw std::runtime_error("unknown scenario: " + name);
    json report;
    report["scenario"] = name;
    report["engine"] = kVersion;
    report["generated_at"] = utc_now();
    report["parameters"] = parameter_block(opt);
    report["results"] = std::move(results);
    return report;
}

LabOptions options_from_json(const io::json& j) {
    LabOptions o;
    if (j.contains("p")) o.p = j["p"].get<unsigned long>();
    if (j.contains("precision")) o.precision = j["precision"].get<long>();
    if (j.contains("deg")) o.deg = j["deg"].get<long>();
    if (j.contains("horizon")) o.horizon = j["horizon"].get<long>();
    if (j.contains("window")) o.window = j["window"].get<long>();
    if (j.contains("seed")) o.seed = j["seed"].get<unsigned long>();
    return o;
}

} // namespace pconn::lab
