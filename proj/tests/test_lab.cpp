#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#if __has_include(<sys/wait.h>)
#include <sys/wait.h>
#endif

#include "pconn/io.hpp"
#include "pconn/lab.hpp"

using namespace pconn;
using pconn::io::json;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
    fs::path dir = fs::temp_directory_path() / "pconn_lab_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(PCONN_BIN) + " " + args;
    cmd += stdout_file.empty() ? " > /dev/null" : " > " + stdout_file;
    cmd += " 2> /dev/null";
    int rc = std::system(cmd.c_str());
#ifdef WIFEXITED
    if (WIFEXITED(rc)) return WEXITSTATUS(rc);
#endif
    return rc;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(static_cast<bool>(in));
    json j;
    in >> j;
    return j;
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::string line;
    std::getline(in, line);
    return line;
}

RegularConnection scalar_line(const Ctx& ctx, const PadicScalar& lam, long trunc = 0) {
    Mat a0(ctx, 1, 1);
    a0.at(0, 0) = lam;
    SeriesMat a{a0};
    for (long d = 1; d <= trunc; ++d) a.push_back(Mat::zeros(ctx, 1, 1));
    return make_connection(ctx, std::move(a), std::vector<PadicScalar>{lam});
}

lab::LabOptions small_options() {
    lab::LabOptions o;
    o.precision = 256;
    o.deg = 40;
    o.horizon = 40;
    return o;
}

} // namespace

using lab::LabOptions;

TEST_CASE("the scenario catalogue") {
    std::vector<std::string> names = lab::scenario_names();
    CHECK(names.size() == 6);
    for (const char* want : {"fuchs_demo", "rank1_liouville", "nld_counterexample",
                             "nonsplit_extension", "determinacy", "cohomology_table"})
        CHECK(std::find(names.begin(), names.end(), want) != names.end());
    CHECK_THROWS_AS(lab::run_scenario("not_a_scenario", small_options()),
                    std::runtime_error);
}

TEST_CASE("cohomology table scenario matches the hand-computed dimensions") {
    json rep = lab::run_scenario("cohomology_table", small_options());
    CHECK(rep["scenario"] == "cohomology_table");
    CHECK(rep["parameters"]["precision"] == 256);
    const json& rows = rep["results"]["rows"];
    REQUIRE(rows.size() == 8);
    auto row = [&](const std::string& label) -> const json& {
        for (const json& r : rows)
            if (r["module"] == label) return r;
        static json missing;
        return missing;
    };
    CHECK(row("O(0)")["h0"] == 1);
    CHECK(row("O(0)")["h1"] == 1);
    CHECK(row("O(0)")["n_used"] == 1);
    CHECK(row("O(5)")["h0"] == 0);
    CHECK(row("O(-2)")["h0"] == 1);
    CHECK(row("O(-2)")["n_used"] == 3);
    CHECK(row("trivial_rank2")["h0"] == 2);
    CHECK(row("trivial_rank2")["h1"] == 2);
    CHECK(row("twist(O(0),0)")["h0"] == 1);
    CHECK(row("twist(O(0),2)")["h0"] == 0);
}

TEST_CASE("determinacy scenario reconstructs every gauge exactly") {
    LabOptions o = small_options();
    o.deg = 32;
    json rep = lab::run_scenario("determinacy", o);
    const json& inst = rep["results"]["instances"];
    REQUIRE(inst.size() == 4);
    for (const json& i : inst) {
        CHECK(i["residual_zero"] == true);
        CHECK(i["det_constant_unit"] == true);
        CHECK(i["verdict"] == "CONVERGENT_UP_TO_D");
    }
}

TEST_CASE("fuchs demo certifies convergence with a clean residual") {
    LabOptions o = small_options();
    json rep = lab::run_scenario("fuchs_demo", o);
    const json& res = rep["results"];
    CHECK(res["residual_zero"] == true);
    CHECK(res["one_sided_suspect"] == false);
    CHECK(res["pairwise_suspect"] == false);
    CHECK(res["certificate"]["verdict"] == "CONVERGENT_UP_TO_D");
}

TEST_CASE("the counterexample scenario trips only the one-sided test") {
    json rep = lab::run_scenario("nld_counterexample", small_options());
    const json& res = rep["results"];
    CHECK(res["one_sided_suspect"] == true);
    CHECK(res["pairwise_suspect"] == false);
    CHECK(res.contains("clark_certificate"));
}

TEST_CASE("scenario reports are deterministic for a fixed seed") {
    LabOptions o = small_options();
    o.deg = 30;
    o.horizon = 30;
    json a = lab::run_scenario("rank1_liouville", o);
    json b = lab::run_scenario("rank1_liouville", o);
    a.erase("generated_at");
    b.erase("generated_at");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("scenarios write RFC-style CSV profiles on request") {
    fs::path dir = work_dir() / "csvs";
    fs::remove_all(dir);
    LabOptions o = small_options();
    o.deg = 30;
    o.horizon = 30;
    o.csv_dir = dir.string();
    lab::run_scenario("rank1_liouville", o);
    fs::path csv = dir / "rank1_liouville_convergent.csv";
    REQUIRE(fs::exists(csv));
    CHECK(first_line(csv) == "degree,valuation\r");
}

TEST_CASE("connection JSON round trip") {
    Ctx ctx = make_context(2, 256);
    Mat a0(ctx, 2, 2), a1(ctx, 2, 2);
    a0.at(0, 0) = PadicScalar::from_rational(ctx, Rational(1, 3));
    a0.at(1, 1) = PadicScalar::from_integer(ctx, -2);
    a1.at(0, 1) = PadicScalar::from_integer(ctx, 7);
    RegularConnection m = make_connection(
        ctx, SeriesMat{a0, a1},
        std::vector<PadicScalar>{a0.at(0, 0), a0.at(1, 1)});

    fs::path file = work_dir() / "roundtrip.json";
    io::save_connection(m, file.string());
    RegularConnection back = io::load_connection(file.string());
    CHECK(back.rank == 2);
    CHECK(back.trunc() == 1);
    CHECK(back.ctx->p() == 2);
    CHECK(back.ctx->precision() == 256);
    for (long d = 0; d <= 1; ++d)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(near_equal(back.a[d].at(i, j), m.a[d].at(i, j)));
    REQUIRE(back.declared_exponents.has_value());
    CHECK(near_equal((*back.declared_exponents)[0], a0.at(0, 0)));
    CHECK(near_equal((*back.declared_exponents)[1], a0.at(1, 1)));
}

TEST_CASE("cli: scenario listing and version") {
    fs::path out = work_dir() / "list.txt";
    CHECK(run_cli("list-scenarios", out.string()) == 0);
    std::ifstream in(out);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("fuchs_demo") != std::string::npos);
    CHECK(all.find("cohomology_table") != std::string::npos);

    fs::path ver = work_dir() / "version.txt";
    CHECK(run_cli("--version", ver.string()) == 0);
    CHECK(first_line(ver).find("pconn 0.1.0") != std::string::npos);
}

TEST_CASE("cli: type estimate finds the gap-number spike") {
    fs::path out = work_dir() / "type_gap.json";
    fs::path csv = work_dir() / "type_gap.csv";
    int rc = run_cli("type --lambda gap:4 --terms 300 --csv " + csv.string() +
                     " --out " + out.string());
    REQUIRE(rc == 0);
    json rep = read_json(out);
    CHECK(rep["suspect"] == true);
    CHECK(rep["slope_criterion"]["verdict"] == "LIOUVILLE_SUSPECT");
    bool found = false;
    for (const json& s : rep["estimate"]["significant"])
        if (s["m"] == 262 && s["v"] == 768) found = true;
    CHECK(found);
    CHECK(first_line(csv) == "degree,valuation\r");

    fs::path neg = work_dir() / "type_neg_gap.json";
    REQUIRE(run_cli("type --lambda -gap:4 --terms 300 --out " + neg.string()) == 0);
    json nrep = read_json(neg);
    CHECK(nrep["suspect"] == false);
    CHECK(nrep["estimate"]["bound"].get<double>() >= 0.9);
}

TEST_CASE("cli: usage errors exit with 2") {
    CHECK(run_cli("type --lambda gap:4 --no-such-flag") == 2);
    CHECK(run_cli("type") == 2);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("solve --conn /nonexistent/conn.json --deg 5") == 2);
}

TEST_CASE("cli: engine refusals exit with 1") {
    Ctx ctx = make_context(2, 256);
    fs::path bad = work_dir() / "line_minus2.json";
    io::save_connection(scalar_line(ctx, PadicScalar::from_integer(ctx, -2)), bad.string());
    CHECK(run_cli("solve --conn " + bad.string() + " --deg 10") == 1);
}

TEST_CASE("cli: solve, fuchs and cohomology round trips") {
    Ctx ctx = make_context(2, 256);
    fs::path conn = work_dir() / "line_third.json";
    io::save_connection(scalar_line(ctx, PadicScalar::from_rational(ctx, Rational(1, 3))),
                        conn.string());

    fs::path sout = work_dir() / "solve.json";
    fs::path scsv = work_dir() / "solve.csv";
    REQUIRE(run_cli("solve --conn " + conn.string() + " --deg 20 --csv " + scsv.string() +
                    " --out " + sout.string()) == 0);
    json srep = read_json(sout);
    CHECK(srep["residual_zero"] == true);
    CHECK(srep["certificate"]["verdict"] == "CONVERGENT_UP_TO_D");
    CHECK(first_line(scsv) == "degree,valuation\r");

    fs::path fout = work_dir() / "fuchs.json";
    REQUIRE(run_cli("fuchs --conn " + conn.string() + " --deg 20 --out " + fout.string()) ==
            0);
    json frep = read_json(fout);
    CHECK(frep["residual_zero"] == true);
    CHECK(frep["certificate"]["verdict"] == "CONVERGENT_UP_TO_D");

    fs::path m2 = work_dir() / "line_minus2b.json";
    io::save_connection(scalar_line(ctx, PadicScalar::from_integer(ctx, -2)), m2.string());
    fs::path cout_path = work_dir() / "coh.json";
    REQUIRE(run_cli("cohomology --conn " + m2.string() + " --out " + cout_path.string()) ==
            0);
    json crep = read_json(cout_path);
    CHECK(crep["h0"] == 1);
    CHECK(crep["h1"] == 1);
    CHECK(crep["n_used"] == 3);
}

TEST_CASE("cli: gauge reconstruction between congruent files") {
    Ctx ctx = make_context(2, 256);
    PadicScalar third = PadicScalar::from_rational(ctx, Rational(1, 3));
    Mat a0(ctx, 1, 1), a1(ctx, 1, 1), b1(ctx, 1, 1), b2(ctx, 1, 1);
    a0.at(0, 0) = third;
    a1.at(0, 0) = PadicScalar::one(ctx);
    b1.at(0, 0) = PadicScalar::one(ctx);
    b2.at(0, 0) = PadicScalar::from_integer(ctx, 2);
    RegularConnection ma =
        make_connection(ctx, SeriesMat{a0, a1}, std::vector<PadicScalar>{third});
    RegularConnection mb =
        make_connection(ctx, SeriesMat{a0, b1, b2}, std::vector<PadicScalar>{third});

    fs::path fa = work_dir() / "gauge_a.json";
    fs::path fb = work_dir() / "gauge_b.json";
    io::save_connection(ma, fa.string());
    io::save_connection(mb, fb.string());
    fs::path out = work_dir() / "gauge.json";
    REQUIRE(run_cli("gauge --conn " + fa.string() + " --other " + fb.string() +
                    " --k 0 --deg 20 --out " + out.string()) == 0);
    json rep = read_json(out);
    CHECK(rep["residual_zero"] == true);
    CHECK(rep["det_constant_unit"] == true);
    CHECK(rep["certificate"]["verdict"] == "CONVERGENT_UP_TO_D");
}

TEST_CASE("cli: scenario runner accepts names and JSON descriptions") {
    fs::path out = work_dir() / "run_table.json";
    REQUIRE(run_cli("run cohomology_table --out " + out.string()) == 0);
    json rep = read_json(out);
    CHECK(rep["scenario"] == "cohomology_table");
    CHECK(rep["results"]["rows"].size() == 8);

    fs::path desc = work_dir() / "desc.json";
    {
        std::ofstream f(desc);
        f << R"({"scenario": "cohomology_table", "precision": 128})" << '\n';
    }
    fs::path out2 = work_dir() / "run_desc.json";
    REQUIRE(run_cli("run " + desc.string() + " --out " + out2.string()) == 0);
    json rep2 = read_json(out2);
    CHECK(rep2["parameters"]["precision"] == 128);

    CHECK(run_cli("run no_such_scenario") == 2);
}
