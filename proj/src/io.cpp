#include "pconn/io.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "pconn/errors.hpp"

namespace pconn::io {

namespace {

mpz_class mpz_from_decimal(const std::string& s) {
    if (s.empty()) throw std::runtime_error("empty integer literal");
    size_t start = (s[0] == '-') ? 1 : 0;
    if (start == s.size()) throw std::runtime_error("bare sign is not an integer");
    for (size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw std::runtime_error("bad integer literal: " + s);
    return mpz_class(s, 10);
}

std::string json_what(const json& j) { return j.dump(); }

} // namespace

json scalar_to_json(const PadicScalar& x) {
    json j;
    if (x.is_zero_at_precision()) {
        j["v"] = ">=" + std::to_string(x.precision());
        j["u"] = "0";
        return j;
    }
    j["v"] = x.v();
    j["u"] = x.unit().get_str();
    if (x.precision() < x.context()->precision()) j["prec"] = x.precision();
    return j;
}

PadicScalar scalar_from_json(const Ctx& ctx, const json& j) {
    if (j.is_string()) return scalar_from_rational_string(ctx, j.get<std::string>());
    if (!j.is_object() || !j.contains("v") || !j.contains("u"))
        throw std::runtime_error("scalar json needs \"v\" and \"u\": " + json_what(j));
    const json& jv = j["v"];
    if (jv.is_string()) {
        std::string s = jv.get<std::string>();
        if (s.rfind(">=", 0) != 0)
            throw std::runtime_error("scalar \"v\" string must look like \">=N\": " + s);
        return PadicScalar::at_least(ctx, std::stol(s.substr(2)));
    }
    long v = jv.get<long>();
    mpz_class u = mpz_from_decimal(j["u"].get<std::string>());
    PadicScalar x = (v >= 0)
        ? PadicScalar::from_integer(ctx, u * ctx->pow(v))
        : PadicScalar::from_rational(ctx, u, ctx->pow(-v));
    if (j.contains("prec")) {
        long prec = j["prec"].get<long>();
        if (prec < ctx->precision()) x = x + PadicScalar::at_least(ctx, prec);
    }
    return x;
}

PadicScalar scalar_from_rational_string(const Ctx& ctx, const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return PadicScalar::from_integer(ctx, mpz_from_decimal(s));
    mpz_class num = mpz_from_decimal(s.substr(0, slash));
    mpz_class den = mpz_from_decimal(s.substr(slash + 1));
    if (den == 0) throw ZeroDenominator("rational literal with zero denominator: " + s);
    return PadicScalar::from_rational(ctx, num, den);
}

std::string scalar_to_rational_string(const PadicScalar& x) {
    if (x.is_zero_at_precision()) return "0";
    long v = x.v();
    if (v >= 0) {
        mpz_class n = x.unit() * x.context()->pow(v);
        return n.get_str();
    }
    return x.unit().get_str() + "/" + x.context()->pow(-v).get_str();
}

json connection_to_json(const RegularConnection& m) {
    json j;
    j["p"] = m.ctx->p();
    j["precision"] = m.ctx->precision();
    j["trunc"] = m.trunc();
    j["rank"] = m.rank;
    json mats = json::array();
    for (const Mat& a : m.a) {
        json rows = json::array();
        for (int i = 0; i < m.rank; ++i) {
            json row = json::array();
            for (int k = 0; k < m.rank; ++k)
                row.push_back(scalar_to_rational_string(a.at(i, k)));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    j["matrix"] = std::move(mats);
    if (m.declared_exponents) {
        json exps = json::array();
        for (const PadicScalar& e : *m.declared_exponents)
            exps.push_back(scalar_to_rational_string(e));
        j["exponents"] = std::move(exps);
    }
    return j;
}

RegularConnection connection_from_json(const json& j) {
    for (const char* key : {"p", "precision", "rank", "matrix"})
        if (!j.contains(key))
            throw std::runtime_error(std::string("connection json missing \"") + key + "\"");
    Ctx ctx = make_context(j["p"].get<unsigned long>(), j["precision"].get<long>());
    int rank = j["rank"].get<int>();
    if (rank <= 0) throw std::runtime_error("connection rank must be positive");
    const json& mats = j["matrix"];
    if (!mats.is_array() || mats.empty())
        throw std::runtime_error("connection \"matrix\" must be a nonempty array");
    long trunc = j.contains("trunc") ? j["trunc"].get<long>()
                                     : static_cast<long>(mats.size()) - 1;
    SeriesMat a;
    a.reserve(trunc + 1);
    for (long d = 0; d <= trunc; ++d) {
        Mat coeff = Mat::zeros(ctx, rank, rank);
        if (d < static_cast<long>(mats.size())) {
            const json& rows = mats[d];
            if (!rows.is_array() || static_cast<int>(rows.size()) != rank)
                throw std::runtime_error("matrix degree " + std::to_string(d) +
                                         " is not " + std::to_string(rank) + " rows");
            for (int i = 0; i < rank; ++i) {
                if (static_cast<int>(rows[i].size()) != rank)
                    throw std::runtime_error("matrix degree " + std::to_string(d) +
                                             " row " + std::to_string(i) + " has wrong width");
                for (int k = 0; k < rank; ++k)
                    coeff.at(i, k) = scalar_from_json(ctx, rows[i][k]);
            }
        }
        a.push_back(std::move(coeff));
    }
    std::optional<std::vector<PadicScalar>> declared;
    if (j.contains("exponents")) {
        std::vector<PadicScalar> exps;
        for (const json& e : j["exponents"]) exps.push_back(scalar_from_json(ctx, e));
        if (static_cast<int>(exps.size()) != rank)
            throw std::runtime_error("\"exponents\" must list one value per rank");
        declared = std::move(exps);
    }
    return make_connection(ctx, std::move(a), std::move(declared));
}

RegularConnection load_connection(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return connection_from_json(j);
}

void save_connection(const RegularConnection& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << connection_to_json(m).dump(2) << '\n';
}

void write_profile_csv(std::ostream& os, const std::vector<ProfilePoint>& profile) {
    os << "degree,valuation\r\n";
    for (const ProfilePoint& pt : profile)
        os << pt.degree << ',' << pt.valuation.to_string() << "\r\n";
}

void write_profile_csv(const std::string& path, const std::vector<ProfilePoint>& profile) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_profile_csv(out, profile);
}

json certificate_to_json(const SolveCertificate& c) {
    json j;
    j["verdict"] = verdict_name(c.verdict);
    j["slope"] = rational_to_string(c.slope);
    j["intercept"] = rational_to_string(c.intercept);
    j["loss"] = c.loss;
    j["exhausted_at"] = c.exhausted_at;
    json ws = json::array();
    for (const WindowSlope& w : c.window_slopes)
        ws.push_back({{"window", w.window},
                      {"degree_begin", w.degree_begin},
                      {"degree_end", w.degree_end},
                      {"slope", w.slope}});
    j["window_slopes"] = std::move(ws);
    json prof = json::array();
    for (const ProfilePoint& pt : c.profile)
        prof.push_back({{"degree", pt.degree}, {"valuation", pt.valuation.to_string()}});
    j["profile"] = std::move(prof);
    return j;
}

json type_estimate_to_json(const TypeEstimate& e) {
    json j;
    j["horizon"] = e.horizon;
    j["bound"] = e.bound;
    j["observed_sup"] = rational_to_string(e.observed_sup);
    j["has_significant"] = e.has_significant;
    j["identical_at_precision"] = e.identical_at_precision;
    json spikes = json::array();
    for (const TypeSpike& s : e.spikes) spikes.push_back({{"m", s.m}, {"v", s.v}});
    j["spikes"] = std::move(spikes);
    json sig = json::array();
    for (const TypeSpike& s : e.significant) sig.push_back({{"m", s.m}, {"v", s.v}});
    j["significant"] = std::move(sig);
    j["saturated"] = e.saturated;
    return j;
}

json slope_report_to_json(const SlopeReport& r) {
    json j;
    j["verdict"] = r.verdict == SlopeVerdict::LiouvilleSuspect ? "LIOUVILLE_SUSPECT"
                                                               : "POSITIVE_TYPE_CONSISTENT";
    j["s_star"] = r.s_star;
    j["early_max"] = r.early_max;
    j["late_max"] = r.late_max;
    j["margin"] = r.margin;
    return j;
}

json classify_to_json(const ClassifyReport& r) {
    json j;
    j["threshold"] = r.threshold;
    j["one_sided_suspect"] = r.one_sided_suspect;
    j["pairwise_suspect"] = r.pairwise_suspect;
    json one = json::array();
    for (const TypeEstimate& e : r.one_sided) one.push_back(type_estimate_to_json(e));
    j["one_sided"] = std::move(one);
    json pw = json::array();
    for (const auto& [ij, est] : r.pairwise)
        pw.push_back({{"i", ij.first}, {"j", ij.second},
                      {"estimate", type_estimate_to_json(est)}});
    j["pairwise"] = std::move(pw);
    return j;
}

json cohomology_to_json(const CohomologyReport& r) {
    return {{"h0", r.h0}, {"h1", r.h1}, {"n_used", r.n_used}};
}

json exponent_report_to_json(const ExponentReport& r) {
    json j;
    switch (r.source) {
        case ExponentSource::Declared: j["source"] = "declared"; break;
        case ExponentSource::Triangular: j["source"] = "triangular"; break;
        case ExponentSource::Hensel: j["source"] = "hensel"; break;
    }
    j["window"] = r.window;
    j["weakly_prepared"] = r.weakly_prepared;
    json exps = json::array();
    for (const PadicScalar& e : r.exponents) exps.push_back(scalar_to_json(e));
    j["exponents"] = std::move(exps);
    json hits = json::array();
    for (const auto& h : r.integer_in_window_hits)
        hits.push_back(h ? json(*h) : json(nullptr));
    j["integer_in_window_hits"] = std::move(hits);
    json diffs = json::array();
    for (const auto& [i, k, n] : r.integer_differences)
        diffs.push_back({{"i", i}, {"j", k}, {"n", n}});
    j["integer_differences"] = std::move(diffs);
    return j;
}

} // namespace pconn::io
