#include "strengthlab/json_io.hpp"

#include <sstream>

namespace strengthlab {

namespace {

json number_or_inf(bool infinite, double value) {
    if (infinite) return "inf";
    return value;
}

}  // namespace

json bias_report_json(const BiasReport& rep, std::optional<double> arank_value, bool arank_infinite,
                      bool has_arank, bool with_timing) {
    json j;
    j["schema"] = "strengthlab/bias_report/v1";
    j["mode"] = rep.mode == BiasMode::exact ? "exact" : "mc";
    j["q"] = rep.q;
    j["n"] = rep.n;
    if (rep.exact)
        j["counts"] = rep.exact->counts();
    else
        j["counts"] = nullptr;
    j["value_re"] = rep.value.real();
    j["value_im"] = rep.value.imag();
    j["magnitude"] = rep.magnitude;
    if (has_arank)
        j["analytic_rank"] = number_or_inf(arank_infinite, arank_value.value_or(0.0));
    else
        j["analytic_rank"] = nullptr;
    j["ci_radius"] = rep.ci_radius;
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
    j["threads"] = rep.threads;
    j["elapsed_ms"] = with_timing ? rep.elapsed_ms : 0.0;
    return j;
}

json gowers_report_json(const GowersResult& res, uint32_t d, const std::string& path, uint64_t q,
                        uint32_t n) {
    json j;
    j["schema"] = "strengthlab/gowers_report/v1";
    j["d"] = d;
    j["path"] = path;
    j["q"] = q;
    j["n"] = n;
    j["norm"] = res.norm;
    j["counts"] = res.sum.counts();
    j["domain_vars"] = res.domain_vars;
    return j;
}

json fibers_report_json(const FiberDistribution& dist, bool include_fourier) {
    const Field& f = *dist.field;
    json j;
    j["schema"] = "strengthlab/fibers_report/v1";
    j["q"] = f.q();
    j["n"] = dist.n;
    j["c"] = dist.c;
    j["total"] = dist.total;
    json fibers = json::array();
    std::vector<uint32_t> lambda(dist.c);
    for (uint64_t rank = 0; rank < dist.fibers.size(); ++rank) {
        uint64_t rest = rank;
        json lam = json::array();
        for (uint32_t i = 0; i < dist.c; ++i) {
            lam.push_back(f.element_string(uint32_t(rest % f.q())));
            rest /= f.q();
        }
        fibers.push_back(json{{"lambda", lam}, {"count", dist.fibers[rank]}});
    }
    j["fibers"] = fibers;
    if (include_fourier) {
        auto coeffs = fiber_fourier(dist);
        json arr = json::array();
        std::vector<uint32_t> l(dist.c);
        for (uint64_t rank = 0; rank < coeffs.size(); ++rank) {
            uint64_t rest = rank;
            json lv = json::array();
            for (uint32_t i = 0; i < dist.c; ++i) {
                lv.push_back(f.element_string(uint32_t(rest % f.q())));
                rest /= f.q();
            }
            arr.push_back(json{{"l", lv}, {"re", coeffs[rank].real()}, {"im", coeffs[rank].imag()}});
        }
        j["fourier"] = arr;
    }
    return j;
}

json family_rank_report_json(const MinArankResult& res) {
    json j;
    j["schema"] = "strengthlab/family_rank_report/v1";
    j["min_arank"] = number_or_inf(res.infinite, res.value);
    j["mode"] = res.mode == BiasMode::exact ? "exact" : "mc";
    if (res.argmin) {
        j["argmin"] = res.argmin->str();
        json cs = json::array();
        for (uint32_t c : res.argmin_coeffs) cs.push_back(res.argmin->field().element_string(c));
        j["coeffs"] = cs;
    } else {
        j["argmin"] = nullptr;
        j["coeffs"] = json::array();
    }
    return j;
}

json shift_search_report_json(const ShiftSearchResult& res, const Field& f) {
    json j;
    j["schema"] = "strengthlab/search_report/v1";
    json shifts = json::array();
    for (const auto& h : res.shifts) {
        json pt = json::array();
        for (uint32_t c : h) pt.push_back(f.element_string(c));
        shifts.push_back(pt);
    }
    j["shifts"] = shifts;
    j["score"] = number_or_inf(res.score_infinite, res.score);
    j["scorer"] = res.scorer;
    j["trials"] = res.trials;
    j["seed"] = res.seed;
    return j;
}

json certificate_json(const PartitionCertificate& cert) {
    json j;
    j["schema"] = "strengthlab/certificate/v1";
    j["blocks"] = cert.blocks;
    json summands = json::array();
    for (const auto& s : cert.summands) {
        summands.push_back(json{{"J", s.blocks}, {"Q", s.q_factor.str()}, {"R", s.r_factor.str()}});
    }
    j["summands"] = summands;
    return j;
}

PartitionCertificate certificate_from_json(const json& j, const FieldPtr& field, uint32_t width) {
    PartitionCertificate cert;
    cert.blocks = j.at("blocks").get<uint32_t>();
    uint32_t nvars = cert.blocks * width;
    for (const auto& s : j.at("summands")) {
        cert.summands.push_back(
            CertSummand{s.at("J").get<std::vector<uint32_t>>(),
                        parse_polynomial(s.at("Q").get<std::string>(), field, nvars),
                        parse_polynomial(s.at("R").get<std::string>(), field, nvars)});
    }
    return cert;
}

json variety_report_json(const VarietyReport& rep, bool with_timing) {
    json j;
    j["schema"] = "strengthlab/variety_report/v1";
    auto dim_json = [](const DimEstimate& d) -> json {
        if (d.empty) return json{{"empty", true}};
        return json{{"empty", false}, {"value", d.value}, {"low_confidence", d.low_confidence},
                    {"residual", d.residual}};
    };
    j["dim_x"] = dim_json(rep.dim_x);
    j["dim_sing"] = dim_json(rep.dim_sing);
    j["smooth"] = rep.smooth;
    if (rep.smooth)
        j["kappa"] = "smooth";
    else if (rep.kappa)
        j["kappa"] = *rep.kappa;
    else
        j["kappa"] = nullptr;
    json rows = json::array();
    for (const auto& r : rep.table.rows) {
        json row{{"s", r.s}, {"q_s", r.q_s}, {"n_variety", r.n_variety}};
        row["n_singular"] = r.n_singular ? json(*r.n_singular) : json(nullptr);
        row["elapsed_ms"] = with_timing ? r.elapsed_ms : 0.0;
        rows.push_back(row);
    }
    j["table"] = rows;
    j["warnings"] = rep.warnings;
    return j;
}

std::string point_count_csv(const PointCountTable& table, bool with_timing) {
    std::ostringstream out;
    out << "s,q_s,N_variety,N_singular,elapsed_ms\n";
    for (const auto& r : table.rows) {
        out << r.s << "," << r.q_s << "," << r.n_variety << ",";
        if (r.n_singular)
            out << *r.n_singular;
        else
            out << "";
        out << "," << (with_timing ? r.elapsed_ms : 0.0) << "\n";
    }
    return out.str();
}

json gen_sidecar_json(const std::string& kind, const json& params,
                      const std::vector<std::string>& names) {
    json j;
    j["schema"] = "strengthlab/gen_sidecar/v1";
    j["kind"] = kind;
    j["params"] = params;
    json vars = json::array();
    for (size_t i = 0; i < names.size(); ++i)
        vars.push_back(json{{"index", i + 1}, {"name", names[i]}});
    j["variables"] = vars;
    return j;
}

namespace {

bool type_matches(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

std::string validate_impl(const json& v, const json& sch, const std::string& path) {
    if (sch.contains("const")) {
        if (v != sch["const"]) return path + ": const mismatch";
    }
    if (sch.contains("enum")) {
        bool ok = false;
        for (const auto& e : sch["enum"]) ok = ok || v == e;
        if (!ok) return path + ": not in enum";
    }
    if (sch.contains("anyOf")) {
        for (const auto& sub : sch["anyOf"])
            if (validate_impl(v, sub, path).empty()) return "";
        return path + ": no anyOf branch matched";
    }
    if (sch.contains("type")) {
        const auto& t = sch["type"];
        bool ok = false;
        if (t.is_string())
            ok = type_matches(v, t.get<std::string>());
        else
            for (const auto& tt : t) ok = ok || type_matches(v, tt.get<std::string>());
        if (!ok) return path + ": wrong type";
    }
    if (v.is_object()) {
        if (sch.contains("required"))
            for (const auto& k : sch["required"])
                if (!v.contains(k.get<std::string>()))
                    return path + ": missing required key " + k.get<std::string>();
        const json* props = sch.contains("properties") ? &sch["properties"] : nullptr;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (props && props->contains(it.key())) {
                auto r = validate_impl(it.value(), (*props)[it.key()], path + "/" + it.key());
                if (!r.empty()) return r;
            } else if (sch.contains("additionalProperties") && sch["additionalProperties"] == false) {
                return path + ": unexpected key " + it.key();
            }
        }
    }
    if (v.is_array() && sch.contains("items")) {
        size_t i = 0;
        for (const auto& el : v) {
            auto r = validate_impl(el, sch["items"], path + "/" + std::to_string(i++));
            if (!r.empty()) return r;
        }
    }
    return "";
}

}  // namespace

std::string validate_against_schema(const json& value, const json& schema) {
    return validate_impl(value, schema, "$");
}

}  // namespace strengthlab
