#include "tamegal/lmfdbio.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

namespace tamegal {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    throw malformed_profile(path + ": " + msg);
}

Int int_field(const json& v, const std::string& path) {
    if (v.is_number_integer()) return Int(v.get<long>());
    if (v.is_string()) {
        try {
            return Int(v.get<std::string>());
        } catch (const std::invalid_argument&) {
            bad(path, "not a decimal integer");
        }
    }
    bad(path, "expected an integer or decimal string");
}

unsigned uint_field(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long>() < 0)
        bad(path, "expected a nonnegative integer");
    return static_cast<unsigned>(v.get<long>());
}

poly_z poly_field(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() < 2)
        bad(path, "expected a coefficient array of degree at least 1");
    poly_z out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(int_field(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

nf_elem coords_field(const json& v, const std::string& path) {
    if (!v.is_array()) bad(path, "expected an array of [num, den] pairs");
    nf_elem u;
    for (size_t i = 0; i < v.size(); ++i) {
        std::string p = path + "[" + std::to_string(i) + "]";
        const json& pr = v[i];
        if (!pr.is_array() || pr.size() != 2) bad(p, "expected a [num, den] pair");
        rat c{int_field(pr[0], p + "[0]"), int_field(pr[1], p + "[1]")};
        if (c.den <= 0) bad(p, "denominator must be positive");
        u.push_back(c);
    }
    return u;
}

number_field_profile record_to_profile(const std::string& label,
                                       const json& rec,
                                       const std::string& path) {
    if (!rec.is_object()) bad(path, "expected an object");
    number_field_profile F;
    F.label = label;
    if (rec.contains("poly"))
        F.defining = poly_field(rec["poly"], path + ".poly");
    else if (rec.contains("coeffs"))
        F.defining = poly_field(rec["coeffs"], path + ".coeffs");
    else
        bad(path + ".poly", "missing");
    F.degree = static_cast<unsigned>(F.defining.size() - 1);
    if (!rec.contains("r2")) bad(path + ".r2", "missing");
    F.r2 = uint_field(rec["r2"], path + ".r2");
    if (rec.contains("r1"))
        F.r1 = uint_field(rec["r1"], path + ".r1");
    else if (F.degree >= 2 * F.r2)
        F.r1 = F.degree - 2 * F.r2;
    else
        bad(path + ".r2", "exceeds half the degree");
    if (rec.contains("class_number")) {
        F.class_number = int_field(rec["class_number"], path + ".class_number");
        if (F.class_number < 1) bad(path + ".class_number", "must be positive");
    } else {
        F.class_number = 0; /* not recorded */
    }
    if (rec.contains("class_group")) {
        const json& cg = rec["class_group"];
        if (!cg.is_array()) bad(path + ".class_group", "expected an array");
        for (size_t i = 0; i < cg.size(); ++i)
            F.class_group.push_back(int_field(
                cg[i], path + ".class_group[" + std::to_string(i) + "]"));
    }
    if (!rec.contains("torsion_order")) bad(path + ".torsion_order", "missing");
    F.torsion_order = uint_field(rec["torsion_order"], path + ".torsion_order");
    if (rec.contains("torsion_generator"))
        F.torsion_generator =
            coords_field(rec["torsion_generator"], path + ".torsion_generator");
    if (rec.contains("fundamental_units")) {
        const json& fu = rec["fundamental_units"];
        if (!fu.is_array()) bad(path + ".fundamental_units", "expected an array");
        for (size_t i = 0; i < fu.size(); ++i)
            F.fundamental_units.push_back(coords_field(
                fu[i], path + ".fundamental_units[" + std::to_string(i) + "]"));
    }
    if (rec.contains("ramified_residues")) {
        const json& rr = rec["ramified_residues"];
        if (!rr.is_array()) bad(path + ".ramified_residues", "expected an array");
        for (size_t i = 0; i < rr.size(); ++i) {
            std::string p = path + ".ramified_residues[" + std::to_string(i) + "]";
            const json& e = rr[i];
            if (!e.is_object()) bad(p, "expected an object");
            ramified_residue R;
            if (!e.contains("ell")) bad(p + ".ell", "missing");
            R.ell = int_field(e["ell"], p + ".ell");
            if (!e.contains("poly")) bad(p + ".poly", "missing");
            R.poly = poly_field(e["poly"], p + ".poly");
            if (!e.contains("unit_images")) bad(p + ".unit_images", "missing");
            const json& im = e["unit_images"];
            if (!im.is_array()) bad(p + ".unit_images", "expected an array");
            for (size_t k = 0; k < im.size(); ++k) {
                std::string pk = p + ".unit_images[" + std::to_string(k) + "]";
                const json& g = im[k];
                if (!g.is_array()) bad(pk, "expected a coefficient array");
                fp_poly img;
                for (size_t c = 0; c < g.size(); ++c)
                    img.push_back(
                        int_field(g[c], pk + "[" + std::to_string(c) + "]"));
                R.unit_images.push_back(std::move(img));
            }
            F.ramified.push_back(std::move(R));
        }
    }
    return F;
}

json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return json(v.get_si());
    return json(v.get_str());
}

json coords_to_json(const nf_elem& u) {
    json out = json::array();
    for (auto& c : u)
        out.push_back(json::array({c.num.get_str(), c.den.get_str()}));
    return out;
}

json profile_to_record(const number_field_profile& F) {
    json rec = json::object();
    if (!F.label.empty()) rec["label"] = F.label;
    json poly = json::array();
    for (auto& c : F.defining) poly.push_back(int_to_json(c));
    rec["poly"] = poly;
    rec["r1"] = F.r1;
    rec["r2"] = F.r2;
    if (F.class_number > 0) rec["class_number"] = F.class_number.get_str();
    if (!F.class_group.empty() || F.class_number == 1) {
        json cg = json::array();
        for (auto& inv : F.class_group) cg.push_back(int_to_json(inv));
        rec["class_group"] = cg;
    }
    rec["torsion_order"] = F.torsion_order;
    if (!F.torsion_generator.empty())
        rec["torsion_generator"] = coords_to_json(F.torsion_generator);
    if (!F.fundamental_units.empty() || F.unit_rank() == 0) {
        json fu = json::array();
        for (auto& u : F.fundamental_units) fu.push_back(coords_to_json(u));
        rec["fundamental_units"] = fu;
    }
    if (!F.ramified.empty()) {
        json rr = json::array();
        for (auto& R : F.ramified) {
            json e = json::object();
            e["ell"] = int_to_json(R.ell);
            json p = json::array();
            for (auto& c : R.poly) p.push_back(int_to_json(c));
            e["poly"] = p;
            json im = json::array();
            for (auto& g : R.unit_images) {
                json row = json::array();
                for (auto& c : g) row.push_back(int_to_json(c));
                im.push_back(row);
            }
            e["unit_images"] = im;
            rr.push_back(e);
        }
        rec["ramified_residues"] = rr;
    }
    return rec;
}

/* ---------- cache ---------- */

bool is_label(const std::string& s) {
    size_t parts = 0, run = 0;
    for (char ch : s) {
        if (ch == '.') {
            if (run == 0) return false;
            ++parts;
            run = 0;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            ++run;
        } else {
            return false;
        }
    }
    return parts == 3 && run > 0;
}

poly_z parse_poly_key(const std::string& s) {
    poly_z out;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        try {
            out.push_back(Int(cur));
        } catch (const std::invalid_argument&) {
            bad("query", "not an LMFDB label or integer coefficient list");
        }
        cur.clear();
    };
    for (char ch : s) {
        if (ch == ',' || ch == ' ' || ch == '\t')
            flush();
        else
            cur += ch;
    }
    flush();
    if (out.size() < 2)
        bad("query", "not an LMFDB label or integer coefficient list");
    return out;
}

std::string poly_cache_key(const poly_z& p) {
    std::string key = "poly";
    for (auto& c : p) key += "_" + c.get_str();
    return key;
}

std::string cache_path(const std::string& dir, const std::string& key) {
    return dir + "/" + key + ".json";
}

void write_cache(const std::string& dir, const std::string& key,
                 const std::string& bytes) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    static std::atomic<unsigned> counter{0};
    std::string tmp = dir + "/." + key + ".tmp." + std::to_string(getpid()) +
                      "." + std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.good()) throw io_error("cache: cannot write " + tmp);
        out << bytes;
        if (!out.good()) throw io_error("cache: short write to " + tmp);
    }
    std::string final_path = cache_path(dir, key);
    if (std::rename(tmp.c_str(), final_path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw io_error("cache: cannot publish " + final_path);
    }
}

number_field_profile parse_and_check(const std::string& label, const json& rec,
                                     const std::string& path) {
    auto F = record_to_profile(label, rec, path);
    auto viol = validate_profile(F);
    if (!viol.empty()) throw malformed_profile(path + "." + viol.front());
    return F;
}

} // namespace

std::vector<std::string> validate_profile(const number_field_profile& F) {
    std::vector<std::string> v;
    poly_z d = pz_normalize(F.defining);
    if (pz_deg(d) < 1) {
        v.push_back("poly: degree must be at least 1");
        return v;
    }
    bool poly_ok = true;
    if (!pz_is_monic(d)) {
        v.push_back("poly: not monic");
        poly_ok = false;
    }
    if (static_cast<unsigned>(pz_deg(d)) != F.degree) {
        v.push_back("poly: degree does not match the profile degree");
        poly_ok = false;
    }
    if (F.r1 + 2 * F.r2 != F.degree)
        v.push_back("signature: degree != r1 + 2*r2");
    if (!F.label.empty()) {
        size_t dot = F.label.find('.');
        if (dot != std::string::npos && dot > 0) {
            bool digits = true;
            for (size_t i = 0; i < dot; ++i)
                if (!std::isdigit(static_cast<unsigned char>(F.label[i])))
                    digits = false;
            if (digits &&
                std::stoul(F.label.substr(0, dot)) != F.degree)
                v.push_back("label: degree component does not match");
        }
    }
    if (F.class_number < 0) v.push_back("class_number: negative");
    if (F.class_number > 0 && !F.class_group.empty()) {
        Int prod = 1;
        bool chain_ok = true;
        for (size_t i = 0; i < F.class_group.size(); ++i) {
            if (F.class_group[i] < 2) {
                v.push_back("class_group[" + std::to_string(i) +
                            "]: invariant factor below 2");
                chain_ok = false;
                continue;
            }
            prod *= F.class_group[i];
            if (i > 0 && F.class_group[i] % F.class_group[i - 1] != 0) {
                v.push_back("class_group: not a divisibility chain");
                chain_ok = false;
            }
        }
        if (chain_ok && prod != F.class_number)
            v.push_back("class_group: product does not equal the class number");
    }
    if (F.class_number == 0 && !F.class_group.empty())
        v.push_back("class_group: structure recorded without a class number");
    if (F.torsion_order < 2 || F.torsion_order % 2 != 0)
        v.push_back("torsion_order: must be even and at least 2");

    auto unit_check = [&](const nf_elem& u, const std::string& path) {
        if (u.size() != F.degree) {
            v.push_back(path + ": expected " + std::to_string(F.degree) +
                        " coordinates");
            return;
        }
        Int den = 1;
        for (auto& c : u) {
            if (c.den <= 0) {
                v.push_back(path + ": nonpositive denominator");
                return;
            }
            den = lcm(den, c.den);
        }
        poly_z g;
        for (auto& c : u) g.push_back(c.num * (den / c.den));
        g = pz_normalize(g);
        if (pz_deg(g) < 0) {
            v.push_back(path + ": not a unit");
            return;
        }
        Int dn;
        mpz_pow_ui(dn.get_mpz_t(), den.get_mpz_t(), F.degree);
        if (abs(pz_resultant(d, g)) != dn) v.push_back(path + ": not a unit");
    };
    if (poly_ok) {
        if (!F.torsion_generator.empty())
            unit_check(F.torsion_generator, "torsion_generator");
        if (!F.fundamental_units.empty()) {
            if (F.fundamental_units.size() != F.unit_rank())
                v.push_back("fundamental_units: expected " +
                            std::to_string(F.unit_rank()) + " entries");
            for (size_t i = 0; i < F.fundamental_units.size(); ++i)
                unit_check(F.fundamental_units[i],
                           "fundamental_units[" + std::to_string(i) + "]");
        }
    }
    for (size_t i = 0; i < F.ramified.size(); ++i) {
        std::string p = "ramified_residues[" + std::to_string(i) + "]";
        const auto& R = F.ramified[i];
        if (R.ell < 2 || !is_prime(R.ell)) v.push_back(p + ".ell: not prime");
        if (R.poly.size() < 2 || R.poly.back() != 1)
            v.push_back(p + ".poly: not monic of degree at least 1");
        for (size_t k = 0; k < R.unit_images.size(); ++k)
            if (R.unit_images[k].size() >= R.poly.size())
                v.push_back(p + ".unit_images[" + std::to_string(k) +
                            "]: not reduced by the residue polynomial");
    }
    return v;
}

fixture_file load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw profile_unavailable("fixture: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw malformed_profile(std::string("fixture: invalid JSON: ") +
                                e.what());
    }
    if (!j.is_object() || !j.contains("schema_version") ||
        !j["schema_version"].is_number_integer())
        throw malformed_profile("schema_version: missing");
    fixture_file out;
    out.schema_version = uint_field(j["schema_version"], "schema_version");
    if (out.schema_version != 1)
        throw malformed_profile("schema_version: unsupported version " +
                                std::to_string(out.schema_version));
    if (!j.contains("fields") || !j["fields"].is_object())
        throw malformed_profile("fields: missing or not an object");
    for (auto& [label, rec] : j["fields"].items())
        out.fields.emplace(label,
                           parse_and_check(label, rec, "fields." + label));
    return out;
}

std::string profile_record_json(const number_field_profile& F) {
    return profile_to_record(F).dump(1) + "\n";
}

fetch_options options_from_env() {
    fetch_options o;
    if (const char* s = std::getenv("TAMEGAL_BASE_URL")) o.base_url = s;
    if (const char* s = std::getenv("TAMEGAL_CACHE_DIR")) o.cache_dir = s;
    if (const char* s = std::getenv("TAMEGAL_FIXTURE")) o.fixture_path = s;
    if (const char* s = std::getenv("TAMEGAL_OFFLINE"))
        o.offline = *s != '\0' && std::string(s) != "0";
    return o;
}

fetched_profile fetch_profile(const std::string& label_or_poly,
                              const fetch_options& opt) {
    bool lab = is_label(label_or_poly);
    poly_z pq;
    if (!lab) pq = pz_normalize(parse_poly_key(label_or_poly));
    std::string key = lab ? label_or_poly : poly_cache_key(pq);

    if (!opt.cache_dir.empty()) {
        std::ifstream in(cache_path(opt.cache_dir, key));
        if (in.good()) {
            try {
                json j;
                in >> j;
                std::string label = lab ? key : "";
                if (j.is_object() && j.contains("label") &&
                    j["label"].is_string())
                    label = j["label"].get<std::string>();
                return {parse_and_check(label, j, "cache"),
                        profile_source::cache};
            } catch (const std::exception&) {
                /* stale or corrupt entry: fall through and rebuild it */
            }
        }
    }

    if (!opt.fixture_path.empty()) {
        fixture_file fx = load_fixture(opt.fixture_path);
        const number_field_profile* hit = nullptr;
        if (lab) {
            auto it = fx.fields.find(key);
            if (it != fx.fields.end()) hit = &it->second;
        } else {
            for (auto& [l, F] : fx.fields)
                if (pz_normalize(F.defining) == pq) {
                    hit = &F;
                    break;
                }
        }
        if (hit) {
            if (!opt.cache_dir.empty())
                write_cache(opt.cache_dir, key, profile_record_json(*hit));
            return {*hit, profile_source::fixture};
        }
    }

    if (opt.offline)
        throw profile_unavailable(
            "offline and no cache or fixture entry for " + label_or_poly);

    httplib::Client cli(opt.base_url);
    cli.set_connection_timeout(opt.timeout_ms / 1000,
                               opt.timeout_ms % 1000 * 1000);
    cli.set_read_timeout(opt.timeout_ms / 1000, opt.timeout_ms % 1000 * 1000);
    std::string query = "/api/nf_fields/?_format=json&";
    if (lab) {
        query += "label=" + key;
    } else {
        query += "coeffs=";
        for (size_t i = 0; i < pq.size(); ++i)
            query += (i ? "," : "") + pq[i].get_str();
    }
    httplib::Result res = cli.Get(query);
    for (unsigned attempt = 0; !res && attempt < opt.retries; ++attempt)
        res = cli.Get(query);
    if (!res)
        throw profile_unavailable("network unavailable: " +
                                  httplib::to_string(res.error()));
    if (res->status == 404)
        throw profile_unavailable("no profile for " + label_or_poly);
    if (res->status != 200)
        throw profile_unavailable("http status " +
                                  std::to_string(res->status) + " for " +
                                  label_or_poly);
    json j;
    try {
        j = json::parse(res->body);
    } catch (const std::exception& e) {
        throw malformed_profile(std::string("response: invalid JSON: ") +
                                e.what());
    }
    const json* rec = nullptr;
    if (j.is_object() && j.contains("data")) {
        if (!j["data"].is_array())
            throw malformed_profile("response.data: expected an array");
        if (j["data"].empty())
            throw profile_unavailable("no profile for " + label_or_poly);
        rec = &j["data"][0];
    } else if (j.is_object()) {
        rec = &j;
    } else {
        throw malformed_profile("response: expected an object");
    }
    std::string label = lab ? key : "";
    if (rec->is_object() && rec->contains("label") &&
        (*rec)["label"].is_string())
        label = (*rec)["label"].get<std::string>();
    auto F = parse_and_check(label, *rec, "response");
    if (!opt.cache_dir.empty())
        write_cache(opt.cache_dir, key, profile_record_json(F));
    return {std::move(F), profile_source::network};
}

} // namespace tamegal
