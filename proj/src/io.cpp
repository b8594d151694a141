#include "padicjac/io.hpp"

namespace padicjac {

Json padic_to_json(const Padic& x) {
    Json j;
    if (x.is_zero()) {
        j["v"] = "inf";
        j["unit"] = "0";
        if (x.abs_precision() >= Padic::kExactZeroAbs)
            j["prec"] = "exact";
        else
            j["prec"] = x.abs_precision();
        return j;
    }
    j["v"] = x.valuation();
    j["unit"] = x.unit_decimal();
    j["prec"] = x.precision();
    return j;
}

Padic padic_from_json(long prime, const Json& j) {
    if (!j.is_object() || !j.contains("v") || !j.contains("unit") || !j.contains("prec"))
        fail("SchemaError", "padic value needs fields v, unit, prec");
    if (j.at("v").is_string()) {
        if (j.at("v").get<std::string>() != "inf") fail("SchemaError", "v must be integer or 'inf'");
        if (j.at("prec").is_string()) return Padic::zero(prime);
        return Padic::zero(prime, j.at("prec").get<long>());
    }
    long prec = j.at("prec").get<long>();
    long v = j.at("v").get<long>();
    BigInt unit(j.at("unit").get<std::string>());
    return Padic::make(prime, v, unit, prec);
}

BigRat parse_rational(const std::string& s) {
    if (s.empty()) fail("SchemaError", "empty rational");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return BigRat(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) fail("SchemaError", "zero denominator in rational '" + s + "'");
        return make_rat(num, den);
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        fail("SchemaError", "malformed rational '" + s + "'");
    }
}

ProjPoint parse_point(long prime, long prec, const std::string& s) {
    if (s == "inf" || s == "INF" || s == "oo") return ProjPoint::infinity(prime, prec);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') fail("SchemaError", "malformed point '" + s + "'");
        auto colon = s.find(':');
        if (colon == std::string::npos) fail("SchemaError", "malformed point '" + s + "'");
        BigRat x0 = parse_rational(s.substr(1, colon - 1));
        BigRat x1 = parse_rational(s.substr(colon + 1, s.size() - colon - 2));
        if (x0 == 0 && x1 == 0) fail("SchemaError", "point [0:0] is not projective");
        if (x1 == 0) return ProjPoint::infinity(prime, prec);
        return ProjPoint::from_rational(prime, x0 / x1, prec);
    }
    return ProjPoint::from_rational(prime, parse_rational(s), prec);
}

std::string point_to_text(const ProjPoint& x) {
    if (x.is_infinity()) return "inf";
    return x.value().to_string();
}

JobConfig parse_config(const Json& j) {
    JobConfig c;
    if (!j.is_object()) fail("SchemaError", "config must be an object");
    if (!j.contains("prime") || !j.at("prime").is_number_integer())
        fail("SchemaError", "prime: integer required");
    c.prime = j.at("prime").get<long>();
    if (c.prime == 2) fail("EvenPrime", "p = 2 is not supported");
    if (c.prime < 3) fail("SchemaError", "prime: must be an odd prime >= 3");
    for (long d = 2; d * d <= c.prime; ++d)
        if (c.prime % d == 0) fail("SchemaError", "prime: " + std::to_string(c.prime) + " is composite");
    if (!j.contains("precision") || !j.at("precision").is_number_integer())
        fail("SchemaError", "precision: integer required");
    c.precision = j.at("precision").get<long>();
    if (c.precision < 8) fail("SchemaError", "precision: must be >= 8");
    if (!j.contains("generators") || !j.at("generators").is_array() || j.at("generators").empty())
        fail("SchemaError", "generators: nonempty array required");
    size_t gi = 0;
    for (const auto& gen : j.at("generators")) {
        std::string path = "generators[" + std::to_string(gi) + "]";
        if (!gen.is_array() || gen.size() != 2) fail("SchemaError", path + ": 2x2 matrix required");
        std::array<BigRat, 4> m;
        for (int r = 0; r < 2; ++r) {
            if (!gen[r].is_array() || gen[r].size() != 2)
                fail("SchemaError", path + "[" + std::to_string(r) + "]: row of 2 entries required");
            for (int cidx = 0; cidx < 2; ++cidx) {
                const auto& entry = gen[r][cidx];
                if (!entry.is_string())
                    fail("SchemaError", path + "[" + std::to_string(r) + "][" +
                                            std::to_string(cidx) + "]: rational string required");
                m[2 * r + cidx] = parse_rational(entry.get<std::string>());
            }
        }
        if (m[0] * m[3] - m[1] * m[2] == 0)
            fail("SingularGenerator", path + ": matrix is singular");
        c.generators.push_back(m);
        ++gi;
    }
    if (j.contains("depth")) {
        if (!j.at("depth").is_number_integer()) fail("SchemaError", "depth: integer required");
        c.depth = j.at("depth").get<int>();
        if (c.depth < 1) fail("SchemaError", "depth: must be >= 1");
    }
    if (j.contains("trunc")) {
        if (!j.at("trunc").is_number_integer()) fail("SchemaError", "trunc: integer required");
        c.trunc = j.at("trunc").get<int>();
        if (c.trunc < 1) fail("SchemaError", "trunc: must be >= 1");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string k = it.key();
        if (k != "prime" && k != "precision" && k != "generators" && k != "depth" && k != "trunc")
            fail("SchemaError", "unknown field '" + k + "'");
    }
    return c;
}

JobConfig parse_config_text(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("SchemaError", "config is not valid JSON");
    return parse_config(j);
}

} // namespace padicjac
