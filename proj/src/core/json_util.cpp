#include "json_util.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace pnsurf {

namespace {

// SAX handler that builds a DOM with all numbers as raw token strings.
class ExactNumberHandler : public nlohmann::json_sax<Json> {
public:
    Json root;

    bool null() override { return store(nullptr); }
    bool boolean(bool val) override { return store(val); }
    bool number_integer(number_integer_t val) override { return store(std::to_string(val)); }
    bool number_unsigned(number_unsigned_t val) override { return store(std::to_string(val)); }
    bool number_float(number_float_t, const string_t& s) override { return store(s); }
    bool string(string_t& val) override { return store(val); }
    bool binary(binary_t& val) override { return store(Json::binary(val)); }

    bool start_object(std::size_t) override {
        push(Json::object());
        return true;
    }
    bool key(string_t& val) override {
        key_ = val;
        have_key_ = true;
        return true;
    }
    bool end_object() override { return pop(); }
    bool start_array(std::size_t) override {
        push(Json::array());
        return true;
    }
    bool end_array() override { return pop(); }

    bool parse_error(std::size_t pos, const std::string&,
                     const nlohmann::detail::exception& ex) override {
        throw Error(ErrorCode::parse,
                    "JSON parse error at byte " + std::to_string(pos) + ": " + ex.what());
    }

private:
    std::vector<Json*> stack_;
    std::string key_;
    bool have_key_ = false;

    Json* attach(Json&& value) {
        if (stack_.empty()) {
            root = std::move(value);
            return &root;
        }
        Json& top = *stack_.back();
        if (top.is_object()) {
            if (!have_key_) throw Error(ErrorCode::parse, "object value without key");
            have_key_ = false;
            return &(top[key_] = std::move(value));
        }
        top.push_back(std::move(value));
        return &top.back();
    }

    bool store(Json value) {
        attach(std::move(value));
        return true;
    }
    void push(Json&& container) { stack_.push_back(attach(std::move(container))); }
    bool pop() {
        stack_.pop_back();
        return true;
    }
};

} // namespace

Json parse_json_exact(const std::string& text) {
    ExactNumberHandler handler;
    if (!Json::sax_parse(text, &handler))
        throw Error(ErrorCode::parse, "JSON parse failed");
    return std::move(handler.root);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error(ErrorCode::io, "write to '" + path + "' failed");
}

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<int64_t>()));
    throw Error(ErrorCode::parse, "expected a number or exact-string entry");
}

Json poly_to_json(const BivariatePoly& p) {
    Json arr = Json::array();
    for (const auto& [m, c] : p.terms()) arr.push_back({m.u, m.v, rational_to_string(c)});
    return arr;
}

int int_from_json(const Json& j) {
    if (j.is_string()) return std::stoi(j.get<std::string>());
    if (j.is_number_integer()) return j.get<int>();
    throw Error(ErrorCode::parse, "expected an integer");
}

BivariatePoly poly_from_json(const Json& j) {
    if (!j.is_array()) throw Error(ErrorCode::parse, "polynomial must be an array of terms");
    BivariatePoly p;
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 3)
            throw Error(ErrorCode::parse, "polynomial term must be [i, j, coeff]");
        int i = int_from_json(term[0]);
        int k = int_from_json(term[1]);
        if (i < 0 || k < 0) throw Error(ErrorCode::parse, "negative exponent");
        p.set_coeff(i, k, rational_from_json(term[2]));
    }
    return p;
}

Json vec3q_to_json(const Vec3Q& v) {
    return Json::array(
        {rational_to_string(v.x), rational_to_string(v.y), rational_to_string(v.z)});
}

Vec3Q vec3q_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3)
        throw Error(ErrorCode::parse, "expected a 3-vector");
    return {rational_from_json(j[0]), rational_from_json(j[1]), rational_from_json(j[2])};
}

Json polyvec_to_json(const PolyVec3& p) {
    return Json::array({poly_to_json(p.x), poly_to_json(p.y), poly_to_json(p.z)});
}

PolyVec3 polyvec_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3)
        throw Error(ErrorCode::parse, "expected three polynomials");
    return {poly_from_json(j[0]), poly_from_json(j[1]), poly_from_json(j[2])};
}

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace pnsurf
