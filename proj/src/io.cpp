#include "corrbound/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace corrbound {

namespace {

using nlohmann::json;

Vector read_vector(const json& doc, const char* key, Index n) {
    if (!doc.contains(key)) throw Error(ErrorCode::BadInput, std::string("missing key '") + key + "'");
    const json& arr = doc.at(key);
    if (!arr.is_array() || static_cast<Index>(arr.size()) != n)
        throw Error(ErrorCode::BadInput, std::string("'") + key + "' must be an array of length n");
    Vector v(n);
    for (Index i = 0; i < n; ++i) {
        const json& x = arr.at(static_cast<std::size_t>(i));
        if (!x.is_number()) throw Error(ErrorCode::BadInput, std::string("'") + key + "' has a non-number");
        v(i) = x.get<double>();
    }
    return v;
}

} // namespace

Model parse_model_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::BadInput, std::string("model file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::BadInput, "model file must hold a JSON object");
    if (!doc.contains("n") || !doc.at("n").is_number_integer())
        throw Error(ErrorCode::BadInput, "'n' must be an integer");
    const auto n = doc.at("n").get<long long>();
    if (n < 1) throw Error(ErrorCode::BadInput, "'n' must be positive");

    if (!doc.contains("rates") || !doc.at("rates").is_array() ||
        static_cast<long long>(doc.at("rates").size()) != n)
        throw Error(ErrorCode::BadInput, "'rates' must be an n x n array");
    Matrix raw(n, n);
    for (Index row = 0; row < n; ++row) {
        const json& r = doc.at("rates").at(static_cast<std::size_t>(row));
        if (!r.is_array() || static_cast<Index>(r.size()) != n)
            throw Error(ErrorCode::BadInput, "'rates' must be an n x n array");
        for (Index col = 0; col < n; ++col) {
            const json& x = r.at(static_cast<std::size_t>(col));
            if (!x.is_number()) throw Error(ErrorCode::BadInput, "'rates' has a non-number");
            raw(row, col) = x.get<double>();
        }
    }
    const Vector p0 = read_vector(doc, "p0", n);
    const Vector s = read_vector(doc, "S", n);
    const Vector t = doc.contains("T") ? read_vector(doc, "T", n) : s;
    return Model{RateMatrix::validate(raw), ProbVector::make(p0, kModelFileProbabilityTolerance),
                 ScoreVector(s), ScoreVector(t)};
}

Model load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::BadInput, "cannot open model file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_json(buf.str());
}

std::string model_to_json(const Model& model) {
    const Index n = model.w.size();
    json doc;
    doc["n"] = n;
    json rates = json::array();
    for (Index row = 0; row < n; ++row) {
        json r = json::array();
        for (Index col = 0; col < n; ++col) r.push_back(row == col ? 0.0 : model.w(row, col));
        rates.push_back(std::move(r));
    }
    doc["rates"] = std::move(rates);
    auto vec = [](const Vector& v) {
        json arr = json::array();
        for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
        return arr;
    };
    doc["p0"] = vec(model.p0.values());
    doc["S"] = vec(model.s.values());
    doc["T"] = vec(model.t.values());
    return doc.dump(2);
}

std::vector<double> linear_grid(double start, double stop, int points) {
    if (points < 1) throw Error(ErrorCode::BadInput, "time grid needs at least one point");
    if (points == 1) return {start};
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = start + (stop - start) * i / (points - 1);
    grid.back() = stop;
    return grid;
}

std::vector<double> log_grid(double start, double stop, int points) {
    if (!(start > 0.0)) throw Error(ErrorCode::BadInput, "log grids need start > 0");
    if (points < 1) throw Error(ErrorCode::BadInput, "time grid needs at least one point");
    if (points == 1) return {start};
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double ratio = std::log(stop / start);
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = start * std::exp(ratio * i / (points - 1));
    grid.front() = start;
    grid.back() = stop;
    return grid;
}

std::vector<double> parse_time_grid(std::string_view spec) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    if (parts.size() != 4) throw Error(ErrorCode::BadInput, "time grid must be start:stop:points:log|lin");

    auto number = [](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
            throw Error(ErrorCode::BadInput, "bad number '" + s + "' in time grid");
        return v;
    };
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double count = number(parts[2]);
    if (count < 1 || count != std::floor(count) || count > 1e7)
        throw Error(ErrorCode::BadInput, "time grid point count must be a positive integer");
    if (start < 0.0 || stop < start) throw Error(ErrorCode::BadInput, "time grid needs 0 <= start <= stop");
    if (parts[3] == "lin") return linear_grid(start, stop, static_cast<int>(count));
    if (parts[3] == "log") return log_grid(start, stop, static_cast<int>(count));
    throw Error(ErrorCode::BadInput, "time grid spacing must be 'lin' or 'log'");
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace corrbound
