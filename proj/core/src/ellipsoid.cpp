#include "spsreg/ellipsoid.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>

#include "spsreg/errors.hpp"
#include "spsreg/linalg.hpp"

namespace spsreg {

double ellipsoid_size(const Ellipsoid& e) {
    if (std::isinf(e.radius)) return std::numeric_limits<double>::infinity();
    if (e.radius < 0.0) throw NumericError("ellipsoid radius is negative");
    const Eigen::VectorXd ev = sym_eigenvalues(e.shape);
    return 2.0 * std::sqrt(e.radius / ev(0));
}

std::string ellipsoid_to_json(const Ellipsoid& e) {
    nlohmann::json j;
    j["center"] = std::vector<double>(e.center.data(), e.center.data() + e.center.size());
    auto rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < e.shape.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < e.shape.cols(); ++c) row.push_back(e.shape(r, c));
        rows.push_back(row);
    }
    j["shape"] = rows;
    if (std::isinf(e.radius))
        j["radius"] = "inf";
    else
        j["radius"] = e.radius;
    return j.dump();
}

Ellipsoid ellipsoid_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("ellipsoid JSON parse error: ") + ex.what());
    }
    Ellipsoid e;
    try {
        const auto c = j.at("center").get<std::vector<double>>();
        e.center = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
        const auto& rows = j.at("shape");
        const auto d = static_cast<Eigen::Index>(rows.size());
        e.shape.resize(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            const auto row = rows.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
            if (static_cast<Eigen::Index>(row.size()) != d)
                throw ConfigError("ellipsoid JSON: shape is not square");
            for (Eigen::Index cidx = 0; cidx < d; ++cidx) e.shape(r, cidx) = row[static_cast<std::size_t>(cidx)];
        }
        const auto& r = j.at("radius");
        if (r.is_string()) {
            if (r.get<std::string>() != "inf")
                throw ConfigError("ellipsoid JSON: radius string must be \"inf\"");
            e.radius = std::numeric_limits<double>::infinity();
        } else {
            e.radius = r.get<double>();
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("ellipsoid JSON: ") + ex.what());
    }
    return e;
}

} // namespace spsreg
