#include "entgauss/constellation.hpp"

#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "entgauss/solver.hpp"

namespace entgauss {

namespace {

DiscreteDistribution parse_dgauss(const std::string& spec) {
    // dgauss:h=<value><bits|nats>
    const std::string prefix = "dgauss:h=";
    const std::string body = spec.substr(prefix.size());
    std::size_t pos = 0;
    double h = 0.0;
    try {
        h = std::stod(body, &pos);
    } catch (const std::exception&) {
        throw std::domain_error("constellation: cannot parse entropy in '" + spec + "'");
    }
    const std::string unit = body.substr(pos);
    if (unit == "bits")
        h *= std::numbers::ln2;
    else if (unit != "nats")
        throw std::domain_error("constellation: units must be 'bits' or 'nats' in '" +
                                spec + "'");
    const auto r = solver::solve(h);
    return materialize(solver::capacity_spec(r));
}

}  // namespace

DiscreteDistribution load_constellation(const std::string& spec_or_path) {
    if (spec_or_path.rfind("dgauss:", 0) == 0) {
        if (spec_or_path.rfind("dgauss:h=", 0) != 0)
            throw std::domain_error("constellation: expected 'dgauss:h=<value><bits|nats>'");
        return parse_dgauss(spec_or_path);
    }
    std::ifstream in(spec_or_path);
    if (!in)
        throw std::domain_error("constellation: cannot open '" + spec_or_path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::domain_error("constellation: invalid JSON in '" + spec_or_path +
                                "': " + e.what());
    }
    if (!doc.contains("atoms") || !doc.contains("probs"))
        throw std::domain_error("constellation: document needs 'atoms' and 'probs'");
    std::vector<double> atoms, probs;
    try {
        atoms = doc["atoms"].get<std::vector<double>>();
        probs = doc["probs"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
        throw std::domain_error("constellation: 'atoms'/'probs' must be numeric arrays");
    }
    return DiscreteDistribution(std::move(atoms), std::move(probs));
}

std::string constellation_json(const DiscreteDistribution& dist) {
    nlohmann::json doc;
    doc["atoms"] = dist.atoms();
    doc["probs"] = dist.probs();
    return doc.dump();
}

}  // namespace entgauss
