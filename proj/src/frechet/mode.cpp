#include "fforge/frechet/mode.hpp"

namespace fforge {

MeanMode parse_mean_mode(const std::string& s) {
    if (s == "riemannian") return MeanMode::riemannian;
    if (s == "finsler" || s == "finsler_forward" || s == "forward") return MeanMode::finsler_forward;
    if (s == "finsler_backward" || s == "backward") return MeanMode::finsler_backward;
    throw ConfigError("unknown mean mode '" + s + "'");
}

std::string to_string(MeanMode m) {
    switch (m) {
        case MeanMode::riemannian: return "riemannian";
        case MeanMode::finsler_forward: return "finsler_forward";
        case MeanMode::finsler_backward: return "finsler_backward";
    }
    return "?";
}

FieldPtr working_field(const FieldPtr& field, MeanMode mode) {
    if (!field) throw ConfigError("no field given");
    if (mode == MeanMode::riemannian) {
        if (field->velocity_dependent()) throw ConfigError("riemannian mode needs a Riemannian field");
        return field;
    }
    auto finsler = std::dynamic_pointer_cast<const FinslerField>(field);
    if (!finsler) throw ConfigError("finsler mode needs a Finsler field");
    return mode == MeanMode::finsler_forward ? FieldPtr(reversed(finsler)) : field;
}

}  // namespace fforge
