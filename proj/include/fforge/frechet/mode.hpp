#pragma once

#include <string>

#include "fforge/manifold/finsler.hpp"

namespace fforge {

// Which distance the mean minimizes. Curves always run from a_i (t = 0) to
// the mean (t = T); the forward Finsler mean, where the mean is the start
// of every distance, is therefore solved on the reversed field.
enum class MeanMode { riemannian, finsler_forward, finsler_backward };

MeanMode parse_mean_mode(const std::string& s);
std::string to_string(MeanMode m);

// The field the solver iterates on. Throws ConfigError when the field
// kind does not match the mode.
FieldPtr working_field(const FieldPtr& field, MeanMode mode);

}  // namespace fforge
