#pragma once

#include <string>

#include "opm/model.hpp"

namespace opm {

/// Model file schema (JSON):
///   outcomes     list of strings
///   tests        list of lists of outcome names
///   pure_states  list of {outcome: value} maps; omitted outcomes are 0;
///                values are numbers or exact strings such as "1/3"
///   group        optional list of {outcome: outcome} permutations
///                (omitted outcomes are fixed), closed automatically
///   base_state   optional index of the designated pure state (default 0)
///   seed         optional integer
///   kind         optional: generic | classical | square_bit
/// Any other field is rejected with UnknownField.
RawModel parse_model_json(const Json& j);
RawModel parse_model_text(const std::string& text);
RawModel read_model_file(const std::string& path);

Json model_to_json(const Model& model);

}  // namespace opm
