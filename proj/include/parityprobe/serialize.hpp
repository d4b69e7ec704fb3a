#pragma once

#include "parityprobe/channel.hpp"
#include "parityprobe/instrument.hpp"
#include "parityprobe/povm.hpp"
#include "parityprobe/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace parityprobe {

using Json = nlohmann::ordered_json;

/// Matrix schema: {"dim": d, "re": [[...]], "im": [[...]]}. Non-square
/// matrices additionally carry "rows"/"cols".
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json povm_to_json(const Povm& p);
Povm povm_from_json(const Json& j);

Json channel_to_json(const Channel& ch);
Channel channel_from_json(const Json& j);

Json instrument_to_json(const QuantumInstrument& qi);
QuantumInstrument instrument_from_json(const Json& j, double tp_tol = 1e-6);

void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

}  // namespace parityprobe
