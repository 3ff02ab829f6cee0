#pragma once

#include "socnet/model.hpp"

#include <string>
#include <vector>

namespace socnet {

// weights file: dense CSV, n rows of n comma-separated values, 17 significant
// digits. sparse mode reinterprets off-diagonal zeros as missing edges.
void write_weights_csv(const WeightedNetwork& net, const std::string& path);
WeightedNetwork read_weights_csv(const std::string& path, bool sparse = false);

// labels file: one integer per line; on read, ids are renumbered to 1..K in
// order of first appearance
void write_labels(const CommunityAssignment& a, const std::string& path);
CommunityAssignment read_labels(const std::string& path);

// model and generator-spec files: single JSON documents; doubles are rendered
// losslessly so a round trip reproduces every field bit-exactly
void write_model(const FittedModel& model, const std::string& path);
FittedModel read_model(const std::string& path);

void write_generator_spec(const GeneratorSpec& spec, const std::string& path);
GeneratorSpec read_generator_spec(const std::string& path);

std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(const std::string& text);
std::string generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const std::string& text);

}  // namespace socnet
