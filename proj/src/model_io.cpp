#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mpad/error.hpp"
#include "mpad/svm.hpp"
#include "mpad/text_format.hpp"

namespace mpad {

using nlohmann::json;

void save_model(const TrainedDetector& model, const std::filesystem::path& path) {
  if (model.support_vectors().empty())
    throw InvalidArgument("refusing to save a model without support vectors");
  json doc;
  doc["format"] = "mpad-detector";
  doc["version"] = kModelFormatVersion;
  doc["channel"] = std::string(to_string(model.channel()));
  doc["dim"] = model.feature_dim();
  doc["gamma"] = model.gamma();
  doc["C"] = model.C();
  doc["bias"] = model.bias();
  doc["calibration"] = {{"A", model.calibration().A}, {"B", model.calibration().B}};
  doc["support_vectors"] = model.support_vectors();
  doc["dual_coefficients"] = model.dual_coefficients();
  write_text(path, doc.dump(1) + "\n");
}

TrainedDetector load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, std::string("malformed model: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "mpad-detector")
      throw ParseError(path.string(), 0, "not a detector model");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw ParseError(path.string(), 0,
                       "unsupported model version " + std::to_string(version) + " (expected " +
                           std::to_string(kModelFormatVersion) + ")");
    const auto channel = parse_channel(doc.at("channel").get<std::string>());
    if (!channel) throw ParseError(path.string(), 0, "unknown channel");
    const auto& cal = doc.at("calibration");
    auto svs = doc.at("support_vectors").get<std::vector<std::vector<double>>>();
    auto coef = doc.at("dual_coefficients").get<std::vector<double>>();
    if (svs.empty()) throw ParseError(path.string(), 0, "model has no support vectors");
    return TrainedDetector(*channel, doc.at("dim").get<std::size_t>(), doc.at("gamma").get<double>(),
                           doc.at("C").get<double>(), doc.at("bias").get<double>(),
                           {cal.at("A").get<double>(), cal.at("B").get<double>()}, std::move(svs),
                           std::move(coef));
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, std::string("malformed model: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path.string(), 0, std::string("invalid model: ") + e.what());
  }
}

}  // namespace mpad
