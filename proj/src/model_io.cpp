#include "agora/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "agora/error.hpp"

namespace agora::sml {

using nlohmann::json;

json hyperparameters_to_json(const Hyperparameters& h) {
  return {{"nb_alpha", h.nb_alpha},
          {"lr_lambda", h.lr_lambda},
          {"lr_learning_rate", h.lr_learning_rate},
          {"lr_max_epochs", h.lr_max_epochs},
          {"lr_tolerance", h.lr_tolerance},
          {"pa_c", h.pa_c},
          {"pa_epochs", h.pa_epochs},
          {"sgd_learning_rate", h.sgd_learning_rate},
          {"sgd_alpha", h.sgd_alpha},
          {"sgd_epochs", h.sgd_epochs}};
}

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

Hyperparameters hyperparameters_from_json(const json& j) {
  Hyperparameters h;
  read_if(j, "nb_alpha", h.nb_alpha);
  read_if(j, "lr_lambda", h.lr_lambda);
  read_if(j, "lr_learning_rate", h.lr_learning_rate);
  read_if(j, "lr_max_epochs", h.lr_max_epochs);
  read_if(j, "lr_tolerance", h.lr_tolerance);
  read_if(j, "pa_c", h.pa_c);
  read_if(j, "pa_epochs", h.pa_epochs);
  read_if(j, "sgd_learning_rate", h.sgd_learning_rate);
  read_if(j, "sgd_alpha", h.sgd_alpha);
  read_if(j, "sgd_epochs", h.sgd_epochs);
  return h;
}

std::string model_to_json(const TrainedModel& model) {
  json j;
  j["format"] = "agora-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = std::string(to_string(model.kind));
  j["mode"] = std::string(text::to_string(model.mode));
  j["hyperparameters"] = hyperparameters_to_json(model.hyperparameters);
  j["vocabulary"] = model.feature_space.vocabulary();
  json params;
  if (const auto* nb = std::get_if<NaiveBayesParams>(&model.parameters)) {
    params["log_prior"] = nb->log_prior;
    params["log_prob"] = nb->log_prob;
    if (model.kind == ModelKind::BNB) {
      params["log_not_prob"] = nb->log_not_prob;
      params["log_not_sum"] = nb->log_not_sum;
    }
  } else {
    const auto& lin = std::get<LinearParams>(model.parameters);
    params["weights"] = lin.weights;
    params["bias"] = lin.bias;
  }
  j["parameters"] = std::move(params);
  return j.dump();
}

TrainedModel model_from_json(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    if (j.value("format", "") != "agora-model") throw Error("not an agora model file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw Error("unsupported model format version " + std::to_string(version));
    TrainedModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.mode = text::parse_mode(j.value("mode", "none"));
    m.hyperparameters = hyperparameters_from_json(j.value("hyperparameters", json::object()));
    m.feature_space = FeatureSpace(j.at("vocabulary").get<std::vector<std::string>>());
    const json& p = j.at("parameters");
    const std::size_t dim = m.feature_space.size();
    if (m.kind == ModelKind::MNB || m.kind == ModelKind::BNB) {
      NaiveBayesParams nb;
      nb.log_prior = p.at("log_prior").get<std::array<double, 2>>();
      nb.log_prob = p.at("log_prob").get<std::array<std::vector<double>, 2>>();
      if (m.kind == ModelKind::BNB) {
        nb.log_not_prob = p.at("log_not_prob").get<std::array<std::vector<double>, 2>>();
        nb.log_not_sum = p.at("log_not_sum").get<std::array<double, 2>>();
      }
      for (std::size_t c = 0; c < 2; ++c) {
        if (nb.log_prob[c].size() != dim ||
            (m.kind == ModelKind::BNB && nb.log_not_prob[c].size() != dim))
          throw Error("parameter dimension does not match the vocabulary");
      }
      m.parameters = std::move(nb);
    } else {
      LinearParams lin;
      lin.weights = p.at("weights").get<std::vector<double>>();
      lin.bias = p.at("bias").get<double>();
      if (lin.weights.size() != dim) throw Error("weight dimension does not match the vocabulary");
      m.parameters = std::move(lin);
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model JSON: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model: " + path.string());
  out << model_to_json(model) << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace agora::sml
