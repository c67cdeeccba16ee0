#include "navrl/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace navrl {

using ordered_json = nlohmann::ordered_json;

void save_checkpoint(const ParamSet<float>& params, const std::string& manifest_path,
                     const std::string& blob_path,
                     const nlohmann::ordered_json& config_echo) {
  ordered_json manifest;
  manifest["format"] = "f32-le";
  manifest["blob"] = std::filesystem::path(blob_path).filename().string();
  manifest["tensors"] = ordered_json::array();

  std::FILE* blob = std::fopen(blob_path.c_str(), "wb");
  if (!blob) throw std::runtime_error("cannot open for writing: " + blob_path);
  size_t offset = 0;
  for (const auto& p : params) {
    ordered_json t;
    t["name"] = p.name;
    t["shape"] = p.tensor.shape();
    t["offset_bytes"] = offset;
    manifest["tensors"].push_back(std::move(t));
    const auto& v = p.tensor.values();
    std::fwrite(v.data(), sizeof(float), v.size(), blob);
    offset += v.size() * sizeof(float);
  }
  std::fclose(blob);
  manifest["blob_bytes"] = offset;
  manifest["config"] = config_echo;

  std::ofstream f(manifest_path);
  if (!f) throw std::runtime_error("cannot open for writing: " + manifest_path);
  f << manifest.dump(2) << "\n";
}

LoadedCheckpoint load_checkpoint(const std::string& manifest_path) {
  std::ifstream f(manifest_path);
  if (!f) throw std::runtime_error("cannot open checkpoint manifest: " + manifest_path);
  ordered_json manifest = ordered_json::parse(f);
  if (manifest.value("format", "") != "f32-le")
    throw std::runtime_error("unsupported checkpoint format in " + manifest_path);

  const auto blob_path =
      std::filesystem::path(manifest_path).parent_path() /
      manifest.at("blob").get<std::string>();
  std::ifstream blob(blob_path, std::ios::binary);
  if (!blob) throw std::runtime_error("cannot open checkpoint blob: " + blob_path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(blob)),
                          std::istreambuf_iterator<char>());

  LoadedCheckpoint out;
  out.config = manifest.value("config", ordered_json::object());
  for (const auto& t : manifest.at("tensors")) {
    const std::string name = t.at("name").get<std::string>();
    const std::vector<int> shape = t.at("shape").get<std::vector<int>>();
    const size_t offset = t.at("offset_bytes").get<size_t>();
    const size_t count = static_cast<size_t>(Tensor<float>::shape_numel(shape));
    if (offset + count * sizeof(float) > bytes.size())
      throw std::runtime_error("checkpoint blob too short for tensor " + name);
    std::vector<float> data(count);
    std::memcpy(data.data(), bytes.data() + offset, count * sizeof(float));
    out.params.push_back({name, Tensor<float>::from_data(shape, std::move(data))});
  }
  return out;
}

void restore_params(ParamSet<float>& dst, const ParamSet<float>& loaded) {
  std::map<std::string, const NamedParam<float>*> by_name;
  for (const auto& p : loaded) by_name[p.name] = &p;
  for (auto& d : dst) {
    auto it = by_name.find(d.name);
    if (it == by_name.end())
      throw std::runtime_error("checkpoint missing tensor: " + d.name);
    const auto& src = *it->second;
    if (src.tensor.shape() != d.tensor.shape())
      throw std::runtime_error("checkpoint shape mismatch for " + d.name + ": " +
                               shape_to_string(src.tensor.shape()) + " vs " +
                               shape_to_string(d.tensor.shape()));
    d.tensor.values() = src.tensor.values();
  }
}

}  // namespace navrl
