#ifndef TRIWIN_MANIFEST_HPP
#define TRIWIN_MANIFEST_HPP

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "triwin/dataset.hpp"
#include "triwin/errors.hpp"

namespace triwin {

namespace detail {
// Raw label values may appear in the manifest as JSON strings or numbers;
// integers are rendered without a decimal point to match CSV cells like "3".
inline std::string json_label_to_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    throw config_error("class labels must be strings or numbers");
}
} // namespace detail

/// Flat JSON manifest: source_path, label_column (index or name),
/// positive_classes, negative_classes, normalize, optional name.
inline dataset_manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw file_not_found(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    dataset_manifest mf;
    if (!j.contains("source_path")) throw config_error(path + ": missing source_path");
    mf.source_path = j.at("source_path").get<std::string>();
    // relative source paths resolve against the manifest's directory
    std::filesystem::path src(mf.source_path);
    if (src.is_relative())
        mf.source_path = (std::filesystem::path(path).parent_path() / src).string();

    if (!j.contains("label_column")) throw config_error(path + ": missing label_column");
    const auto& lc = j.at("label_column");
    if (lc.is_number_integer()) {
        mf.label_column_is_index = true;
        mf.label_column_index = lc.get<int>();
    } else {
        mf.label_column = lc.get<std::string>();
    }
    for (const auto& v : j.value("positive_classes", nlohmann::json::array()))
        mf.positive_classes.insert(detail::json_label_to_string(v));
    for (const auto& v : j.value("negative_classes", nlohmann::json::array()))
        mf.negative_classes.insert(detail::json_label_to_string(v));
    mf.normalize = j.value("normalize", true);
    mf.name = j.value("name", std::filesystem::path(mf.source_path).stem().string());
    return mf;
}

} // namespace triwin

#endif
