#pragma once

// JSON form of a trellis: {"label_width", "vertex_counts", "sections":
// [[[from, to, "label bits"], ...], ...], "starts", "finals"}. Label bits are
// written in emission order.

#include <string>

#include <json.hpp>

#include "tbt/error.hpp"
#include "tbt/trellis.hpp"

namespace tbt {

inline nlohmann::ordered_json trellis_to_json(const Trellis& t) {
  nlohmann::ordered_json j;
  j["label_width"] = t.label_width();
  j["vertex_counts"] = t.vertex_counts();
  auto sections = nlohmann::ordered_json::array();
  for (const auto& sec : t.sections()) {
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : sec) {
      std::string bits;
      for (int b = 0; b < t.label_width(); ++b) bits.push_back(((e.label >> b) & 1U) ? '1' : '0');
      edges.push_back(nlohmann::ordered_json::array({e.from, e.to, bits}));
    }
    sections.push_back(std::move(edges));
  }
  j["sections"] = std::move(sections);
  j["starts"] = t.starts();
  j["finals"] = t.finals();
  return j;
}

inline Trellis trellis_from_json(const nlohmann::ordered_json& j) {
  try {
    const int width = j.at("label_width").get<int>();
    std::vector<std::vector<Edge>> sections;
    for (const auto& sec : j.at("sections")) {
      std::vector<Edge> edges;
      for (const auto& e : sec) {
        const auto bits = e.at(2).get<std::string>();
        if (bits.size() != static_cast<std::size_t>(width)) throw Error(ErrorCode::ParseError, "label width mismatch");
        std::uint32_t label = 0;
        for (std::size_t b = 0; b < bits.size(); ++b) {
          if (bits[b] != '0' && bits[b] != '1') throw Error(ErrorCode::ParseError, "bad label bits");
          if (bits[b] == '1') label |= 1U << b;
        }
        edges.push_back(Edge{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), label});
      }
      sections.push_back(std::move(edges));
    }
    return Trellis(width, j.at("vertex_counts").get<std::vector<std::uint32_t>>(), std::move(sections),
                   j.at("starts").get<std::vector<std::uint32_t>>(), j.at("finals").get<std::vector<std::uint32_t>>());
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
}

}  // namespace tbt
