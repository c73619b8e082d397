// Copyright 2026 The mialloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mialloc/instance_io.h"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mialloc/errors.h"

namespace mialloc {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json RevenueToJson(const RevenueFunction& g) {
  ordered_json out;
  out["kind"] = std::string(KindName(g.kind()));
  ordered_json params;
  switch (g.kind()) {
    case RevenueKind::kLinear:
      params["slope"] = std::get<LinearParams>(g.params()).slope;
      break;
    case RevenueKind::kPiecewiseLinear: {
      const auto& p = std::get<PiecewiseLinearParams>(g.params());
      params["slopes"] = p.slopes;
      params["breakpoints"] = p.breakpoints;
      break;
    }
    case RevenueKind::kExpSaturation: {
      const auto& p = std::get<ExpSaturationParams>(g.params());
      params["floor"] = p.floor;
      params["peak"] = p.peak;
      params["scale"] = p.scale;
      break;
    }
    case RevenueKind::kPriceElastic: {
      const auto& p = std::get<PriceElasticParams>(g.params());
      params["price"] = p.price;
      params["coef"] = p.coef;
      params["exponent"] = p.exponent;
      break;
    }
  }
  out["params"] = std::move(params);
  out["delta"] = g.delta();
  return out;
}

RevenueFunction RevenueFromJson(const json& j) {
  try {
    const RevenueKind kind = ParseKind(j.at("kind").get<std::string>());
    const json& p = j.at("params");
    const double delta = j.at("delta").get<double>();
    switch (kind) {
      case RevenueKind::kLinear:
        return RevenueFunction::Linear(p.at("slope").get<double>(), delta);
      case RevenueKind::kPiecewiseLinear:
        return RevenueFunction::PiecewiseLinear(
            p.at("slopes").get<std::vector<double>>(),
            p.at("breakpoints").get<std::vector<double>>(), delta);
      case RevenueKind::kExpSaturation:
        return RevenueFunction::ExpSaturation(
            p.at("floor").get<double>(), p.at("peak").get<double>(),
            p.at("scale").get<double>(), delta);
      case RevenueKind::kPriceElastic:
        return RevenueFunction::PriceElastic(
            p.at("price").get<double>(), p.at("coef").get<double>(),
            p.at("exponent").get<double>(), delta);
    }
  } catch (const json::exception& e) {
    throw InvalidInstanceError(std::string("malformed revenue function: ") +
                               e.what());
  }
  throw InvalidInstanceError("unreachable revenue kind");
}

ordered_json InstanceToJson(const Instance& instance) {
  ordered_json out;
  out["T"] = instance.num_slots();
  out["N"] = instance.num_inventories();
  out["class"] = std::string(ClassName(instance.revenue_class()));
  out["p_min"] = instance.p_min();
  out["p_max"] = instance.p_max();
  out["C"] = instance.capacity();
  out["A"] = instance.allowance();
  ordered_json slots = ordered_json::array();
  for (int t = 0; t < instance.num_slots(); ++t) {
    ordered_json row = ordered_json::array();
    for (const RevenueFunction& g : instance.slot(t)) {
      row.push_back(RevenueToJson(g));
    }
    slots.push_back(std::move(row));
  }
  out["slots"] = std::move(slots);
  return out;
}

Instance InstanceFromJson(const json& j) {
  try {
    const int T = j.at("T").get<int>();
    const int N = j.at("N").get<int>();
    auto capacity = j.at("C").get<std::vector<double>>();
    auto allowance = j.at("A").get<std::vector<double>>();
    if (T <= 0 || N <= 0 || static_cast<int>(capacity.size()) != N ||
        static_cast<int>(allowance.size()) != T) {
      throw InvalidInstanceError("T/N do not match the C and A arrays");
    }
    const json& slots = j.at("slots");
    if (!slots.is_array() || static_cast<int>(slots.size()) != T) {
      throw InvalidInstanceError("slots must hold T rows");
    }
    std::vector<std::vector<RevenueFunction>> revenue;
    revenue.reserve(T);
    for (const json& row : slots) {
      if (!row.is_array() || static_cast<int>(row.size()) != N) {
        throw InvalidInstanceError("each slot row must hold N functions");
      }
      std::vector<RevenueFunction> fns;
      fns.reserve(N);
      for (const json& g : row) fns.push_back(RevenueFromJson(g));
      revenue.push_back(std::move(fns));
    }
    const RevenueClass cls =
        ParseClass(j.value("class", std::string("gradient_bounded")));
    return Instance(std::move(capacity), std::move(allowance),
                    std::move(revenue), j.at("p_min").get<double>(),
                    j.at("p_max").get<double>(), cls);
  } catch (const json::exception& e) {
    throw InvalidInstanceError(std::string("malformed instance: ") + e.what());
  }
}

std::string SerializeInstance(const Instance& instance) {
  return InstanceToJson(instance).dump(1) + "\n";
}

Instance ParseInstance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInstanceError(std::string("instance is not JSON: ") + e.what());
  }
  return InstanceFromJson(j);
}

Instance ReadInstanceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInstanceError("cannot open instance file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseInstance(buffer.str());
}

void WriteInstanceFile(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInstanceError("cannot write instance file " + path);
  out << SerializeInstance(instance);
}

std::string InstanceId(const Instance& instance) {
  const std::string text = InstanceToJson(instance).dump();
  uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace mialloc
