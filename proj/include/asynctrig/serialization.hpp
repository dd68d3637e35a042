/*
 Copyright 2026 The asynctrig Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <json.hpp>

#include "asynctrig/certificate_synthesis.hpp"
#include "asynctrig/conic_partition.hpp"
#include "asynctrig/plant_model.hpp"
#include "asynctrig/trigger_engine.hpp"

namespace asynctrig {

using Json = nlohmann::json;

/// Row-major nested arrays.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const DiscretePlant& dp);
Json to_json(const UnperturbedCertificate& cert);
Json to_json(const PerturbedOnlineCertificate& cert);
Json to_json(const PerturbedOfflineCertificate& cert);
Json to_json(const ConicRegion& region);
Json to_json(const std::vector<ConicRegion>& regions);
Json to_json(const OfflineTable& table);
Json to_json(const TriggerDecision& decision);

UnperturbedCertificate unperturbed_from_json(const Json& j);
PerturbedOnlineCertificate perturbed_online_from_json(const Json& j);
PerturbedOfflineCertificate perturbed_offline_from_json(const Json& j);
std::vector<ConicRegion> partition_from_json(const Json& j);

} // namespace asynctrig
