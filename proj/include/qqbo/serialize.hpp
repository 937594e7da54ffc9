/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_SERIALIZE_HPP
#define QQBO_SERIALIZE_HPP

#include <json.hpp>

#include <filesystem>
#include <string>

#include "qqbo/campaign.hpp"
#include "qqbo/domain.hpp"

namespace qqbo {

/// Strict JSON (de)serialization. Loaders reject unknown fields and check
/// invariants; every numeric value round-trips exactly.

nlohmann::json domain_to_json(const DomainSpec& domain);
DomainSpec domain_from_json(const nlohmann::json& j);

nlohmann::json campaign_config_to_json(const CampaignConfig& config);
CampaignConfig campaign_config_from_json(const nlohmann::json& j);

nlohmann::json campaign_to_json(const Campaign& campaign);
Campaign campaign_from_json(const nlohmann::json& j);

/// Point in reporting form: user-unit x, exact unit-scale x, level indices.
nlohmann::json point_to_json(const MixedPoint& w, const DomainSpec& domain);

void save_campaign(const Campaign& campaign, const std::filesystem::path& file);
Campaign load_campaign(const std::filesystem::path& file);

DomainSpec load_domain(const std::filesystem::path& file);

}  // namespace qqbo

#endif
