// Copyright 2026 codazzi-lab developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "codazzi/immersion.hpp"

namespace codazzi {

struct CatalogEntry {
  std::string name;
  std::string signature;
  std::string description;
};

/// The built-in immersion families.
const std::vector<CatalogEntry>& catalog_entries();

/// Build a validated ImmersionSpec from a catalog family.  Numeric parameters
/// come through `params`; expression-valued parameters (graph maps) through
/// `exprs`.  Missing parameters take the documented defaults.
ImmersionSpec catalog(const std::string& name, const ParamMap& params = {},
                      const std::map<std::string, std::string>& exprs = {});

}  // namespace codazzi
