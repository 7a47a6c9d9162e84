// SPDX-License-Identifier: Apache-2.0
//
// dpris - dual-polarized RIS-fed holographic MIMO link simulator
// Copyright (C) 2026 The dpris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace dpris
{

// Raised when a placement makes the incidence or propagation model undefined
// (feed in the RIS plane, feed behind the reflecting face, ...).
class degenerate_geometry : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Raised when model inputs are individually valid but jointly inconsistent:
// a correlation matrix that is not PSD, an XPD threshold with no root in (0,1).
class model_inconsistency : public std::runtime_error
{
public:
    model_inconsistency(const std::string &what, std::map<std::string, double> diagnostics = {})
        : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

    const std::map<std::string, double> &diagnostics() const noexcept { return diagnostics_; }

private:
    std::map<std::string, double> diagnostics_;
};

} // namespace dpris
