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

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpris
{

class io_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/*!
 * Flat text configuration: one `key = value` per line, `#` starts a comment,
 * blank lines ignored. Later assignments win. Keys are kept sorted so any
 * echo of the configuration is stable.
 */
class KeyValueConfig
{
public:
    static KeyValueConfig parse(const std::string &text, const std::string &source = "<string>");
    static KeyValueConfig load(const std::filesystem::path &path); // io_error if unreadable

    void set(const std::string &key, const std::string &value);
    // Parses "key=value"; std::invalid_argument if '=' is missing.
    void set_assignment(const std::string &assignment);
    void merge(const KeyValueConfig &overrides);
    void erase(const std::string &key) { entries_.erase(key); }

    bool contains(const std::string &key) const { return entries_.count(key) != 0; }
    std::optional<std::string> get(const std::string &key) const;
    const std::map<std::string, std::string> &entries() const noexcept { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

std::string trim(const std::string &s);
std::vector<std::string> split_list(const std::string &s, char sep = ',');

// Strict numeric parsing; std::invalid_argument names the key on failure.
double parse_double(const std::string &text, const std::string &what);
long long parse_integer(const std::string &text, const std::string &what);

// Shortest round-trip decimal representation.
std::string format_double(double x);

} // namespace dpris
