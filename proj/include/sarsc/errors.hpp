// SPDX-License-Identifier: Apache-2.0
//
// sarsc: scattering-center extraction from complex SAR imagery by sparse coding
// Copyright (C) 2026 The sarsc Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sarsc
{

/// Requested allocation exceeds the configured memory budget.
class ResourceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver blew up; the message names the parameter to change.
class DivergenceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A metric is undefined for the supplied inputs (e.g. PSNR against an all-zero reference).
class UndefinedMetricError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// Malformed binary or JSON input.
class FormatError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class HashMismatchError : public FormatError
{
  public:
    HashMismatchError(const std::string &what, std::uint64_t expected, std::uint64_t found)
        : FormatError(what), expected_(expected), found_(found)
    {
    }
    [[nodiscard]] std::uint64_t expected() const noexcept { return expected_; }
    [[nodiscard]] std::uint64_t found() const noexcept { return found_; }

  private:
    std::uint64_t expected_;
    std::uint64_t found_;
};

} // namespace sarsc
