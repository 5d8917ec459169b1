/*
 * Copyright 2026 The aradse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace aradse {

/// Root of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed XML (or other text input); carries the 1-based line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A mandatory section of the specification file is missing.
class SchemaError : public Error {
 public:
  explicit SchemaError(std::string section)
      : Error("schema error: missing mandatory section '" + section + "'"), section_(std::move(section)) {}
  const std::string& section() const noexcept { return section_; }

 private:
  std::string section_;
};

/// An attribute that should be numeric (or an enumerated keyword) is not.
class ValueError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Not enough buffer banks for the requested connectivity.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::uint64_t demand, std::uint64_t available)
      : Error(what + " (demand " + std::to_string(demand) + " banks, available " +
              std::to_string(available) + ")"),
        demand_(demand),
        available_(available) {}
  std::uint64_t demand() const noexcept { return demand_; }
  std::uint64_t available() const noexcept { return available_; }

 private:
  std::uint64_t demand_;
  std::uint64_t available_;
};

/// Inconsistent inputs handed to the simulator or sweep driver.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Accelerator API used out of order (e.g. freeing an instance never granted).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Trace file that violates the API protocol; carries the offending line.
class TraceError : public Error {
 public:
  TraceError(const std::string& what, std::size_t line)
      : Error("trace error at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The simulation cannot make progress.
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// Sweep plan rejected before any run started.
class PlanError : public Error {
 public:
  using Error::Error;
};

}  // namespace aradse
