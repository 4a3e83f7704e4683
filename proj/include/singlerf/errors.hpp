// Copyright 2026 The SingleRF Authors. All Rights Reserved.
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

#ifndef SINGLERF_ERRORS_HPP
#define SINGLERF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace singlerf {

// Error taxonomy mirrors the CLI exit codes: config 1, numerical 2, I/O 3.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Text-format failure with a source position.
struct ParseError : ConfigError {
    ParseError(const std::string& msg, int line, int column)
        : ConfigError(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line(line),
          column(column) {}
    int line;
    int column;
};

// Load synthesis cannot produce a finite load for the named port.
struct SynthesisError : NumericalError {
    SynthesisError(const std::string& msg, int port) : NumericalError(msg), port(port) {}
    int port;
};

}  // namespace singlerf

#endif  // SINGLERF_ERRORS_HPP
