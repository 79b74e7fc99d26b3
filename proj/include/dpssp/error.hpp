// Copyright 2026 The dpssp Authors
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

#ifndef DPSSP_ERROR_HPP_
#define DPSSP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dpssp {

// Every failure raised by the library derives from Error. The kind tag lets
// the command line front end map failures onto stable exit codes.
enum class ErrorKind {
  kInvalidParameter,
  kNumeric,
  kShape,
  kBudget,   // a privacy precondition cannot be met or was violated
  kDataset,  // the sample budget of a dataset was exhausted
  kOracle,   // an evaluation oracle could not certify its answer
  kConfig,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define DPSSP_DEFINE_ERROR(Name, Kind)              \
  class Name : public Error {                       \
   public:                                          \
    explicit Name(const std::string& what)          \
        : Error(ErrorKind::Kind, what) {}           \
  };

DPSSP_DEFINE_ERROR(InvalidParameterError, kInvalidParameter)
DPSSP_DEFINE_ERROR(NumericError, kNumeric)
DPSSP_DEFINE_ERROR(ShapeError, kShape)
DPSSP_DEFINE_ERROR(BudgetError, kBudget)
DPSSP_DEFINE_ERROR(DatasetError, kDataset)
DPSSP_DEFINE_ERROR(OracleError, kOracle)
DPSSP_DEFINE_ERROR(ConfigError, kConfig)

#undef DPSSP_DEFINE_ERROR

}  // namespace dpssp

#endif  // DPSSP_ERROR_HPP_
