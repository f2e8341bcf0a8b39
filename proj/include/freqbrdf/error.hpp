// Copyright 2026 The freqbrdf Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FREQBRDF_ERROR_HPP_
#define FREQBRDF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace freqbrdf {

// Error categories map onto CLI exit codes: input problems exit with 2,
// numerical failures with 3.
enum class ErrorKind { kInput, kNumerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& name, const std::string& what)
      : std::runtime_error(name + ": " + what), kind_(kind), name_(name) {}

  ErrorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

#define FREQBRDF_DEFINE_ERROR(Type, Kind)                          \
  class Type : public Error {                                      \
   public:                                                         \
    explicit Type(const std::string& what)                         \
        : Error(ErrorKind::Kind, #Type, what) {}                   \
  };

FREQBRDF_DEFINE_ERROR(InsufficientSamples, kNumerical)
FREQBRDF_DEFINE_ERROR(SingularSystem, kNumerical)
FREQBRDF_DEFINE_ERROR(DegenerateIrradiance, kNumerical)
FREQBRDF_DEFINE_ERROR(NonFiniteLoss, kNumerical)
FREQBRDF_DEFINE_ERROR(UnsupportedFormat, kInput)
FREQBRDF_DEFINE_ERROR(NonHdrInput, kInput)
FREQBRDF_DEFINE_ERROR(InvalidInput, kInput)
FREQBRDF_DEFINE_ERROR(InconsistentInput, kInput)
FREQBRDF_DEFINE_ERROR(LayoutMismatch, kInput)
FREQBRDF_DEFINE_ERROR(IoFailure, kInput)

#undef FREQBRDF_DEFINE_ERROR

}  // namespace freqbrdf

#endif  // FREQBRDF_ERROR_HPP_
