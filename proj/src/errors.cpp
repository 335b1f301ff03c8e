// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/errors.hpp"

namespace embrmt {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kSpecification: return "invalid ensemble definition";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kCapacity: return "capacity error";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kNumerical: return "numerical error";
    case ErrorKind::kIo: return "io error";
  }
  return "error";
}

}  // namespace embrmt
