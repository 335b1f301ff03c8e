// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace embrmt {

/// Tool version, including the git description when built from a checkout.
std::string_view version() noexcept;

}  // namespace embrmt
