// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The sccv Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
