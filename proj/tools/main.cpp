// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "bine/cli.hpp"

int main(int argc, char** argv) { return bine::run_cli(argc, argv, std::cout, std::cerr); }
