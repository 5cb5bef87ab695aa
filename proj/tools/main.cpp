// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#include "priorgsa/cli.hpp"

int main(int argc, char** argv) { return priorgsa::run_cli(argc, argv); }
