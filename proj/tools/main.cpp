// SPDX-License-Identifier: Apache-2.0
#include "evcs/cli.hpp"

int main(int argc, char** argv) { return evcs::run_cli(argc, argv); }
